#include "llsgm/error.hpp"

namespace llsgm {

std::string_view to_string(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::invalid_argument: return "invalid-argument";
        case ErrorCategory::configuration: return "configuration";
        case ErrorCategory::singular_system: return "singular-system";
        case ErrorCategory::singular_firing_rate: return "singular-firing-rate";
        case ErrorCategory::ill_conditioned_basis: return "ill-conditioned-basis";
        case ErrorCategory::nonpositive_diffusion: return "nonpositive-diffusion";
        case ErrorCategory::cfl_violation: return "cfl-violation";
        case ErrorCategory::convergence_failure: return "convergence-failure";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

}  // namespace llsgm
