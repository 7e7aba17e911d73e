#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace llsgm {

/// Failure classes surfaced by the library. The CLI maps each one to its own exit code.
enum class ErrorCategory {
    invalid_argument,
    configuration,
    singular_system,
    singular_firing_rate,
    ill_conditioned_basis,
    nonpositive_diffusion,
    cfl_violation,
    convergence_failure,
    io,
};

std::string_view to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
    throw Error(category, message);
}

}  // namespace llsgm
