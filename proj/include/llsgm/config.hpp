#pragma once

#include "llsgm/basis.hpp"
#include "llsgm/fdm.hpp"
#include "llsgm/onepop.hpp"
#include "llsgm/regimes.hpp"
#include "llsgm/twopop.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace llsgm {

inline constexpr int config_schema_version = 1;

enum class ExperimentKind {
    convergence_time,
    convergence_space,
    stability_grid,
    efficiency,
    blowup,
    twopop_regimes,
    compare_fdm,
};

enum class ModelKind { onepop, twopop };
enum class Method { llsgm, fdm };
enum class ReferenceKind { fdm, self };

std::string_view to_string(ExperimentKind kind) noexcept;
std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(Method method) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

struct GaussianSpec {
    double v0 = -1.0;
    double sigma0_sq = 0.5;
};

struct InitialSpec {
    GaussianSpec e;                    // also the one-population initial density
    GaussianSpec i;
    std::array<double, 2> refractory{0.0, 0.0};
};

struct NumericsSpec {
    int M = 16;
    double dt = 1e-3;
    double T = 0.2;
    int n_q = 0;  // assembly order; 0 selects the minimum exact order
    std::vector<double> snapshot_times;
    double blowup_threshold = 1e3;
    std::vector<double> dt_ladder;
    std::vector<int> M_ladder;
};

/// Solution the errors are measured against.
struct ReferenceSpec {
    ReferenceKind kind = ReferenceKind::fdm;
    double h = 1.0 / 256.0;
    double v_min = -8.0;
    FdmFlux flux = FdmFlux::centered;
    int M = 30;        // self reference: expansion number
    double dt = 1e-5;  // self reference: time step
};

/// Oracle settings when the FDM solver is itself the subject (efficiency ladder, comparisons, regimes).
struct FdmSpec {
    double h = 1.0 / 128.0;
    double v_min = -6.0;
    FdmFlux flux = FdmFlux::upwind;
    double cfl_fraction = 0.9;  // dt = fraction * stable dt, shrunk so that it divides numerics.dt
    double rate_bound = 2.0;    // firing rate assumed when sizing dt
    std::vector<double> h_ladder;
    double reference_h = 1.0 / 128.0;
};

struct TimingSpec {
    int repetitions = 3;
    double target_error = 1e-4;
    bool twopop = false;  // also time one two-population run per method, with the twopop parameters
    int twopop_M = 16;
    double twopop_dt = 1e-4;
    double twopop_h = 1.0 / 64.0;
    double twopop_rate_bound = 10.0;
    std::array<GaussianSpec, 2> twopop_initial{GaussianSpec{}, GaussianSpec{}};
};

struct ExperimentConfig {
    int schema_version = config_schema_version;
    std::string name;
    ExperimentKind kind = ExperimentKind::convergence_time;
    ModelKind model = ModelKind::onepop;
    Method method = Method::llsgm;
    Domain domain;
    OnePopParams onepop;
    TwoPopParams twopop;
    InitialSpec initial;
    NumericsSpec numerics;
    ReferenceSpec reference;
    FdmSpec fdm;
    RegimeRules regimes;
    std::vector<double> sweep_bEE;       // twopop-regimes: values of b^E_E
    TimingSpec timing;
    double stability_threshold = 0.2;
    std::string output_directory = "out";

    /// Kind-specific checks: required ladders, time-step divisibility of T, snapshot times and delays.
    void validate() const;

    /// Run settings (T, snapshots, threshold) at a given step.
    RunConfig run_config(double dt) const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON with every field present; reals print in shortest round-trip form.
/// indent < 0 gives a single line.
std::string dump_config(const ExperimentConfig& config, int indent = 2);

/// Names of the built-in presets; each has a mirrored file configs/<name>.json.
std::vector<std::string> preset_names();
ExperimentConfig preset_config(std::string_view preset);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace llsgm
