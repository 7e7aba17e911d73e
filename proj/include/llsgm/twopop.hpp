#pragma once

#include "llsgm/onepop.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace llsgm {

/// Population indices.
inline constexpr int pop_e = 0;
inline constexpr int pop_i = 1;

enum class DiffusionMode { model, constant };
enum class RefractoryMode { pass_through, exponential };

/// Coupling tables are indexed [target][source]: b[pop_i][pop_e] is the strength of E onto I.
struct TwoPopParams {
    std::array<std::array<double, 2>, 2> b{};
    std::array<std::array<double, 2>, 2> d{};
    std::array<std::array<double, 2>, 2> delay{};
    double nu_ext = 0.0;
    std::array<double, 2> tau{0.0, 0.0};
    DiffusionMode diffusion_mode = DiffusionMode::constant;
    double diffusion_constant = 1.0;
    RefractoryMode refractory_mode = RefractoryMode::pass_through;

    /// Rejects negative couplings and delays that are not integer multiples of dt.
    void validate(double dt) const;
    /// D / dt per [target][source].
    std::array<std::array<long, 2>, 2> delay_steps(double dt) const;
};

/// Ring buffer of the most recent firing rates of one population, indexed by absolute step.
class FiringHistory {
public:
    explicit FiringHistory(long max_lag = 0);

    void push(double rate);
    /// Number of recorded steps; the latest entry is step size() - 1.
    long size() const noexcept { return count_; }
    long capacity() const noexcept { return static_cast<long>(ring_.size()); }
    /// Rate recorded at step max(0, n - lag). Requires that step to be recorded and retained.
    double delayed(long n, long lag) const;
    double at(long step) const;

private:
    std::vector<double> ring_;
    long count_ = 0;
};

/// Drift offset and diffusion coefficient of one population.
struct Coefficients {
    double drift = 0.0;      // V_alpha
    double diffusion = 0.0;  // a_alpha
};

/// V_a = b^a_E N_E - b^a_I N_I + (b^a_E - b^E_E) nu_ext, and a_a from the diffusion mode.
/// Throws nonpositive_diffusion when a_a <= 0.
Coefficients coefficients(const TwoPopParams& params, double rate_e, double rate_i, int alpha);

/// Recovery rate M_a: R_a / tau_a (exponential) or N_a (pass-through).
double recovery(const TwoPopParams& params, double refractory, double rate, int alpha);

struct TwoPopState {
    std::array<Eigen::VectorXd, 2> u;
    std::array<double, 2> refractory{0.0, 0.0};
    std::array<double, 2> rate{0.0, 0.0};  // N^n, also the newest history entry
    std::array<FiringHistory, 2> history;
    double t = 0.0;
    long step = 0;
};

/// Semi-implicit two-population scheme. For each population
///   (H/dt + A - V_a B + a_a C + a_a G) u^{n+1} = H u^n / dt + M^n F,   R^{n+1} = R^n + dt (N^n - M^n),
/// with delayed rates inside V_a and a_a. In pass-through mode (M = N) the re-injection is carried
/// implicitly by a_a D, as in the one-population scheme, and R stays constant.
class TwoPopStepper {
public:
    TwoPopStepper(const Discretization& disc, const TwoPopParams& params, double dt);

    /// Builds the step-0 state and its firing rates.
    TwoPopState initial(Eigen::VectorXd u_e, Eigen::VectorXd u_i, double r_e = 0.0, double r_i = 0.0) const;
    void advance(TwoPopState& state);

    /// Firing rates at step n given u^n and the histories through step n-1. Where a delayed index
    /// equals n in model-mode diffusion, the rates are coupled and solved as a 2x2 linear system.
    std::array<double, 2> rates(const TwoPopState& state) const;

private:
    const Discretization* disc_;
    TwoPopParams params_;
    double dt_;
    std::array<std::array<long, 2>, 2> lags_{};
    Eigen::MatrixXd base_;
    Eigen::MatrixXd mass_dt_;
    Eigen::MatrixXd diffusion_;  // C + G, plus D in pass-through mode
    std::array<Eigen::PartialPivLU<Eigen::MatrixXd>, 2> lu_;
    std::array<Coefficients, 2> cached_{};
    std::array<bool, 2> factored_{false, false};
};

TwoPopState step_twopop(TwoPopState state, const TwoPopParams& params, const Discretization& disc, double dt);

struct TwoPopRun {
    std::array<RunRecord, 2> record;
    TwoPopState final_state;
    double stepping_seconds = 0.0;
};

struct TwoPopInitial {
    GaussianIC e;
    GaussianIC i;
    double refractory_e = 0.0;
    double refractory_i = 0.0;
};

/// Runs to config.final_time. A population trips when N exceeds the threshold or its state goes
/// non-finite; the run continues until both have tripped so near-simultaneous blow-up is visible.
TwoPopRun solve_twopop(const Discretization& disc, const TwoPopInitial& ic, const TwoPopParams& params,
                       const RunConfig& config);
TwoPopRun solve_twopop(const Discretization& disc, const Eigen::VectorXd& u_e, const Eigen::VectorXd& u_i,
                       const TwoPopParams& params, const RunConfig& config, double r_e = 0.0, double r_i = 0.0);

}  // namespace llsgm
