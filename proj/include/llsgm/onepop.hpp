#pragma once

#include "llsgm/assembly.hpp"
#include "llsgm/basis.hpp"
#include "llsgm/record.hpp"

#include <Eigen/Dense>

#include <vector>

namespace llsgm {

struct OnePopParams {
    double a0 = 1.0;  // baseline diffusion
    double a1 = 0.0;  // diffusion gain per unit firing rate
    double b = 0.0;   // connectivity, > 0 excitatory

    void validate() const;
};

/// Closed-form solution of N = -(a0 + a1 N) s, where s = sum_k u_k psi_k'(V_F).
/// Throws singular_firing_rate when |1 + a1 s| < 1e-12.
double firing_rate(double s, const OnePopParams& params);

/// Basis plus assembled operators for one expansion number; immutable and shared across runs.
struct Discretization {
    BasisSet basis;
    GalerkinMatrices matrices;

    explicit Discretization(int expansion, const Domain& domain = {});
    Discretization(int expansion, const Domain& domain, int quadrature_order);

    int dim() const noexcept { return basis.dim(); }
    double flux_slope(const Eigen::VectorXd& u) const { return matrices.fire_slope.dot(u); }
    double mass(const Eigen::VectorXd& u) const { return matrices.mass.dot(u); }
};

struct PopulationState {
    Eigen::VectorXd u;
    double t = 0.0;
    long step = 0;
    double rate = 0.0;  // N at this state
};

PopulationState make_state(const Discretization& disc, Eigen::VectorXd u, const OnePopParams& params);

/// One step of the semi-implicit scheme
///   (H/dt + A - b N^n B + a^n C + a^n D) u^{n+1} = H u^n / dt,  a^n = a0 + a1 N^n.
/// The system matrix is refactored whenever (b N^n, a^n) changes and reused otherwise, which keeps
/// results bit-identical to refactoring every step.
class OnePopStepper {
public:
    OnePopStepper(const Discretization& disc, const OnePopParams& params, double dt);

    PopulationState step(const PopulationState& state);

private:
    const Discretization* disc_;
    OnePopParams params_;
    double dt_;
    Eigen::MatrixXd base_;       // H/dt + A
    Eigen::MatrixXd diffusion_;  // C + D
    Eigen::MatrixXd mass_dt_;    // H/dt
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    double cached_drift_ = 0.0;
    double cached_diffusion_ = 0.0;
    bool factored_ = false;
};

PopulationState step(const PopulationState& state, const OnePopParams& params, const Discretization& disc,
                     double dt);

/// Number of steps covering [0, span]; throws configuration if dt does not divide span.
long step_count(double span, double dt);

struct RunConfig {
    double dt = 1e-3;
    double final_time = 1.0;
    std::vector<double> snapshot_times;
    double blowup_threshold = 1e3;
    /// Points at which snapshots are sampled; the error grid when empty.
    std::vector<double> snapshot_grid;

    void validate() const;
};

struct OnePopRun {
    RunRecord record;
    PopulationState final_state;
    double stepping_seconds = 0.0;  // monotonic clock around the time loop only
};

OnePopRun solve(const Discretization& disc, const Eigen::VectorXd& u0, const OnePopParams& params,
                const RunConfig& config);
OnePopRun solve(const Discretization& disc, const GaussianIC& ic, const OnePopParams& params,
                const RunConfig& config);

}  // namespace llsgm
