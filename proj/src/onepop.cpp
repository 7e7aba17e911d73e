#include "llsgm/onepop.hpp"

#include "llsgm/error.hpp"
#include "llsgm/norms.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace llsgm {

void OnePopParams::validate() const {
    if (!(a0 > 0.0)) fail(ErrorCategory::configuration, "one-population: a0 must be positive");
    if (!(a1 >= 0.0)) fail(ErrorCategory::configuration, "one-population: a1 must be nonnegative");
    if (!std::isfinite(b)) fail(ErrorCategory::configuration, "one-population: b must be finite");
}

double firing_rate(double s, const OnePopParams& params) {
    const double denom = 1.0 + params.a1 * s;
    if (!(std::abs(denom) >= 1e-12)) {
        fail(ErrorCategory::singular_firing_rate,
             "firing_rate: 1 + a1 s = " + format_real(denom) + " is singular");
    }
    return -params.a0 * s / denom;
}

Discretization::Discretization(int expansion, const Domain& domain)
    : basis(expansion, domain), matrices(assemble(basis)) {}

Discretization::Discretization(int expansion, const Domain& domain, int quadrature_order)
    : basis(expansion, domain), matrices(assemble(basis, quadrature_order)) {}

PopulationState make_state(const Discretization& disc, Eigen::VectorXd u, const OnePopParams& params) {
    PopulationState state;
    state.rate = firing_rate(disc.flux_slope(u), params);
    state.u = std::move(u);
    return state;
}

OnePopStepper::OnePopStepper(const Discretization& disc, const OnePopParams& params, double dt)
    : disc_(&disc), params_(params), dt_(dt) {
    params.validate();
    if (!(dt > 0.0)) fail(ErrorCategory::invalid_argument, "step: dt must be positive");
    const auto& m = disc.matrices;
    mass_dt_ = m.H / dt;
    base_ = mass_dt_ + m.A;
    diffusion_ = m.C + m.D;
}

PopulationState OnePopStepper::step(const PopulationState& state) {
    const double drift = params_.b * state.rate;
    const double diffusion = params_.a0 + params_.a1 * state.rate;
    if (!factored_ || drift != cached_drift_ || diffusion != cached_diffusion_) {
        const Eigen::MatrixXd system = base_ - drift * disc_->matrices.B + diffusion * diffusion_;
        lu_.compute(system);
        const double rcond = lu_.rcond();
        if (!(rcond > std::numeric_limits<double>::epsilon())) {
            factored_ = false;
            fail(ErrorCategory::singular_system, "step: system matrix is singular (rcond " + format_real(rcond) + ")");
        }
        cached_drift_ = drift;
        cached_diffusion_ = diffusion;
        factored_ = true;
    }
    PopulationState next;
    next.u = lu_.solve(mass_dt_ * state.u);
    next.step = state.step + 1;
    next.t = next.step * dt_;
    next.rate = firing_rate(disc_->flux_slope(next.u), params_);
    return next;
}

PopulationState step(const PopulationState& state, const OnePopParams& params, const Discretization& disc,
                     double dt) {
    OnePopStepper stepper(disc, params, dt);
    return stepper.step(state);
}

long step_count(double span, double dt) {
    if (!(dt > 0.0) || !(span >= 0.0)) fail(ErrorCategory::configuration, "time span and dt must be positive");
    const double ratio = span / dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        fail(ErrorCategory::configuration,
             "dt = " + format_real(dt) + " does not divide " + format_real(span));
    }
    return static_cast<long>(rounded);
}

void RunConfig::validate() const {
    if (!(dt > 0.0)) fail(ErrorCategory::configuration, "dt must be positive");
    if (!(final_time > 0.0)) fail(ErrorCategory::configuration, "final time must be positive");
    step_count(final_time, dt);
    for (double t : snapshot_times) {
        if (t < 0.0 || t > final_time * (1.0 + 1e-12)) {
            fail(ErrorCategory::configuration, "snapshot time " + format_real(t) + " outside [0, T]");
        }
        step_count(t, dt);
    }
    if (!(blowup_threshold > 0.0)) fail(ErrorCategory::configuration, "blow-up threshold must be positive");
}

namespace {

bool all_finite(const Eigen::VectorXd& u) { return u.allFinite(); }

Sample sample_of(const Discretization& disc, const PopulationState& s) {
    return Sample{s.t, s.rate, disc.mass(s.u), 0.0, s.rate < 0.0};
}

}  // namespace

OnePopRun solve(const Discretization& disc, const Eigen::VectorXd& u0, const OnePopParams& params,
                const RunConfig& config) {
    config.validate();
    params.validate();
    const long steps = step_count(config.final_time, config.dt);
    std::vector<long> snapshot_steps;
    for (double t : config.snapshot_times) snapshot_steps.push_back(step_count(t, config.dt));
    const std::vector<double> grid =
        config.snapshot_grid.empty() ? error_grid(disc.basis.domain()) : config.snapshot_grid;

    OnePopRun run;
    RunRecord& rec = run.record;
    rec.samples.reserve(steps + 1);

    auto take_snapshots = [&](const PopulationState& s) {
        for (long k : snapshot_steps) {
            if (k == s.step) rec.snapshots.push_back(Snapshot{s.t, grid, reconstruct(disc.basis, s.u, grid)});
        }
    };

    PopulationState state;
    try {
        state = make_state(disc, u0, params);
    } catch (const Error& e) {
        rec.status = RunStatus::solver_failure;
        rec.message = e.what();
        return run;
    }
    rec.samples.push_back(sample_of(disc, state));
    take_snapshots(state);

    OnePopStepper stepper(disc, params, config.dt);
    const auto start = std::chrono::steady_clock::now();
    for (long n = 0; n < steps; ++n) {
        try {
            state = stepper.step(state);
        } catch (const Error& e) {
            if (e.category() != ErrorCategory::singular_firing_rate &&
                e.category() != ErrorCategory::singular_system) {
                throw;
            }
            rec.status = RunStatus::solver_failure;
            rec.message = e.what();
            break;
        }
        if (!all_finite(state.u) || !std::isfinite(state.rate) || state.rate > config.blowup_threshold) {
            rec.status = RunStatus::blow_up_detected;
            rec.blowup_time = state.t;
            rec.message = "firing rate exceeded " + format_real(config.blowup_threshold) + " at t = " +
                          format_real(state.t);
            if (all_finite(state.u)) rec.samples.push_back(sample_of(disc, state));
            break;
        }
        rec.samples.push_back(sample_of(disc, state));
        take_snapshots(state);
    }
    run.stepping_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.final_state = std::move(state);
    return run;
}

OnePopRun solve(const Discretization& disc, const GaussianIC& ic, const OnePopParams& params,
                const RunConfig& config) {
    return solve(disc, project_initial(disc.basis, disc.matrices, ic), params, config);
}

}  // namespace llsgm
