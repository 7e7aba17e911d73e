#include "llsgm/twopop.hpp"

#include "llsgm/error.hpp"
#include "llsgm/norms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace llsgm {

namespace {

const char* pop_name(int alpha) { return alpha == pop_e ? "E" : "I"; }

}  // namespace

void TwoPopParams::validate(double dt) const {
    for (int a = 0; a < 2; ++a) {
        for (int s = 0; s < 2; ++s) {
            if (!(b[a][s] >= 0.0) || !(d[a][s] >= 0.0) || !(delay[a][s] >= 0.0)) {
                fail(ErrorCategory::configuration, "two-population: couplings and delays must be nonnegative");
            }
        }
        if (refractory_mode == RefractoryMode::exponential && !(tau[a] > 0.0)) {
            fail(ErrorCategory::configuration,
                 std::string("two-population: tau_") + pop_name(a) + " must be positive in exponential mode");
        }
    }
    if (!(nu_ext >= 0.0)) fail(ErrorCategory::configuration, "two-population: nu_ext must be nonnegative");
    if (diffusion_mode == DiffusionMode::constant && !(diffusion_constant > 0.0)) {
        fail(ErrorCategory::configuration, "two-population: constant diffusion must be positive");
    }
    delay_steps(dt);
}

std::array<std::array<long, 2>, 2> TwoPopParams::delay_steps(double dt) const {
    std::array<std::array<long, 2>, 2> lags{};
    for (int a = 0; a < 2; ++a) {
        for (int s = 0; s < 2; ++s) {
            if (delay[a][s] == 0.0) continue;
            try {
                lags[a][s] = step_count(delay[a][s], dt);
            } catch (const Error&) {
                fail(ErrorCategory::configuration, "two-population: delay " + format_real(delay[a][s]) +
                                                       " is not an integer multiple of dt = " + format_real(dt));
            }
        }
    }
    return lags;
}

FiringHistory::FiringHistory(long max_lag) : ring_(static_cast<std::size_t>(std::max(0L, max_lag) + 1), 0.0) {}

void FiringHistory::push(double rate) {
    ring_[static_cast<std::size_t>(count_ % capacity())] = rate;
    ++count_;
}

double FiringHistory::at(long step) const {
    if (step < 0 || step >= count_ || step < count_ - capacity()) {
        fail(ErrorCategory::invalid_argument, "firing history: step " + std::to_string(step) + " not retained");
    }
    return ring_[static_cast<std::size_t>(step % capacity())];
}

double FiringHistory::delayed(long n, long lag) const { return at(std::max(0L, n - lag)); }

Coefficients coefficients(const TwoPopParams& params, double rate_e, double rate_i, int alpha) {
    Coefficients c;
    const auto& b = params.b[alpha];
    c.drift = b[pop_e] * rate_e - b[pop_i] * rate_i + (b[pop_e] - params.b[pop_e][pop_e]) * params.nu_ext;
    if (params.diffusion_mode == DiffusionMode::constant) {
        c.diffusion = params.diffusion_constant;
    } else {
        const auto& d = params.d[alpha];
        c.diffusion = d[pop_e] * params.nu_ext + d[pop_e] * rate_e + d[pop_i] * rate_i;
    }
    if (!(c.diffusion > 0.0)) {
        fail(ErrorCategory::nonpositive_diffusion,
             std::string("diffusion of population ") + pop_name(alpha) + " is " + format_real(c.diffusion));
    }
    return c;
}

double recovery(const TwoPopParams& params, double refractory, double rate, int alpha) {
    if (params.refractory_mode == RefractoryMode::pass_through) return rate;
    return refractory / params.tau[alpha];
}

TwoPopStepper::TwoPopStepper(const Discretization& disc, const TwoPopParams& params, double dt)
    : disc_(&disc), params_(params), dt_(dt) {
    if (!(dt > 0.0)) fail(ErrorCategory::invalid_argument, "two-population step: dt must be positive");
    params.validate(dt);
    lags_ = params.delay_steps(dt);
    const auto& m = disc.matrices;
    mass_dt_ = m.H / dt;
    base_ = mass_dt_ + m.A;
    diffusion_ = m.C + m.G;
    if (params.refractory_mode == RefractoryMode::pass_through) diffusion_ += m.D;
}

std::array<double, 2> TwoPopStepper::rates(const TwoPopState& state) const {
    const long n = state.step;
    const std::array<double, 2> s{disc_->flux_slope(state.u[pop_e]), disc_->flux_slope(state.u[pop_i])};
    std::array<double, 2> out{};
    if (params_.diffusion_mode == DiffusionMode::constant) {
        for (int a = 0; a < 2; ++a) out[a] = -params_.diffusion_constant * s[a];
        return out;
    }
    // N_a + s_a sum_{b current} d^a_b N_b = -s_a (d^a_E nu + sum_{b past} d^a_b N_b^{delayed})
    Eigen::Matrix2d system = Eigen::Matrix2d::Identity();
    Eigen::Vector2d rhs;
    for (int a = 0; a < 2; ++a) {
        double known = params_.d[a][pop_e] * params_.nu_ext;
        for (int src = 0; src < 2; ++src) {
            const long index = std::max(0L, n - lags_[a][src]);
            if (index == n) {
                system(a, src) += s[a] * params_.d[a][src];
            } else {
                known += params_.d[a][src] * state.history[src].at(index);
            }
        }
        rhs(a) = -s[a] * known;
    }
    const double det = system.determinant();
    if (!(std::abs(det) >= 1e-12)) {
        fail(ErrorCategory::singular_firing_rate, "two-population firing-rate system is singular (det " +
                                                      format_real(det) + ")");
    }
    const Eigen::Vector2d x = system.inverse() * rhs;
    out = {x(0), x(1)};
    return out;
}

TwoPopState TwoPopStepper::initial(Eigen::VectorXd u_e, Eigen::VectorXd u_i, double r_e, double r_i) const {
    TwoPopState state;
    state.u = {std::move(u_e), std::move(u_i)};
    state.refractory = {r_e, r_i};
    for (int a = 0; a < 2; ++a) state.history[a] = FiringHistory(std::max(lags_[pop_e][a], lags_[pop_i][a]));
    state.rate = rates(state);
    for (int a = 0; a < 2; ++a) state.history[a].push(state.rate[a]);
    return state;
}

void TwoPopStepper::advance(TwoPopState& state) {
    const long n = state.step;
    const auto& m = disc_->matrices;
    for (int a = 0; a < 2; ++a) {
        const double rate_e = state.history[pop_e].delayed(n, lags_[a][pop_e]);
        const double rate_i = state.history[pop_i].delayed(n, lags_[a][pop_i]);
        const Coefficients c = coefficients(params_, rate_e, rate_i, a);
        if (!factored_[a] || c.drift != cached_[a].drift || c.diffusion != cached_[a].diffusion) {
            const Eigen::MatrixXd system = base_ - c.drift * m.B + c.diffusion * diffusion_;
            lu_[a].compute(system);
            const double rcond = lu_[a].rcond();
            if (!(rcond > std::numeric_limits<double>::epsilon())) {
                factored_[a] = false;
                fail(ErrorCategory::singular_system, std::string("two-population step: singular system for ") +
                                                         pop_name(a) + " (rcond " + format_real(rcond) + ")");
            }
            cached_[a] = c;
            factored_[a] = true;
        }
        const double recovered = recovery(params_, state.refractory[a], state.rate[a], a);
        Eigen::VectorXd rhs = mass_dt_ * state.u[a];
        if (params_.refractory_mode == RefractoryMode::exponential) rhs += recovered * m.F;
        state.u[a] = lu_[a].solve(rhs);
        state.refractory[a] = state.refractory[a] + dt_ * (state.rate[a] - recovered);
    }
    state.step = n + 1;
    state.t = state.step * dt_;
    state.rate = rates(state);
    for (int a = 0; a < 2; ++a) state.history[a].push(state.rate[a]);
}

TwoPopState step_twopop(TwoPopState state, const TwoPopParams& params, const Discretization& disc, double dt) {
    TwoPopStepper stepper(disc, params, dt);
    stepper.advance(state);
    return state;
}

namespace {

Sample sample_of(const Discretization& disc, const TwoPopState& s, int a) {
    return Sample{s.t, s.rate[a], disc.mass(s.u[a]), s.refractory[a], s.rate[a] < 0.0};
}

bool finite_population(const TwoPopState& s, int a) {
    return s.u[a].allFinite() && std::isfinite(s.rate[a]) && std::isfinite(s.refractory[a]);
}

}  // namespace

TwoPopRun solve_twopop(const Discretization& disc, const Eigen::VectorXd& u_e, const Eigen::VectorXd& u_i,
                       const TwoPopParams& params, const RunConfig& config, double r_e, double r_i) {
    config.validate();
    const long steps = step_count(config.final_time, config.dt);
    std::vector<long> snapshot_steps;
    for (double t : config.snapshot_times) snapshot_steps.push_back(step_count(t, config.dt));
    const std::vector<double> grid =
        config.snapshot_grid.empty() ? error_grid(disc.basis.domain()) : config.snapshot_grid;

    TwoPopRun run;
    auto& rec = run.record;
    TwoPopStepper stepper(disc, params, config.dt);

    auto fail_all = [&](const Error& e) {
        for (int a = 0; a < 2; ++a) {
            rec[a].status = rec[a].blowup_time ? RunStatus::blow_up_detected : RunStatus::solver_failure;
            rec[a].message = e.what();
        }
    };

    TwoPopState state;
    try {
        state = stepper.initial(u_e, u_i, r_e, r_i);
    } catch (const Error& e) {
        if (e.category() == ErrorCategory::configuration) throw;
        fail_all(e);
        return run;
    }
    auto record_state = [&](const TwoPopState& s) {
        for (int a = 0; a < 2; ++a) {
            if (finite_population(s, a)) rec[a].samples.push_back(sample_of(disc, s, a));
            for (long k : snapshot_steps) {
                if (k == s.step && finite_population(s, a)) {
                    rec[a].snapshots.push_back(Snapshot{s.t, grid, reconstruct(disc.basis, s.u[a], grid)});
                }
            }
        }
    };
    record_state(state);
    for (int a = 0; a < 2; ++a) rec[a].samples.reserve(steps + 1);

    const auto start = std::chrono::steady_clock::now();
    for (long n = 0; n < steps; ++n) {
        try {
            stepper.advance(state);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::configuration || e.category() == ErrorCategory::invalid_argument) {
                throw;
            }
            fail_all(e);
            break;
        }
        record_state(state);
        bool any_nonfinite = false;
        for (int a = 0; a < 2; ++a) {
            const bool finite = finite_population(state, a);
            any_nonfinite = any_nonfinite || !finite;
            if (!rec[a].blowup_time && (!finite || state.rate[a] > config.blowup_threshold)) {
                rec[a].blowup_time = state.t;
                rec[a].status = RunStatus::blow_up_detected;
                rec[a].message = std::string("population ") + pop_name(a) + " firing rate exceeded " +
                                 format_real(config.blowup_threshold) + " at t = " + format_real(state.t);
            }
        }
        if (any_nonfinite) {
            for (int a = 0; a < 2; ++a) {
                if (!rec[a].blowup_time) {
                    rec[a].blowup_time = state.t;
                    rec[a].status = RunStatus::blow_up_detected;
                    rec[a].message = "state became non-finite at t = " + format_real(state.t);
                }
            }
        }
        if (rec[pop_e].blowup_time && rec[pop_i].blowup_time) break;
    }
    run.stepping_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.final_state = std::move(state);
    return run;
}

TwoPopRun solve_twopop(const Discretization& disc, const TwoPopInitial& ic, const TwoPopParams& params,
                       const RunConfig& config) {
    return solve_twopop(disc, project_initial(disc.basis, disc.matrices, ic.e),
                        project_initial(disc.basis, disc.matrices, ic.i), params, config, ic.refractory_e,
                        ic.refractory_i);
}

}  // namespace llsgm
