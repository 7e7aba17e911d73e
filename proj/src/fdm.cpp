#include "llsgm/fdm.hpp"

#include "llsgm/error.hpp"
#include "llsgm/norms.hpp"
#include "llsgm/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace llsgm {

namespace {

int aligned_count(double span, double h, const char* what) {
    const double ratio = span / h;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
        fail(ErrorCategory::configuration, std::string("fdm grid: ") + what + " is not a multiple of h");
    }
    return static_cast<int>(rounded);
}

// Flux-form explicit update in place; returns the outflux through V_F.
double apply_fluxes(const FdmGrid& grid, std::vector<double>& p, std::vector<double>& flux_buf,
                    double drift_offset, double diffusion, FdmFlux flux, double dt) {
    const int n = grid.cells;
    const double h = grid.h;
    flux_buf.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int e = 1; e < n; ++e) {
        const double mu = -grid.edge(e) + drift_offset;
        const double left = p[e - 1];
        const double right = p[e];
        const double advective = flux == FdmFlux::upwind ? std::max(mu, 0.0) * left + std::min(mu, 0.0) * right
                                                        : 0.5 * mu * (left + right);
        flux_buf[e] = advective - diffusion * (right - left) / h;
    }
    const double out = fdm_outflux(grid, p, drift_offset, diffusion, flux);
    flux_buf[n] = out;
    const double ratio = dt / h;
    for (int i = 0; i < n; ++i) p[i] -= ratio * (flux_buf[i + 1] - flux_buf[i]);
    return out;
}

void inject(const FdmGrid& grid, std::vector<double>& p, double amount) {
    // amount of mass (rate * dt) split evenly across the two cells touching V_R
    const double per_cell = 0.5 * amount / grid.h;
    p[grid.reset_edge - 1] += per_cell;
    p[grid.reset_edge] += per_cell;
}

double max_drift(const FdmGrid& grid, double drift_offset) {
    return std::max(std::abs(-grid.v_min + drift_offset), std::abs(-grid.v_fire + drift_offset));
}

double stable_dt(const FdmGrid& grid, double drift_offset, double diffusion) {
    return grid.h * grid.h / (2.0 * diffusion + max_drift(grid, drift_offset) * grid.h);
}

bool cfl_ok(const FdmGrid& grid, double dt, double drift_offset, double diffusion) {
    return dt <= stable_dt(grid, drift_offset, diffusion) * (1.0 + 1e-12);
}

}  // namespace

FdmGrid FdmGrid::make(const Domain& domain, double v_min, double h) {
    domain.validate();
    if (!(h > 0.0)) fail(ErrorCategory::configuration, "fdm grid: h must be positive");
    if (!(v_min < domain.v_reset)) fail(ErrorCategory::configuration, "fdm grid: V_min must lie below V_R");
    FdmGrid g;
    g.v_min = v_min;
    g.v_reset = domain.v_reset;
    g.v_fire = domain.v_fire;
    g.h = h;
    g.reset_edge = aligned_count(domain.v_reset - v_min, h, "V_R - V_min");
    g.cells = g.reset_edge + aligned_count(domain.v_fire - domain.v_reset, h, "V_F - V_R");
    return g;
}

std::vector<double> FdmGrid::centers() const {
    std::vector<double> c(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) c[i] = center(i);
    return c;
}

std::vector<double> fdm_project(const FdmGrid& grid, const Density& p0) {
    const QuadratureRule ref = gauss_legendre(4);
    std::vector<double> p(static_cast<std::size_t>(grid.cells), 0.0);
    for (int i = 0; i < grid.cells; ++i) {
        const QuadratureRule rule = map_affine(ref, grid.edge(i), grid.edge(i + 1));
        p[i] = rule.integrate(p0) / grid.h;
    }
    return p;
}

double fdm_stable_dt(const FdmGrid& grid, const OnePopParams& params, double rate) {
    return stable_dt(grid, params.b * rate, params.a0 + params.a1 * rate);
}

double fdm_outflux(const FdmGrid& grid, const std::vector<double>& p, double drift_offset, double diffusion,
                   FdmFlux flux) {
    // ghost cell p_n = -p_{n-1} puts the zero of the density on the V_F face
    const double last = p[static_cast<std::size_t>(grid.cells) - 1];
    const double advective = flux == FdmFlux::upwind ? std::max(-grid.v_fire + drift_offset, 0.0) * last : 0.0;
    return advective + 2.0 * diffusion * last / grid.h;
}

FdmState fdm_initial(const FdmGrid& grid, const Density& p0, const OnePopParams& params, FdmFlux flux) {
    params.validate();
    FdmState state;
    state.p = fdm_project(grid, p0);
    // self-consistent initial rate N = outflux(p0; b N, a0 + a1 N)
    double rate = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double next =
            fdm_outflux(grid, state.p, params.b * rate, params.a0 + params.a1 * rate, flux);
        const bool done = std::abs(next - rate) <= 1e-15 * (1.0 + std::abs(next));
        rate = next;
        if (done) break;
    }
    state.rate = rate;
    return state;
}

FdmState fdm_step(const FdmGrid& grid, const FdmState& state, const OnePopParams& params, double dt,
                  FdmFlux flux) {
    const double drift = params.b * state.rate;
    const double diffusion = params.a0 + params.a1 * state.rate;
    if (!cfl_ok(grid, dt, drift, diffusion)) {
        fail(ErrorCategory::cfl_violation, "fdm_step: dt = " + format_real(dt) + " exceeds the stability bound " +
                                               format_real(stable_dt(grid, drift, diffusion)));
    }
    FdmState next;
    next.p = state.p;
    std::vector<double> buf;
    const double out = apply_fluxes(grid, next.p, buf, drift, diffusion, flux, dt);
    inject(grid, next.p, out * dt);
    next.rate = out;
    next.step = state.step + 1;
    next.t = next.step * dt;
    return next;
}

double fdm_mass(const FdmGrid& grid, const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p) s += x;
    return s * grid.h;
}

std::vector<double> fdm_sample(const FdmGrid& grid, const std::vector<double>& p, const std::vector<double>& query) {
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(p.size() + 2);
    ys.reserve(p.size() + 2);
    xs.push_back(grid.v_min);
    ys.push_back(p.front());
    for (int i = 0; i < grid.cells; ++i) {
        xs.push_back(grid.center(i));
        ys.push_back(p[i]);
    }
    xs.push_back(grid.v_fire);
    ys.push_back(0.0);
    return interpolate_linear(xs, ys, query);
}

FdmRun fdm_solve(const FdmGrid& grid, const Density& p0, const OnePopParams& params, const RunConfig& config,
                 FdmFlux flux) {
    config.validate();
    const long steps = step_count(config.final_time, config.dt);
    std::vector<long> snapshot_steps;
    for (double t : config.snapshot_times) snapshot_steps.push_back(step_count(t, config.dt));
    const Domain domain{grid.v_reset, grid.v_fire, 1.0};
    const std::vector<double> sample_grid = config.snapshot_grid.empty() ? error_grid(domain) : config.snapshot_grid;

    FdmRun run;
    RunRecord& rec = run.record;
    FdmState state = fdm_initial(grid, p0, params, flux);
    if (!cfl_ok(grid, config.dt, params.b * state.rate, params.a0 + params.a1 * state.rate)) {
        fail(ErrorCategory::cfl_violation,
             "fdm: dt = " + format_real(config.dt) + " exceeds the stability bound " +
                 format_real(fdm_stable_dt(grid, params, state.rate)));
    }
    auto record_state = [&](const FdmState& s) {
        rec.samples.push_back(Sample{s.t, s.rate, fdm_mass(grid, s.p), 0.0, s.rate < 0.0});
        for (long k : snapshot_steps) {
            if (k == s.step) rec.snapshots.push_back(Snapshot{s.t, sample_grid, fdm_sample(grid, s.p, sample_grid)});
        }
    };
    rec.samples.reserve(static_cast<std::size_t>(steps) + 1);
    record_state(state);

    std::vector<double> buf;
    const auto start = std::chrono::steady_clock::now();
    for (long n = 0; n < steps; ++n) {
        const double drift = params.b * state.rate;
        const double diffusion = params.a0 + params.a1 * state.rate;
        if (!cfl_ok(grid, config.dt, drift, diffusion)) {
            rec.status = RunStatus::solver_failure;
            rec.message = "fdm: stability bound violated at t = " + format_real(state.t);
            break;
        }
        const double out = apply_fluxes(grid, state.p, buf, drift, diffusion, flux, config.dt);
        inject(grid, state.p, out * config.dt);
        state.rate = out;
        state.step = n + 1;
        state.t = state.step * config.dt;
        if (!std::isfinite(out) || out > config.blowup_threshold) {
            rec.status = RunStatus::blow_up_detected;
            rec.blowup_time = state.t;
            rec.message = "firing rate exceeded " + format_real(config.blowup_threshold) + " at t = " +
                          format_real(state.t);
            if (std::isfinite(out)) record_state(state);
            break;
        }
        record_state(state);
    }
    run.stepping_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.final_state = std::move(state);
    return run;
}

double fdm_stable_dt_twopop(const FdmGrid& grid, const TwoPopParams& params, double rate_bound) {
    double dt = INFINITY;
    for (int a = 0; a < 2; ++a) {
        // worst case over rates in [0, rate_bound] for the drift offset and diffusion
        const auto& b = params.b[a];
        const double offset = (b[pop_e] - params.b[pop_e][pop_e]) * params.nu_ext;
        const double hi = offset + b[pop_e] * rate_bound;
        const double lo = offset - b[pop_i] * rate_bound;
        double diffusion = params.diffusion_constant;
        if (params.diffusion_mode == DiffusionMode::model) {
            diffusion = params.d[a][pop_e] * params.nu_ext + (params.d[a][pop_e] + params.d[a][pop_i]) * rate_bound;
        }
        dt = std::min({dt, stable_dt(grid, hi, diffusion), stable_dt(grid, lo, diffusion)});
    }
    return dt;
}

FdmTwoPopRun fdm_solve_twopop(const FdmGrid& grid, const Density& p0_e, const Density& p0_i,
                              const TwoPopParams& params, const RunConfig& config, FdmFlux flux, double r_e,
                              double r_i) {
    config.validate();
    params.validate(config.dt);
    const auto lags = params.delay_steps(config.dt);
    const long steps = step_count(config.final_time, config.dt);
    std::vector<long> snapshot_steps;
    for (double t : config.snapshot_times) snapshot_steps.push_back(step_count(t, config.dt));
    const Domain domain{grid.v_reset, grid.v_fire, 1.0};
    const std::vector<double> sample_grid = config.snapshot_grid.empty() ? error_grid(domain) : config.snapshot_grid;

    FdmTwoPopRun run;
    run.p = {fdm_project(grid, p0_e), fdm_project(grid, p0_i)};
    std::array<double, 2> refractory{r_e, r_i};
    std::array<FiringHistory, 2> history{FiringHistory(std::max(lags[pop_e][pop_e], lags[pop_i][pop_e])),
                                         FiringHistory(std::max(lags[pop_e][pop_i], lags[pop_i][pop_i]))};

    // initial rates: fixed point of the zero-lag relation
    std::array<double, 2> rate{0.0, 0.0};
    for (int it = 0; it < 200; ++it) {
        std::array<double, 2> next{};
        for (int a = 0; a < 2; ++a) {
            const Coefficients c = coefficients(params, rate[pop_e], rate[pop_i], a);
            next[a] = fdm_outflux(grid, run.p[a], c.drift, c.diffusion, flux);
        }
        const bool done = std::abs(next[0] - rate[0]) <= 1e-15 * (1.0 + std::abs(next[0])) &&
                          std::abs(next[1] - rate[1]) <= 1e-15 * (1.0 + std::abs(next[1]));
        rate = next;
        if (done) break;
    }
    for (int a = 0; a < 2; ++a) history[a].push(rate[a]);

    auto record_state = [&](long step) {
        const double t = step * config.dt;
        for (int a = 0; a < 2; ++a) {
            run.record[a].samples.push_back(
                Sample{t, rate[a], fdm_mass(grid, run.p[a]), refractory[a], rate[a] < 0.0});
            for (long k : snapshot_steps) {
                if (k == step) run.record[a].snapshots.push_back(Snapshot{t, sample_grid, fdm_sample(grid, run.p[a], sample_grid)});
            }
        }
    };
    record_state(0);

    std::vector<double> buf;
    const auto start = std::chrono::steady_clock::now();
    for (long n = 0; n < steps; ++n) {
        std::array<double, 2> out{};
        bool stop = false;
        for (int a = 0; a < 2; ++a) {
            const double rate_e = history[pop_e].delayed(n, lags[a][pop_e]);
            const double rate_i = history[pop_i].delayed(n, lags[a][pop_i]);
            const Coefficients c = coefficients(params, rate_e, rate_i, a);
            if (!cfl_ok(grid, config.dt, c.drift, c.diffusion)) {
                for (auto& r : run.record) {
                    r.status = r.blowup_time ? RunStatus::blow_up_detected : RunStatus::solver_failure;
                    r.message = "fdm: stability bound violated at t = " + format_real(n * config.dt);
                }
                stop = true;
                break;
            }
            out[a] = apply_fluxes(grid, run.p[a], buf, c.drift, c.diffusion, flux, config.dt);
        }
        if (stop) break;
        for (int a = 0; a < 2; ++a) {
            const double recovered = params.refractory_mode == RefractoryMode::pass_through
                                         ? out[a]
                                         : refractory[a] / params.tau[a];
            inject(grid, run.p[a], recovered * config.dt);
            refractory[a] += config.dt * (out[a] - recovered);
            rate[a] = out[a];
            history[a].push(rate[a]);
        }
        record_state(n + 1);
        for (int a = 0; a < 2; ++a) {
            auto& r = run.record[a];
            if (!r.blowup_time && (!std::isfinite(rate[a]) || rate[a] > config.blowup_threshold)) {
                r.blowup_time = (n + 1) * config.dt;
                r.status = RunStatus::blow_up_detected;
                r.message = "firing rate exceeded " + format_real(config.blowup_threshold);
            }
        }
        if (run.record[0].blowup_time && run.record[1].blowup_time) break;
    }
    run.stepping_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace llsgm
