#include "llsgm/experiments.hpp"

#include "llsgm/error.hpp"
#include "llsgm/fdm.hpp"
#include "llsgm/norms.hpp"
#include "llsgm/onepop.hpp"
#include "llsgm/twopop.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

namespace llsgm {

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    if (count <= 0) return;
    std::vector<std::exception_ptr> errors(count);
    auto guarded = [&](int i) {
        try {
            body(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const int threads = std::clamp(workers, 1, count);
    if (threads == 1) {
        for (int i = 0; i < count; ++i) guarded(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (int i = next++; i < count; i = next++) guarded(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double aligned_dt(double unit, double dt_max) {
    if (!(unit > 0.0) || !(dt_max > 0.0)) fail(ErrorCategory::invalid_argument, "aligned_dt: arguments must be positive");
    return unit / std::ceil(unit / dt_max * (1.0 - 1e-12));
}

double observed_order(double dt0, double e0, double dt1, double e1) {
    if (dt0 == dt1 || !(e0 > 0.0) || !(e1 > 0.0)) return NAN;
    return std::log(e0 / e1) / std::log(dt0 / dt1);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit fit;
    fit.points = static_cast<int>(std::min(x.size(), y.size()));
    if (fit.points < 2) return fit;
    const double n = fit.points;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return fit;
}

namespace {

int populations(const ExperimentConfig& c) { return c.model == ModelKind::twopop ? 2 : 1; }

Discretization make_disc(const ExperimentConfig& c, int M) {
    return c.numerics.n_q > 0 ? Discretization(M, c.domain, c.numerics.n_q) : Discretization(M, c.domain);
}

GaussianIC gaussian(const GaussianSpec& g, const Domain& d) { return normalize_gaussian(g.v0, g.sigma0_sq, d.v_fire); }

TwoPopInitial twopop_initial(const ExperimentConfig& c) {
    return TwoPopInitial{gaussian(c.initial.e, c.domain), gaussian(c.initial.i, c.domain), c.initial.refractory[pop_e],
                         c.initial.refractory[pop_i]};
}

RunConfig plain_run(const ExperimentConfig& c, double dt) {
    RunConfig rc = c.run_config(dt);
    rc.snapshot_times.clear();
    return rc;
}

std::string status_text(const RunRecord& r) { return std::string(to_string(r.status)); }

std::string error_status(const Error& e) { return "error:" + std::string(to_string(e.category())); }

// Final-time densities of an LLSGM run on `grid`; empty when the run did not complete.
struct Profiles {
    std::vector<std::vector<double>> p;
    std::string status = "completed";
};

Profiles llsgm_profiles(const ExperimentConfig& c, const Discretization& disc, double dt,
                        const std::vector<double>& grid) {
    Profiles out;
    try {
        if (c.model == ModelKind::onepop) {
            const OnePopRun run = solve(disc, gaussian(c.initial.e, c.domain), c.onepop, plain_run(c, dt));
            out.status = status_text(run.record);
            if (run.record.status == RunStatus::completed) out.p.push_back(reconstruct(disc.basis, run.final_state.u, grid));
        } else {
            const TwoPopRun run = solve_twopop(disc, twopop_initial(c), c.twopop, plain_run(c, dt));
            const bool done = run.record[0].status == RunStatus::completed && run.record[1].status == RunStatus::completed;
            out.status = done ? "completed" : status_text(run.record[0]) + "/" + status_text(run.record[1]);
            if (done) {
                for (int a = 0; a < 2; ++a) out.p.push_back(reconstruct(disc.basis, run.final_state.u[a], grid));
            }
        }
    } catch (const Error& e) {
        if (e.category() == ErrorCategory::configuration) throw;
        out.status = error_status(e);
        out.p.clear();
    }
    return out;
}

double fdm_dt_onepop(const ExperimentConfig& c, const FdmGrid& grid, double fraction, double rate_bound) {
    return aligned_dt(c.numerics.dt, fraction * fdm_stable_dt(grid, c.onepop, rate_bound));
}

double fdm_dt_twopop(const FdmGrid& grid, const TwoPopParams& params, double unit, double fraction,
                     double rate_bound) {
    return aligned_dt(unit, fraction * fdm_stable_dt_twopop(grid, params, rate_bound));
}

std::vector<PopulationError> compare_profiles(const Profiles& run, const ReferenceSolution& ref) {
    std::vector<PopulationError> out(ref.p.size());
    if (run.p.size() != ref.p.size()) return out;
    for (std::size_t a = 0; a < ref.p.size(); ++a) {
        out[a].l2 = l2_distance(ref.grid, run.p[a], ref.p[a]);
        out[a].linf = linf_distance(run.p[a], ref.p[a]);
    }
    return out;
}

}  // namespace

ReferenceSolution compute_reference(const ExperimentConfig& c) {
    ReferenceSolution ref;
    ref.grid = error_grid(c.domain);
    const ReferenceSpec& r = c.reference;
    if (r.kind == ReferenceKind::self) {
        const Discretization disc = make_disc(c, r.M);
        const Profiles prof = llsgm_profiles(c, disc, r.dt, ref.grid);
        if (prof.p.empty()) fail(ErrorCategory::convergence_failure, "reference run failed: " + prof.status);
        ref.p = prof.p;
        ref.dt = r.dt;
        ref.description = "llsgm M=" + std::to_string(r.M) + " dt=" + format_real(r.dt);
        return ref;
    }
    const FdmGrid grid = FdmGrid::make(c.domain, r.v_min, r.h);
    const char* flux = r.flux == FdmFlux::centered ? "centered" : "upwind";
    if (c.model == ModelKind::onepop) {
        ref.dt = fdm_dt_onepop(c, grid, c.fdm.cfl_fraction, c.fdm.rate_bound);
        const FdmRun run = fdm_solve(grid, gaussian(c.initial.e, c.domain), c.onepop, plain_run(c, ref.dt), r.flux);
        if (run.record.status != RunStatus::completed) {
            fail(ErrorCategory::convergence_failure, "reference run failed: " + run.record.message);
        }
        ref.p.push_back(fdm_sample(grid, run.final_state.p, ref.grid));
    } else {
        ref.dt = fdm_dt_twopop(grid, c.twopop, c.numerics.dt, c.fdm.cfl_fraction, c.fdm.rate_bound);
        const FdmTwoPopRun run =
            fdm_solve_twopop(grid, gaussian(c.initial.e, c.domain), gaussian(c.initial.i, c.domain), c.twopop,
                             plain_run(c, ref.dt), r.flux, c.initial.refractory[pop_e], c.initial.refractory[pop_i]);
        for (int a = 0; a < 2; ++a) {
            if (run.record[a].status != RunStatus::completed) {
                fail(ErrorCategory::convergence_failure, "reference run failed: " + run.record[a].message);
            }
            ref.p.push_back(fdm_sample(grid, run.p[a], ref.grid));
        }
    }
    ref.description = std::string("fdm ") + flux + " h=" + format_real(r.h) + " v_min=" + format_real(r.v_min) +
                      " dt=" + format_real(ref.dt);
    return ref;
}

ConvergenceTimeResult run_convergence_time(const ExperimentConfig& c, int workers) {
    c.validate();
    const ReferenceSolution ref = compute_reference(c);
    const Discretization disc = make_disc(c, c.numerics.M);
    const auto& ladder = c.numerics.dt_ladder;
    ConvergenceTimeResult result;
    result.reference = ref.description;
    result.rows.resize(ladder.size());
    parallel_for(static_cast<int>(ladder.size()), workers, [&](int i) {
        const Profiles prof = llsgm_profiles(c, disc, ladder[i], ref.grid);
        result.rows[i].dt = ladder[i];
        result.rows[i].error = compare_profiles(prof, ref);
        result.rows[i].status = prof.status;
    });
    const int pops = populations(c);
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        auto& row = result.rows[i];
        row.order_l2.assign(pops, NAN);
        row.order_linf.assign(pops, NAN);
        if (i == 0) continue;
        const auto& prev = result.rows[i - 1];
        for (int a = 0; a < pops; ++a) {
            row.order_l2[a] = observed_order(prev.dt, prev.error[a].l2, row.dt, row.error[a].l2);
            row.order_linf[a] = observed_order(prev.dt, prev.error[a].linf, row.dt, row.error[a].linf);
        }
    }
    return result;
}

ConvergenceSpaceResult run_convergence_space(const ExperimentConfig& c, int workers) {
    c.validate();
    const ReferenceSolution ref = compute_reference(c);
    const auto& ladder = c.numerics.M_ladder;
    ConvergenceSpaceResult result;
    result.reference = ref.description;
    result.rows.resize(ladder.size());
    parallel_for(static_cast<int>(ladder.size()), workers, [&](int i) {
        const Discretization disc = make_disc(c, ladder[i]);
        const Profiles prof = llsgm_profiles(c, disc, c.numerics.dt, ref.grid);
        result.rows[i].M = ladder[i];
        result.rows[i].error = compare_profiles(prof, ref);
        result.rows[i].status = prof.status;
    });
    for (int a = 0; a < populations(c); ++a) {
        for (int parity : {0, 1}) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& row : result.rows) {
                if (row.M % 2 != parity || !(row.error[a].l2 > 0.0)) continue;
                pts.emplace_back(row.M, std::log(row.error[a].l2));
            }
            if (pts.size() < 2) continue;
            std::sort(pts.begin(), pts.end());
            std::vector<double> x, y;
            for (const auto& [m, e] : pts) {
                x.push_back(m);
                y.push_back(e);
            }
            ParityFit pf;
            pf.population = a;
            pf.parity = parity;
            pf.fit = fit_line(x, y);
            pf.strictly_decreasing = true;
            for (std::size_t k = 1; k < x.size(); ++k) {
                if (!(x[k] > x[k - 1] && y[k] < y[k - 1])) pf.strictly_decreasing = false;
            }
            result.fits.push_back(pf);
        }
    }
    return result;
}

StabilityResult run_stability_grid(const ExperimentConfig& c, int workers) {
    c.validate();
    const ReferenceSolution ref = compute_reference(c);
    StabilityResult result;
    result.reference = ref.description;
    result.M = c.numerics.M_ladder;
    result.dt = c.numerics.dt_ladder;
    const int nm = static_cast<int>(result.M.size());
    const int nt = static_cast<int>(result.dt.size());
    std::vector<std::unique_ptr<Discretization>> discs(nm);
    parallel_for(nm, workers, [&](int m) { discs[m] = std::make_unique<Discretization>(make_disc(c, result.M[m])); });
    result.cells.resize(static_cast<std::size_t>(nm) * nt);
    parallel_for(nm * nt, workers, [&](int idx) {
        const int m = idx / nt;
        const int k = idx % nt;
        StabilityCell& cell = result.cells[idx];
        cell.M = result.M[m];
        cell.dt = result.dt[k];
        const Profiles prof = llsgm_profiles(c, *discs[m], cell.dt, ref.grid);
        cell.status = prof.status;
        if (!prof.p.empty()) cell.l2 = l2_distance(ref.grid, prof.p[0], ref.p[0]);
    });
    double worst = -INFINITY;
    for (const auto& cell : result.cells) {
        if (!std::isfinite(cell.l2) || cell.l2 > c.stability_threshold) ++result.flagged;
        if (std::isfinite(cell.l2)) worst = std::max(worst, cell.l2);
    }
    result.max_error = result.flagged > 0 && worst == -INFINITY ? NAN : worst;
    return result;
}

double time_at_error(const std::vector<double>& error, const std::vector<double>& seconds, double target,
                     bool& extrapolated) {
    std::vector<std::pair<double, double>> pts;  // (log error, log time), ladder order
    for (std::size_t i = 0; i < std::min(error.size(), seconds.size()); ++i) {
        if (error[i] > 0.0 && seconds[i] > 0.0 && std::isfinite(error[i]) && std::isfinite(seconds[i])) {
            pts.emplace_back(std::log(error[i]), std::log(seconds[i]));
        }
    }
    extrapolated = false;
    if (pts.size() < 2) return NAN;
    const double lt = std::log(target);
    auto through = [&](const std::pair<double, double>& p, const std::pair<double, double>& q) -> double {
        if (p.first == q.first) return NAN;
        return std::exp(p.second + (lt - p.first) * (q.second - p.second) / (q.first - p.first));
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = std::min(pts[i].first, pts[i + 1].first);
        const double hi = std::max(pts[i].first, pts[i + 1].first);
        if (lt >= lo && lt <= hi) return through(pts[i], pts[i + 1]);
    }
    extrapolated = true;
    // the two most accurate rungs when the target lies below the ladder, otherwise the two least accurate
    std::vector<std::pair<double, double>> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    if (lt < sorted.front().first) return through(sorted[0], sorted[1]);
    return through(sorted[sorted.size() - 2], sorted.back());
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EfficiencyRow efficiency_row(std::string method, double resolution, double dt) {
    EfficiencyRow row;
    row.method = std::move(method);
    row.resolution = resolution;
    row.dt = dt;
    return row;
}

}  // namespace

EfficiencyResult run_efficiency(const ExperimentConfig& c) {
    c.validate();
    EfficiencyResult result;
    result.target_error = c.timing.target_error;
    const std::vector<double> grid = error_grid(c.domain);
    const GaussianIC ic = gaussian(c.initial.e, c.domain);
    const int reps = c.timing.repetitions;

    // LLSGM ladder against the finest expansion at the same step
    const Discretization ref_disc = make_disc(c, c.reference.M);
    const OnePopRun ref_run = solve(ref_disc, ic, c.onepop, plain_run(c, c.reference.dt));
    if (ref_run.record.status != RunStatus::completed) {
        fail(ErrorCategory::convergence_failure, "llsgm reference failed: " + ref_run.record.message);
    }
    const std::vector<double> llsgm_ref = reconstruct(ref_disc.basis, ref_run.final_state.u, grid);
    std::vector<double> llsgm_err, llsgm_sec;
    for (int M : c.numerics.M_ladder) {
        const Discretization disc = make_disc(c, M);
        EfficiencyRow row = efficiency_row("llsgm", M, c.numerics.dt);
        std::vector<double> times;
        for (int r = 0; r < reps; ++r) {
            const OnePopRun run = solve(disc, ic, c.onepop, plain_run(c, c.numerics.dt));
            times.push_back(run.stepping_seconds);
            if (r > 0) continue;
            row.status = status_text(run.record);
            if (run.record.status == RunStatus::completed) {
                row.l2 = l2_distance(grid, reconstruct(disc.basis, run.final_state.u, grid), llsgm_ref);
            }
        }
        row.seconds = median(times);
        llsgm_err.push_back(row.l2);
        llsgm_sec.push_back(row.seconds);
        result.rows.push_back(row);
    }

    // FDM ladder against its finest mesh, each at its own stable step
    auto fdm_run = [&](double h) {
        const FdmGrid g = FdmGrid::make(c.domain, c.fdm.v_min, h);
        const double dt = fdm_dt_onepop(c, g, c.fdm.cfl_fraction, c.fdm.rate_bound);
        return std::make_pair(g, dt);
    };
    const auto [ref_grid, ref_dt] = fdm_run(c.fdm.reference_h);
    const FdmRun fref = fdm_solve(ref_grid, ic, c.onepop, plain_run(c, ref_dt), c.fdm.flux);
    if (fref.record.status != RunStatus::completed) {
        fail(ErrorCategory::convergence_failure, "fdm reference failed: " + fref.record.message);
    }
    const std::vector<double> fdm_ref = fdm_sample(ref_grid, fref.final_state.p, grid);
    std::vector<double> fdm_err, fdm_sec;
    for (double h : c.fdm.h_ladder) {
        const auto [g, dt] = fdm_run(h);
        EfficiencyRow row = efficiency_row("fdm", h, dt);
        std::vector<double> times;
        for (int r = 0; r < reps; ++r) {
            const FdmRun run = fdm_solve(g, ic, c.onepop, plain_run(c, dt), c.fdm.flux);
            times.push_back(run.stepping_seconds);
            if (r > 0) continue;
            row.status = status_text(run.record);
            if (run.record.status == RunStatus::completed) {
                row.l2 = l2_distance(grid, fdm_sample(g, run.final_state.p, grid), fdm_ref);
            }
        }
        row.seconds = median(times);
        fdm_err.push_back(row.l2);
        fdm_sec.push_back(row.seconds);
        result.rows.push_back(row);
    }

    result.llsgm_seconds_at_target = time_at_error(llsgm_err, llsgm_sec, result.target_error, result.llsgm_extrapolated);
    result.fdm_seconds_at_target = time_at_error(fdm_err, fdm_sec, result.target_error, result.fdm_extrapolated);
    result.speedup = result.fdm_seconds_at_target / result.llsgm_seconds_at_target;

    if (c.timing.twopop) {
        const TimingSpec& t = c.timing;
        const TwoPopInitial tic{gaussian(t.twopop_initial[pop_e], c.domain), gaussian(t.twopop_initial[pop_i], c.domain),
                                c.initial.refractory[pop_e], c.initial.refractory[pop_i]};
        const Discretization disc = make_disc(c, t.twopop_M);
        EfficiencyRow lrow = efficiency_row("twopop-llsgm", t.twopop_M, t.twopop_dt);
        std::vector<double> times;
        for (int r = 0; r < reps; ++r) {
            const TwoPopRun run = solve_twopop(disc, tic, c.twopop, plain_run(c, t.twopop_dt));
            times.push_back(run.stepping_seconds);
            lrow.status = status_text(run.record[0]) + "/" + status_text(run.record[1]);
        }
        lrow.seconds = median(times);
        result.twopop.push_back(lrow);

        const FdmGrid g = FdmGrid::make(c.domain, c.fdm.v_min, t.twopop_h);
        const double dt = fdm_dt_twopop(g, c.twopop, t.twopop_dt, c.fdm.cfl_fraction, t.twopop_rate_bound);
        EfficiencyRow frow = efficiency_row("twopop-fdm", t.twopop_h, dt);
        times.clear();
        for (int r = 0; r < reps; ++r) {
            const FdmTwoPopRun run = fdm_solve_twopop(g, tic.e, tic.i, c.twopop, plain_run(c, dt), c.fdm.flux,
                                                      tic.refractory_e, tic.refractory_i);
            times.push_back(run.stepping_seconds);
            frow.status = status_text(run.record[0]) + "/" + status_text(run.record[1]);
        }
        frow.seconds = median(times);
        result.twopop.push_back(frow);
    }
    return result;
}

namespace {

std::vector<double> reset_peaks(const RunRecord& r, const Domain& d) {
    std::vector<double> out;
    for (const Snapshot& s : r.snapshots) {
        double peak = -INFINITY;
        for (std::size_t i = 0; i < s.v.size(); ++i) {
            if (std::abs(s.v[i] - d.v_reset) <= 0.2 + 1e-12) peak = std::max(peak, s.p[i]);
        }
        out.push_back(peak);
    }
    return out;
}

std::array<RunRecord, 2> twopop_records(const ExperimentConfig& c, const TwoPopParams& params,
                                        const Discretization* disc) {
    const TwoPopInitial ic = twopop_initial(c);
    const RunConfig rc = c.run_config(c.numerics.dt);
    if (c.method == Method::llsgm) return solve_twopop(*disc, ic, params, rc).record;
    const FdmGrid grid = FdmGrid::make(c.domain, c.fdm.v_min, c.fdm.h);
    const double bound = std::max(c.fdm.rate_bound, c.numerics.blowup_threshold);
    RunConfig frc = rc;
    frc.dt = fdm_dt_twopop(grid, params, c.numerics.dt, c.fdm.cfl_fraction, bound);
    return fdm_solve_twopop(grid, ic.e, ic.i, params, frc, c.fdm.flux, ic.refractory_e, ic.refractory_i).record;
}

}  // namespace

BlowupResult run_blowup(const ExperimentConfig& c) {
    c.validate();
    BlowupResult result;
    std::unique_ptr<Discretization> disc;
    if (c.method == Method::llsgm) disc = std::make_unique<Discretization>(make_disc(c, c.numerics.M));
    if (c.model == ModelKind::onepop) {
        const GaussianIC ic = gaussian(c.initial.e, c.domain);
        if (c.method == Method::llsgm) {
            result.records.push_back(solve(*disc, ic, c.onepop, c.run_config(c.numerics.dt)).record);
        } else {
            const FdmGrid grid = FdmGrid::make(c.domain, c.fdm.v_min, c.fdm.h);
            const double bound = std::max(c.fdm.rate_bound, c.numerics.blowup_threshold);
            const double dt = fdm_dt_onepop(c, grid, c.fdm.cfl_fraction, bound);
            result.records.push_back(fdm_solve(grid, ic, c.onepop, c.run_config(dt), c.fdm.flux).record);
        }
    } else {
        for (auto& r : twopop_records(c, c.twopop, disc.get())) result.records.push_back(std::move(r));
    }
    for (const auto& r : result.records) result.reset_peak.push_back(reset_peaks(r, c.domain));
    return result;
}

RegimesResult run_twopop_regimes(const ExperimentConfig& c, int workers) {
    c.validate();
    std::unique_ptr<Discretization> disc;
    if (c.method == Method::llsgm) disc = std::make_unique<Discretization>(make_disc(c, c.numerics.M));
    RegimesResult result;
    result.cases.resize(c.sweep_bEE.size());
    parallel_for(static_cast<int>(c.sweep_bEE.size()), workers, [&](int i) {
        TwoPopParams params = c.twopop;
        params.b[pop_e][pop_e] = c.sweep_bEE[i];
        RegimeCase& rc = result.cases[i];
        rc.bEE = c.sweep_bEE[i];
        rc.records = twopop_records(c, params, disc.get());
        rc.report = classify(rc.records, c.regimes);
    });
    return result;
}

CompareResult run_compare_fdm(const ExperimentConfig& c) {
    c.validate();
    CompareResult result;
    const std::vector<double> grid = error_grid(c.domain);
    const GaussianIC ic = gaussian(c.initial.e, c.domain);
    const Discretization disc = make_disc(c, c.numerics.M);
    const OnePopRun run = solve(disc, ic, c.onepop, c.run_config(c.numerics.dt));
    const FdmGrid fgrid = FdmGrid::make(c.domain, c.fdm.v_min, c.fdm.h);
    result.fdm_dt = fdm_dt_onepop(c, fgrid, c.fdm.cfl_fraction, c.fdm.rate_bound);
    const FdmRun frun = fdm_solve(fgrid, ic, c.onepop, c.run_config(result.fdm_dt), c.fdm.flux);
    if (run.record.status == RunStatus::completed && frun.record.status == RunStatus::completed) {
        const auto p = reconstruct(disc.basis, run.final_state.u, grid);
        const auto q = fdm_sample(fgrid, frun.final_state.p, grid);
        result.l2 = l2_distance(grid, p, q);
        result.linf = linf_distance(p, q);
    }
    result.llsgm = run.record;
    result.fdm = frun.record;
    return result;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string real(double x) { return format_real(x); }

std::string short_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

class Table {
public:
    Table(const ExperimentConfig& c, std::vector<std::string> header) : config_(dump_config(c, -1)) {
        add(header);
    }

    void add(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
        out_ << "\n";
    }

    std::string str() const { return "# config " + config_ + "\n" + out_.str(); }

private:
    std::string config_;
    std::ostringstream out_;
};

const char* pop_suffix(int pops, int a) { return pops == 1 ? "" : (a == pop_e ? "_E" : "_I"); }

std::string series_csv(const RunRecord& r) {
    std::ostringstream out;
    write_series_csv(out, r);
    return out.str();
}

std::string snapshots_csv(const RunRecord& r) {
    std::ostringstream out;
    write_snapshots_csv(out, r);
    return out.str();
}

std::string order_text(double x) { return std::isnan(x) ? "NaN" : real(x); }

ExperimentReport report_convergence_time(const ExperimentConfig& c, const ConvergenceTimeResult& r) {
    const int pops = populations(c);
    std::vector<std::string> header{"dt"};
    for (int a = 0; a < pops; ++a) {
        for (const char* col : {"l2", "linf", "order_l2", "order_linf"}) header.push_back(col + std::string(pop_suffix(pops, a)));
    }
    header.push_back("status");
    Table t(c, header);
    ExperimentReport rep;
    rep.summary.push_back("reference: " + r.reference);
    for (const auto& row : r.rows) {
        std::vector<std::string> cells{real(row.dt)};
        std::string line = "dt " + short_real(row.dt);
        for (int a = 0; a < pops; ++a) {
            cells.insert(cells.end(), {real(row.error[a].l2), real(row.error[a].linf), order_text(row.order_l2[a]),
                                       order_text(row.order_linf[a])});
            line += std::string(pops == 1 ? "" : (a == 0 ? "  E" : "  I")) + "  L2 " + short_real(row.error[a].l2) +
                    " (order " + short_real(row.order_l2[a]) + ")  Linf " + short_real(row.error[a].linf) + " (order " +
                    short_real(row.order_linf[a]) + ")";
        }
        cells.push_back(row.status);
        t.add(cells);
        rep.summary.push_back(line + "  " + row.status);
    }
    rep.files.push_back({"convergence_time.csv", t.str()});
    return rep;
}

ExperimentReport report_convergence_space(const ExperimentConfig& c, const ConvergenceSpaceResult& r) {
    const int pops = populations(c);
    std::vector<std::string> header{"M", "parity"};
    for (int a = 0; a < pops; ++a) {
        for (const char* col : {"l2", "ln_l2"}) header.push_back(col + std::string(pop_suffix(pops, a)));
    }
    header.push_back("status");
    Table t(c, header);
    ExperimentReport rep;
    rep.summary.push_back("reference: " + r.reference);
    for (const auto& row : r.rows) {
        std::vector<std::string> cells{std::to_string(row.M), row.M % 2 ? "odd" : "even"};
        std::string line = "M " + std::to_string(row.M);
        for (int a = 0; a < pops; ++a) {
            cells.push_back(real(row.error[a].l2));
            cells.push_back(real(std::log(row.error[a].l2)));
            line += "  L2" + std::string(pop_suffix(pops, a)) + " " + short_real(row.error[a].l2);
        }
        cells.push_back(row.status);
        t.add(cells);
        rep.summary.push_back(line);
    }
    Table f(c, {"population", "parity", "points", "slope", "intercept", "r_squared", "strictly_decreasing"});
    for (const auto& pf : r.fits) {
        const std::string pop = pops == 1 ? "single" : (pf.population == pop_e ? "E" : "I");
        const char* parity = pf.parity ? "odd" : "even";
        f.add({pop, parity, std::to_string(pf.fit.points), real(pf.fit.slope), real(pf.fit.intercept),
               real(pf.fit.r_squared), pf.strictly_decreasing ? "true" : "false"});
        rep.summary.push_back("fit " + pop + " " + parity + ": slope " + short_real(pf.fit.slope) + ", R^2 " +
                              short_real(pf.fit.r_squared) + (pf.strictly_decreasing ? ", decreasing" : ", not decreasing"));
    }
    rep.files.push_back({"convergence_space.csv", t.str()});
    rep.files.push_back({"convergence_space_fit.csv", f.str()});
    return rep;
}

ExperimentReport report_stability(const ExperimentConfig& c, const StabilityResult& r) {
    Table t(c, {"M", "dt", "l2", "status", "flagged"});
    std::vector<std::string> header{"M"};
    for (double dt : r.dt) header.push_back("dt=" + real(dt));
    Table m(c, header);
    for (std::size_t i = 0; i < r.M.size(); ++i) {
        std::vector<std::string> row{std::to_string(r.M[i])};
        for (std::size_t k = 0; k < r.dt.size(); ++k) {
            const StabilityCell& cell = r.at(i, k);
            const bool flagged = !std::isfinite(cell.l2) || cell.l2 > c.stability_threshold;
            t.add({std::to_string(cell.M), real(cell.dt), real(cell.l2), cell.status, flagged ? "true" : "false"});
            row.push_back(real(cell.l2));
        }
        m.add(row);
    }
    ExperimentReport rep;
    rep.summary.push_back("reference: " + r.reference);
    rep.summary.push_back("max L2 " + short_real(r.max_error) + ", " + std::to_string(r.flagged) + " of " +
                          std::to_string(r.cells.size()) + " entries above " + short_real(c.stability_threshold) +
                          " or not finite");
    rep.files.push_back({"stability_grid.csv", t.str()});
    rep.files.push_back({"stability_matrix.csv", m.str()});
    return rep;
}

ExperimentReport report_efficiency(const ExperimentConfig& c, const EfficiencyResult& r) {
    Table full(c, {"method", "resolution", "dt", "l2", "seconds", "status"});
    Table errors(c, {"method", "resolution", "dt", "l2", "status"});
    ExperimentReport rep;
    for (const auto& row : r.rows) {
        full.add({row.method, real(row.resolution), real(row.dt), real(row.l2), real(row.seconds), row.status});
        errors.add({row.method, real(row.resolution), real(row.dt), real(row.l2), row.status});
        rep.summary.push_back(row.method + " " + short_real(row.resolution) + ": L2 " + short_real(row.l2) + ", " +
                              short_real(row.seconds) + " s");
    }
    for (const auto& row : r.twopop) {
        full.add({row.method, real(row.resolution), real(row.dt), real(row.l2), real(row.seconds), row.status});
        rep.summary.push_back(row.method + " " + short_real(row.resolution) + ": " + short_real(row.seconds) + " s (" +
                              row.status + ")");
    }
    Table frontier(c, {"target_error", "llsgm_seconds", "llsgm_extrapolated", "fdm_seconds", "fdm_extrapolated",
                       "speedup"});
    frontier.add({real(r.target_error), real(r.llsgm_seconds_at_target), r.llsgm_extrapolated ? "true" : "false",
                  real(r.fdm_seconds_at_target), r.fdm_extrapolated ? "true" : "false", real(r.speedup)});
    rep.summary.push_back("at L2 " + short_real(r.target_error) + ": llsgm " + short_real(r.llsgm_seconds_at_target) +
                          " s, fdm " + short_real(r.fdm_seconds_at_target) + " s, speedup " + short_real(r.speedup));
    rep.files.push_back({"efficiency.csv", full.str(), false});
    rep.files.push_back({"efficiency_errors.csv", errors.str()});
    rep.files.push_back({"efficiency_frontier.csv", frontier.str(), false});
    return rep;
}

ExperimentReport report_blowup(const ExperimentConfig& c, const BlowupResult& r) {
    const int pops = static_cast<int>(r.records.size());
    Table status(c, {"population", "status", "blowup_time", "message"});
    Table peaks(c, {"population", "t", "max_p_near_reset"});
    ExperimentReport rep;
    for (int a = 0; a < pops; ++a) {
        const RunRecord& rec = r.records[a];
        const std::string pop = pops == 1 ? "single" : (a == pop_e ? "E" : "I");
        const std::string when = rec.blowup_time ? real(*rec.blowup_time) : "";
        status.add({pop, status_text(rec), when, rec.message});
        for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
            peaks.add({pop, real(rec.snapshots[k].t), real(r.reset_peak[a][k])});
        }
        rep.files.push_back({"series" + std::string(pop_suffix(pops, a)) + ".csv", series_csv(rec)});
        rep.files.push_back({"snapshots" + std::string(pop_suffix(pops, a)) + ".csv", snapshots_csv(rec)});
        rep.summary.push_back(pop + ": " + status_text(rec) + (rec.blowup_time ? " at t = " + short_real(*rec.blowup_time) : ""));
    }
    rep.files.push_back({"blowup.csv", status.str()});
    rep.files.push_back({"reset_peaks.csv", peaks.str()});
    return rep;
}

ExperimentReport report_regimes(const ExperimentConfig& c, const RegimesResult& r) {
    Table t(c, {"bEE", "regime", "peaks", "fluctuation_E", "fluctuation_I", "detail"});
    ExperimentReport rep;
    for (const auto& rc : r.cases) {
        t.add({real(rc.bEE), std::string(to_string(rc.report.regime)), std::to_string(rc.report.peak_times.size()),
               real(rc.report.fluctuation[0]), real(rc.report.fluctuation[1]), rc.report.detail});
        const std::string tag = "bEE_" + short_real(rc.bEE);
        rep.files.push_back({"series_" + tag + "_E.csv", series_csv(rc.records[pop_e])});
        rep.files.push_back({"series_" + tag + "_I.csv", series_csv(rc.records[pop_i])});
        rep.summary.push_back("b_EE " + short_real(rc.bEE) + ": " + std::string(to_string(rc.report.regime)) + " (" +
                              rc.report.detail + ")");
    }
    rep.files.push_back({"regimes.csv", t.str()});
    return rep;
}

ExperimentReport report_compare(const ExperimentConfig& c, const CompareResult& r) {
    Table t(c, {"l2", "linf", "fdm_h", "fdm_dt", "llsgm_status", "fdm_status"});
    t.add({real(r.l2), real(r.linf), real(c.fdm.h), real(r.fdm_dt), status_text(r.llsgm), status_text(r.fdm)});
    ExperimentReport rep;
    rep.files.push_back({"compare_fdm.csv", t.str()});
    rep.files.push_back({"series_llsgm.csv", series_csv(r.llsgm)});
    rep.files.push_back({"series_fdm.csv", series_csv(r.fdm)});
    rep.summary.push_back("L2 distance " + short_real(r.l2) + ", Linf " + short_real(r.linf) + " at t = " +
                          short_real(c.numerics.T));
    return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& c, int workers) {
    c.validate();
    ExperimentReport rep;
    switch (c.kind) {
        case ExperimentKind::convergence_time: rep = report_convergence_time(c, run_convergence_time(c, workers)); break;
        case ExperimentKind::convergence_space: rep = report_convergence_space(c, run_convergence_space(c, workers)); break;
        case ExperimentKind::stability_grid: rep = report_stability(c, run_stability_grid(c, workers)); break;
        case ExperimentKind::efficiency: rep = report_efficiency(c, run_efficiency(c)); break;
        case ExperimentKind::blowup: rep = report_blowup(c, run_blowup(c)); break;
        case ExperimentKind::twopop_regimes: rep = report_regimes(c, run_twopop_regimes(c, workers)); break;
        case ExperimentKind::compare_fdm: rep = report_compare(c, run_compare_fdm(c)); break;
    }
    rep.files.insert(rep.files.begin(), OutputFile{"config.json", dump_config(c)});
    return rep;
}

void write_report(const ExperimentReport& report, const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) fail(ErrorCategory::io, "cannot create " + directory + ": " + ec.message());
    for (const auto& f : report.files) {
        const auto path = std::filesystem::path(directory) / f.name;
        std::ofstream out(path, std::ios::binary);
        out << f.content;
        if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
    }
}

}  // namespace llsgm
