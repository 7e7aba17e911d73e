#pragma once

#include "llsgm/assembly.hpp"
#include "llsgm/onepop.hpp"
#include "llsgm/record.hpp"
#include "llsgm/twopop.hpp"

#include <array>
#include <vector>

namespace llsgm {

/// Finite-volume grid on [V_min, V_F]. Cell i covers [V_min + i h, V_min + (i+1) h]; V_R is the
/// edge with index reset_edge.
struct FdmGrid {
    double v_min = -6.0;
    double v_reset = 1.0;
    double v_fire = 2.0;
    double h = 1.0 / 128.0;
    int cells = 0;
    int reset_edge = 0;

    /// Throws configuration unless V_R and V_F fall on cell edges.
    static FdmGrid make(const Domain& domain, double v_min, double h);

    double center(int i) const noexcept { return v_min + (i + 0.5) * h; }
    double edge(int e) const noexcept { return v_min + e * h; }
    std::vector<double> centers() const;
};

/// Drift flux at interior edges. Upwind is the default; centred is second order and used for
/// reference solutions where the cell Peclet number |drift| h / (2a) stays below one.
enum class FdmFlux { upwind, centered };

struct FdmState {
    std::vector<double> p;  // cell averages
    double t = 0.0;
    long step = 0;
    double rate = 0.0;  // outflux at V_F during the previous step (fixed point at t = 0)
};

/// Cell averages of the initial density, by 4-point Gauss-Legendre per cell.
std::vector<double> fdm_project(const FdmGrid& grid, const Density& p0);

/// Largest dt satisfying dt <= h^2 / (2a + |drift|_max h) for the given rate.
double fdm_stable_dt(const FdmGrid& grid, const OnePopParams& params, double rate);

/// Outflux through V_F for density p under coefficients (drift offset, diffusion).
double fdm_outflux(const FdmGrid& grid, const std::vector<double>& p, double drift_offset, double diffusion,
                   FdmFlux flux);

/// Explicit Euler step with coefficients lagged from state.rate. The outflux is re-injected half into
/// each cell adjacent to V_R, so h * sum(p) is conserved to rounding. Throws cfl_violation.
FdmState fdm_step(const FdmGrid& grid, const FdmState& state, const OnePopParams& params, double dt,
                  FdmFlux flux = FdmFlux::upwind);

FdmState fdm_initial(const FdmGrid& grid, const Density& p0, const OnePopParams& params,
                     FdmFlux flux = FdmFlux::upwind);

double fdm_mass(const FdmGrid& grid, const std::vector<double>& p);

/// Piecewise-linear resampling of cell averages (with p(V_F) = 0) onto arbitrary points; zero below V_min.
std::vector<double> fdm_sample(const FdmGrid& grid, const std::vector<double>& p, const std::vector<double>& query);

struct FdmRun {
    RunRecord record;
    FdmState final_state;
    double stepping_seconds = 0.0;
};

FdmRun fdm_solve(const FdmGrid& grid, const Density& p0, const OnePopParams& params, const RunConfig& config,
                 FdmFlux flux = FdmFlux::upwind);

/// Same stencil per population, with delayed rates, refractory masses and the recovery closure
/// injected at V_R.
struct FdmTwoPopRun {
    std::array<RunRecord, 2> record;
    std::array<std::vector<double>, 2> p;
    double stepping_seconds = 0.0;
};

double fdm_stable_dt_twopop(const FdmGrid& grid, const TwoPopParams& params, double rate_bound);

FdmTwoPopRun fdm_solve_twopop(const FdmGrid& grid, const Density& p0_e, const Density& p0_i,
                              const TwoPopParams& params, const RunConfig& config, FdmFlux flux = FdmFlux::upwind,
                              double r_e = 0.0, double r_i = 0.0);

}  // namespace llsgm
