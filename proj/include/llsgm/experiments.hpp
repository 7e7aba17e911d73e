#pragma once

#include "llsgm/config.hpp"
#include "llsgm/record.hpp"
#include "llsgm/regimes.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace llsgm {

/// Runs body(0) .. body(count - 1) on up to `workers` threads. Every index runs even if some throw;
/// the exception of the lowest failing index is rethrown afterwards.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

/// Largest step no greater than dt_max that divides `unit` an integer number of times.
double aligned_dt(double unit, double dt_max);

/// log(e0 / e1) / log(dt0 / dt1); NaN when the steps coincide or an error is not positive.
double observed_order(double dt0, double e0, double dt1, double e1);

struct LinearFit {
    double slope = NAN;
    double intercept = NAN;
    double r_squared = NAN;
    int points = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Reference densities on the error grid at the final time, one per population.
struct ReferenceSolution {
    std::vector<double> grid;
    std::vector<std::vector<double>> p;
    double dt = 0.0;
    std::string description;
};

ReferenceSolution compute_reference(const ExperimentConfig& config);

struct PopulationError {
    double l2 = NAN;
    double linf = NAN;
};

struct ConvergenceTimeRow {
    double dt = 0.0;
    std::vector<PopulationError> error;  // per population
    std::vector<double> order_l2;
    std::vector<double> order_linf;
    std::string status;
};

struct ConvergenceTimeResult {
    std::vector<ConvergenceTimeRow> rows;
    std::string reference;
};

ConvergenceTimeResult run_convergence_time(const ExperimentConfig& config, int workers = 1);

struct ConvergenceSpaceRow {
    int M = 0;
    std::vector<PopulationError> error;
    std::string status;
};

struct ParityFit {
    int population = 0;
    int parity = 0;  // 0 even M, 1 odd M
    LinearFit fit;   // ln L2 error against M
    bool strictly_decreasing = false;
};

struct ConvergenceSpaceResult {
    std::vector<ConvergenceSpaceRow> rows;
    std::vector<ParityFit> fits;  // empty when no parity class has two points
    std::string reference;
};

ConvergenceSpaceResult run_convergence_space(const ExperimentConfig& config, int workers = 1);

struct StabilityCell {
    int M = 0;
    double dt = 0.0;
    double l2 = NAN;
    std::string status;
};

struct StabilityResult {
    std::vector<int> M;
    std::vector<double> dt;
    std::vector<StabilityCell> cells;  // row-major over (M, dt)
    double max_error = NAN;
    int flagged = 0;  // entries above the threshold or not finite
    std::string reference;

    const StabilityCell& at(std::size_t m, std::size_t k) const { return cells[m * dt.size() + k]; }
};

StabilityResult run_stability_grid(const ExperimentConfig& config, int workers = 1);

struct EfficiencyRow {
    std::string method;
    double resolution = 0.0;  // M for llsgm, h for fdm
    double dt = 0.0;
    double l2 = NAN;
    double seconds = NAN;  // median over repetitions
    std::string status;
};

struct EfficiencyResult {
    std::vector<EfficiencyRow> rows;
    double target_error = 0.0;
    double llsgm_seconds_at_target = NAN;
    double fdm_seconds_at_target = NAN;
    bool llsgm_extrapolated = false;
    bool fdm_extrapolated = false;
    double speedup = NAN;  // fdm / llsgm at the target error
    std::vector<EfficiencyRow> twopop;  // timing only
};

/// Timing runs are sequential regardless of the worker count.
EfficiencyResult run_efficiency(const ExperimentConfig& config);

/// Log-log interpolation of time against error at the target; extrapolates from the two
/// closest rungs when the ladder does not bracket it.
double time_at_error(const std::vector<double>& error, const std::vector<double>& seconds, double target,
                     bool& extrapolated);

struct BlowupResult {
    std::vector<RunRecord> records;  // one per population
    std::vector<std::vector<double>> reset_peak;  // per population, per snapshot: max p on [V_R-0.2, V_R+0.2]
};

BlowupResult run_blowup(const ExperimentConfig& config);

struct RegimeCase {
    double bEE = 0.0;
    RegimeReport report;
    std::array<RunRecord, 2> records;
};

struct RegimesResult {
    std::vector<RegimeCase> cases;
};

RegimesResult run_twopop_regimes(const ExperimentConfig& config, int workers = 1);

struct CompareResult {
    double l2 = NAN;
    double linf = NAN;
    RunRecord llsgm;
    RunRecord fdm;
    double fdm_dt = 0.0;
};

CompareResult run_compare_fdm(const ExperimentConfig& config);

struct OutputFile {
    std::string name;
    std::string content;
    bool deterministic = true;  // false for files carrying wall-clock times
};

struct ExperimentReport {
    std::vector<OutputFile> files;
    std::vector<std::string> summary;
};

/// Dispatches on config.kind and renders the result as CSV files plus summary lines.
ExperimentReport run_experiment(const ExperimentConfig& config, int workers = 1);

/// Writes every file under `directory`, creating it if needed.
void write_report(const ExperimentReport& report, const std::string& directory);

}  // namespace llsgm
