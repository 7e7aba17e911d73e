#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace llsgm {

enum class RunStatus { completed, blow_up_detected, solver_failure };

std::string_view to_string(RunStatus status) noexcept;

/// One row of a population time series.
struct Sample {
    double t = 0.0;
    double rate = 0.0;        // N
    double mass = 0.0;        // m . u (density mass, refractory excluded)
    double refractory = 0.0;  // R, zero for one-population runs
    bool negative_rate = false;

    bool operator==(const Sample&) const = default;
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> v;
    std::vector<double> p;

    bool operator==(const Snapshot&) const = default;
};

struct RunRecord {
    std::vector<Sample> samples;
    std::vector<Snapshot> snapshots;
    RunStatus status = RunStatus::completed;
    std::string message;
    /// First time N exceeded the blow-up threshold (or the state went non-finite).
    std::optional<double> blowup_time;
};

/// Series CSV: header `t,N,mass,R,negative_rate`, one row per sample, reals with 17 significant digits.
void write_series_csv(std::ostream& out, const RunRecord& record);
/// Inverse of write_series_csv; fills samples only.
RunRecord read_series_csv(std::istream& in);

/// Snapshot CSV: header `t,v,p`, rows grouped by snapshot time in increasing order.
void write_snapshots_csv(std::ostream& out, const RunRecord& record);

/// printf-style %.17g.
std::string format_real(double x);

}  // namespace llsgm
