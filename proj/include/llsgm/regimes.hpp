#pragma once

#include "llsgm/record.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llsgm {

enum class Regime { periodic, steady, blow_up, ambiguous };

std::string_view to_string(Regime regime) noexcept;

/// Thresholds of the classifier; pure data so a run can be re-classified offline from its CSVs.
struct RegimeRules {
    double warmup_fraction = 0.5;     // peaks are counted after this fraction of the run
    double tail_fraction = 0.2;       // window for the steady test
    double steady_tolerance = 0.01;   // (max - min) / |mean| of each N over the tail
    double spacing_tolerance = 0.2;   // every peak spacing within this of the median spacing
    double min_amplitude = 0.05;      // (peak - mean) / mean
    int min_peaks = 3;
    double peak_window = 0.05;        // a peak is the maximum within +-window time units

    void validate() const;
};

struct RegimeReport {
    Regime regime = Regime::ambiguous;
    std::vector<double> peak_times;     // of N_I after warm-up
    std::array<double, 2> fluctuation{};  // steady statistic per population
    std::string detail;
};

/// Indices of samples that are the first maximum within +-window of their own time.
std::vector<std::size_t> window_maxima(std::span<const double> t, std::span<const double> y, double window);

/// Blow-up if either population tripped, else steady, else periodic, else ambiguous.
RegimeReport classify(const std::array<RunRecord, 2>& records, const RegimeRules& rules = {});

}  // namespace llsgm
