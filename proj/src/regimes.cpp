#include "llsgm/regimes.hpp"

#include "llsgm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace llsgm {

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::periodic: return "periodic";
        case Regime::steady: return "steady";
        case Regime::blow_up: return "blow-up";
        case Regime::ambiguous: return "ambiguous";
    }
    return "unknown";
}

void RegimeRules::validate() const {
    auto fraction = [](double x) { return x > 0.0 && x < 1.0; };
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0) || !fraction(tail_fraction) ||
        !(steady_tolerance > 0.0) || !(spacing_tolerance > 0.0) || !(min_amplitude >= 0.0) || min_peaks < 2 ||
        !(peak_window > 0.0)) {
        fail(ErrorCategory::configuration, "regime rules out of range");
    }
}

std::vector<std::size_t> window_maxima(std::span<const double> t, std::span<const double> y, double window) {
    std::vector<std::size_t> peaks;
    const std::size_t n = std::min(t.size(), y.size());
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (t[lo] < t[i] - window) ++lo;
        while (hi + 1 < n && t[hi + 1] <= t[i] + window) ++hi;
        // windows clipped by the series ends are not trusted
        if (t[i] - window < t.front() || t[i] + window > t[n - 1]) continue;
        bool is_peak = true;
        for (std::size_t j = lo; j <= hi && is_peak; ++j) {
            if (j < i ? y[j] >= y[i] : y[j] > y[i]) is_peak = false;
        }
        if (is_peak) peaks.push_back(i);
    }
    return peaks;
}

namespace {

double tail_fluctuation(const RunRecord& r, double fraction) {
    if (r.samples.empty()) return INFINITY;
    const double t_end = r.samples.back().t;
    const double t_start = r.samples.front().t;
    const double from = t_end - fraction * (t_end - t_start);
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    std::size_t count = 0;
    for (const Sample& s : r.samples) {
        if (s.t < from) continue;
        lo = std::min(lo, s.rate);
        hi = std::max(hi, s.rate);
        sum += s.rate;
        ++count;
    }
    const double mean = sum / static_cast<double>(count);
    return mean == 0.0 ? INFINITY : (hi - lo) / std::abs(mean);
}

}  // namespace

RegimeReport classify(const std::array<RunRecord, 2>& records, const RegimeRules& rules) {
    rules.validate();
    RegimeReport report;
    std::ostringstream detail;

    for (int a = 0; a < 2; ++a) {
        if (records[a].blowup_time) {
            report.regime = Regime::blow_up;
            detail << (a == 0 ? "E" : "I") << " tripped at t = " << *records[a].blowup_time;
            report.detail = detail.str();
            return report;
        }
    }

    for (int a = 0; a < 2; ++a) report.fluctuation[a] = tail_fluctuation(records[a], rules.tail_fraction);
    if (report.fluctuation[0] < rules.steady_tolerance && report.fluctuation[1] < rules.steady_tolerance) {
        report.regime = Regime::steady;
        detail << "tail fluctuation E " << report.fluctuation[0] << ", I " << report.fluctuation[1];
        report.detail = detail.str();
        return report;
    }

    const auto& samples = records[1].samples;
    if (samples.empty()) {
        report.detail = "empty series";
        return report;
    }
    const double t0 = samples.front().t;
    const double from = t0 + rules.warmup_fraction * (samples.back().t - t0);
    std::vector<double> t, y;
    for (const Sample& s : samples) {
        if (s.t < from) continue;
        t.push_back(s.t);
        y.push_back(s.rate);
    }
    const double mean = y.empty() ? 0.0 : std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    for (std::size_t i : window_maxima(t, y, rules.peak_window)) {
        if (mean > 0.0 && (y[i] - mean) / mean >= rules.min_amplitude) report.peak_times.push_back(t[i]);
    }

    const auto& peaks = report.peak_times;
    detail << peaks.size() << " peaks of N_I after warm-up";
    if (static_cast<int>(peaks.size()) >= rules.min_peaks) {
        std::vector<double> spacing;
        for (std::size_t i = 1; i < peaks.size(); ++i) spacing.push_back(peaks[i] - peaks[i - 1]);
        std::vector<double> sorted = spacing;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        const double median = sorted[sorted.size() / 2];
        double worst = 0.0;
        for (double s : spacing) worst = std::max(worst, std::abs(s - median) / median);
        detail << ", median spacing " << median << ", worst deviation " << worst;
        if (worst <= rules.spacing_tolerance) report.regime = Regime::periodic;
    }
    detail << "; tail fluctuation E " << report.fluctuation[0] << ", I " << report.fluctuation[1];
    report.detail = detail.str();
    return report;
}

}  // namespace llsgm
