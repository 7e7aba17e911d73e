#include "llsgm/error.hpp"
#include "llsgm/regimes.hpp"

#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

using namespace llsgm;

namespace {

RunRecord series(const std::function<double(double)>& f, double T = 10.0, double dt = 1e-3) {
    RunRecord r;
    const long n = std::lround(T / dt);
    for (long k = 0; k <= n; ++k) r.samples.push_back(Sample{k * dt, f(k * dt), 1.0, 0.0, false});
    return r;
}

std::array<RunRecord, 2> pair(const std::function<double(double)>& e, const std::function<double(double)>& i) {
    return {series(e), series(i)};
}

double wave(double t, double period, double mean, double amplitude) {
    return mean + amplitude * std::sin(2.0 * std::numbers::pi * t / period);
}

}  // namespace

TEST_CASE("windowed maxima") {
    const std::vector<double> t{0, 1, 2, 3, 4, 5, 6, 7, 8};
    const std::vector<double> y{0, 1, 0, 2, 2, 0, 1, 3, 0};
    // a plateau reports its first sample; windows clipped by the series ends are skipped
    CHECK(window_maxima(t, y, 1.0) == std::vector<std::size_t>{1, 3, 7});
    CHECK(window_maxima(t, y, 2.0) == std::vector<std::size_t>{3});
    // a constant series has no peak: every sample is preceded by an equal one
    CHECK(window_maxima(t, std::vector<double>(9, 1.0), 1.0).empty());
}

TEST_CASE("rules validation") {
    RegimeRules r;
    CHECK_NOTHROW(r.validate());
    r.tail_fraction = 0.0;
    CHECK_THROWS_AS(r.validate(), Error);
    r = RegimeRules{};
    r.min_peaks = 1;
    CHECK_THROWS_AS(r.validate(), Error);
}

TEST_CASE("threshold trip wins") {
    auto recs = pair([](double t) { return wave(t, 0.25, 3.0, 1.0); }, [](double) { return 0.5; });
    recs[1].blowup_time = 4.2;
    const auto report = classify(recs);
    CHECK(report.regime == Regime::blow_up);
    CHECK(report.detail.find("I tripped") != std::string::npos);
}

TEST_CASE("steady state") {
    const auto report = classify(pair([](double t) { return 0.07 + 0.05 * std::exp(-t); },
                                      [](double t) { return 0.77 - 0.3 * std::exp(-2.0 * t); }));
    CHECK(report.regime == Regime::steady);
    CHECK(report.fluctuation[0] < 0.01);
    CHECK(report.fluctuation[1] < 0.01);
}

TEST_CASE("regular oscillation is periodic") {
    const auto report = classify(pair([](double t) { return wave(t, 0.25, 2.0, 1.5); },
                                      [](double t) { return wave(t, 0.25, 1.0, 0.4); }));
    CHECK(report.regime == Regime::periodic);
    // peaks after the warm-up at t = 5 are a quarter apart
    REQUIRE(report.peak_times.size() >= 19);
    for (std::size_t k = 1; k < report.peak_times.size(); ++k) {
        CHECK(report.peak_times[k] - report.peak_times[k - 1] == doctest::Approx(0.25).epsilon(1e-3));
    }
}

TEST_CASE("no forced label") {
    // swinging but with a 2% amplitude: neither steady nor periodic
    const auto weak = classify(pair([](double) { return 1.0; }, [](double t) { return wave(t, 0.25, 1.0, 0.02); }));
    CHECK(weak.regime == Regime::ambiguous);
    // strong swings whose period stretches as time goes on
    const auto drifting = classify(pair([](double) { return 1.0; }, [](double t) {
        return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * std::pow(t, 0.5) * 2.0);
    }));
    CHECK(drifting.regime == Regime::ambiguous);
    // too few peaks after warm-up
    const auto slow = classify(pair([](double) { return 1.0; }, [](double t) { return wave(t, 2.5, 1.0, 0.5); }));
    CHECK(slow.regime == Regime::ambiguous);
}

TEST_CASE("classification re-runs offline from the series csv") {
    auto recs = pair([](double t) { return wave(t, 0.3, 2.0, 1.0); }, [](double t) { return wave(t, 0.3, 1.0, 0.5); });
    std::array<RunRecord, 2> back;
    for (int a = 0; a < 2; ++a) {
        std::stringstream io;
        write_series_csv(io, recs[a]);
        back[a] = read_series_csv(io);
    }
    const auto x = classify(recs);
    const auto y = classify(back);
    CHECK(x.regime == y.regime);
    CHECK(x.peak_times == y.peak_times);
    CHECK(x.detail == y.detail);
}
