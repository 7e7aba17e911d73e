#include "llsgm/error.hpp"
#include "llsgm/norms.hpp"
#include "llsgm/record.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace llsgm;

TEST_CASE("error grid") {
    const auto g = error_grid(Domain{});
    REQUIRE(g.size() == 2001);
    CHECK(g.front() == -7.0);
    CHECK(g.back() == 2.0);
    CHECK(g[1000] == doctest::Approx(-2.5).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), Error);
}

TEST_CASE("trapezoid norms") {
    const auto g = uniform_grid(0.0, 1.0, 11);
    std::vector<double> one(g.size(), 1.0), zero(g.size(), 0.0), lin(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) lin[i] = g[i];
    CHECK(trapezoid(g, one) == doctest::Approx(1.0).epsilon(1e-15));
    // exact for linear integrands
    CHECK(trapezoid(g, lin) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(l2_distance(g, one, zero) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l2_distance(g, lin, lin) == 0.0);
    CHECK(linf_distance(lin, zero) == 1.0);
    CHECK_THROWS_AS(l2_distance(g, one, std::vector<double>(3)), Error);
}

TEST_CASE("linear interpolation") {
    const std::vector<double> xs{0.0, 1.0, 3.0};
    const std::vector<double> ys{1.0, 3.0, -1.0};
    const auto out = interpolate_linear(xs, ys, std::vector<double>{-0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 3.5});
    const std::vector<double> expected{0.0, 1.0, 2.0, 3.0, 1.0, -1.0, 0.0};
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == doctest::Approx(expected[i]).epsilon(1e-15));
}

TEST_CASE("format_real keeps 17 significant digits") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(1.0) == "1");
    CHECK(std::strtod(format_real(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("empty record emits a header-only file") {
    std::ostringstream series, snaps;
    write_series_csv(series, RunRecord{});
    write_snapshots_csv(snaps, RunRecord{});
    CHECK(series.str() == "t,N,mass,R,negative_rate\n");
    CHECK(snaps.str() == "t,v,p\n");
}

TEST_CASE("series csv round trip is exact") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    RunRecord r;
    for (int i = 0; i < 200; ++i) {
        r.samples.push_back(Sample{i * 1e-3, u(rng), u(rng) * 1e-9, u(rng), i % 7 == 0});
    }
    r.samples.push_back(Sample{1.0, std::numeric_limits<double>::denorm_min(), -0.0, 1e300, false});
    std::stringstream io;
    write_series_csv(io, r);
    const RunRecord back = read_series_csv(io);
    CHECK(back.samples == r.samples);
}

TEST_CASE("series csv rejects malformed input") {
    std::istringstream bad_header("t,N\n1,2\n");
    CHECK_THROWS_AS(read_series_csv(bad_header), Error);
    std::istringstream bad_row("t,N,mass,R,negative_rate\n1,2,3\n");
    CHECK_THROWS_AS(read_series_csv(bad_row), Error);
    std::istringstream bad_number("t,N,mass,R,negative_rate\n1,x,3,4,0\n");
    CHECK_THROWS_AS(read_series_csv(bad_number), Error);
}

TEST_CASE("snapshot csv groups rows by time") {
    RunRecord r;
    r.snapshots.push_back(Snapshot{0.5, {0.0, 1.0}, {2.0, 3.0}});
    r.snapshots.push_back(Snapshot{1.0, {0.0}, {4.0}});
    std::ostringstream out;
    write_snapshots_csv(out, r);
    CHECK(out.str() == "t,v,p\n0.5,0,2\n0.5,1,3\n1,0,4\n");
}
