#include "llsgm/basis.hpp"
#include "llsgm/error.hpp"
#include "llsgm/quadrature.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace llsgm;

namespace {

double central_difference(auto&& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("laguerre functions") {
    CHECK(laguerre_fn(0, 1.4) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
    CHECK(laguerre_fn(3, 0.0) == 1.0);
    CHECK(laguerre_fn(2, 2.0) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-15));

    for (double x : {0.0, 0.3, 2.5, 11.0}) {
        CHECK(laguerre_fn_deriv(0, x) == doctest::Approx(-0.5 * std::exp(-0.5 * x)).epsilon(1e-15));
    }
    CHECK(laguerre_fn_deriv(1, 0.0) == doctest::Approx(-1.5).epsilon(1e-15));
    const double fd = central_difference([](double x) { return laguerre_fn(6, x); }, 0.7);
    CHECK(std::abs(laguerre_fn_deriv(6, 0.7) - fd) < 1e-7);
}

TEST_CASE("laguerre functions are orthonormal for n, m <= 20") {
    const auto rule = gauss_laguerre(32);
    for (int n = 0; n <= 20; ++n) {
        for (int m = 0; m <= 20; ++m) {
            double s = 0.0;
            for (std::size_t i = 0; i < rule.order(); ++i) {
                const double x = rule.nodes[i];
                // the product carries e^{-x}; divide it out to use the weighted rule
                s += rule.weights[i] * std::exp(x) * laguerre_fn(n, x) * laguerre_fn(m, x);
            }
            CHECK_MESSAGE(std::abs(s - (n == m ? 1.0 : 0.0)) < 1e-10, "n=" << n << " m=" << m);
        }
    }
}

TEST_CASE("legendre values and endpoint slopes") {
    for (double x : {-1.0, -0.3, 0.0, 0.8}) CHECK(legendre(0, x) == 1.0);
    for (int n = 0; n <= 20; ++n) {
        CHECK(legendre(n, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
        const double expected = n * (n + 1) / 2.0;
        CHECK(legendre_deriv(n, 1.0) == doctest::Approx(expected).epsilon(1e-13));
        // one-sided difference at the endpoint, second order
        const double h = 1e-5;
        const double fd = (3.0 * legendre(n, 1.0) - 4.0 * legendre(n, 1.0 - h) + legendre(n, 1.0 - 2 * h)) /
                          (2.0 * h);
        CHECK(std::abs(fd - expected) < 1e-4 * std::max(1.0, expected));
    }
}

TEST_CASE("basis evaluation at the anchor points") {
    const Domain dom{1.0, 2.0, 1.0};
    const int M = 6;
    const BasisSet basis(M, dom);
    REQUIRE(basis.dim() == 13);
    CHECK(basis.family(0) == BasisFamily::interface);
    CHECK(basis.family(1) == BasisFamily::laguerre);
    CHECK(basis.family(M) == BasisFamily::laguerre);
    CHECK(basis.family(M + 1) == BasisFamily::legendre);
    CHECK(basis.family(2 * M) == BasisFamily::legendre);

    CHECK(basis.value(0, dom.v_reset) == 1.0);
    CHECK(basis.value(1, dom.v_reset) == 0.0);
    CHECK(basis.value(M + 1, dom.v_fire) == 0.0);

    CHECK(basis.derivative(0, 1.4) == doctest::Approx(1.0 / (dom.v_reset - dom.v_fire)));
    CHECK(basis.derivative(M + 1, dom.v_fire) == doctest::Approx(-6.0).epsilon(1e-14));

    CHECK_THROWS_AS(basis.value(-1, 0.0), Error);
    CHECK_THROWS_AS(basis.value(basis.dim(), 0.0), Error);
    CHECK_THROWS_AS(basis.value(0, dom.v_fire + 0.1), Error);
    CHECK_THROWS_AS(basis.derivative(0, dom.v_reset), Error);
    CHECK_THROWS_AS(BasisSet(0, dom), Error);
    CHECK_THROWS_AS(BasisSet(4, Domain{2.0, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(BasisSet(4, Domain{1.0, 2.0, 0.0}), Error);
}

TEST_CASE("trace table") {
    for (double beta : {1.0, 0.6, 2.5}) {
        const Domain dom{1.0, 2.0, beta};
        const BasisSet basis(8, dom);
        for (int k = 0; k < basis.dim(); ++k) {
            const Trace& t = basis.trace(k);
            CHECK(t.at_reset == (k == 0 ? 1.0 : 0.0));
            CHECK(t.at_fire == 0.0);
            CHECK(basis.value(k, dom.v_fire) == 0.0);
            if (basis.family(k) == BasisFamily::laguerre) {
                CHECK(t.slope_at_fire == 0.0);
                CHECK(t.slope_above_reset == 0.0);
            }
            if (basis.family(k) == BasisFamily::legendre) CHECK(t.slope_below_reset == 0.0);
            // one-sided slopes agree with the pointwise derivative just off V_R
            CHECK(basis.derivative(k, dom.v_reset - 1e-9) == doctest::Approx(t.slope_below_reset).epsilon(1e-7));
            CHECK(basis.derivative(k, dom.v_reset + 1e-9) ==
                  doctest::Approx(t.slope_above_reset).epsilon(1e-6));
            CHECK(basis.derivative(k, dom.v_fire) == doctest::Approx(t.slope_at_fire).epsilon(1e-13));
        }
        CHECK(basis.trace(0).slope_at_fire == doctest::Approx(1.0 / (dom.v_reset - dom.v_fire)));
    }
}

TEST_CASE("continuity across V_R is exact") {
    const BasisSet basis(12, Domain{});
    std::vector<LeftForm> left;
    basis.left_forms(0.0, left);
    std::vector<double> right, slopes;
    basis.right_values(basis.domain().v_reset, right, slopes);
    for (int k = 0; k < basis.dim(); ++k) {
        const double below = basis.has_left_support(k) ? left[k].poly : 0.0;
        const double above = basis.has_right_support(k) ? right[k] : 0.0;
        CHECK(below == above);
        CHECK(below == (k == 0 ? 1.0 : 0.0));
    }
}

TEST_CASE("left forms reproduce the weighted evaluation") {
    const BasisSet basis(10, Domain{1.0, 2.0, 0.7});
    std::vector<LeftForm> left;
    for (double x : {0.05, 0.9, 4.0, 17.5}) {
        basis.left_forms(x, left);
        const double v = basis.domain().v_reset - x;
        for (int k = 0; k <= basis.expansion(); ++k) {
            const double envelope = std::exp(-basis.left_decay_rate(k) * x);
            CHECK(envelope * left[k].poly == doctest::Approx(basis.value(k, v)).epsilon(1e-12));
            CHECK(envelope * left[k].slope_poly == doctest::Approx(basis.derivative(k, v)).epsilon(1e-12));
        }
    }
}

TEST_CASE("decay far to the left") {
    const BasisSet basis(4, Domain{});
    const double v = basis.domain().v_reset - 80.0;
    for (int k = 0; k < basis.dim(); ++k) CHECK(std::abs(basis.value(k, v)) < 1e-8);
}

TEST_CASE("derivatives match central differences at random interior points") {
    const BasisSet basis(8, Domain{1.0, 2.0, 1.0});
    const double vr = basis.domain().v_reset;
    const double vf = basis.domain().v_fire;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> left(vr - 20.0, vr - 1e-4);
    std::uniform_real_distribution<double> right(vr + 1e-4, vf - 1e-4);
    for (int sample = 0; sample < 100; ++sample) {
        const double v = sample % 2 == 0 ? left(rng) : right(rng);
        for (int k = 0; k < basis.dim(); ++k) {
            const double fd = central_difference([&](double s) { return basis.value(k, s); }, v);
            CHECK(std::abs(basis.derivative(k, v) - fd) < 1e-6);
        }
    }
}
