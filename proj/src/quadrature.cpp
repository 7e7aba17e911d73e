#include "llsgm/quadrature.hpp"

#include "llsgm/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace llsgm {

namespace {

// Roots and weights are generated in extended precision and rounded once, so the
// rules come out accurate to a few ulps even for the tiny leading Laguerre nodes.
using real = long double;

constexpr int max_newton_iterations = 100;
constexpr real root_step_tolerance = 1e-14L;

struct LegendrePair {
    real p;       // P_n(x)
    real p_prev;  // P_{n-1}(x)
};

LegendrePair legendre_pair(int n, real x) {
    if (n == 0) return {1.0L, 0.0L};
    real p_prev = 1.0L;
    real p = x;
    for (int k = 1; k < n; ++k) {
        const real next = ((2.0L * k + 1.0L) * x * p - k * p_prev) / (k + 1.0L);
        p_prev = p;
        p = next;
    }
    return {p, p_prev};
}

// Weighted Laguerre functions e^{-x/2} L_n(x) and e^{-x/2} L_{n-1}(x).
struct LaguerrePair {
    real l;
    real l_prev;
};

LaguerrePair weighted_laguerre_pair(int n, real x) {
    real l_prev = 0.0L;
    real l = std::exp(-0.5L * x);
    for (int k = 0; k < n; ++k) {
        const real next = ((2.0L * k + 1.0L - x) * l - k * l_prev) / (k + 1.0L);
        l_prev = l;
        l = next;
    }
    return {l, l_prev};
}

void require_order(int n, int upper, const char* who) {
    if (n < 1 || n > upper) {
        fail(ErrorCategory::invalid_argument,
             std::string(who) + ": order must lie in [1, " + std::to_string(upper) + "], got " +
                 std::to_string(n));
    }
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
    require_order(n, 4096, "gauss_legendre");
    QuadratureRule rule;
    rule.kind = RuleKind::finite_legendre;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Roots come out descending from this guess; mirrored below.
        real x = std::cos(std::numbers::pi_v<real> * (i + 0.75L) / (n + 0.5L));
        bool converged = false;
        for (int it = 0; it < max_newton_iterations; ++it) {
            const auto [p, p_prev] = legendre_pair(n, x);
            const real dp = n * (x * p - p_prev) / (x * x - 1.0L);
            const real step = p / dp;
            x -= step;
            if (std::abs(step) <= root_step_tolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            fail(ErrorCategory::convergence_failure,
                 "gauss_legendre: Newton iteration did not converge for n = " + std::to_string(n));
        }
        const auto [p, p_prev] = legendre_pair(n, x);
        const real dp = n * (x * p - p_prev) / (x * x - 1.0L);
        const double w = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_laguerre(int n) {
    require_order(n, max_laguerre_order, "gauss_laguerre");
    QuadratureRule rule;
    rule.kind = RuleKind::semi_infinite_laguerre;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    std::vector<real> roots(n, 0.0L);
    real x = 0.0L;
    for (int i = 0; i < n; ++i) {
        // Asymptotic starting values (ascending), each root seeded from its predecessors.
        if (i == 0) {
            x = 3.0L / (1.0L + 2.4L * n);
        } else if (i == 1) {
            x += 15.0L / (1.0L + 2.5L * n);
        } else {
            const real ai = i - 1;
            x += (1.0L + 2.55L * ai) / (1.9L * ai) * (x - roots[i - 2]);
        }
        bool converged = false;
        for (int it = 0; it < max_newton_iterations; ++it) {
            // L_n / L_n' with x L_n' = n (L_n - L_{n-1}); the e^{-x/2} factors cancel.
            const auto [l, l_prev] = weighted_laguerre_pair(n, x);
            const real step = x * l / (n * (l - l_prev));
            x -= step;
            // relative test: the smallest roots sit near 1/n
            if (std::abs(step) <= root_step_tolerance * x) {
                converged = true;
                break;
            }
        }
        if (!converged || !(x > 0.0L) || (i > 0 && x <= roots[i - 1])) {
            fail(ErrorCategory::convergence_failure,
                 "gauss_laguerre: Newton iteration failed for n = " + std::to_string(n));
        }
        roots[i] = x;
        const real next = weighted_laguerre_pair(n + 1, x).l;
        rule.nodes[i] = static_cast<double>(x);
        rule.weights[i] = static_cast<double>(x * std::exp(-x) / ((n + 1.0L) * (n + 1.0L) * next * next));
    }
    return rule;
}

QuadratureRule map_affine(const QuadratureRule& rule, double a, double b) {
    if (rule.kind != RuleKind::finite_legendre) {
        fail(ErrorCategory::invalid_argument, "map_affine: only finite-legendre rules can be mapped");
    }
    if (!(a < b)) {
        fail(ErrorCategory::invalid_argument, "map_affine: invalid interval, need a < b");
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    QuadratureRule mapped = rule;
    for (std::size_t i = 0; i < rule.order(); ++i) {
        mapped.nodes[i] = half * rule.nodes[i] + mid;
        mapped.weights[i] = half * rule.weights[i];
    }
    return mapped;
}

}  // namespace llsgm
