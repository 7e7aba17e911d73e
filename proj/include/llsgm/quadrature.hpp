#pragma once

#include <cstddef>
#include <vector>

namespace llsgm {

enum class RuleKind { finite_legendre, semi_infinite_laguerre };

/// Gauss rule: sum_i weights[i] * f(nodes[i]).
///
/// A finite-legendre rule integrates f over its interval; a semi-infinite-laguerre
/// rule integrates f(x) e^{-x} over [0, inf), the exponential weight being implied.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    RuleKind kind = RuleKind::finite_legendre;

    std::size_t order() const noexcept { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Largest order accepted by gauss_laguerre; beyond it the smallest weights underflow.
inline constexpr int max_laguerre_order = 160;

/// n-point Gauss-Legendre rule on [-1, 1]. Exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Laguerre rule for the weight e^{-x} on [0, inf).
QuadratureRule gauss_laguerre(int n);

/// Affine image of a finite-legendre rule on [a, b].
QuadratureRule map_affine(const QuadratureRule& rule, double a, double b);

}  // namespace llsgm
