#include "llsgm/assembly.hpp"

#include "llsgm/error.hpp"
#include "llsgm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

namespace llsgm {

namespace {

constexpr int left_panel_extent = 64;

// Quadrature for int_0^inf e^{-rate x} f(x) dx: nodes u/rate, weights w/rate.
QuadratureRule scaled_laguerre(const QuadratureRule& base, double rate) {
    QuadratureRule scaled = base;
    for (std::size_t i = 0; i < base.order(); ++i) {
        scaled.nodes[i] = base.nodes[i] / rate;
        scaled.weights[i] = base.weights[i] / rate;
    }
    return scaled;
}

void assemble_left(const BasisSet& basis, const QuadratureRule& laguerre, GalerkinMatrices& m) {
    const int n = basis.dim();
    const double v_reset = basis.domain().v_reset;

    // Group left-supported pairs by the decay rate of their product.
    std::map<double, std::vector<std::pair<int, int>>> pairs_by_rate;
    for (int j = 0; j < n; ++j) {
        if (!basis.has_left_support(j)) continue;
        for (int k = 0; k < n; ++k) {
            if (!basis.has_left_support(k)) continue;
            pairs_by_rate[basis.left_decay_rate(j) + basis.left_decay_rate(k)].emplace_back(j, k);
        }
    }

    std::vector<LeftForm> forms;
    for (const auto& [rate, pairs] : pairs_by_rate) {
        const QuadratureRule rule = scaled_laguerre(laguerre, rate);
        for (std::size_t i = 0; i < rule.order(); ++i) {
            const double x = rule.nodes[i];
            const double w = rule.weights[i];
            const double v = v_reset - x;
            basis.left_forms(x, forms);
            for (const auto& [j, k] : pairs) {
                m.H(j, k) += w * forms[k].poly * forms[j].poly;
                m.A(j, k) += w * v * forms[k].poly * forms[j].slope_poly;
                m.B(j, k) += w * forms[k].poly * forms[j].slope_poly;
                m.C(j, k) += w * forms[k].slope_poly * forms[j].slope_poly;
            }
        }
    }

    std::map<double, std::vector<int>> mass_by_rate;
    for (int k = 0; k < n; ++k) {
        if (basis.has_left_support(k)) mass_by_rate[basis.left_decay_rate(k)].push_back(k);
    }
    for (const auto& [rate, members] : mass_by_rate) {
        const QuadratureRule rule = scaled_laguerre(laguerre, rate);
        for (std::size_t i = 0; i < rule.order(); ++i) {
            basis.left_forms(rule.nodes[i], forms);
            for (int k : members) m.mass(k) += rule.weights[i] * forms[k].poly;
        }
    }
}

void assemble_right(const BasisSet& basis, const QuadratureRule& legendre, GalerkinMatrices& m) {
    const int n = basis.dim();
    const QuadratureRule rule =
        map_affine(legendre, basis.domain().v_reset, basis.domain().v_fire);
    std::vector<int> support;
    for (int k = 0; k < n; ++k) {
        if (basis.has_right_support(k)) support.push_back(k);
    }
    std::vector<double> values, slopes;
    for (std::size_t i = 0; i < rule.order(); ++i) {
        const double v = rule.nodes[i];
        const double w = rule.weights[i];
        basis.right_values(v, values, slopes);
        for (int j : support) {
            for (int k : support) {
                m.H(j, k) += w * values[k] * values[j];
                m.A(j, k) += w * v * values[k] * slopes[j];
                m.B(j, k) += w * values[k] * slopes[j];
                m.C(j, k) += w * slopes[k] * slopes[j];
            }
        }
        for (int k : support) m.mass(k) += w * values[k];
    }
}

}  // namespace

GalerkinMatrices assemble(const BasisSet& basis, int quadrature_order) {
    if (quadrature_order < minimum_assembly_order(basis.expansion())) {
        fail(ErrorCategory::invalid_argument,
             "assemble: quadrature order " + std::to_string(quadrature_order) +
                 " below the exactness minimum 2M+6 = " +
                 std::to_string(minimum_assembly_order(basis.expansion())));
    }
    const int n = basis.dim();
    GalerkinMatrices m;
    for (Eigen::MatrixXd* mat : {&m.H, &m.A, &m.B, &m.C, &m.D, &m.G}) mat->setZero(n, n);
    m.F.setZero(n);
    m.mass.setZero(n);
    m.fire_slope.setZero(n);

    assemble_left(basis, gauss_laguerre(quadrature_order), m);
    assemble_right(basis, gauss_legendre(quadrature_order), m);

    const auto& traces = basis.traces();
    for (int k = 0; k < n; ++k) m.fire_slope(k) = traces[k].slope_at_fire;
    for (int j = 0; j < n; ++j) {
        m.F(j) = traces[j].at_reset;
        for (int k = 0; k < n; ++k) {
            m.D(j, k) = traces[k].slope_at_fire * (traces[j].at_reset - traces[j].at_fire);
            m.G(j, k) = traces[k].slope_at_fire * traces[j].at_fire;
        }
    }
    return m;
}

GalerkinMatrices assemble(const BasisSet& basis) {
    return assemble(basis, default_assembly_order(basis.expansion()));
}

double GaussianIC::operator()(double v) const {
    const double d = v - v0;
    return std::exp(-d * d / (2.0 * sigma0_sq)) /
           (std::sqrt(2.0 * std::numbers::pi * sigma0_sq) * normalization);
}

GaussianIC normalize_gaussian(double v0, double sigma0_sq, double v_fire) {
    if (!(sigma0_sq > 0.0)) fail(ErrorCategory::invalid_argument, "gaussian: variance must be positive");
    const double z = (v_fire - v0) / std::sqrt(sigma0_sq);
    return GaussianIC{v0, sigma0_sq, 0.5 * std::erfc(-z / std::numbers::sqrt2)};
}

Eigen::VectorXd project_initial(const BasisSet& basis, const GalerkinMatrices& matrices,
                                const Density& p0, int quadrature_order) {
    const int n = basis.dim();
    const double v_reset = basis.domain().v_reset;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

    // Left: unit panels of mapped Gauss-Legendre on [0, left_panel_extent], then a shifted
    // Gauss-Laguerre rule for the tail, int_X^inf f = sum w_i e^{u_i} f(X + u_i).
    std::vector<LeftForm> forms;
    auto accumulate_left = [&](double x, double weight, double log_factor) {
        const double p = p0(v_reset - x);
        if (p == 0.0) return;
        basis.left_forms(x, forms);
        for (int k = 0; k < n; ++k) {
            if (!basis.has_left_support(k)) continue;
            // all exponentials applied in one exponent to stay in range
            const double factor = std::exp(log_factor - basis.left_decay_rate(k) * x);
            rhs(k) += weight * factor * p * forms[k].poly;
        }
    };
    const QuadratureRule reference = gauss_legendre(quadrature_order);
    for (int panel = 0; panel < left_panel_extent; ++panel) {
        const QuadratureRule rule = map_affine(reference, panel, panel + 1.0);
        for (std::size_t i = 0; i < rule.order(); ++i) accumulate_left(rule.nodes[i], rule.weights[i], 0.0);
    }
    const QuadratureRule tail = gauss_laguerre(std::min(quadrature_order, max_laguerre_order));
    for (std::size_t i = 0; i < tail.order(); ++i) {
        accumulate_left(left_panel_extent + tail.nodes[i], tail.weights[i], tail.nodes[i]);
    }

    const QuadratureRule right =
        map_affine(gauss_legendre(quadrature_order), v_reset, basis.domain().v_fire);
    std::vector<double> values, slopes;
    for (std::size_t i = 0; i < right.order(); ++i) {
        basis.right_values(right.nodes[i], values, slopes);
        const double p = p0(right.nodes[i]);
        for (int k = 0; k < n; ++k) {
            if (basis.has_right_support(k)) rhs(k) += right.weights[i] * p * values[k];
        }
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(matrices.H);
    if (llt.info() != Eigen::Success) {
        fail(ErrorCategory::ill_conditioned_basis, "project_initial: mass matrix H is not positive definite");
    }
    const double rcond = llt.rcond();
    if (!(rcond > 1e3 * std::numeric_limits<double>::epsilon())) {
        fail(ErrorCategory::ill_conditioned_basis,
             "project_initial: mass matrix H is numerically singular (rcond " + std::to_string(rcond) + ")");
    }
    Eigen::VectorXd u = llt.solve(rhs);
    u += llt.solve(rhs - matrices.H * u);
    return u;
}

Eigen::VectorXd project_initial(const BasisSet& basis, const GalerkinMatrices& matrices,
                                const GaussianIC& p0) {
    return project_initial(basis, matrices, Density(p0), default_projection_order(basis.expansion()));
}

std::vector<double> reconstruct(const BasisSet& basis, const Eigen::VectorXd& coefficients,
                                std::span<const double> grid) {
    const int n = basis.dim();
    const double v_reset = basis.domain().v_reset;
    std::vector<double> out(grid.size(), 0.0);
    std::vector<double> values, slopes;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid[i];
        double sum = 0.0;
        if (v < v_reset) {
            const double x = v_reset - v;
            sum += coefficients(0) * basis.value(0, v);
            // weighted Laguerre recurrence, shared across the left family
            double prev = 0.0;
            double cur = std::exp(-0.5 * x);
            for (int j = 0; j < basis.expansion(); ++j) {
                const double next = ((2.0 * j + 1.0 - x) * cur - j * prev) / (j + 1.0);
                sum += coefficients(1 + j) * (cur - next);
                prev = cur;
                cur = next;
            }
        } else if (v == v_reset) {
            sum = coefficients(0);
        } else {
            if (v > basis.domain().v_fire) {
                fail(ErrorCategory::invalid_argument, "reconstruct: grid point exceeds V_F");
            }
            basis.right_values(v, values, slopes);
            for (int k = 0; k < n; ++k) {
                if (basis.has_right_support(k)) sum += coefficients(k) * values[k];
            }
        }
        out[i] = sum;
    }
    return out;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix) {
    char buf[40];
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", matrix(i, j));
            if (j > 0) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace llsgm
