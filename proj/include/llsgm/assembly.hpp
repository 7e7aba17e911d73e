#pragma once

#include "llsgm/basis.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace llsgm {

/// Dense Galerkin operators, row = test function j, column = trial function k:
///   H_jk = int psi_k psi_j          A_jk = int v psi_k psi_j'
///   B_jk = int psi_k psi_j'         C_jk = int psi_k' psi_j'
///   D_jk = psi_k'(V_F) [psi_j(V_R) - psi_j(V_F)]
///   G_jk = psi_k'(V_F) psi_j(V_F)
///   F_j  = psi_j(V_R),  mass_k = int psi_k
/// Integrals run over (-inf, V_R) and (V_R, V_F].
struct GalerkinMatrices {
    Eigen::MatrixXd H, A, B, C, D, G;
    Eigen::VectorXd F;
    Eigen::VectorXd mass;
    /// psi_k'(V_F); the firing-rate functional.
    Eigen::VectorXd fire_slope;

    int dim() const noexcept { return static_cast<int>(H.rows()); }
};

inline int default_assembly_order(int expansion) { return 2 * expansion + 8; }
inline int minimum_assembly_order(int expansion) { return 2 * expansion + 6; }

/// Builds all operators. The left half-line integrals are mapped exactly onto Gauss-Laguerre
/// rules (the integrands are exponential times polynomial), the right interval onto Gauss-Legendre.
GalerkinMatrices assemble(const BasisSet& basis, int quadrature_order);
GalerkinMatrices assemble(const BasisSet& basis);

/// Normalised Gaussian initial density on (-inf, V_F].
struct GaussianIC {
    double v0 = -1.0;
    double sigma0_sq = 0.5;
    double normalization = 1.0;  // M0 = Phi((V_F - v0) / sigma0)

    double operator()(double v) const;
};

GaussianIC normalize_gaussian(double v0, double sigma0_sq, double v_fire);

using Density = std::function<double(double)>;

inline int default_projection_order(int expansion) { return 4 * expansion + 32; }

/// L2 projection onto the trial space: solves H u = r with r_j = int p0 psi_j.
/// The density is not of weight-times-polynomial form, so r uses n_q-point Gauss-Legendre on
/// unit panels of V_R - v in [0, 64] plus a shifted Gauss-Laguerre tail, and n_q points on
/// (V_R, V_F). Throws ill_conditioned_basis when H cannot be factored.
Eigen::VectorXd project_initial(const BasisSet& basis, const GalerkinMatrices& matrices,
                                const Density& p0, int quadrature_order);
Eigen::VectorXd project_initial(const BasisSet& basis, const GalerkinMatrices& matrices,
                                const GaussianIC& p0);

/// p_M(v) = sum_k u_k psi_k(v) at each grid point.
std::vector<double> reconstruct(const BasisSet& basis, const Eigen::VectorXd& coefficients,
                                std::span<const double> grid);

/// Writes a matrix as row-major CSV with 17 significant digits.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

}  // namespace llsgm
