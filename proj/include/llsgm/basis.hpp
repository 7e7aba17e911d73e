#pragma once

#include <vector>

namespace llsgm {

/// Voltage geometry shared by every module: reset potential, firing threshold, and the
/// decay rate of the interface function's left branch.
struct Domain {
    double v_reset = 1.0;
    double v_fire = 2.0;
    double beta = 1.0;

    double width() const noexcept { return v_fire - v_reset; }
    void validate() const;
};

// Orthogonal families. The Laguerre functions carry the e^{-x/2} factor and are
// evaluated by the recurrence on the weighted values, so large x never overflows.

double laguerre_fn(int n, double x);
double laguerre_fn_deriv(int n, double x);
double legendre(int n, double x);
double legendre_deriv(int n, double x);

/// Plain Laguerre polynomials L_0..L_n at x and their derivatives.
void laguerre_poly_table(int n, double x, std::vector<double>& values, std::vector<double>& derivs);
/// Legendre polynomials P_0..P_n at x and their derivatives.
void legendre_table(int n, double x, std::vector<double>& values, std::vector<double>& derivs);

enum class BasisFamily { interface, laguerre, legendre };

/// Boundary data of one basis function.
struct Trace {
    double at_reset = 0.0;
    double at_fire = 0.0;
    double slope_at_fire = 0.0;
    double slope_below_reset = 0.0;  // one-sided derivative at V_R^-
    double slope_above_reset = 0.0;  // one-sided derivative at V_R^+
};

/// On (-inf, V_R) every function with left support has the form
/// psi(V_R - x) = e^{-rate x} poly(x), with d psi/dv = e^{-rate x} slope_poly(x).
struct LeftForm {
    double poly = 0.0;
    double slope_poly = 0.0;
};

/// The 2M+1 trial functions, ordered
///   index 0            g1 (interface function),
///   index 1 .. M       h^L_0 .. h^L_{M-1} (Laguerre side, zero on (V_R, V_F]),
///   index M+1 .. 2M    h^R_0 .. h^R_{M-1} (Legendre side, zero on (-inf, V_R]).
/// Every function vanishes at V_F and as v -> -inf; only g1 is nonzero at V_R.
class BasisSet {
public:
    BasisSet(int expansion, Domain domain);

    int expansion() const noexcept { return expansion_; }
    int dim() const noexcept { return 2 * expansion_ + 1; }
    const Domain& domain() const noexcept { return domain_; }

    BasisFamily family(int k) const;
    /// Degree index within the family (0 for g1).
    int local_index(int k) const;

    double value(int k, double v) const;
    /// Derivative in v. Undefined at V_R itself; use trace() for the one-sided values.
    double derivative(int k, double v) const;

    const Trace& trace(int k) const;
    const std::vector<Trace>& traces() const noexcept { return traces_; }
    /// d psi_k / dv at V_F for all k.
    std::vector<double> fire_slopes() const;

    bool has_left_support(int k) const;
    bool has_right_support(int k) const;
    double left_decay_rate(int k) const;

    /// Left-side factors of every function at x = V_R - v > 0 (zeros where no support).
    void left_forms(double x, std::vector<LeftForm>& out) const;
    /// Values and v-derivatives of every function at V_R < v <= V_F.
    void right_values(double v, std::vector<double>& values, std::vector<double>& slopes) const;

    /// Maps V_R < v <= V_F to the Legendre reference variable in (-1, 1].
    double reference_coordinate(double v) const noexcept;

private:
    void check_index(int k) const;

    int expansion_;
    Domain domain_;
    std::vector<Trace> traces_;
};

}  // namespace llsgm
