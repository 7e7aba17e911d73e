#include "llsgm/basis.hpp"

#include "llsgm/error.hpp"

#include <cmath>
#include <string>

namespace llsgm {

void Domain::validate() const {
    if (!(v_reset < v_fire)) fail(ErrorCategory::invalid_argument, "domain: need V_R < V_F");
    if (!(beta > 0.0)) fail(ErrorCategory::invalid_argument, "domain: beta must be positive");
}

double laguerre_fn(int n, double x) {
    double prev = 0.0;
    double cur = std::exp(-0.5 * x);
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double laguerre_fn_deriv(int n, double x) {
    // d/dx [e^{-x/2} L_n] = -sum_{m<n} e^{-x/2} L_m - e^{-x/2} L_n / 2
    double prev = 0.0;
    double cur = std::exp(-0.5 * x);
    double partial = 0.0;
    for (int k = 0; k < n; ++k) {
        partial += cur;
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return -partial - 0.5 * cur;
}

double legendre(int n, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double legendre_deriv(int n, double x) {
    // P'_{k+1} = P'_{k-1} + (2k+1) P_k, valid on the closed interval.
    if (n == 0) return 0.0;
    double p_prev = 1.0, p_cur = x;
    double d_prev = 0.0, d_cur = 1.0;
    for (int k = 1; k < n; ++k) {
        const double p_next = ((2.0 * k + 1.0) * x * p_cur - k * p_prev) / (k + 1.0);
        const double d_next = d_prev + (2.0 * k + 1.0) * p_cur;
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    return d_cur;
}

void laguerre_poly_table(int n, double x, std::vector<double>& values, std::vector<double>& derivs) {
    values.assign(n + 1, 0.0);
    derivs.assign(n + 1, 0.0);
    values[0] = 1.0;
    if (n >= 1) {
        values[1] = 1.0 - x;
        derivs[1] = -1.0;
    }
    for (int k = 1; k < n; ++k) {
        values[k + 1] = ((2.0 * k + 1.0 - x) * values[k] - k * values[k - 1]) / (k + 1.0);
        derivs[k + 1] = derivs[k] - values[k];
    }
}

void legendre_table(int n, double x, std::vector<double>& values, std::vector<double>& derivs) {
    values.assign(n + 1, 0.0);
    derivs.assign(n + 1, 0.0);
    values[0] = 1.0;
    if (n >= 1) {
        values[1] = x;
        derivs[1] = 1.0;
    }
    for (int k = 1; k < n; ++k) {
        values[k + 1] = ((2.0 * k + 1.0) * x * values[k] - k * values[k - 1]) / (k + 1.0);
        derivs[k + 1] = derivs[k - 1] + (2.0 * k + 1.0) * values[k];
    }
}

BasisSet::BasisSet(int expansion, Domain domain) : expansion_(expansion), domain_(domain) {
    if (expansion < 1) {
        fail(ErrorCategory::invalid_argument, "basis: expansion number must be >= 1");
    }
    domain_.validate();

    const double width = domain_.width();
    const double ramp_slope = 1.0 / (domain_.v_reset - domain_.v_fire);
    traces_.resize(dim());

    traces_[0] = Trace{1.0, 0.0, ramp_slope, 0.5 * domain_.beta, ramp_slope};

    std::vector<double> lag, dlag;
    laguerre_poly_table(expansion_, 0.0, lag, dlag);
    std::vector<double> top, dtop, bottom, dbottom;
    legendre_table(expansion_ + 1, 1.0, top, dtop);
    legendre_table(expansion_ + 1, -1.0, bottom, dbottom);

    for (int j = 0; j < expansion_; ++j) {
        Trace& left = traces_[1 + j];
        // slope_poly(0) = q(0)/2 - q'(0) with q(0) = 0
        left.slope_below_reset = -(dlag[j] - dlag[j + 1]);

        Trace& right = traces_[1 + expansion_ + j];
        right.slope_at_fire = 2.0 / width * (dtop[j] - dtop[j + 2]);
        right.slope_above_reset = 2.0 / width * (dbottom[j] - dbottom[j + 2]);
    }
}

void BasisSet::check_index(int k) const {
    if (k < 0 || k >= dim()) {
        fail(ErrorCategory::invalid_argument,
             "basis: index " + std::to_string(k) + " out of range [0, " + std::to_string(dim()) + ")");
    }
}

BasisFamily BasisSet::family(int k) const {
    check_index(k);
    if (k == 0) return BasisFamily::interface;
    return k <= expansion_ ? BasisFamily::laguerre : BasisFamily::legendre;
}

int BasisSet::local_index(int k) const {
    switch (family(k)) {
        case BasisFamily::interface: return 0;
        case BasisFamily::laguerre: return k - 1;
        case BasisFamily::legendre: return k - 1 - expansion_;
    }
    return 0;
}

double BasisSet::reference_coordinate(double v) const noexcept {
    const double mid = 0.5 * (domain_.v_fire + domain_.v_reset);
    return (v - mid) / (0.5 * domain_.width());
}

double BasisSet::value(int k, double v) const {
    check_index(k);
    if (v > domain_.v_fire) fail(ErrorCategory::invalid_argument, "basis: v exceeds V_F");
    const int j = local_index(k);
    const BasisFamily fam = family(k);
    if (v == domain_.v_reset) return fam == BasisFamily::interface ? 1.0 : 0.0;
    if (v < domain_.v_reset) {
        const double x = domain_.v_reset - v;
        switch (fam) {
            case BasisFamily::interface: return std::exp(-0.5 * domain_.beta * x);
            case BasisFamily::laguerre: return laguerre_fn(j, x) - laguerre_fn(j + 1, x);
            case BasisFamily::legendre: return 0.0;
        }
    }
    switch (fam) {
        case BasisFamily::interface: return (v - domain_.v_fire) / (domain_.v_reset - domain_.v_fire);
        case BasisFamily::laguerre: return 0.0;
        case BasisFamily::legendre: {
            const double xi = reference_coordinate(v);
            return legendre(j, xi) - legendre(j + 2, xi);
        }
    }
    return 0.0;
}

double BasisSet::derivative(int k, double v) const {
    check_index(k);
    if (v > domain_.v_fire) fail(ErrorCategory::invalid_argument, "basis: v exceeds V_F");
    if (v == domain_.v_reset) {
        fail(ErrorCategory::invalid_argument, "basis: derivative at V_R is one-sided, use trace()");
    }
    const int j = local_index(k);
    const BasisFamily fam = family(k);
    if (v < domain_.v_reset) {
        const double x = domain_.v_reset - v;
        switch (fam) {
            case BasisFamily::interface:
                return 0.5 * domain_.beta * std::exp(-0.5 * domain_.beta * x);
            case BasisFamily::laguerre:
                return -(laguerre_fn_deriv(j, x) - laguerre_fn_deriv(j + 1, x));
            case BasisFamily::legendre: return 0.0;
        }
    }
    switch (fam) {
        case BasisFamily::interface: return 1.0 / (domain_.v_reset - domain_.v_fire);
        case BasisFamily::laguerre: return 0.0;
        case BasisFamily::legendre: {
            const double xi = reference_coordinate(v);
            return 2.0 / domain_.width() * (legendre_deriv(j, xi) - legendre_deriv(j + 2, xi));
        }
    }
    return 0.0;
}

const Trace& BasisSet::trace(int k) const {
    check_index(k);
    return traces_[k];
}

std::vector<double> BasisSet::fire_slopes() const {
    std::vector<double> slopes(dim());
    for (int k = 0; k < dim(); ++k) slopes[k] = traces_[k].slope_at_fire;
    return slopes;
}

bool BasisSet::has_left_support(int k) const { return family(k) != BasisFamily::legendre; }

bool BasisSet::has_right_support(int k) const { return family(k) != BasisFamily::laguerre; }

double BasisSet::left_decay_rate(int k) const {
    switch (family(k)) {
        case BasisFamily::interface: return 0.5 * domain_.beta;
        case BasisFamily::laguerre: return 0.5;
        case BasisFamily::legendre: return 0.0;
    }
    return 0.0;
}

void BasisSet::left_forms(double x, std::vector<LeftForm>& out) const {
    out.assign(dim(), LeftForm{});
    out[0] = LeftForm{1.0, 0.5 * domain_.beta};
    std::vector<double> lag, dlag;
    laguerre_poly_table(expansion_, x, lag, dlag);
    for (int j = 0; j < expansion_; ++j) {
        const double q = lag[j] - lag[j + 1];
        const double dq = dlag[j] - dlag[j + 1];
        out[1 + j] = LeftForm{q, 0.5 * q - dq};
    }
}

void BasisSet::right_values(double v, std::vector<double>& values, std::vector<double>& slopes) const {
    values.assign(dim(), 0.0);
    slopes.assign(dim(), 0.0);
    const double ramp_slope = 1.0 / (domain_.v_reset - domain_.v_fire);
    values[0] = (v - domain_.v_fire) * ramp_slope;
    slopes[0] = ramp_slope;
    const double xi = reference_coordinate(v);
    const double scale = 2.0 / domain_.width();
    std::vector<double> p, dp;
    legendre_table(expansion_ + 1, xi, p, dp);
    for (int j = 0; j < expansion_; ++j) {
        values[1 + expansion_ + j] = p[j] - p[j + 2];
        slopes[1 + expansion_ + j] = scale * (dp[j] - dp[j + 2]);
    }
}

}  // namespace llsgm
