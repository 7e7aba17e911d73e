#include "llsgm/norms.hpp"

#include "llsgm/error.hpp"

#include <algorithm>
#include <cmath>

namespace llsgm {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* who) {
    if (a != b) fail(ErrorCategory::invalid_argument, std::string(who) + ": size mismatch");
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2 || !(lo < hi)) fail(ErrorCategory::invalid_argument, "uniform_grid: need n >= 2 and lo < hi");
    std::vector<double> grid(n);
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid[i] = lo + i * h;
    grid.back() = hi;
    return grid;
}

std::vector<double> error_grid(const Domain& domain) {
    return uniform_grid(domain.v_reset - 8.0, domain.v_fire, 2001);
}

double trapezoid(std::span<const double> grid, std::span<const double> f) {
    require_same_size(grid.size(), f.size(), "trapezoid");
    double sum = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) sum += 0.5 * (grid[i] - grid[i - 1]) * (f[i] + f[i - 1]);
    return sum;
}

double l2_distance(std::span<const double> grid, std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "l2_distance");
    std::vector<double> sq(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sq[i] = (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(trapezoid(grid, sq));
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "linf_distance");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> interpolate_linear(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> query) {
    require_same_size(xs.size(), ys.size(), "interpolate_linear");
    if (xs.size() < 2) fail(ErrorCategory::invalid_argument, "interpolate_linear: need two nodes");
    std::vector<double> out(query.size(), 0.0);
    for (std::size_t i = 0; i < query.size(); ++i) {
        const double q = query[i];
        if (q < xs.front() || q > xs.back()) continue;
        auto it = std::upper_bound(xs.begin(), xs.end(), q);
        std::size_t hi = static_cast<std::size_t>(it - xs.begin());
        if (hi == xs.size()) hi = xs.size() - 1;
        const std::size_t lo = hi - 1;
        const double w = (q - xs[lo]) / (xs[hi] - xs[lo]);
        out[i] = (1.0 - w) * ys[lo] + w * ys[hi];
    }
    return out;
}

}  // namespace llsgm
