#pragma once

#include "llsgm/basis.hpp"

#include <span>
#include <vector>

namespace llsgm {

/// n equally spaced points on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, int n);

/// The fixed comparison grid: 2001 points on [V_R - 8, V_F].
std::vector<double> error_grid(const Domain& domain);

double trapezoid(std::span<const double> grid, std::span<const double> f);

/// Trapezoid L2 norm of a - b over the grid.
double l2_distance(std::span<const double> grid, std::span<const double> a, std::span<const double> b);
double linf_distance(std::span<const double> a, std::span<const double> b);

/// Piecewise-linear interpolant of (xs, ys) at each query point; zero outside [xs.front(), xs.back()].
/// xs must be strictly increasing.
std::vector<double> interpolate_linear(std::span<const double> xs, std::span<const double> ys,
                                       std::span<const double> query);

}  // namespace llsgm
