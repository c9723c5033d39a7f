#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tamegeo/geometry.hpp"

namespace tamegeo {

using ScalarFn = std::function<double(std::span<const double>)>;

// Central finite differences with step 1e-6 * max(1, ||x||).
Point fd_gradient(const ScalarFn& f, const Point& x);
Point fd_gradient(const ScalarFn& f, const Point& x, double step);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Ordinary least squares y ~ slope * x + intercept. Needs >= 2 points.
LineFit least_squares_line(const std::vector<std::pair<double, double>>& xy);

// Deterministic hash-based uniform double in [lo, hi), for per-index jitter
// that does not depend on iteration schedule.
double hashed_uniform(std::uint64_t seed, std::uint64_t index, double lo,
                      double hi);

}  // namespace tamegeo
