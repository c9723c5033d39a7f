#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tamegeo/expr.hpp"
#include "tamegeo/geometry.hpp"

namespace tamegeo {

// Set described by equalities e(x) = 0 (held to equality_tolerance),
// non-negativity conditions g(x) >= 0, and a bounding box.
struct ImplicitSetSpec {
  int dim = 0;
  std::vector<ExprFn> equalities;
  std::vector<ExprFn> inequalities;
  std::vector<std::pair<double, double>> box;  // one [lo, hi] per axis
  double equality_tolerance = 1e-6;
};

void validate_spec(const ImplicitSetSpec& spec);

// Grid scan over the box (with deterministic sub-cell jitter driven by
// `seed`). Inequality-feasible grid points whose equality residuals are
// linearly attainable within two cell diameters are pulled onto the
// constraints by up to 20 damped projection sweeps along constraint
// gradients; a point is kept when it ends within equality_tolerance of
// every equality without moving more than two cell diameters.
//
// resolution of the result is grid_step * sqrt(dim); window_radius covers
// the box. Deterministic for fixed (spec, grid_step, seed).
PointCloud sample(const ImplicitSetSpec& spec, double grid_step,
                  std::uint64_t seed);

}  // namespace tamegeo
