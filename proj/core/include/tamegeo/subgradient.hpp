#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tamegeo/geometry.hpp"
#include "tamegeo/piecewise.hpp"

namespace tamegeo {

struct SubgradientConfig {
  // Strictly decreasing ball radii for gradient sampling; limits are
  // extracted from the tail half.
  std::vector<double> radius_schedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  int samples_per_radius = 32;   // >= 2 * arity + 2
  double seam_margin = 0.1;      // keep samples >= seam_margin * r from seams
  double hull_tol = 1e-9;        // vertex minimality / criticality tolerance
  std::uint64_t seed = 0;
};

void validate_config(const SubgradientConfig& cfg, int arity);

// Candidate limit gradients of f at x: gradients sampled in shrinking balls
// (seam-avoiding), clustered over the tail of the radius schedule. The
// cluster tolerance adapts to the gradient's observed modulus of continuity
// (largest within-piece sample gap over the tail radii). Each cluster is
// represented by the centroid of its members at the finest radius where it
// appears.
std::vector<Point> gradient_limits(const PiecewiseFn& f, const Point& x,
                                   const SubgradientConfig& cfg);

// Convex polytope as a minimal vertex list: no vertex lies in the hull of
// the others (tolerance hull_tol). Flat polytopes stay vertex lists; no
// facet structure is built.
struct Polytope {
  int dim = 0;
  std::vector<Point> vertices;
};

// Clarke subgradient: convex hull of the limit gradients, reduced to
// minimal vertices. Singleton at smooth points.
Polytope clarke_subgradient(const PiecewiseFn& f, const Point& x,
                            const SubgradientConfig& cfg);

// Minimum-norm point of conv(vertices): iterative corral scheme over vertex
// subsets of size <= dim + 1, terminating when the duality gap
// ||x||^2 - min_i <x, v_i> drops to tol. Returns the point and its norm.
// Throws NumericError (reporting the gap) if the iteration cap is hit.
std::pair<Point, double> min_norm_point(const Polytope& p, double tol = 1e-12);

// Grid points of the window where h(x) = ||min_norm_point(clarke(x))|| is
// <= 3 * cfg.hull_tol: the sampled Clarke-critical set. For meaningful
// results pick cfg.hull_tol at the gradient sampling scale (e.g. 1e-6 with
// the default radius schedule), not at hull-reduction scale.
PointCloud critical_set_sample(const PiecewiseFn& f,
                               const std::vector<std::pair<double, double>>& window,
                               double grid_step, const SubgradientConfig& cfg);

}  // namespace tamegeo
