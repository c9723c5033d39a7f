#pragma once

#include <vector>

#include "tamegeo/exponents_types.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/multifunction.hpp"

namespace tamegeo {

// (E - a) / t with metadata rescaled accordingly.
PointCloud dilate(const PointCloud& e, const Point& a, double t);

// Cone with vertex 0 presented by unit directions. An empty direction list
// is legal: base_point_in_closure distinguishes the cone {0} (base point in
// the set but isolated at the sampled scales) from the empty cone (base
// point outside the closure of the set).
struct ConePresentation {
  int dim = 0;
  std::vector<Point> directions;  // unit vectors, pairwise > cluster_tol apart
  double cluster_tol = 0.0;
  bool base_point_in_closure = false;
};

struct TangentConeDiagnostics {
  std::vector<double> t_values;
  std::vector<int> annulus_counts;   // harvested directions per step
  std::vector<double> drift;         // Hausdorff gap between consecutive
                                     // direction sets; -1 where undefined
  bool resolution_limited = false;   // some tail step had an empty annulus
};

struct TangentConeResult {
  ConePresentation cone;
  TangentConeDiagnostics diag;
};

// Limit directions of E at a: for t_k = t0 * gamma^k the dilations
// (E - a)/t_k are cut to the annulus 0.5 <= ||v|| <= 2 and reduced to unit
// directions; directions are clustered over the tail half of the schedule
// and kept when present (within cluster_tol) in the finest step and in at
// least half of the tail steps. Each kept direction is the normalized
// centroid of its cluster's members at the finest step.
//
// cluster_tol == 0 selects the default min(0.05, 3 * resolution / t_last).
TangentConeResult tangent_cone(const PointCloud& e, const Point& a,
                               double t0 = 0.5, double gamma = 0.7,
                               int steps = 16, double cluster_tol = 0.0);

// Nearest-point multifunction m(x) = argmin_{y in M} ||x - y|| at tolerance
// M.resolution, returned as a sampled graph over the given x list.
MultifunctionGraph nearest_point_multifunction(const PointCloud& m,
                                               const std::vector<Point>& xs);

// Fits dist_H(E ∩ B(0,r), C ∩ B(0,r)) ~ c r^alpha over the radius schedule
// (log-log least squares), where C is the sampled tangent cone of E at 0.
// Rejects (NumericError) when every distance sits below 3 * resolution:
// the set is a cone at sampling precision and no exponent is identifiable.
ExponentFit conic_exponent(const PointCloud& e,
                           const std::vector<double>& r_schedule);

}  // namespace tamegeo
