#pragma once

#include "tamegeo/geometry.hpp"

namespace tamegeo {

// Point on the unit sphere in R^{n+1}; | ||x|| - 1 | <= 1e-12.
struct SpherePoint {
  Point coords;
};

SpherePoint make_sphere_point(Point coords);

// North pole (0, ..., 0, 1) of the unit sphere in R^{n+1}.
Point north_pole(int n);

// R^n is embedded as the hyperplane x_{n+1} = -1 tangent to the south pole.
// stereo_forward maps a sphere point x != pole to
//   ( -2 x_1 / (x_{n+1} - 1), ..., -2 x_n / (x_{n+1} - 1) ),
// stereo_inverse is its inverse
//   y |-> ( 4 y / (||y||^2 + 4), (||y||^2 - 4) / (||y||^2 + 4) ).
Point stereo_forward(const SpherePoint& x);
SpherePoint stereo_inverse(const Point& y);

// Image of a cloud on the sphere with the pole adjoined. `dim` is the
// ambient dimension n of the original cloud; sphere points live in R^{n+1}.
struct CompactifiedSet {
  int dim = 0;
  std::vector<Point> sphere_points;  // includes the pole after compactify
  bool includes_pole = false;
};

CompactifiedSet compactify(const PointCloud& a);

// Hausdorff distance between sampled sets: max over both one-sided sup-min
// distances. Both empty -> 0; exactly one empty -> +inf.
double hausdorff(const PointCloud& a, const PointCloud& b);

// Hausdorff distance on the sphere in the chordal metric, extended so that a
// single empty side yields diam + 1 = 3 instead of +inf. After compactify
// the pole is always present, so the sentinel is unreachable through
// kuratowski_dist; it exists for direct use on raw sphere samples.
double hausdorff_sphere_extended(const CompactifiedSet& s,
                                 const CompactifiedSet& t);

// dist_K(A, B): Hausdorff distance between the compactifications. A metric
// on sampled sets that stays finite when one side is empty or escapes to
// infinity: kuratowski_dist({nu}, {}) = 4 / sqrt(nu^2 + 4) -> 0.
double kuratowski_dist(const PointCloud& a, const PointCloud& b);

}  // namespace tamegeo
