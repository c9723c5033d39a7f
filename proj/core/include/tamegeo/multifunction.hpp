#pragma once

#include <vector>

#include "tamegeo/geometry.hpp"

namespace tamegeo {

// Multifunction F: R^m => R^n represented by a sample of its graph in
// R^{m+n}. Values are slab sections:
//   F(x) ~= { y : some (x', y) in the graph with ||x' - x|| <= slab }.
struct MultifunctionGraph {
  int m = 0;
  int n = 0;
  PointCloud graph;  // dim m + n
  double slab = 0.0;  // >= graph.resolution
};

void validate_graph(const MultifunctionGraph& f);

PointCloud section(const MultifunctionGraph& f, const Point& x);

// True if the section reaches the sampling window boundary, i.e. some value
// has norm > window_radius - slab; the true section may then extend beyond
// the window and results derived from it are suspect.
bool section_truncated(const MultifunctionGraph& f, const PointCloud& sec);

// Projection of the graph to the first m coordinates, deduplicated at
// resolution.
PointCloud domain(const MultifunctionGraph& f);

// Tolerance used by the sampled pre-images: tau = 2 * (slab + resolution).
double preimage_tolerance(const MultifunctionGraph& f);

// Scans the sampled domain and keeps x by comparing F(x) against F(a):
//   strong: Hausdorff(F(x), F(a)) <= tau      (F(x) = F(a))
//   lower:  sup_{y in F(x)} d(y, F(a)) <= tau (F(x) within F(a))
//   upper:  sup_{y in F(a)} d(y, F(x)) <= tau (F(x) contains F(a))
//   weak:   min distance between sections <= tau (they intersect)
//   point:  d(y, F(x)) <= tau                 (y in F(x))
// strong = lower AND upper and weak = union of point pre-images over F(a)
// hold exactly on the sampled outputs.
PointCloud pre_image_strong(const MultifunctionGraph& f, const Point& a);
PointCloud pre_image_lower(const MultifunctionGraph& f, const Point& a);
PointCloud pre_image_upper(const MultifunctionGraph& f, const Point& a);
PointCloud pre_image_weak(const MultifunctionGraph& f, const Point& a);
PointCloud pre_image_point(const MultifunctionGraph& f, const Point& y);

// delta(F, x, y) = d(y, F(x)); +inf when the section is empty. Vanishes on
// the graph and is >= C d((x,y), graph)^l on compact windows.
double delta(const MultifunctionGraph& f, const Point& x, const Point& y);

// sup_{y in G(x')} d(y, F(x)). Throws when either section is empty.
double delta_sup(const MultifunctionGraph& f, const MultifunctionGraph& g,
                 const Point& x, const Point& xp);

// Hausdorff / Kuratowski distance between sections at x.
double dh_field(const MultifunctionGraph& f, const MultifunctionGraph& g,
                const Point& x);
double dk_field(const MultifunctionGraph& f, const MultifunctionGraph& g,
                const Point& x);

struct KuratowskiLimit {
  PointCloud points;
  bool truncated = false;   // some contributing section hit the window edge
  int finest_ball = -1;     // index into radii of the ball actually used
  std::vector<int> ball_counts;  // domain samples per punctured ball
};

// Sampled Kuratowski limits of F(x) as x -> a, over punctured balls
// B_k = { x' in domain : 0 < ||x' - a|| <= radii[k] } (radii strictly
// decreasing, down to about resolution scale). Evaluation uses the finest
// ball holding at least two domain samples:
//   limsup: cluster representatives of all section values over that ball;
//   liminf: those representatives y with d(y, F(x')) <= tol for EVERY x' in
//           the ball (so liminf is contained in limsup).
// tol = 2 * (resolution + slab).
KuratowskiLimit kuratowski_limsup(const MultifunctionGraph& f, const Point& a,
                                  const std::vector<double>& radii);
KuratowskiLimit kuratowski_liminf(const MultifunctionGraph& f, const Point& a,
                                  const std::vector<double>& radii);

struct GeneralZeroSet {
  PointCloud points;
};

// x-parts of graph samples with ||y|| <= slab, deduplicated at resolution:
// the sampled general zero set { x : 0 in F(x) }.
GeneralZeroSet general_zero_set(const MultifunctionGraph& f);

}  // namespace tamegeo
