#include "tamegeo/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tamegeo/errors.hpp"
#include "tamegeo/parallel.hpp"

namespace tamegeo {

namespace {

constexpr double kUnitTol = 1e-12;

// Largest chordal distance on the unit sphere plus one: the sentinel for a
// single empty side of the extended Hausdorff distance.
constexpr double kEmptySentinel = 3.0;

// max over a of min over b of |a - b|; 0 when `from` is empty.
double directed_hausdorff(const std::vector<Point>& from,
                          const std::vector<Point>& to) {
  if (from.empty()) return 0.0;
  const std::size_t chunks = chunk_count(from.size());
  std::vector<double> chunk_max(chunks, 0.0);
  parallel_chunks(from.size(), [&](std::size_t c, std::size_t begin,
                                   std::size_t end) {
    double worst = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double best = kInf;
      for (const auto& q : to) best = std::min(best, squared_dist(from[i], q));
      worst = std::max(worst, best);
    }
    chunk_max[c] = worst;
  });
  double worst = 0.0;
  for (double v : chunk_max) worst = std::max(worst, v);
  return std::sqrt(worst);
}

}  // namespace

SpherePoint make_sphere_point(Point coords) {
  if (coords.size() < 2)
    throw ValidationError("sphere point: needs at least two coordinates");
  if (std::abs(norm(coords) - 1.0) > kUnitTol)
    throw ValidationError("sphere point: norm differs from 1 beyond 1e-12");
  return SpherePoint{std::move(coords)};
}

Point north_pole(int n) {
  Point p(n + 1, 0.0);
  p[n] = 1.0;
  return p;
}

Point stereo_forward(const SpherePoint& x) {
  const auto& c = x.coords;
  const std::size_t n = c.size() - 1;
  const double denom = c[n] - 1.0;
  if (std::abs(denom) < 1e-15)
    throw ValidationError("stereo_forward: the north pole has no image");
  Point y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = -2.0 * c[i] / denom;
  return y;
}

SpherePoint stereo_inverse(const Point& y) {
  const double s = squared_norm(y);
  const double denom = s + 4.0;
  Point c(y.size() + 1);
  for (std::size_t i = 0; i < y.size(); ++i) c[i] = 4.0 * y[i] / denom;
  c[y.size()] = (s - 4.0) / denom;
  return SpherePoint{std::move(c)};
}

CompactifiedSet compactify(const PointCloud& a) {
  CompactifiedSet out;
  out.dim = a.dim;
  out.sphere_points.reserve(a.points.size() + 1);
  for (const auto& p : a.points)
    out.sphere_points.push_back(stereo_inverse(p).coords);
  out.sphere_points.push_back(north_pole(a.dim));
  out.includes_pole = true;
  return out;
}

double hausdorff(const PointCloud& a, const PointCloud& b) {
  if (a.dim != b.dim) throw ValidationError("hausdorff: dimension mismatch");
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return kInf;
  return std::max(directed_hausdorff(a.points, b.points),
                  directed_hausdorff(b.points, a.points));
}

double hausdorff_sphere_extended(const CompactifiedSet& s,
                                 const CompactifiedSet& t) {
  if (s.dim != t.dim)
    throw ValidationError("hausdorff_sphere_extended: dimension mismatch");
  const bool s_empty = s.sphere_points.empty();
  const bool t_empty = t.sphere_points.empty();
  if (s_empty && t_empty) return 0.0;
  if (s_empty || t_empty) return kEmptySentinel;
  return std::max(directed_hausdorff(s.sphere_points, t.sphere_points),
                  directed_hausdorff(t.sphere_points, s.sphere_points));
}

double kuratowski_dist(const PointCloud& a, const PointCloud& b) {
  if (a.dim != b.dim)
    throw ValidationError("kuratowski_dist: dimension mismatch");
  return hausdorff_sphere_extended(compactify(a), compactify(b));
}

}  // namespace tamegeo
