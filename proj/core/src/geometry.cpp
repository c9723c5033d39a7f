#include "tamegeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tamegeo/errors.hpp"
#include "tamegeo/parallel.hpp"

namespace tamegeo {

double squared_norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(squared_norm(x)); }

double squared_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double dist(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_dist(a, b));
}

PointCloud make_cloud(int dim, std::vector<Point> points, double resolution,
                      double window_radius) {
  PointCloud c;
  c.dim = dim;
  c.resolution = resolution;
  c.points = std::move(points);
  if (window_radius > 0) {
    c.window_radius = window_radius;
  } else {
    double w = 0;
    for (const auto& p : c.points) w = std::max(w, norm(p));
    // Tiny positive floor keeps the bound valid for empty clouds.
    c.window_radius = std::max(w * (1.0 + 1e-12), 1e-9);
  }
  return c;
}

void validate_cloud(const PointCloud& c) {
  if (c.dim <= 0) throw ValidationError("point cloud: dim must be positive");
  if (!(c.resolution > 0))
    throw ValidationError("point cloud: resolution must be positive");
  if (!(c.window_radius > 0))
    throw ValidationError("point cloud: window_radius must be positive");
  const double bound = c.window_radius * (1.0 + 1e-9) + 1e-12;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& p = c.points[i];
    if (static_cast<int>(p.size()) != c.dim)
      throw ValidationError("point cloud: point " + std::to_string(i) +
                            " has wrong dimension");
    for (double v : p) {
      if (!std::isfinite(v))
        throw ValidationError("point cloud: point " + std::to_string(i) +
                              " has a non-finite coordinate");
    }
    if (norm(p) > bound)
      throw ValidationError("point cloud: point " + std::to_string(i) +
                            " lies outside window_radius");
  }
}

double dist_point_set(const Point& x, const PointCloud& a) {
  if (static_cast<int>(x.size()) != a.dim)
    throw ValidationError("dist_point_set: dimension mismatch");
  if (a.empty()) return kInf;
  double best = kInf;
  for (const auto& p : a.points) best = std::min(best, squared_dist(x, p));
  return std::sqrt(best);
}

PointCloud restrict_ball(const PointCloud& e, double r) {
  if (!(r > 0)) throw ValidationError("restrict_ball: radius must be positive");
  PointCloud out;
  out.dim = e.dim;
  out.resolution = e.resolution;
  out.window_radius = std::min(e.window_radius, r);
  const double r2 = r * r;
  for (const auto& p : e.points) {
    if (squared_norm(p) <= r2) out.points.push_back(p);
  }
  return out;
}

PointCloud intersect_sphere(const PointCloud& e, double r, double shell) {
  if (!(r > 0)) throw ValidationError("intersect_sphere: radius must be positive");
  if (shell < e.resolution)
    throw ValidationError(
        "intersect_sphere: shell must be at least the cloud resolution");
  PointCloud out;
  out.dim = e.dim;
  out.resolution = e.resolution;
  out.window_radius = std::min(e.window_radius, r + shell);
  for (const auto& p : e.points) {
    if (std::abs(norm(p) - r) <= shell) out.points.push_back(p);
  }
  return out;
}

std::vector<Point> dedup_points(const std::vector<Point>& pts, double tol) {
  std::vector<Point> kept;
  const double tol2 = tol * tol;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : kept) {
      if (squared_dist(p, q) <= tol2) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(p);
  }
  return kept;
}

}  // namespace tamegeo
