#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace tamegeo {

using Point = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double squared_norm(std::span<const double> x);
double norm(std::span<const double> x);
double squared_dist(std::span<const double> a, std::span<const double> b);
double dist(std::span<const double> a, std::span<const double> b);

// Finite sample of a closed set inside a bounded window. `resolution` is an
// upper bound on the gap between the sample and the set it represents (inside
// the window); `window_radius` bounds the norm of every sample point.
struct PointCloud {
  int dim = 0;
  double resolution = 0.0;
  double window_radius = 0.0;
  std::vector<Point> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

// window_radius == 0 means: take a tight bound from the points themselves.
PointCloud make_cloud(int dim, std::vector<Point> points, double resolution,
                      double window_radius = 0.0);

// Throws ValidationError if dimensions, finiteness or the window bound fail.
void validate_cloud(const PointCloud& c);

// Distance from x to the sample set; +inf for an empty cloud. The +inf value
// is only ever compared against, never fed back into arithmetic.
double dist_point_set(const Point& x, const PointCloud& a);

PointCloud restrict_ball(const PointCloud& e, double r);

// Points with | ||p|| - r | <= shell. Requires shell >= e.resolution, so a
// sphere crossing cannot fall through the sample.
PointCloud intersect_sphere(const PointCloud& e, double r, double shell);

// Greedy dedup in input order: keeps points pairwise farther apart than tol.
std::vector<Point> dedup_points(const std::vector<Point>& pts, double tol);

}  // namespace tamegeo
