#include "tamegeo/tangent_cone.hpp"

#include <algorithm>
#include <cmath>

#include "tamegeo/errors.hpp"
#include "tamegeo/metrics.hpp"
#include "tamegeo/numerics.hpp"

namespace tamegeo {

namespace {

double set_gap(const std::vector<Point>& a, const std::vector<Point>& b) {
  double worst = 0;
  for (const auto& p : a) {
    double best = kInf;
    for (const auto& q : b) best = std::min(best, squared_dist(p, q));
    worst = std::max(worst, best);
  }
  for (const auto& q : b) {
    double best = kInf;
    for (const auto& p : a) best = std::min(best, squared_dist(p, q));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

PointCloud dilate(const PointCloud& e, const Point& a, double t) {
  if (static_cast<int>(a.size()) != e.dim)
    throw ValidationError("dilate: base point has wrong dimension");
  if (!(t > 0)) throw ValidationError("dilate: scale must be positive");
  PointCloud out;
  out.dim = e.dim;
  out.resolution = e.resolution / t;
  out.window_radius = (e.window_radius + norm(a)) / t;
  out.points.reserve(e.size());
  for (const auto& p : e.points) {
    Point q(e.dim);
    for (int i = 0; i < e.dim; ++i) q[i] = (p[i] - a[i]) / t;
    out.points.push_back(std::move(q));
  }
  return out;
}

TangentConeResult tangent_cone(const PointCloud& e, const Point& a, double t0,
                               double gamma, int steps, double cluster_tol) {
  validate_cloud(e);
  if (static_cast<int>(a.size()) != e.dim)
    throw ValidationError("tangent_cone: base point has wrong dimension");
  if (!(t0 > 0) || !(gamma > 0) || !(gamma < 1) || steps < 4)
    throw ValidationError("tangent_cone: need t0 > 0, 0 < gamma < 1, steps >= 4");

  std::vector<double> d(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) d[i] = dist(e.points[i], a);

  const double t_last = t0 * std::pow(gamma, steps - 1);
  if (cluster_tol == 0.0)
    cluster_tol = std::min(0.05, 3.0 * e.resolution / t_last);
  if (!(cluster_tol > 0) || cluster_tol >= 2.0)
    throw ValidationError("tangent_cone: cluster tolerance out of range");

  TangentConeResult res;
  res.diag.t_values.resize(steps);
  res.diag.annulus_counts.assign(steps, 0);
  res.diag.drift.assign(steps, -1.0);

  // Per-step unit directions harvested from the annulus 0.5 <= ||p-a||/t <= 2.
  // Near-duplicate directions carry no information at cluster_tol scale and
  // make the drift gaps quadratic in the annulus size, so each step's set is
  // thinned to cluster_tol / 8 spacing right away (counts report the raw
  // harvest).
  std::vector<std::vector<Point>> dirs(steps);
  double t = t0;
  for (int k = 0; k < steps; ++k) {
    res.diag.t_values[k] = t;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (d[i] < 0.5 * t || d[i] > 2.0 * t) continue;
      Point u(e.dim);
      for (int j = 0; j < e.dim; ++j) u[j] = (e.points[i][j] - a[j]) / d[i];
      dirs[k].push_back(std::move(u));
    }
    res.diag.annulus_counts[k] = static_cast<int>(dirs[k].size());
    dirs[k] = dedup_points(dirs[k], cluster_tol / 8.0);
    t *= gamma;
  }
  for (int k = 1; k < steps; ++k) {
    if (!dirs[k - 1].empty() && !dirs[k].empty())
      res.diag.drift[k] = set_gap(dirs[k - 1], dirs[k]);
  }

  const int tail_start = steps / 2;
  const int tail_len = steps - tail_start;
  int finest = -1;
  for (int k = steps - 1; k >= tail_start; --k) {
    if (dirs[k].empty()) {
      res.diag.resolution_limited = true;
    } else if (finest < 0) {
      finest = k;
    }
  }

  res.cone.dim = e.dim;
  res.cone.cluster_tol = cluster_tol;
  {
    double d0 = kInf;
    for (double di : d) d0 = std::min(d0, di);
    res.cone.base_point_in_closure = d0 <= e.resolution * (1 + 1e-9);
  }
  if (finest < 0) return res;  // nothing visible at the sampled scales

  // Greedy clusters over the tail, pooled finest step first so each cluster
  // seed comes from the finest step where that direction appears.
  struct Cluster {
    Point seed;
    Point finest_sum;      // sum of members harvested at the finest step
    int finest_members = 0;
    std::vector<char> present;  // per tail step
  };
  std::vector<Cluster> clusters;
  for (int k = steps - 1; k >= tail_start; --k) {
    for (const auto& u : dirs[k]) {
      Cluster* home = nullptr;
      for (auto& c : clusters) {
        if (dist(u, c.seed) <= cluster_tol) {
          home = &c;
          break;
        }
      }
      if (!home) {
        clusters.push_back(Cluster{u, Point(e.dim, 0.0), 0,
                                   std::vector<char>(tail_len, 0)});
        home = &clusters.back();
      }
      home->present[k - tail_start] = 1;
      if (k == finest) {
        for (int j = 0; j < e.dim; ++j) home->finest_sum[j] += u[j];
        ++home->finest_members;
      }
    }
  }

  for (const auto& c : clusters) {
    if (c.finest_members == 0) continue;
    int hits = 0;
    for (char p : c.present) hits += p;
    if (2 * hits < tail_len) continue;
    Point rep(e.dim);
    for (int j = 0; j < e.dim; ++j)
      rep[j] = c.finest_sum[j] / static_cast<double>(c.finest_members);
    const double r = norm(rep);
    for (int j = 0; j < e.dim; ++j) rep[j] /= r;
    res.cone.directions.push_back(std::move(rep));
  }
  return res;
}

MultifunctionGraph nearest_point_multifunction(const PointCloud& m,
                                               const std::vector<Point>& xs) {
  validate_cloud(m);
  if (m.empty())
    throw ValidationError("nearest_point_multifunction: empty target set");
  std::vector<Point> graph_pts;
  for (const auto& x : xs) {
    if (static_cast<int>(x.size()) != m.dim)
      throw ValidationError(
          "nearest_point_multifunction: query point has wrong dimension");
    double best = kInf;
    for (const auto& y : m.points) best = std::min(best, squared_dist(x, y));
    const double cut = std::sqrt(best) + m.resolution;
    const double cut2 = cut * cut;
    for (const auto& y : m.points) {
      if (squared_dist(x, y) <= cut2) {
        Point g(x);
        g.insert(g.end(), y.begin(), y.end());
        graph_pts.push_back(std::move(g));
      }
    }
  }
  MultifunctionGraph out;
  out.m = m.dim;
  out.n = m.dim;
  out.slab = m.resolution;
  out.graph = make_cloud(2 * m.dim, std::move(graph_pts), m.resolution);
  return out;
}

ExponentFit conic_exponent(const PointCloud& e,
                           const std::vector<double>& r_schedule) {
  validate_cloud(e);
  if (e.empty()) throw ValidationError("conic_exponent: empty set");
  if (r_schedule.size() < 2)
    throw ValidationError("conic_exponent: need at least two radii");
  for (std::size_t k = 0; k + 1 < r_schedule.size(); ++k) {
    if (!(r_schedule[k] > r_schedule[k + 1]))
      throw ValidationError("conic_exponent: radii must strictly decrease");
  }
  if (!(r_schedule.back() > 0))
    throw ValidationError("conic_exponent: radii must be positive");

  const Point origin(e.dim, 0.0);
  const TangentConeResult tc =
      tangent_cone(e, origin, r_schedule.front(), 0.7, 16);
  if (!tc.cone.base_point_in_closure)
    throw ValidationError("conic_exponent: origin is not in the closure");

  // Sample the cone at the set's own resolution out to the largest radius.
  std::vector<Point> cone_pts;
  cone_pts.push_back(origin);
  const double r_max = r_schedule.front();
  for (const auto& u : tc.cone.directions) {
    for (double s = e.resolution; s <= r_max; s += e.resolution) {
      Point p(e.dim);
      for (int j = 0; j < e.dim; ++j) p[j] = s * u[j];
      cone_pts.push_back(std::move(p));
    }
  }
  const PointCloud cone = make_cloud(e.dim, std::move(cone_pts), e.resolution);

  // Radii whose gap sits below sampling resolution say nothing about the
  // limit exponent and would flatten the fit, so only resolved gaps enter.
  std::vector<std::pair<double, double>> samples;
  for (double r : r_schedule) {
    const PointCloud er = restrict_ball(e, r);
    const PointCloud cr = restrict_ball(cone, r);
    if (er.empty() || cr.empty()) continue;
    const double dh = hausdorff(er, cr);
    if (dh >= 3.0 * e.resolution)
      samples.push_back({std::log(r), std::log(dh)});
  }
  if (samples.empty())
    throw NumericError(
        "conic_exponent: set matches its cone at sampling precision; "
        "no exponent is identifiable");
  if (samples.size() < 2)
    throw NumericError("conic_exponent: too few resolved radii for a fit");

  const LineFit fit = least_squares_line(samples);
  ExponentFit out;
  out.exponent = fit.slope;
  out.constant = std::exp(fit.intercept);
  out.window = {std::exp(samples.back().first),
                std::exp(samples.front().first)};
  out.bins = 0;
  out.max_residual = fit.max_residual;
  out.envelope = samples;
  return out;
}

}  // namespace tamegeo
