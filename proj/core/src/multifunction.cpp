#include "tamegeo/multifunction.hpp"

#include <algorithm>
#include <cmath>

#include "tamegeo/errors.hpp"
#include "tamegeo/metrics.hpp"

namespace tamegeo {

namespace {

Point x_part(const Point& g, int m) { return Point(g.begin(), g.begin() + m); }
Point y_part(const Point& g, int m) { return Point(g.begin() + m, g.end()); }

double xdist2(const Point& g, const Point& x) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = g[i] - x[i];
    s += d * d;
  }
  return s;
}

// max over sec of distance to ref; both nonempty.
double directed_sup(const PointCloud& sec, const PointCloud& ref) {
  double worst = 0;
  for (const auto& y : sec.points) {
    double best = kInf;
    for (const auto& z : ref.points) best = std::min(best, squared_dist(y, z));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double min_gap(const PointCloud& a, const PointCloud& b) {
  double best = kInf;
  for (const auto& y : a.points)
    for (const auto& z : b.points) best = std::min(best, squared_dist(y, z));
  return std::sqrt(best);
}

}  // namespace

void validate_graph(const MultifunctionGraph& f) {
  if (f.m <= 0 || f.n <= 0)
    throw ValidationError("multifunction: m and n must be positive");
  if (f.graph.dim != f.m + f.n)
    throw ValidationError("multifunction: graph dimension must be m + n");
  if (f.slab < f.graph.resolution)
    throw ValidationError("multifunction: slab must cover the resolution");
  validate_cloud(f.graph);
}

PointCloud section(const MultifunctionGraph& f, const Point& x) {
  if (static_cast<int>(x.size()) != f.m)
    throw ValidationError("section: argument has wrong dimension");
  PointCloud out;
  out.dim = f.n;
  out.resolution = f.graph.resolution;
  out.window_radius = f.graph.window_radius;
  const double slab2 = f.slab * f.slab;
  for (const auto& g : f.graph.points) {
    if (xdist2(g, x) <= slab2) out.points.push_back(y_part(g, f.m));
  }
  return out;
}

bool section_truncated(const MultifunctionGraph& f, const PointCloud& sec) {
  const double edge = f.graph.window_radius - f.slab;
  for (const auto& y : sec.points) {
    if (norm(y) > edge) return true;
  }
  return false;
}

PointCloud domain(const MultifunctionGraph& f) {
  std::vector<Point> xs;
  xs.reserve(f.graph.size());
  for (const auto& g : f.graph.points) xs.push_back(x_part(g, f.m));
  PointCloud out;
  out.dim = f.m;
  out.resolution = f.graph.resolution;
  out.window_radius = f.graph.window_radius;
  out.points = dedup_points(xs, f.graph.resolution);
  return out;
}

double preimage_tolerance(const MultifunctionGraph& f) {
  return 2.0 * (f.slab + f.graph.resolution);
}

namespace {

enum class PreimageMode { Strong, Lower, Upper, Weak };

PointCloud pre_image(const MultifunctionGraph& f, const Point& a,
                     PreimageMode mode) {
  validate_graph(f);
  const PointCloud sec_a = section(f, a);
  if (sec_a.empty())
    throw ValidationError("pre_image: base point is outside the sampled domain");
  const double tau = preimage_tolerance(f);
  const PointCloud dom = domain(f);
  PointCloud out;
  out.dim = f.m;
  out.resolution = dom.resolution;
  out.window_radius = dom.window_radius;
  for (const auto& x : dom.points) {
    const PointCloud sec = section(f, x);
    if (sec.empty()) continue;
    bool keep = false;
    switch (mode) {
      case PreimageMode::Strong:
        keep = std::max(directed_sup(sec, sec_a), directed_sup(sec_a, sec)) <= tau;
        break;
      case PreimageMode::Lower:
        keep = directed_sup(sec, sec_a) <= tau;
        break;
      case PreimageMode::Upper:
        keep = directed_sup(sec_a, sec) <= tau;
        break;
      case PreimageMode::Weak:
        keep = min_gap(sec, sec_a) <= tau;
        break;
    }
    if (keep) out.points.push_back(x);
  }
  return out;
}

}  // namespace

PointCloud pre_image_strong(const MultifunctionGraph& f, const Point& a) {
  return pre_image(f, a, PreimageMode::Strong);
}
PointCloud pre_image_lower(const MultifunctionGraph& f, const Point& a) {
  return pre_image(f, a, PreimageMode::Lower);
}
PointCloud pre_image_upper(const MultifunctionGraph& f, const Point& a) {
  return pre_image(f, a, PreimageMode::Upper);
}
PointCloud pre_image_weak(const MultifunctionGraph& f, const Point& a) {
  return pre_image(f, a, PreimageMode::Weak);
}

PointCloud pre_image_point(const MultifunctionGraph& f, const Point& y) {
  validate_graph(f);
  if (static_cast<int>(y.size()) != f.n)
    throw ValidationError("pre_image_point: value has wrong dimension");
  const double tau = preimage_tolerance(f);
  const PointCloud dom = domain(f);
  PointCloud out;
  out.dim = f.m;
  out.resolution = dom.resolution;
  out.window_radius = dom.window_radius;
  for (const auto& x : dom.points) {
    const PointCloud sec = section(f, x);
    if (sec.empty()) continue;
    if (dist_point_set(y, sec) <= tau) out.points.push_back(x);
  }
  return out;
}

double delta(const MultifunctionGraph& f, const Point& x, const Point& y) {
  if (static_cast<int>(y.size()) != f.n)
    throw ValidationError("delta: value has wrong dimension");
  return dist_point_set(y, section(f, x));
}

double delta_sup(const MultifunctionGraph& f, const MultifunctionGraph& g,
                 const Point& x, const Point& xp) {
  if (f.n != g.n) throw ValidationError("delta_sup: value dimensions differ");
  const PointCloud fx = section(f, x);
  if (fx.empty()) throw ValidationError("delta_sup: empty section of the first argument");
  const PointCloud gxp = section(g, xp);
  if (gxp.empty()) throw ValidationError("delta_sup: empty section of the second argument");
  return directed_sup(gxp, fx);
}

double dh_field(const MultifunctionGraph& f, const MultifunctionGraph& g,
                const Point& x) {
  if (f.n != g.n) throw ValidationError("dh_field: value dimensions differ");
  return hausdorff(section(f, x), section(g, x));
}

double dk_field(const MultifunctionGraph& f, const MultifunctionGraph& g,
                const Point& x) {
  if (f.n != g.n) throw ValidationError("dk_field: value dimensions differ");
  return kuratowski_dist(section(f, x), section(g, x));
}

namespace {

struct BallScan {
  std::vector<const Point*> members;  // domain samples in the finest usable ball
  std::vector<int> counts;
  int finest = -1;
};

BallScan scan_balls(const PointCloud& dom, const Point& a,
                    const std::vector<double>& radii) {
  if (radii.empty()) throw ValidationError("kuratowski limit: empty radius list");
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    if (!(radii[k] > radii[k + 1]))
      throw ValidationError("kuratowski limit: radii must strictly decrease");
  }
  if (!(radii.back() > 0))
    throw ValidationError("kuratowski limit: radii must be positive");

  BallScan scan;
  scan.counts.assign(radii.size(), 0);
  std::vector<double> d(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) d[i] = dist(dom.points[i], a);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    int count = 0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (d[i] > 1e-12 && d[i] <= radii[k]) ++count;
    }
    scan.counts[k] = count;
    if (count >= 2) scan.finest = static_cast<int>(k);
  }
  if (scan.finest < 0)
    throw ValidationError(
        "kuratowski limit: base point is isolated in the sampled domain");
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (d[i] > 1e-12 && d[i] <= radii[scan.finest])
      scan.members.push_back(&dom.points[i]);
  }
  return scan;
}

}  // namespace

KuratowskiLimit kuratowski_limsup(const MultifunctionGraph& f, const Point& a,
                                  const std::vector<double>& radii) {
  validate_graph(f);
  const PointCloud dom = domain(f);
  const BallScan scan = scan_balls(dom, a, radii);
  const double tol = 2.0 * (f.graph.resolution + f.slab);

  KuratowskiLimit out;
  out.finest_ball = scan.finest;
  out.ball_counts = scan.counts;

  std::vector<Point> pool;
  for (const Point* x : scan.members) {
    const PointCloud sec = section(f, *x);
    if (section_truncated(f, sec)) out.truncated = true;
    pool.insert(pool.end(), sec.points.begin(), sec.points.end());
  }

  // Cluster the pooled values and report centroids.
  std::vector<std::vector<Point>> clusters;
  for (const auto& y : pool) {
    bool placed = false;
    for (auto& c : clusters) {
      if (dist(y, c.front()) <= tol) {
        c.push_back(y);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({y});
  }

  out.points.dim = f.n;
  out.points.resolution = f.graph.resolution;
  out.points.window_radius = f.graph.window_radius;
  for (const auto& c : clusters) {
    Point centroid(f.n, 0.0);
    for (const auto& y : c)
      for (int i = 0; i < f.n; ++i) centroid[i] += y[i];
    for (int i = 0; i < f.n; ++i) centroid[i] /= static_cast<double>(c.size());
    out.points.points.push_back(std::move(centroid));
  }
  return out;
}

KuratowskiLimit kuratowski_liminf(const MultifunctionGraph& f, const Point& a,
                                  const std::vector<double>& radii) {
  KuratowskiLimit sup = kuratowski_limsup(f, a, radii);
  const PointCloud dom = domain(f);
  const BallScan scan = scan_balls(dom, a, radii);
  const double tol = 2.0 * (f.graph.resolution + f.slab);

  KuratowskiLimit out;
  out.truncated = sup.truncated;
  out.finest_ball = sup.finest_ball;
  out.ball_counts = sup.ball_counts;
  out.points.dim = sup.points.dim;
  out.points.resolution = sup.points.resolution;
  out.points.window_radius = sup.points.window_radius;

  // Keep the limsup representatives that every nearby section approaches;
  // this builds liminf within limsup by construction.
  for (const auto& y : sup.points.points) {
    bool everywhere = true;
    for (const Point* x : scan.members) {
      const PointCloud sec = section(f, *x);
      if (sec.empty() || dist_point_set(y, sec) > tol) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) out.points.points.push_back(y);
  }
  return out;
}

GeneralZeroSet general_zero_set(const MultifunctionGraph& f) {
  validate_graph(f);
  std::vector<Point> xs;
  const double slab2 = f.slab * f.slab;
  for (const auto& g : f.graph.points) {
    double y2 = 0;
    for (int i = f.m; i < f.m + f.n; ++i) y2 += g[i] * g[i];
    if (y2 <= slab2) xs.push_back(x_part(g, f.m));
  }
  GeneralZeroSet out;
  out.points.dim = f.m;
  out.points.resolution = f.graph.resolution;
  out.points.window_radius = f.graph.window_radius;
  out.points.points = dedup_points(xs, f.graph.resolution);
  return out;
}

}  // namespace tamegeo
