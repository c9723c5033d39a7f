#include "tamegeo/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Dense>

#include "tamegeo/errors.hpp"
#include "tamegeo/numerics.hpp"
#include "tamegeo/parallel.hpp"

namespace tamegeo {

namespace {

double dot(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Deterministic point in the closed unit ball: gaussian direction via
// Box-Muller over hashed uniforms, radius u^(1/dim).
Point ball_point(std::uint64_t seed, std::uint64_t& ctr, int dim) {
  Point g(dim, 0.0);
  for (int i = 0; i < dim; i += 2) {
    const double u1 = hashed_uniform(seed, ctr++, 1e-12, 1.0);
    const double u2 = hashed_uniform(seed, ctr++, 0.0, 1.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    g[i] = r * std::cos(2.0 * std::numbers::pi * u2);
    if (i + 1 < dim) g[i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
  }
  double n = norm(g);
  if (n < 1e-300) {
    g.assign(dim, 0.0);
    g[0] = 1.0;
    n = 1.0;
  }
  const double u = hashed_uniform(seed, ctr++, 0.0, 1.0);
  const double scale = std::pow(u, 1.0 / dim) / n;
  for (auto& c : g) c *= scale;
  return g;
}

std::uint64_t salt_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (salt + 1));
}

}  // namespace

void validate_config(const SubgradientConfig& cfg, int arity) {
  if (arity <= 0) throw ValidationError("subgradient: arity must be positive");
  if (cfg.radius_schedule.size() < 2)
    throw ValidationError("subgradient: need at least two radii");
  for (std::size_t k = 0; k + 1 < cfg.radius_schedule.size(); ++k) {
    if (!(cfg.radius_schedule[k] > cfg.radius_schedule[k + 1]))
      throw ValidationError("subgradient: radii must strictly decrease");
  }
  if (!(cfg.radius_schedule.back() > 0))
    throw ValidationError("subgradient: radii must be positive");
  if (cfg.samples_per_radius < 2 * arity + 2)
    throw ValidationError("subgradient: need at least 2*arity+2 samples per radius");
  if (!(cfg.seam_margin > 0) || !(cfg.seam_margin < 1))
    throw ValidationError("subgradient: seam margin must be in (0, 1)");
  if (!(cfg.hull_tol > 0))
    throw ValidationError("subgradient: hull tolerance must be positive");
}

std::vector<Point> gradient_limits(const PiecewiseFn& f, const Point& x,
                                   const SubgradientConfig& cfg) {
  validate_config(cfg, f.arity());
  if (static_cast<int>(x.size()) != f.arity())
    throw ValidationError("gradient_limits: point has wrong dimension");
  const int dim = f.arity();
  const auto& radii = cfg.radius_schedule;
  const int nr = static_cast<int>(radii.size());
  const int tail_start = nr / 2;
  const int tail_len = nr - tail_start;

  // Sample gradients in shrinking balls, avoiding seams so every sample sees
  // a smooth piece; keep only the tail radii.
  struct RadiusSamples {
    std::vector<int> piece;
    std::vector<Point> grad;
  };
  std::vector<RadiusSamples> tail(tail_len);
  std::uint64_t ctr = 0;
  Point p(dim);
  for (int k = tail_start; k < nr; ++k) {
    const double r = radii[k];
    const int want = cfg.samples_per_radius;
    int got = 0;
    for (int tries = 0; tries < 16 * want && got < want; ++tries) {
      const Point b = ball_point(cfg.seed, ctr, dim);
      for (int j = 0; j < dim; ++j) p[j] = x[j] + r * b[j];
      const int pi = f.piece_at(p);
      if (pi < 0) continue;
      if (f.seam_distance(p) < cfg.seam_margin * r) continue;
      tail[k - tail_start].piece.push_back(pi);
      tail[k - tail_start].grad.push_back(f.piece_gradient(pi, p));
      ++got;
    }
  }

  // Cluster tolerance from the observed within-piece spread: the largest
  // pairwise gradient gap inside one (piece, radius) group over the tail.
  double spread = 0;
  for (const auto& rs : tail) {
    for (std::size_t i = 0; i < rs.grad.size(); ++i) {
      for (std::size_t j = i + 1; j < rs.grad.size(); ++j) {
        if (rs.piece[i] != rs.piece[j]) continue;
        spread = std::max(spread, dist(rs.grad[i], rs.grad[j]));
      }
    }
  }
  const double tol = 1.5 * spread + 1e-12;

  // Greedy clusters, finest radius first; a cluster's representative is the
  // centroid of its members at the finest radius where it appears.
  struct Cluster {
    Point seed;
    Point finest_sum;
    int finest_members = 0;
    int finest_k = -1;  // tail index of creation
    std::vector<char> present;
  };
  std::vector<Cluster> clusters;
  for (int tk = tail_len - 1; tk >= 0; --tk) {
    for (const auto& g : tail[tk].grad) {
      Cluster* home = nullptr;
      for (auto& c : clusters) {
        if (dist(g, c.seed) <= tol) {
          home = &c;
          break;
        }
      }
      if (!home) {
        clusters.push_back(
            Cluster{g, Point(dim, 0.0), 0, tk, std::vector<char>(tail_len, 0)});
        home = &clusters.back();
      }
      home->present[tk] = 1;
      if (tk == home->finest_k) {
        for (int j = 0; j < dim; ++j) home->finest_sum[j] += g[j];
        ++home->finest_members;
      }
    }
  }

  std::vector<Point> out;
  for (const auto& c : clusters) {
    int hits = 0;
    for (char pr : c.present) hits += pr;
    if (2 * hits < tail_len) continue;  // unstable under shrinking
    Point rep(dim);
    for (int j = 0; j < dim; ++j)
      rep[j] = c.finest_sum[j] / static_cast<double>(c.finest_members);
    out.push_back(std::move(rep));
  }
  return out;
}

std::pair<Point, double> min_norm_point(const Polytope& p, double tol) {
  if (p.vertices.empty())
    throw ValidationError("min_norm_point: empty polytope");
  if (!(tol > 0)) throw ValidationError("min_norm_point: tolerance must be positive");
  const int d = p.dim;
  for (const auto& v : p.vertices) {
    if (static_cast<int>(v.size()) != d)
      throw ValidationError("min_norm_point: vertex has wrong dimension");
    for (double c : v) {
      if (!std::isfinite(c))
        throw ValidationError("min_norm_point: vertex is not finite");
    }
  }
  const auto& V = p.vertices;
  const int n = static_cast<int>(V.size());

  int j0 = 0;
  for (int i = 1; i < n; ++i) {
    if (squared_norm(V[i]) < squared_norm(V[j0])) j0 = i;
  }
  std::vector<int> corral{j0};
  std::vector<double> lam{1.0};
  Point x = V[j0];

  auto rebuild_x = [&] {
    x.assign(d, 0.0);
    for (std::size_t a = 0; a < corral.size(); ++a)
      for (int j = 0; j < d; ++j) x[j] += lam[a] * V[corral[a]][j];
  };

  double gap = kInf;
  const int cap = 200 + 20 * n;
  for (int iter = 0; iter < cap; ++iter) {
    double mn = kInf;
    int jmin = -1;
    for (int i = 0; i < n; ++i) {
      const double s = dot(x, V[i]);
      if (s < mn) {
        mn = s;
        jmin = i;
      }
    }
    gap = squared_norm(x) - mn;
    if (gap <= tol) return {x, norm(x)};
    if (std::find(corral.begin(), corral.end(), jmin) == corral.end()) {
      corral.push_back(jmin);
      lam.push_back(0.0);
    }

    for (int minor = 0; minor < 64; ++minor) {
      const int k = static_cast<int>(corral.size());
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) A(a, b) = dot(V[corral[a]], V[corral[b]]);
        A(a, k) = 1.0;
        A(k, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = 1.0;
      const Eigen::VectorXd sol =
          A.completeOrthogonalDecomposition().solve(rhs);

      bool interior = true;
      for (int a = 0; a < k; ++a) {
        if (sol(a) < -1e-12) interior = false;
      }
      if (interior) {
        double sum = 0;
        for (int a = 0; a < k; ++a) {
          lam[a] = std::max(sol(a), 0.0);
          sum += lam[a];
        }
        for (int a = 0; a < k; ++a) lam[a] /= sum;
        rebuild_x();
        break;
      }

      // Step from lam toward the affine coefficients until the first
      // coefficient hits zero, then drop it from the corral.
      double theta = 1.0;
      int drop = -1;
      for (int a = 0; a < k; ++a) {
        if (sol(a) <= 1e-14 && lam[a] > sol(a)) {
          const double t = lam[a] / (lam[a] - sol(a));
          if (t < theta) {
            theta = t;
            drop = a;
          }
        }
      }
      for (int a = 0; a < k; ++a) lam[a] = (1 - theta) * lam[a] + theta * sol(a);
      if (drop >= 0) lam[drop] = 0.0;
      for (int a = k - 1; a >= 0; --a) {
        if (lam[a] <= 1e-14) {
          corral.erase(corral.begin() + a);
          lam.erase(lam.begin() + a);
        }
      }
      if (corral.empty()) {
        corral.push_back(jmin);
        lam.push_back(1.0);
      }
      double sum = 0;
      for (double l : lam) sum += l;
      for (double& l : lam) l /= sum;
      rebuild_x();
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "min_norm_point: no convergence; duality gap %.3e", gap);
  throw NumericError(buf);
}

Polytope clarke_subgradient(const PiecewiseFn& f, const Point& x,
                            const SubgradientConfig& cfg) {
  std::vector<Point> verts = gradient_limits(f, x, cfg);
  if (verts.empty())
    throw NumericError(
        "clarke_subgradient: no usable gradient samples near the point");
  const int d = f.arity();

  // Drop vertices inside the hull of the others until minimal.
  bool removed = true;
  while (removed && verts.size() > 1) {
    removed = false;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      Polytope rest;
      rest.dim = d;
      for (std::size_t j = 0; j < verts.size(); ++j) {
        if (j == i) continue;
        Point w(d);
        for (int c = 0; c < d; ++c) w[c] = verts[j][c] - verts[i][c];
        rest.vertices.push_back(std::move(w));
      }
      if (min_norm_point(rest).second <= cfg.hull_tol) {
        verts.erase(verts.begin() + i);
        removed = true;
        break;
      }
    }
  }

  Polytope out;
  out.dim = d;
  out.vertices = std::move(verts);
  return out;
}

PointCloud critical_set_sample(
    const PiecewiseFn& f, const std::vector<std::pair<double, double>>& window,
    double grid_step, const SubgradientConfig& cfg) {
  validate_config(cfg, f.arity());
  const int dim = f.arity();
  if (static_cast<int>(window.size()) != dim)
    throw ValidationError("critical_set_sample: window has wrong dimension");
  if (!(grid_step > 0))
    throw ValidationError("critical_set_sample: grid step must be positive");
  for (const auto& [lo, hi] : window) {
    if (!(lo <= hi)) throw ValidationError("critical_set_sample: empty window axis");
  }

  std::vector<Point> grid;
  {
    std::vector<int> counts(dim);
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) {
      counts[j] = static_cast<int>(
                      std::floor((window[j].second - window[j].first) / grid_step +
                                 1e-9)) +
                  1;
      total *= static_cast<std::size_t>(counts[j]);
    }
    grid.reserve(total);
    Point g(dim);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      for (int j = 0; j < dim; ++j) {
        g[j] = window[j].first + grid_step * static_cast<double>(rem % counts[j]);
        rem /= counts[j];
      }
      grid.push_back(g);
    }
  }

  std::vector<char> keep(grid.size(), 0);
  parallel_chunks(grid.size(), [&](std::size_t, std::size_t begin,
                                   std::size_t end) {
    SubgradientConfig local = cfg;
    for (std::size_t i = begin; i < end; ++i) {
      local.seed = salt_seed(cfg.seed, i);
      const std::vector<Point> limits = gradient_limits(f, grid[i], local);
      if (limits.empty()) continue;
      Polytope hull;
      hull.dim = dim;
      hull.vertices = limits;
      const double h = min_norm_point(hull).second;
      if (h <= 3.0 * cfg.hull_tol) keep[i] = 1;
    }
  });

  PointCloud out;
  out.dim = dim;
  out.resolution = grid_step * std::sqrt(static_cast<double>(dim));
  double w2 = 0;
  for (const auto& [lo, hi] : window) w2 += std::max(lo * lo, hi * hi);
  out.window_radius = std::max(std::sqrt(w2), 1e-9);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (keep[i]) out.points.push_back(grid[i]);
  }
  return out;
}

}  // namespace tamegeo
