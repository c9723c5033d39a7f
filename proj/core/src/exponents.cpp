#include "tamegeo/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tamegeo/errors.hpp"
#include "tamegeo/numerics.hpp"
#include "tamegeo/parallel.hpp"

namespace tamegeo {

namespace {

int choose_bins(std::size_t n) {
  return std::max<int>(5, std::min<int>(12, static_cast<int>(n / 3)));
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw ValidationError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1 - frac) + v[hi] * frac;
}

// Single-linkage clusters at `link`; clusters of diameter <= max_diam are
// replaced by their centroid (tight intersection cores), larger ones kept
// pointwise.
std::vector<Point> collapse_cores(const std::vector<Point>& raw, double link,
                                  double max_diam) {
  const std::size_t n = raw.size();
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> clusters;
  const double link2 = link * link;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    const int id = static_cast<int>(clusters.size());
    clusters.push_back({});
    std::vector<std::size_t> queue{i};
    label[i] = id;
    while (!queue.empty()) {
      const std::size_t cur = queue.back();
      queue.pop_back();
      clusters[id].push_back(static_cast<int>(cur));
      for (std::size_t j = 0; j < n; ++j) {
        if (label[j] >= 0) continue;
        if (squared_dist(raw[cur], raw[j]) <= link2) {
          label[j] = id;
          queue.push_back(j);
        }
      }
    }
  }

  std::vector<Point> out;
  const std::size_t dim = raw.empty() ? 0 : raw[0].size();
  for (const auto& c : clusters) {
    double diam2 = 0;
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b)
        diam2 = std::max(diam2, squared_dist(raw[c[a]], raw[c[b]]));
    if (std::sqrt(diam2) <= max_diam) {
      Point centroid(dim, 0.0);
      for (int idx : c)
        for (std::size_t j = 0; j < dim; ++j) centroid[j] += raw[idx][j];
      for (std::size_t j = 0; j < dim; ++j)
        centroid[j] /= static_cast<double>(c.size());
      out.push_back(std::move(centroid));
    } else {
      for (int idx : c) out.push_back(raw[idx]);
    }
  }
  return out;
}

// Grid anchored at `a`: offsets -K..K per axis with K = floor(w/step).
struct AnchoredGrid {
  int side = 0;
  std::size_t total = 0;
  Point decode(const Point& a, double step, std::size_t idx, int arity) const {
    Point x(arity);
    std::size_t rem = idx;
    const int k = (side - 1) / 2;
    for (int j = 0; j < arity; ++j) {
      x[j] = a[j] + step * (static_cast<int>(rem % side) - k);
      rem /= side;
    }
    return x;
  }
};

AnchoredGrid anchored_grid(int arity, double window, double step) {
  if (!(window > 0) || !(step > 0))
    throw ValidationError("exponent grid: window and step must be positive");
  const int k = static_cast<int>(std::floor(window / step + 1e-9));
  if (k < 1) throw ValidationError("exponent grid: step exceeds the window");
  AnchoredGrid g;
  g.side = 2 * k + 1;
  g.total = 1;
  for (int j = 0; j < arity; ++j) {
    g.total *= static_cast<std::size_t>(g.side);
    if (g.total > 50'000'000)
      throw ValidationError("exponent grid: too many grid points");
  }
  return g;
}

double min_dist_to(const Point& x, const std::vector<Point>& zs) {
  double best = kInf;
  for (const auto& z : zs) best = std::min(best, squared_dist(x, z));
  return std::sqrt(best);
}

void dump_row(EnvelopeDump* dump, double u, double v) {
  if (!dump || !(u > 0) || !(v > 0)) return;
  dump->rows.push_back({std::log(u), std::log(v), -1, false});
}

struct AlphaFit {
  double alpha = 0.0;
  LineFit line;
};

AlphaFit fit_alpha(const std::vector<double>& ts,
                   const std::vector<double>& phis) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    pts.push_back({std::log(ts[i]), std::log(phis[i])});
  AlphaFit out;
  out.line = least_squares_line(pts);
  out.alpha = out.line.slope;
  return out;
}

}  // namespace

ExponentFit fit_envelope(const std::vector<std::pair<double, double>>& samples,
                         int bins, EnvelopeDump* dump) {
  if (bins < 5) throw ValidationError("fit_envelope: need at least 5 bins");
  if (samples.size() < static_cast<std::size_t>(3 * bins))
    throw ValidationError("fit_envelope: need at least 3 samples per bin");
  for (const auto& [u, v] : samples) {
    if (!(u > 0) || !(v > 0) || !std::isfinite(u) || !std::isfinite(v))
      throw ValidationError("fit_envelope: samples must be positive and finite");
  }

  double lu_min = kInf, lu_max = -kInf;
  for (const auto& [u, v] : samples) {
    lu_min = std::min(lu_min, std::log(u));
    lu_max = std::max(lu_max, std::log(u));
  }
  if (!(lu_max > lu_min))
    throw ValidationError("fit_envelope: u values do not span a window");

  std::vector<double> bin_lv(bins, kInf), bin_lu(bins, 0.0);
  std::vector<std::ptrdiff_t> bin_src(bins, -1);
  auto bin_of = [&](double lu) {
    int b = static_cast<int>((lu - lu_min) / (lu_max - lu_min) * bins);
    return std::clamp(b, 0, bins - 1);
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double lu = std::log(samples[i].first);
    const double lv = std::log(samples[i].second);
    const int b = bin_of(lu);
    if (lv < bin_lv[b]) {
      bin_lv[b] = lv;
      bin_lu[b] = lu;
      bin_src[b] = static_cast<std::ptrdiff_t>(i);
    }
  }

  int empty = 0;
  for (int b = 0; b < bins; ++b) {
    if (bin_src[b] < 0) ++empty;
  }
  if (5 * empty > bins) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "fit_envelope: sampling too sparse (%d of %d bins empty)",
                  empty, bins);
    throw NumericError(buf);
  }

  std::vector<std::pair<double, double>> minima;
  for (int b = 0; b < bins; ++b) {
    if (bin_src[b] >= 0) minima.push_back({bin_lu[b], bin_lv[b]});
  }
  const LineFit line = least_squares_line(minima);

  if (dump) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double lu = std::log(samples[i].first);
      const int b = bin_of(lu);
      dump->rows.push_back({lu, std::log(samples[i].second), b,
                            bin_src[b] == static_cast<std::ptrdiff_t>(i)});
    }
  }

  ExponentFit out;
  out.exponent = line.slope;
  out.constant = std::exp(line.intercept);
  out.window = {std::exp(lu_min), std::exp(lu_max)};
  out.bins = bins;
  out.max_residual = line.max_residual;
  out.envelope = std::move(minima);
  return out;
}

ExponentFit loj_function_exponent(const PiecewiseFn& f, const Point& a,
                                  double window, double grid_step,
                                  EnvelopeDump* dump) {
  if (static_cast<int>(a.size()) != f.arity())
    throw ValidationError("loj_function_exponent: base point has wrong dimension");
  if (!(window >= 40 * grid_step))
    throw ValidationError("loj_function_exponent: window too small for the grid step");
  const int m = f.arity();
  const AnchoredGrid grid = anchored_grid(m, window, grid_step);
  const double fa = f.eval(a);

  std::vector<double> val(grid.total);
  parallel_chunks(grid.total, [&](std::size_t, std::size_t begin,
                                  std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      val[i] = f.eval(grid.decode(a, grid_step, i, m));
  });

  // Level-set capture: the value gap must be explainable by one grid cell of
  // local variation, read off the neighboring grid values.
  std::vector<char> in_z(grid.total, 0);
  std::size_t z_count = 0;
  {
    std::vector<std::size_t> stride(m);
    std::size_t s = 1;
    for (int j = 0; j < m; ++j) {
      stride[j] = s;
      s *= static_cast<std::size_t>(grid.side);
    }
    for (std::size_t i = 0; i < grid.total; ++i) {
      double var = 0;
      std::size_t rem = i;
      for (int j = 0; j < m; ++j) {
        const int dj = static_cast<int>(rem % grid.side);
        rem /= grid.side;
        if (dj > 0) var = std::max(var, std::abs(val[i - stride[j]] - val[i]));
        if (dj + 1 < grid.side)
          var = std::max(var, std::abs(val[i + stride[j]] - val[i]));
      }
      if (std::abs(val[i] - fa) <= 1.2 * var + 1e-15) {
        in_z[i] = 1;
        ++z_count;
      }
    }
  }
  if (z_count == 0)
    throw ValidationError("loj_function_exponent: level set sample is empty");
  if (10 * z_count > 9 * grid.total)
    throw NumericError(
        "loj_function_exponent: function is constant at sampling accuracy "
        "over the window");

  std::vector<Point> z_raw;
  z_raw.reserve(z_count);
  for (std::size_t i = 0; i < grid.total; ++i) {
    if (in_z[i]) z_raw.push_back(grid.decode(a, grid_step, i, m));
  }
  const std::vector<Point> z = collapse_cores(
      z_raw, 2.0 * grid_step * std::sqrt(static_cast<double>(m)),
      0.1 * window);

  const double u_lo = 10 * grid_step;
  const double u_hi = 0.3 * window;
  std::vector<double> u(grid.total, 0.0);
  parallel_chunks(grid.total, [&](std::size_t, std::size_t begin,
                                  std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!in_z[i]) u[i] = min_dist_to(grid.decode(a, grid_step, i, m), z);
    }
  });

  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < grid.total; ++i) {
    if (in_z[i]) continue;
    const double v = std::abs(val[i] - fa);
    if (!(v > 0)) continue;
    if (u[i] < u_lo || u[i] > u_hi) {
      dump_row(dump, u[i], v);
      continue;
    }
    samples.push_back({u[i], v});
  }
  return fit_envelope(samples, choose_bins(samples.size()), dump);
}

ExponentFit separation_exponent(const PointCloud& x_cloud,
                                const PointCloud& y_cloud, const Point& a,
                                double window, EnvelopeDump* dump) {
  validate_cloud(x_cloud);
  validate_cloud(y_cloud);
  if (x_cloud.dim != y_cloud.dim)
    throw ValidationError("separation_exponent: dimensions differ");
  if (static_cast<int>(a.size()) != x_cloud.dim)
    throw ValidationError("separation_exponent: base point has wrong dimension");
  if (!(window > 0))
    throw ValidationError("separation_exponent: window must be positive");
  if (x_cloud.empty() || y_cloud.empty())
    throw ValidationError("separation_exponent: empty cloud");
  const double res = std::max(x_cloud.resolution, y_cloud.resolution);

  std::vector<std::size_t> near;
  for (std::size_t i = 0; i < x_cloud.size(); ++i) {
    if (dist(x_cloud.points[i], a) <= window) near.push_back(i);
  }
  if (near.empty())
    throw ValidationError("separation_exponent: no X samples near the base point");

  std::vector<double> v(near.size());
  parallel_chunks(near.size(), [&](std::size_t, std::size_t begin,
                                   std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      v[i] = dist_point_set(x_cloud.points[near[i]], y_cloud);
  });

  std::vector<Point> z_raw;
  for (std::size_t i = 0; i < near.size(); ++i) {
    if (v[i] <= 2 * res) z_raw.push_back(x_cloud.points[near[i]]);
  }
  if (z_raw.empty())
    throw ValidationError("separation_exponent: empty sampled intersection");
  if (min_dist_to(a, z_raw) > 2 * res)
    throw ValidationError(
        "separation_exponent: base point is not near the sampled intersection");
  if (quantile(v, 0.9) <= 3 * res)
    throw NumericError(
        "separation_exponent: the sets coincide near the base point at "
        "sampling accuracy (interior case)");

  const std::vector<Point> z = collapse_cores(z_raw, 3 * res, 0.1 * window);

  // Distances below a few resolutions are noise on either axis, so they are
  // excluded from the fit window.
  const double u_lo = 10 * res;
  const double u_hi = 0.3 * window;
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < near.size(); ++i) {
    const double u = min_dist_to(x_cloud.points[near[i]], z);
    if (!(u > 0) || !(v[i] > 0)) continue;
    if (u < u_lo || u > u_hi || v[i] < 3 * res) {
      dump_row(dump, u, v[i]);
      continue;
    }
    samples.push_back({u, v[i]});
  }
  return fit_envelope(samples, choose_bins(samples.size()), dump);
}

SubgradientExponentResult subgradient_exponent(const PiecewiseFn& f,
                                               double window, double grid_step,
                                               const SubgradientConfig& cfg,
                                               EnvelopeDump* dump) {
  validate_config(cfg, f.arity());
  if (!(window >= 20 * grid_step))
    throw ValidationError("subgradient_exponent: window too small for the grid step");
  const int m = f.arity();
  const Point zero(m, 0.0);
  if (std::abs(f.eval(zero)) > 1e-12)
    throw ValidationError("subgradient_exponent: requires f(0) = 0");

  SubgradientExponentResult res;
  {
    const std::vector<Point> limits0 = gradient_limits(f, zero, cfg);
    if (limits0.empty())
      throw NumericError(
          "subgradient_exponent: no gradient samples near the origin");
    Polytope hull;
    hull.dim = m;
    hull.vertices = limits0;
    res.h_at_zero = min_norm_point(hull).second;
    res.hypothesis_ok = res.h_at_zero <= 3 * cfg.hull_tol;
  }

  const AnchoredGrid grid = anchored_grid(m, window, grid_step);
  std::vector<double> u(grid.total), h(grid.total, 0.0);
  for (std::size_t i = 0; i < grid.total; ++i)
    u[i] = std::abs(f.eval(grid.decode(zero, grid_step, i, m)));

  parallel_chunks(grid.total, [&](std::size_t, std::size_t begin,
                                  std::size_t end) {
    SubgradientConfig local = cfg;
    for (std::size_t i = begin; i < end; ++i) {
      if (!(u[i] > 0)) continue;
      local.seed = cfg.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
      const std::vector<Point> limits =
          gradient_limits(f, grid.decode(zero, grid_step, i, m), local);
      if (limits.empty()) continue;
      Polytope hull;
      hull.dim = m;
      hull.vertices = limits;
      h[i] = min_norm_point(hull).second;
    }
  });

  std::vector<double> u_positive;
  for (std::size_t i = 0; i < grid.total; ++i) {
    if (u[i] > 0 && h[i] > 0) u_positive.push_back(u[i]);
  }
  if (u_positive.empty())
    throw NumericError("subgradient_exponent: function vanishes on the grid");
  const double q_lo = quantile(u_positive, 0.02);
  const double q_hi = quantile(u_positive, 0.98);

  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < grid.total; ++i) {
    if (!(u[i] > 0) || !(h[i] > 0)) continue;
    if (u[i] < q_lo || u[i] > q_hi) {
      dump_row(dump, u[i], h[i]);
      continue;
    }
    samples.push_back({u[i], h[i]});
  }
  res.fit = fit_envelope(samples, choose_bins(samples.size()), dump);
  res.theta_in_range = res.fit.exponent > 0 && res.fit.exponent < 1;
  return res;
}

PhiProfile phi_profile(const PiecewiseFn& f, double ball_radius,
                       const std::vector<double>& t_grid, double grid_step,
                       const SubgradientConfig& cfg) {
  validate_config(cfg, f.arity());
  if (!(ball_radius >= 5 * grid_step))
    throw ValidationError("phi_profile: ball too small for the grid step");
  if (t_grid.empty()) throw ValidationError("phi_profile: empty level grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw ValidationError("phi_profile: levels must be positive and increasing");
  }
  const int m = f.arity();
  const Point zero(m, 0.0);
  const double level_tol = f.lipschitz_bound() * grid_step;

  const AnchoredGrid grid = anchored_grid(m, ball_radius, grid_step);
  std::vector<Point> pts;
  std::vector<double> u;
  for (std::size_t i = 0; i < grid.total; ++i) {
    Point x = grid.decode(zero, grid_step, i, m);
    if (norm(x) > ball_radius) continue;
    u.push_back(std::abs(f.eval(x)));
    pts.push_back(std::move(x));
  }

  std::vector<char> needed(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (double t : t_grid) {
      if (std::abs(u[i] - t) <= level_tol) {
        needed[i] = 1;
        break;
      }
    }
  }

  std::vector<double> h(pts.size(), kInf);
  parallel_chunks(pts.size(), [&](std::size_t, std::size_t begin,
                                  std::size_t end) {
    SubgradientConfig local = cfg;
    for (std::size_t i = begin; i < end; ++i) {
      if (!needed[i]) continue;
      local.seed = cfg.seed ^ (0x9E3779B97F4A7C15ULL * (i + 1));
      const std::vector<Point> limits = gradient_limits(f, pts[i], local);
      if (limits.empty()) continue;
      Polytope hull;
      hull.dim = m;
      hull.vertices = limits;
      h[i] = min_norm_point(hull).second;
    }
  });

  PhiProfile out;
  for (double t : t_grid) {
    PhiRow row;
    row.t = t;
    double best = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::abs(u[i] - t) > level_tol) continue;
      ++row.shell_count;
      best = std::min(best, h[i]);
    }
    row.ok = row.shell_count > 0 && std::isfinite(best);
    row.phi = row.ok ? best : 0.0;
    out.rows.push_back(row);
  }

  double prev = -kInf;
  double lowest = kInf;
  const PhiRow* first_ok = nullptr;
  for (const auto& row : out.rows) {
    if (!row.ok) continue;
    if (!first_ok) first_ok = &row;
    if (row.phi < prev - 1e-12) out.monotone = false;
    prev = row.phi;
    lowest = std::min(lowest, row.phi);
  }
  if (first_ok) out.vanishes_at_zero = first_ok->phi <= lowest + 1e-12;
  return out;
}

namespace {

OneDimExponentResult one_dim_from_samples(
    const std::vector<double>& ts, const std::vector<double>& phis,
    const std::vector<std::pair<double, double>>& grad_samples) {
  for (double p : phis) {
    if (!(p > 0))
      throw ValidationError(
          "one_dim_gradient_exponent: phi must be positive on the window");
  }
  const AlphaFit af = fit_alpha(ts, phis);
  OneDimExponentResult out;
  out.alpha = af.alpha;
  if (!(out.alpha > 0))
    throw NumericError(
        "one_dim_gradient_exponent: phi does not vanish at 0 (alpha <= 0)");
  out.theta = std::max(0.0, (out.alpha - 1.0) / out.alpha);

  if (out.alpha >= 1.0 &&
      grad_samples.size() >= static_cast<std::size_t>(3 * 5)) {
    out.cross_check_applicable = true;
    out.envelope_fit =
        fit_envelope(grad_samples, choose_bins(grad_samples.size()));
    out.theta_envelope = out.envelope_fit.exponent;
    if (std::abs(out.theta - out.theta_envelope) > 0.05) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "one_dim_gradient_exponent: profile fit %.4f and envelope "
                    "fit %.4f disagree",
                    out.theta, out.theta_envelope);
      throw NumericError(buf);
    }
  }
  return out;
}

}  // namespace

OneDimExponentResult one_dim_gradient_exponent(
    const ExprFn& phi, std::pair<double, double> t_window) {
  if (!phi.valid() || phi.arity() != 1)
    throw ValidationError("one_dim_gradient_exponent: phi must have arity 1");
  const auto [lo, hi] = t_window;
  if (!(lo > 0) || !(hi > lo))
    throw ValidationError("one_dim_gradient_exponent: bad t window");

  const int n = 240;
  std::vector<double> ts(n), phis(n);
  const double ratio = hi / lo;
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
    ts[i] = t;
    phis[i] = phi(std::span<const double>(&ts[i], 1));
  }

  std::vector<std::pair<double, double>> grads;
  for (int i = 0; i < n; ++i) {
    const double step = 1e-6 * ts[i];
    const double tp = ts[i] + step, tm = ts[i] - step;
    const double d =
        (phi(std::span<const double>(&tp, 1)) -
         phi(std::span<const double>(&tm, 1))) /
        (2 * step);
    if (phis[i] > 0 && std::abs(d) > 0) grads.push_back({phis[i], std::abs(d)});
  }
  return one_dim_from_samples(ts, phis, grads);
}

OneDimExponentResult one_dim_gradient_exponent(
    const std::vector<std::pair<double, double>>& profile,
    std::pair<double, double> t_window) {
  const auto [lo, hi] = t_window;
  if (!(lo > 0) || !(hi > lo))
    throw ValidationError("one_dim_gradient_exponent: bad t window");
  std::vector<std::pair<double, double>> rows;
  for (const auto& r : profile) {
    if (r.first >= lo && r.first <= hi) rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end());
  if (rows.size() < 12)
    throw ValidationError(
        "one_dim_gradient_exponent: too few profile points in the window");

  std::vector<double> ts, phis;
  for (const auto& [t, p] : rows) {
    ts.push_back(t);
    phis.push_back(p);
  }
  std::vector<std::pair<double, double>> grads;
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double d =
        (phis[i + 1] - phis[i - 1]) / (ts[i + 1] - ts[i - 1]);
    if (phis[i] > 0 && std::abs(d) > 0) grads.push_back({phis[i], std::abs(d)});
  }
  return one_dim_from_samples(ts, phis, grads);
}

}  // namespace tamegeo
