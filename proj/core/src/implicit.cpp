#include "tamegeo/implicit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "tamegeo/errors.hpp"
#include "tamegeo/numerics.hpp"
#include "tamegeo/parallel.hpp"

namespace tamegeo {

void validate_spec(const ImplicitSetSpec& spec) {
  if (spec.dim <= 0) throw ValidationError("implicit set: dim must be positive");
  if (spec.box.empty() && spec.equalities.empty() && spec.inequalities.empty())
    throw ValidationError("implicit set: needs a constraint or a box");
  if (static_cast<int>(spec.box.size()) != spec.dim)
    throw ValidationError("implicit set: box must have one interval per axis");
  for (const auto& [lo, hi] : spec.box) {
    if (!(lo < hi)) throw ValidationError("implicit set: empty box interval");
  }
  if (!(spec.equality_tolerance > 0))
    throw ValidationError("implicit set: equality_tolerance must be positive");
  for (const auto& e : spec.equalities) {
    if (e.arity() != spec.dim)
      throw ValidationError("implicit set: equality arity mismatch");
  }
  for (const auto& g : spec.inequalities) {
    if (g.arity() != spec.dim)
      throw ValidationError("implicit set: inequality arity mismatch");
  }
}

namespace {

constexpr int kRefineSweeps = 20;
constexpr double kIneqSlack = 1e-9;

std::string format_point(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

bool inequalities_ok(const ImplicitSetSpec& spec, const Point& p) {
  for (const auto& g : spec.inequalities) {
    if (g.eval(p) < -kIneqSlack) return false;
  }
  return true;
}

double equality_residual(const ImplicitSetSpec& spec, const Point& p) {
  double r = 0;
  for (const auto& e : spec.equalities) r = std::max(r, std::abs(e.eval(p)));
  return r;
}

void clamp_to_box(const ImplicitSetSpec& spec, Point& p) {
  for (int i = 0; i < spec.dim; ++i)
    p[i] = std::clamp(p[i], spec.box[i].first, spec.box[i].second);
}

// A grid point can only reach the zero set of e within `reach` if the
// residual is linearly attainable there; generous slack covers curvature.
bool within_reach(const ImplicitSetSpec& spec, const Point& p, double reach) {
  for (const auto& e : spec.equalities) {
    const double v = std::abs(e.eval(p));
    if (v <= spec.equality_tolerance) continue;
    const Point g =
        fd_gradient([&](std::span<const double> q) { return e.eval(q); }, p);
    const double gn = std::sqrt(squared_norm(g));
    if (v > 4.0 * gn * reach + spec.equality_tolerance) return false;
  }
  return true;
}

// Damped root-finding along each constraint gradient; keeps the iterate in
// the box and never lets an inequality slip.
Point refine(const ImplicitSetSpec& spec, Point p) {
  const double target = spec.equality_tolerance / 10.0;
  for (int sweep = 0; sweep < kRefineSweeps; ++sweep) {
    double worst = 0;
    for (const auto& e : spec.equalities) {
      const double v = e.eval(p);
      worst = std::max(worst, std::abs(v));
      if (std::abs(v) <= target / 2) continue;
      const Point g = fd_gradient([&](std::span<const double> q) { return e.eval(q); }, p);
      const double g2 = squared_norm(g);
      if (g2 < 1e-18) continue;  // flat spot; leave the point alone
      double damp = 1.0;
      for (int back = 0; back < 4; ++back) {
        Point cand = p;
        const double scale = damp * v / g2;
        for (int i = 0; i < spec.dim; ++i) cand[i] -= scale * g[i];
        clamp_to_box(spec, cand);
        if (std::abs(e.eval(cand)) < std::abs(v) && inequalities_ok(spec, cand)) {
          p = std::move(cand);
          break;
        }
        damp *= 0.5;
      }
    }
    if (worst <= target) break;
  }
  return p;
}

}  // namespace

PointCloud sample(const ImplicitSetSpec& spec, double grid_step,
                  std::uint64_t seed) {
  validate_spec(spec);
  if (!(grid_step > 0)) throw ValidationError("sample: grid_step must be positive");

  std::vector<std::size_t> counts(spec.dim);
  std::size_t total = 1;
  for (int i = 0; i < spec.dim; ++i) {
    const auto [lo, hi] = spec.box[i];
    if (grid_step > hi - lo)
      throw ValidationError("sample: grid_step exceeds a box edge");
    counts[i] = static_cast<std::size_t>(std::floor((hi - lo) / grid_step)) + 1;
    total *= counts[i];
  }

  const std::size_t chunks = chunk_count(total);
  std::vector<std::vector<Point>> kept(chunks);

  parallel_chunks(total, [&](std::size_t chunk, std::size_t begin,
                             std::size_t end) {
    Point p(spec.dim);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      for (int i = 0; i < spec.dim; ++i) {
        const std::size_t k = rest % counts[i];
        rest /= counts[i];
        const double jitter = hashed_uniform(
            seed, idx * static_cast<std::uint64_t>(spec.dim) + i, -0.25, 0.25);
        const auto [lo, hi] = spec.box[i];
        p[i] = std::clamp(lo + (static_cast<double>(k) + jitter) * grid_step,
                          lo, hi);
      }
      try {
        if (!inequalities_ok(spec, p)) continue;
        if (!spec.equalities.empty()) {
          const double reach =
              2.0 * grid_step * std::sqrt(static_cast<double>(spec.dim));
          if (!within_reach(spec, p, reach)) continue;
          Point refined = refine(spec, p);
          if (equality_residual(spec, refined) > spec.equality_tolerance)
            continue;
          if (dist(refined, p) > reach) continue;
          kept[chunk].push_back(std::move(refined));
        } else {
          kept[chunk].push_back(p);
        }
      } catch (const EvalDomainError& err) {
        throw ValidationError(std::string("sample: evaluation domain error at grid point ") +
                              format_point(p) + ": " + err.what());
      }
    }
  });

  PointCloud out;
  out.dim = spec.dim;
  out.resolution = grid_step * std::sqrt(static_cast<double>(spec.dim));
  double corner = 0;
  for (const auto& [lo, hi] : spec.box)
    corner += std::max(lo * lo, hi * hi);
  out.window_radius = std::sqrt(corner);
  for (auto& chunk : kept) {
    out.points.insert(out.points.end(),
                      std::make_move_iterator(chunk.begin()),
                      std::make_move_iterator(chunk.end()));
  }
  return out;
}

}  // namespace tamegeo
