#include "tamegeo/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tamegeo/errors.hpp"
#include "tamegeo/numerics.hpp"

namespace tamegeo {

namespace {
constexpr double kRegionSlack = 1e-12;
constexpr double kGradEps = 1e-9;

bool in_region(const Piece& piece, std::span<const double> x) {
  for (const auto& g : piece.region) {
    if (g(x) < -kRegionSlack) return false;
  }
  return true;
}
}  // namespace

PiecewiseFn::PiecewiseFn(int arity, double lipschitz_bound,
                         std::vector<Piece> pieces)
    : arity_(arity), lipschitz_(lipschitz_bound), pieces_(std::move(pieces)) {
  if (arity_ <= 0) throw ValidationError("piecewise: arity must be positive");
  if (!(lipschitz_ > 0))
    throw ValidationError("piecewise: lipschitz bound must be positive");
  if (pieces_.empty()) throw ValidationError("piecewise: no pieces");
  for (const auto& p : pieces_) {
    if (!p.value.valid() || p.value.arity() != arity_)
      throw ValidationError("piecewise: piece value has wrong arity");
    for (const auto& g : p.region) {
      if (!g.valid() || g.arity() != arity_)
        throw ValidationError("piecewise: region predicate has wrong arity");
    }
    if (!p.gradient.empty()) {
      if (static_cast<int>(p.gradient.size()) != arity_)
        throw ValidationError(
            "piecewise: gradient must have one component per variable");
      for (const auto& g : p.gradient) {
        if (!g.valid() || g.arity() != arity_)
          throw ValidationError("piecewise: gradient component has wrong arity");
      }
    }
  }
}

PiecewiseFn PiecewiseFn::from_expr(const ExprFn& f, double lipschitz_bound) {
  if (!f.valid()) throw ValidationError("piecewise: invalid expression");
  Piece p;
  p.value = f;
  return PiecewiseFn(f.arity(), lipschitz_bound, {std::move(p)});
}

int PiecewiseFn::piece_at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw ValidationError("piecewise: argument has wrong dimension");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (in_region(pieces_[i], x)) return static_cast<int>(i);
  }
  return -1;
}

double PiecewiseFn::eval(std::span<const double> x) const {
  const int i = piece_at(x);
  if (i < 0)
    throw EvalDomainError("piecewise: point is outside every region");
  return pieces_[i].value(x);
}

Point PiecewiseFn::piece_gradient(int i, std::span<const double> x) const {
  if (i < 0 || i >= static_cast<int>(pieces_.size()))
    throw ValidationError("piecewise: piece index out of range");
  if (static_cast<int>(x.size()) != arity_)
    throw ValidationError("piecewise: argument has wrong dimension");
  const Piece& p = pieces_[i];
  if (!p.gradient.empty()) {
    Point g(arity_);
    for (int j = 0; j < arity_; ++j) g[j] = p.gradient[j](x);
    return g;
  }
  const ExprFn& v = p.value;
  return fd_gradient([&v](std::span<const double> y) { return v.eval(y); },
                     Point(x.begin(), x.end()));
}

double PiecewiseFn::seam_distance(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != arity_)
    throw ValidationError("piecewise: argument has wrong dimension");
  double best = kInf;
  const Point xv(x.begin(), x.end());
  for (const auto& p : pieces_) {
    for (const auto& g : p.region) {
      const double gv = g(x);
      const Point grad = fd_gradient(
          [&g](std::span<const double> y) { return g.eval(y); }, xv);
      const double gn = std::max(norm(grad), kGradEps);
      best = std::min(best, std::abs(gv) / gn);
    }
  }
  return best;  // +inf when no piece has a region predicate
}

PiecewiseValidation PiecewiseFn::validate(
    const std::vector<std::pair<double, double>>& box, int per_axis) const {
  if (static_cast<int>(box.size()) != arity_)
    throw ValidationError("piecewise: box has wrong dimension");
  if (per_axis < 2) throw ValidationError("piecewise: need >= 2 probes per axis");
  for (const auto& [lo, hi] : box) {
    if (!(lo < hi)) throw ValidationError("piecewise: empty box axis");
  }

  PiecewiseValidation out;
  auto note = [&out](const char* what, const Point& x) {
    char buf[256];
    int off = std::snprintf(buf, sizeof buf, "%s at (", what);
    for (std::size_t j = 0; j < x.size() && off < 200; ++j)
      off += std::snprintf(buf + off, sizeof buf - off, "%s%.6g",
                           j ? ", " : "", x[j]);
    std::snprintf(buf + off, sizeof buf - off, ")");
    if (out.issues.size() < 32) out.issues.push_back(buf);
  };

  std::size_t total = 1;
  for (int j = 0; j < arity_; ++j) total *= static_cast<std::size_t>(per_axis);

  Point x(arity_);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (int j = 0; j < arity_; ++j) {
      const int s = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      x[j] = box[j].first +
             (box[j].second - box[j].first) * s / double(per_axis - 1);
    }

    std::vector<int> holders;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (in_region(pieces_[i], x)) holders.push_back(static_cast<int>(i));
    }
    if (holders.empty()) {
      out.covered = false;
      note("uncovered point", x);
      continue;
    }
    const double v0 = pieces_[holders[0]].value(x);
    for (std::size_t h = 1; h < holders.size(); ++h) {
      if (std::abs(pieces_[holders[h]].value(x) - v0) > 1e-9) {
        out.overlaps_agree = false;
        note("overlap disagreement", x);
      }
    }
    // Compare declared gradients with finite differences only well inside a
    // region, where the one-sided geometry cannot bias the differences.
    if (holders.size() == 1) {
      const Piece& p = pieces_[holders[0]];
      if (!p.gradient.empty() && seam_distance(x) > 1e-4) {
        const ExprFn& v = p.value;
        const Point fd = fd_gradient(
            [&v](std::span<const double> y) { return v.eval(y); }, x);
        Point an(arity_);
        for (int j = 0; j < arity_; ++j) an[j] = p.gradient[j](x);
        double gap = 0;
        for (int j = 0; j < arity_; ++j)
          gap = std::max(gap, std::abs(an[j] - fd[j]));
        if (gap > 1e-6) {
          out.gradients_match = false;
          note("gradient mismatch", x);
        }
      }
    }
  }
  return out;
}

}  // namespace tamegeo
