#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "tamegeo/expr.hpp"
#include "tamegeo/geometry.hpp"

namespace tamegeo {

// One closed region of a piecewise function: the conjunction of g(x) >= 0
// over `region` (empty region = everywhere), the value on it, and optional
// analytic gradient components (empty = fall back to finite differences on
// the piece's value expression).
struct Piece {
  std::vector<ExprFn> region;
  ExprFn value;
  std::vector<ExprFn> gradient;
};

struct PiecewiseValidation {
  bool covered = true;           // every probe point lies in some region
  bool overlaps_agree = true;    // piece values match on overlaps (1e-9)
  bool gradients_match = true;   // declared gradients match central FD (1e-6)
  std::vector<std::string> issues;
};

// Lipschitz function given piecewise; pieces are closed regions whose
// boundaries (seams) carry the nonsmooth locus.
class PiecewiseFn {
 public:
  PiecewiseFn() = default;
  PiecewiseFn(int arity, double lipschitz_bound, std::vector<Piece> pieces);

  static PiecewiseFn from_expr(const ExprFn& f, double lipschitz_bound);

  int arity() const { return arity_; }
  double lipschitz_bound() const { return lipschitz_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  // Index of the first piece whose region contains x; -1 if none.
  int piece_at(std::span<const double> x) const;

  // Value of the first containing piece; throws EvalDomainError when no
  // region contains x.
  double eval(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return eval(x); }
  // Braced argument lists do not convert to std::span before C++26.
  double eval(std::initializer_list<double> x) const {
    return eval(std::span<const double>(x.begin(), x.size()));
  }
  double operator()(std::initializer_list<double> x) const { return eval(x); }
  int piece_at(std::initializer_list<double> x) const {
    return piece_at(std::span<const double>(x.begin(), x.size()));
  }
  Point piece_gradient(int i, std::initializer_list<double> x) const {
    return piece_gradient(i, std::span<const double>(x.begin(), x.size()));
  }
  double seam_distance(std::initializer_list<double> x) const {
    return seam_distance(std::span<const double>(x.begin(), x.size()));
  }

  // Gradient of piece i at x: analytic components when declared, otherwise
  // central finite differences on the piece's value expression (which is
  // defined beyond the region boundary, so differencing never crosses a
  // seam).
  Point piece_gradient(int i, std::span<const double> x) const;

  // First-order estimate of the distance from x to the nearest region
  // boundary: min over all region predicates of |g(x)| / max(||grad g||, eps).
  double seam_distance(std::span<const double> x) const;

  // Probes an axis-aligned box on a grid with `per_axis` points per axis:
  // region cover, value agreement on overlaps, declared-gradient vs central
  // finite differences at points well inside their region.
  PiecewiseValidation validate(
      const std::vector<std::pair<double, double>>& box, int per_axis) const;

 private:
  int arity_ = 0;
  double lipschitz_ = 0.0;
  std::vector<Piece> pieces_;
};

}  // namespace tamegeo
