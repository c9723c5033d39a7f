#include "tamegeo/expr.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tamegeo {

ExprFn ExprFn::constant(int arity, double c) {
  ExprFn e;
  e.arity_ = arity;
  Node n;
  n.op = Op::Const;
  n.value = c;
  e.nodes_.push_back(n);
  return e;
}

ExprFn ExprFn::var(int arity, int index) {
  if (index < 0 || index >= arity)
    throw ValidationError("expr: variable index " + std::to_string(index) +
                          " out of range for arity " + std::to_string(arity));
  ExprFn e;
  e.arity_ = arity;
  Node n;
  n.op = Op::Var;
  n.var = index;
  e.nodes_.push_back(n);
  return e;
}

ExprFn ExprFn::combine(Op op, const ExprFn& a, const ExprFn* b, double expo) {
  if (!a.valid() || (b && !b->valid()))
    throw ValidationError("expr: combining an empty expression");
  if (b && a.arity_ != b->arity_)
    throw ValidationError("expr: arity mismatch in combination");
  ExprFn e;
  e.arity_ = a.arity_;
  e.nodes_ = a.nodes_;
  const int lhs_root = static_cast<int>(e.nodes_.size()) - 1;
  int rhs_root = -1;
  if (b) {
    const int shift = static_cast<int>(e.nodes_.size());
    for (Node n : b->nodes_) {
      if (n.lhs >= 0) n.lhs += shift;
      if (n.rhs >= 0) n.rhs += shift;
      e.nodes_.push_back(n);
    }
    rhs_root = static_cast<int>(e.nodes_.size()) - 1;
  }
  Node n;
  n.op = op;
  n.lhs = lhs_root;
  n.rhs = rhs_root;
  n.expo = expo;
  e.nodes_.push_back(n);
  return e;
}

ExprFn operator+(const ExprFn& a, const ExprFn& b) {
  return ExprFn::combine(ExprFn::Op::Add, a, &b, 0);
}
ExprFn operator-(const ExprFn& a, const ExprFn& b) {
  return ExprFn::combine(ExprFn::Op::Sub, a, &b, 0);
}
ExprFn operator*(const ExprFn& a, const ExprFn& b) {
  return ExprFn::combine(ExprFn::Op::Mul, a, &b, 0);
}
ExprFn operator/(const ExprFn& a, const ExprFn& b) {
  return ExprFn::combine(ExprFn::Op::Div, a, &b, 0);
}
ExprFn operator-(const ExprFn& a) {
  return ExprFn::combine(ExprFn::Op::Neg, a, nullptr, 0);
}
ExprFn abs(const ExprFn& a) {
  return ExprFn::combine(ExprFn::Op::Abs, a, nullptr, 0);
}
ExprFn min(const ExprFn& a, const ExprFn& b) {
  return ExprFn::combine(ExprFn::Op::Min, a, &b, 0);
}
ExprFn max(const ExprFn& a, const ExprFn& b) {
  return ExprFn::combine(ExprFn::Op::Max, a, &b, 0);
}
ExprFn sqrt(const ExprFn& a) {
  return ExprFn::combine(ExprFn::Op::Sqrt, a, nullptr, 0);
}
ExprFn pow(const ExprFn& a, double exponent) {
  return ExprFn::combine(ExprFn::Op::Pow, a, nullptr, exponent);
}

namespace {

bool is_integer(double e) { return std::abs(e - std::round(e)) <= 1e-12; }

}  // namespace

double ExprFn::eval(std::span<const double> x) const {
  if (!valid()) throw ValidationError("expr: evaluating an empty expression");
  if (static_cast<int>(x.size()) != arity_)
    throw ValidationError("expr: argument has wrong dimension");

  thread_local std::vector<double> scratch;
  scratch.resize(nodes_.size());

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Const:
        scratch[i] = n.value;
        break;
      case Op::Var:
        scratch[i] = x[n.var];
        break;
      case Op::Add:
        scratch[i] = scratch[n.lhs] + scratch[n.rhs];
        break;
      case Op::Sub:
        scratch[i] = scratch[n.lhs] - scratch[n.rhs];
        break;
      case Op::Mul:
        scratch[i] = scratch[n.lhs] * scratch[n.rhs];
        break;
      case Op::Div: {
        const double d = scratch[n.rhs];
        if (d == 0.0) throw EvalDomainError("expr: division by zero");
        scratch[i] = scratch[n.lhs] / d;
        break;
      }
      case Op::Neg:
        scratch[i] = -scratch[n.lhs];
        break;
      case Op::Abs:
        scratch[i] = std::abs(scratch[n.lhs]);
        break;
      case Op::Min:
        scratch[i] = std::min(scratch[n.lhs], scratch[n.rhs]);
        break;
      case Op::Max:
        scratch[i] = std::max(scratch[n.lhs], scratch[n.rhs]);
        break;
      case Op::Sqrt: {
        const double v = scratch[n.lhs];
        if (v < 0.0) throw EvalDomainError("expr: sqrt of a negative value");
        scratch[i] = std::sqrt(v);
        break;
      }
      case Op::Pow: {
        const double base = scratch[n.lhs];
        const double e = n.expo;
        if (is_integer(e)) {
          const double r = std::round(e);
          if (base == 0.0 && r < 0.0)
            throw EvalDomainError("expr: zero base with negative power");
          scratch[i] = std::pow(base, r);
        } else {
          if (base < 0.0)
            throw EvalDomainError(
                "expr: fractional power of a negative base");
          scratch[i] = std::pow(base, e);
        }
        break;
      }
    }
  }
  return scratch.back();
}

}  // namespace tamegeo
