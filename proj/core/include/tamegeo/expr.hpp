#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "tamegeo/errors.hpp"

namespace tamegeo {

// Arithmetic expression over variables x_0 .. x_{arity-1}. Nodes are stored
// in evaluation order (children before parents, root last), so eval is a
// single array walk. Division by zero, sqrt of a negative value and
// fractional powers of negative bases throw EvalDomainError; evaluation
// never produces NaN.
class ExprFn {
 public:
  enum class Op {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
    Min,
    Max,
    Sqrt,
    Pow
  };

  struct Node {
    Op op = Op::Const;
    double value = 0.0;  // Const payload
    int var = -1;        // Var payload
    int lhs = -1;
    int rhs = -1;
    double expo = 0.0;  // Pow payload; integer or rational exponent
  };

  ExprFn() = default;

  static ExprFn constant(int arity, double c);
  static ExprFn var(int arity, int index);

  int arity() const { return arity_; }
  bool valid() const { return !nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }

  double eval(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return eval(x); }
  // Braced argument lists do not convert to std::span before C++26.
  double eval(std::initializer_list<double> x) const {
    return eval(std::span<const double>(x.begin(), x.size()));
  }
  double operator()(std::initializer_list<double> x) const { return eval(x); }

  // Structural builders; operands must share arity.
  friend ExprFn operator+(const ExprFn& a, const ExprFn& b);
  friend ExprFn operator-(const ExprFn& a, const ExprFn& b);
  friend ExprFn operator*(const ExprFn& a, const ExprFn& b);
  friend ExprFn operator/(const ExprFn& a, const ExprFn& b);
  friend ExprFn operator-(const ExprFn& a);
  friend ExprFn abs(const ExprFn& a);
  friend ExprFn min(const ExprFn& a, const ExprFn& b);
  friend ExprFn max(const ExprFn& a, const ExprFn& b);
  friend ExprFn sqrt(const ExprFn& a);
  friend ExprFn pow(const ExprFn& a, double exponent);

 private:
  static ExprFn combine(Op op, const ExprFn& a, const ExprFn* b, double expo);

  int arity_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace tamegeo
