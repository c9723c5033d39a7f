#include <cmath>

#include "doctest.h"
#include "tamegeo/errors.hpp"
#include "tamegeo/expr.hpp"

using namespace tamegeo;

namespace {

ExprFn x() { return ExprFn::var(2, 0); }
ExprFn y() { return ExprFn::var(2, 1); }
ExprFn c(double v) { return ExprFn::constant(2, v); }

}  // namespace

TEST_CASE("expression arithmetic evaluates") {
  const ExprFn f = x() * x() + c(3.0) * y();
  CHECK(f.eval({2.0, 1.0}) == doctest::Approx(7.0));
  CHECK(f.arity() == 2);
  const ExprFn g = (x() - y()) / (x() + y());
  CHECK(g.eval({3.0, 1.0}) == doctest::Approx(0.5));
}

TEST_CASE("abs, min, max, sqrt, pow") {
  CHECK(abs(x() * c(-1.0)).eval({2.5, 0.0}) == doctest::Approx(2.5));
  CHECK(min(x(), y()).eval({2.0, -3.0}) == doctest::Approx(-3.0));
  CHECK(max(x(), y()).eval({2.0, -3.0}) == doctest::Approx(2.0));
  CHECK(sqrt(x()).eval({9.0, 0.0}) == doctest::Approx(3.0));
  CHECK(pow(x(), 1.5).eval({4.0, 0.0}) == doctest::Approx(8.0));
  CHECK(pow(x(), 3.0).eval({-2.0, 0.0}) == doctest::Approx(-8.0));
}

TEST_CASE("negation") {
  CHECK((-x()).eval({4.0, 0.0}) == doctest::Approx(-4.0));
  CHECK((x() - y()).eval({1.0, 4.0}) == doctest::Approx(-3.0));
}

TEST_CASE("evaluation never returns NaN: domain failures throw") {
  CHECK_THROWS_AS((x() / y()).eval({1.0, 0.0}), EvalDomainError);
  CHECK_THROWS_AS(sqrt(x()).eval({-1.0, 0.0}), EvalDomainError);
  CHECK_THROWS_AS(sqrt(x()).eval({-1e-13, 0.0}), EvalDomainError);
  CHECK_THROWS_AS(pow(x(), 0.5).eval({-4.0, 0.0}), EvalDomainError);
  CHECK_THROWS_AS(pow(x(), -2.0).eval({0.0, 0.0}), EvalDomainError);
}

TEST_CASE("arity checks") {
  const ExprFn f = x() + y();
  CHECK_THROWS_AS(f.eval({1.0}), ValidationError);
  const ExprFn one = ExprFn::var(1, 0);
  CHECK_THROWS_AS(one + f, ValidationError);
  CHECK_THROWS_AS(ExprFn::var(2, 5), ValidationError);
}

TEST_CASE("deep nesting evaluates in one pass") {
  ExprFn f = x();
  for (int i = 0; i < 100; ++i) f = f + y();
  CHECK(f.eval({1.0, 0.5}) == doctest::Approx(51.0));
}
