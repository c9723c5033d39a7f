#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "tamegeo/errors.hpp"
#include "tamegeo/exponents.hpp"
#include "tamegeo/expr.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/numerics.hpp"
#include "tamegeo/piecewise.hpp"

using namespace tamegeo;

namespace {

std::vector<std::pair<double, double>> power_law(double c, double l, int n,
                                                 double u_lo, double u_hi) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double u =
        u_lo * std::pow(u_hi / u_lo, static_cast<double>(i) / (n - 1));
    out.push_back({u, c * std::pow(u, l)});
  }
  return out;
}

// f(x) = sqrt(|x|) with an unbounded derivative at 0.
PiecewiseFn sqrt_abs() {
  const ExprFn x = ExprFn::var(1, 0);
  Piece pos;
  pos.region = {x};
  pos.value = sqrt(x);
  Piece neg;
  neg.region = {-x};
  neg.value = sqrt(-x);
  return PiecewiseFn(1, 100.0, {pos, neg});
}

PiecewiseFn abs_xy() {
  const ExprFn x = ExprFn::var(2, 0);
  const ExprFn y = ExprFn::var(2, 1);
  Piece pos;
  pos.region = {x};
  pos.value = x * y;
  pos.gradient = {y, x};
  Piece neg;
  neg.region = {-x};
  neg.value = (-x) * y;
  neg.gradient = {-y, -x};
  return PiecewiseFn(2, 4.0, {pos, neg});
}

PointCloud axis_cloud(int axis, double step = 1e-4) {
  std::vector<Point> pts;
  for (double s = -1.0; s <= 1.0 + step / 2; s += step) {
    Point p(2, 0.0);
    p[axis] = s;
    pts.push_back(std::move(p));
  }
  return make_cloud(2, std::move(pts), 2.5 * step);
}

PointCloud parabola_cloud(double ds = 1e-4) {
  std::vector<Point> pts;
  for (double s = -1.0; s <= 1.0 + ds / 2; s += ds) pts.push_back({s, s * s});
  return make_cloud(2, std::move(pts), 2.5 * ds);
}

}  // namespace

TEST_CASE("envelope fit recovers an exact power law") {
  const auto samples = power_law(2.0, 1.5, 60, 1e-2, 1.0);
  EnvelopeDump dump;
  const ExponentFit fit = fit_envelope(samples, 6, &dump);
  CHECK(fit.exponent == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(fit.constant == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit.bins == 6);
  CHECK(fit.max_residual <= 1e-9);
  CHECK(fit.window.first == doctest::Approx(1e-2));
  CHECK(fit.window.second == doctest::Approx(1.0));
  CHECK(fit.envelope.size() == 6);

  CHECK(dump.rows.size() == samples.size());
  int minima = 0;
  for (const auto& r : dump.rows) {
    CHECK(r.bin >= 0);
    CHECK(r.bin < 6);
    if (r.is_min) ++minima;
  }
  CHECK(minima == 6);
}

TEST_CASE("envelope fit ignores noise above the floor") {
  auto samples = power_law(2.0, 1.5, 400, 1e-2, 1.0);
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i].second *= 1.0 + 4.0 * hashed_uniform(7, i, 0.0, 1.0);
  const ExponentFit fit = fit_envelope(samples, 8);
  CHECK(fit.exponent == doctest::Approx(1.5).epsilon(0.07));
}

TEST_CASE("a valid envelope exponent can be raised on a bounded window") {
  const auto samples = power_law(3.0, 1.2, 90, 1e-3, 0.5);
  const ExponentFit fit = fit_envelope(samples, 6);
  const double raised = fit.exponent + 0.25;
  const double c_raised =
      fit.constant * std::pow(fit.window.second, fit.exponent - raised);
  for (const auto& [u, v] : samples)
    CHECK(v >= 0.99 * c_raised * std::pow(u, raised));
}

TEST_CASE("envelope fit input validation") {
  const auto ok = power_law(1.0, 1.0, 60, 1e-2, 1.0);
  CHECK_THROWS_AS(fit_envelope(ok, 4), ValidationError);
  CHECK_THROWS_AS(fit_envelope(power_law(1.0, 1.0, 10, 1e-2, 1.0), 5),
                  ValidationError);

  auto bad = ok;
  bad[3].first = 0.0;
  CHECK_THROWS_AS(fit_envelope(bad, 5), ValidationError);
  bad = ok;
  bad[3].second = -1.0;
  CHECK_THROWS_AS(fit_envelope(bad, 5), ValidationError);

  std::vector<std::pair<double, double>> flat(60, {0.5, 1.0});
  CHECK_THROWS_AS(fit_envelope(flat, 5), ValidationError);
}

TEST_CASE("sparse sampling across the window is a numeric failure") {
  std::vector<std::pair<double, double>> clustered;
  for (int i = 0; i < 15; ++i) {
    clustered.push_back({1e-3 * (1 + 1e-4 * i), 1.0});
    clustered.push_back({1.0 * (1 + 1e-4 * i), 1.0});
  }
  CHECK_THROWS_AS(fit_envelope(clustered, 10), NumericError);
}

TEST_CASE("value growth exponent of sqrt(|x|) at 0 is 1/2") {
  const ExponentFit fit =
      loj_function_exponent(sqrt_abs(), {0.0}, 0.1, 1e-4);
  CHECK(fit.exponent >= 0.45);
  CHECK(fit.exponent <= 0.55);
}

TEST_CASE("value growth exponent of x^2 at 0 is 2") {
  const ExprFn x = ExprFn::var(1, 0);
  const PiecewiseFn f = PiecewiseFn::from_expr(x * x, 10.0);
  const ExponentFit fit = loj_function_exponent(f, {0.0}, 0.5, 1e-3);
  CHECK(fit.exponent >= 1.85);
  CHECK(fit.exponent <= 2.15);
}

TEST_CASE("value growth exponent of |x| at 0 is 1") {
  const ExprFn x = ExprFn::var(1, 0);
  const PiecewiseFn f = PiecewiseFn::from_expr(abs(x), 2.0);
  const ExponentFit fit = loj_function_exponent(f, {0.0}, 0.5, 1e-3);
  CHECK(fit.exponent >= 0.9);
  CHECK(fit.exponent <= 1.1);
}

TEST_CASE("a constant function has no growth exponent") {
  const PiecewiseFn f =
      PiecewiseFn::from_expr(ExprFn::constant(1, 3.0), 1.0);
  CHECK_THROWS_AS(loj_function_exponent(f, {0.0}, 0.5, 1e-3), NumericError);
}

TEST_CASE("growth exponent argument validation") {
  const PiecewiseFn f = sqrt_abs();
  CHECK_THROWS_AS(loj_function_exponent(f, {0.0, 0.0}, 0.1, 1e-4),
                  ValidationError);
  CHECK_THROWS_AS(loj_function_exponent(f, {0.0}, 0.001, 1e-4),
                  ValidationError);
}

TEST_CASE("separation exponent of two transversal lines is 1") {
  const PointCloud xc = axis_cloud(0);
  const PointCloud yc = axis_cloud(1);
  const ExponentFit fit = separation_exponent(xc, yc, {0.0, 0.0}, 0.5);
  CHECK(fit.exponent >= 0.9);
  CHECK(fit.exponent <= 1.1);
}

TEST_CASE("separation exponent of a line tangent to a parabola is 2") {
  const PointCloud xc = axis_cloud(0);
  const PointCloud yc = parabola_cloud();
  const ExponentFit fit = separation_exponent(xc, yc, {0.0, 0.0}, 0.5);
  CHECK(fit.exponent >= 1.8);
  CHECK(fit.exponent <= 2.2);
}

TEST_CASE("separation rejects a base point away from the intersection") {
  const PointCloud xc = axis_cloud(0);
  const PointCloud yc = axis_cloud(1);
  CHECK_THROWS_AS(separation_exponent(xc, yc, {5.0, 0.0}, 0.5),
                  ValidationError);
  CHECK_THROWS_AS(separation_exponent(xc, yc, {0.8, 0.0}, 0.15),
                  ValidationError);
}

TEST_CASE("coinciding sets are the interior case") {
  const PointCloud xc = axis_cloud(0);
  CHECK_THROWS_AS(separation_exponent(xc, xc, {0.0, 0.0}, 0.5), NumericError);
}

TEST_CASE("subgradient exponent of |x| y at 0 is 1/2") {
  SubgradientConfig cfg;
  cfg.hull_tol = 1e-6;  // criticality cut at gradient sampling scale
  const SubgradientExponentResult res =
      subgradient_exponent(abs_xy(), 0.25, 0.01, cfg);
  CHECK(res.hypothesis_ok);
  CHECK(res.h_at_zero <= 3e-6);
  CHECK(res.theta_in_range);
  CHECK(res.fit.exponent >= 0.4);
  CHECK(res.fit.exponent <= 0.6);
}

TEST_CASE("subgradient exponent requires a zero at the origin") {
  const ExprFn x = ExprFn::var(1, 0);
  const PiecewiseFn f =
      PiecewiseFn::from_expr(x + ExprFn::constant(1, 1.0), 2.0);
  SubgradientConfig cfg;
  CHECK_THROWS_AS(subgradient_exponent(f, 0.3, 0.01, cfg), ValidationError);
  CHECK_THROWS_AS(
      subgradient_exponent(PiecewiseFn::from_expr(x, 2.0), 0.1, 0.01, cfg),
      ValidationError);  // window below 20 grid steps
}

TEST_CASE("a regular point fails the criticality hypothesis") {
  const ExprFn x = ExprFn::var(1, 0);
  const PiecewiseFn f = PiecewiseFn::from_expr(x, 2.0);
  SubgradientConfig cfg;
  cfg.hull_tol = 1e-6;
  const SubgradientExponentResult res = subgradient_exponent(f, 0.3, 0.01, cfg);
  CHECK_FALSE(res.hypothesis_ok);
  CHECK(res.h_at_zero == doctest::Approx(1.0).epsilon(1e-6));
  // The gradient norm does not vary with |f|, so the envelope is flat.
  CHECK(std::abs(res.fit.exponent) <= 0.02);
  CHECK_FALSE(res.theta_in_range);
}

TEST_CASE("level profile of |x|: flat slope with a vanishing foot") {
  const ExprFn x = ExprFn::var(1, 0);
  Piece pos;
  pos.region = {x};
  pos.value = x;
  pos.gradient = {ExprFn::constant(1, 1.0)};
  Piece neg;
  neg.region = {-x};
  neg.value = -x;
  neg.gradient = {ExprFn::constant(1, -1.0)};
  const PiecewiseFn f(1, 2.0, {pos, neg});

  SubgradientConfig cfg;
  const std::vector<double> ts{1e-3, 0.01, 0.05, 0.1, 0.3, 0.7};
  const PhiProfile prof = phi_profile(f, 0.5, ts, 1e-3, cfg);
  REQUIRE(prof.rows.size() == ts.size());
  // t = 1e-3 sits within one level tolerance of the critical value 0, so the
  // shell contains the kink and phi is ~0 there.
  CHECK(prof.rows[0].ok);
  CHECK(prof.rows[0].phi <= 1e-6);
  for (int i = 1; i <= 4; ++i) {
    CAPTURE(i);
    CHECK(prof.rows[i].ok);
    CHECK(prof.rows[i].phi == doctest::Approx(1.0).epsilon(1e-6));
  }
  // t = 0.7 is beyond the range of |f| on the ball.
  CHECK_FALSE(prof.rows[5].ok);
  CHECK(prof.monotone);
  CHECK(prof.vanishes_at_zero);
}

TEST_CASE("level profile argument validation") {
  const PiecewiseFn f =
      PiecewiseFn::from_expr(abs(ExprFn::var(1, 0)), 2.0);
  SubgradientConfig cfg;
  CHECK_THROWS_AS(phi_profile(f, 0.002, {0.1}, 1e-3, cfg), ValidationError);
  CHECK_THROWS_AS(phi_profile(f, 0.5, {}, 1e-3, cfg), ValidationError);
  CHECK_THROWS_AS(phi_profile(f, 0.5, {0.2, 0.1}, 1e-3, cfg), ValidationError);
  CHECK_THROWS_AS(phi_profile(f, 0.5, {-0.1, 0.2}, 1e-3, cfg), ValidationError);
}

TEST_CASE("one-dimensional exponent of t^alpha") {
  for (double alpha : {1.5, 2.0, 3.0}) {
    CAPTURE(alpha);
    const ExprFn t = ExprFn::var(1, 0);
    const OneDimExponentResult res =
        one_dim_gradient_exponent(pow(t, alpha), {1e-4, 0.1});
    const double want = (alpha - 1.0) / alpha;
    CHECK(std::abs(res.theta - want) <= 0.03);
    CHECK(res.alpha == doctest::Approx(alpha).epsilon(0.02));
    CHECK(res.cross_check_applicable);
    CHECK(std::abs(res.theta_envelope - res.theta) <= 0.05);
  }
}

TEST_CASE("sublinear growth keeps theta at zero without a cross check") {
  const ExprFn t = ExprFn::var(1, 0);
  const OneDimExponentResult res =
      one_dim_gradient_exponent(pow(t, 0.5), {1e-4, 0.1});
  CHECK(res.theta == 0.0);
  CHECK_FALSE(res.cross_check_applicable);
}

TEST_CASE("a profile that does not vanish has no growth exponent") {
  const ExprFn one = ExprFn::constant(1, 1.0);
  CHECK_THROWS_AS(one_dim_gradient_exponent(one, {1e-4, 0.1}), NumericError);
}

TEST_CASE("one-dimensional exponent from tabulated profiles") {
  std::vector<std::pair<double, double>> rows;
  for (int i = 0; i < 40; ++i) {
    const double t = 1e-3 * std::pow(100.0, i / 39.0);
    rows.push_back({t, t * t});
  }
  const OneDimExponentResult res = one_dim_gradient_exponent(rows, {1e-3, 0.1});
  CHECK(std::abs(res.theta - 0.5) <= 0.03);

  rows.resize(11);
  CHECK_THROWS_AS(one_dim_gradient_exponent(rows, {1e-3, 0.1}),
                  ValidationError);
}

TEST_CASE("one-dimensional exponent argument validation") {
  const ExprFn t = ExprFn::var(1, 0);
  CHECK_THROWS_AS(one_dim_gradient_exponent(pow(t, 2.0), {0.0, 0.1}),
                  ValidationError);
  CHECK_THROWS_AS(one_dim_gradient_exponent(pow(t, 2.0), {0.1, 0.1}),
                  ValidationError);
  CHECK_THROWS_AS(
      one_dim_gradient_exponent(ExprFn::var(2, 0), {1e-4, 0.1}),
      ValidationError);
}
