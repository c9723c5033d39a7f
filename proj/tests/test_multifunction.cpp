#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "tamegeo/errors.hpp"
#include "tamegeo/exponents.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/multifunction.hpp"
#include "tamegeo/numerics.hpp"

using namespace tamegeo;

namespace {

MultifunctionGraph fn_graph(const std::function<double(double)>& fn,
                            double lo, double hi, double step, double res,
                            double slab) {
  std::vector<Point> pts;
  for (double x = lo; x <= hi + step / 2; x += step) pts.push_back({x, fn(x)});
  MultifunctionGraph g;
  g.m = 1;
  g.n = 1;
  g.slab = slab;
  g.graph = make_cloud(2, std::move(pts), res);
  validate_graph(g);
  return g;
}

// Random finite multifunction: repeated x values make it multivalued.
MultifunctionGraph random_graph(std::uint64_t seed) {
  const int npts = 20 + static_cast<int>(hashed_uniform(seed, 0, 0, 180));
  std::vector<Point> pts;
  for (int i = 0; i < npts; ++i) {
    const double x =
        0.05 * std::floor(hashed_uniform(seed, 2 * i + 1, -20.0, 21.0));
    const double y =
        0.05 * std::floor(hashed_uniform(seed, 2 * i + 2, -20.0, 21.0));
    pts.push_back({x, y});
  }
  MultifunctionGraph g;
  g.m = 1;
  g.n = 1;
  g.slab = 0.03;
  g.graph = make_cloud(2, std::move(pts), 0.02);
  validate_graph(g);
  return g;
}

std::vector<double> section_values(const MultifunctionGraph& f, double x) {
  std::vector<double> ys;
  for (const auto& p : f.graph.points)
    if (std::abs(p[0] - x) <= f.slab) ys.push_back(p[1]);
  return ys;
}

double sup_min(const std::vector<double>& from, const std::vector<double>& to) {
  double worst = 0.0;
  for (double a : from) {
    double best = kInf;
    for (double b : to) best = std::min(best, std::abs(a - b));
    worst = std::max(worst, best);
  }
  return from.empty() ? 0.0 : worst;
}

enum class Mode { Strong, Lower, Upper, Weak, PointMode };

// Exhaustive comprehension over the sampled domain, straight from the
// predicate definitions.
std::vector<Point> oracle_preimage(const MultifunctionGraph& f, Mode mode,
                                   double a_or_y) {
  const double tau = preimage_tolerance(f);
  const std::vector<double> fa =
      mode == Mode::PointMode ? std::vector<double>{} : section_values(f, a_or_y);
  std::vector<Point> out;
  for (const auto& x : domain(f).points) {
    const std::vector<double> fx = section_values(f, x[0]);
    bool keep = false;
    switch (mode) {
      case Mode::Strong:
        keep = sup_min(fx, fa) <= tau && sup_min(fa, fx) <= tau &&
               !(fx.empty() != fa.empty());
        break;
      case Mode::Lower:
        keep = sup_min(fx, fa) <= tau && !(fa.empty() && !fx.empty());
        break;
      case Mode::Upper:
        keep = sup_min(fa, fx) <= tau && !(fx.empty() && !fa.empty());
        break;
      case Mode::Weak: {
        for (double yv : fx) {
          for (double yb : fa) keep = keep || std::abs(yv - yb) <= tau;
        }
        break;
      }
      case Mode::PointMode: {
        for (double yv : fx) keep = keep || std::abs(yv - a_or_y) <= tau;
        break;
      }
    }
    if (keep) out.push_back(x);
  }
  return out;
}

bool same_point_set(std::vector<Point> a, std::vector<Point> b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_CASE("graph validation") {
  MultifunctionGraph g;
  g.m = 1;
  g.n = 1;
  g.slab = 0.001;  // below resolution
  g.graph = make_cloud(2, {{0.0, 0.0}}, 0.01);
  CHECK_THROWS_AS(validate_graph(g), ValidationError);
  g.slab = 0.02;
  g.m = 2;  // m + n != graph dim
  CHECK_THROWS_AS(validate_graph(g), ValidationError);
}

TEST_CASE("sections are slab fibers") {
  const auto f =
      fn_graph([](double x) { return x * x; }, -1.0, 1.0, 0.01, 0.01, 0.015);
  const PointCloud sec = section(f, {0.5});
  REQUIRE(!sec.empty());
  CHECK(sec.dim == 1);
  for (const auto& y : sec.points)
    CHECK(std::abs(y[0] - 0.25) <= 2 * 0.015 + 1e-9);
  CHECK(section(f, {5.0}).empty());
}

TEST_CASE("preimage tolerance ties to slab and resolution") {
  const auto f =
      fn_graph([](double x) { return x; }, 0.0, 1.0, 0.01, 0.01, 0.02);
  CHECK(preimage_tolerance(f) == doctest::Approx(2 * (0.02 + 0.01)));
}

TEST_CASE("five pre-images match exhaustive comprehensions on random graphs") {
  for (int t = 0; t < 50; ++t) {
    const auto f = random_graph(9000 + t);
    const auto dom = domain(f);
    REQUIRE(!dom.empty());
    // The base point must have a nonempty section, so draw it from the
    // sampled domain; the probe value may be arbitrary.
    const double a = dom.points[static_cast<std::size_t>(hashed_uniform(
                         10000 + t, 0, 0.0, 1000.0)) %
                     dom.size()][0];
    const double yv =
        0.05 * std::floor(hashed_uniform(10000 + t, 1, -20.0, 21.0));
    CHECK(same_point_set(pre_image_strong(f, {a}).points,
                         oracle_preimage(f, Mode::Strong, a)));
    CHECK(same_point_set(pre_image_lower(f, {a}).points,
                         oracle_preimage(f, Mode::Lower, a)));
    CHECK(same_point_set(pre_image_upper(f, {a}).points,
                         oracle_preimage(f, Mode::Upper, a)));
    CHECK(same_point_set(pre_image_weak(f, {a}).points,
                         oracle_preimage(f, Mode::Weak, a)));
    CHECK(same_point_set(pre_image_point(f, {yv}).points,
                         oracle_preimage(f, Mode::PointMode, yv)));
  }
}

TEST_CASE("a base point with an empty section is rejected") {
  const auto f = random_graph(321);
  CHECK_THROWS_AS(pre_image_strong(f, {7.5}), ValidationError);
  CHECK_THROWS_AS(pre_image_weak(f, {-9.0}), ValidationError);
}

TEST_CASE("strong = lower AND upper; weak = union of point pre-images") {
  for (int t = 0; t < 20; ++t) {
    const auto f = random_graph(500 + t);
    const auto dom = domain(f);
    REQUIRE(!dom.empty());
    const double a = dom.points[static_cast<std::size_t>(hashed_uniform(
                         600 + t, 0, 0.0, 1000.0)) %
                     dom.size()][0];

    const auto strong = pre_image_strong(f, {a}).points;
    const auto lower = pre_image_lower(f, {a}).points;
    const auto upper = pre_image_upper(f, {a}).points;
    std::vector<Point> both;
    for (const auto& x : lower) {
      if (std::find(upper.begin(), upper.end(), x) != upper.end())
        both.push_back(x);
    }
    CHECK(same_point_set(strong, both));

    std::vector<Point> unioned;
    for (double yv : section_values(f, a)) {
      for (const auto& x : pre_image_point(f, {yv}).points) {
        if (std::find(unioned.begin(), unioned.end(), x) == unioned.end())
          unioned.push_back(x);
      }
    }
    CHECK(same_point_set(pre_image_weak(f, {a}).points, unioned));
  }
}

TEST_CASE("the strong pre-image of F(a) contains a") {
  for (int t = 0; t < 20; ++t) {
    const auto f = random_graph(700 + t);
    const auto dom = domain(f);
    REQUIRE(!dom.empty());
    const Point a = dom.points[t % dom.size()];
    const auto strong = pre_image_strong(f, a).points;
    CHECK(std::find(strong.begin(), strong.end(), a) != strong.end());
  }
}

TEST_CASE("delta is the distance to the section") {
  const auto f =
      fn_graph([](double x) { return x * x; }, -1.0, 1.0, 0.005, 0.005, 0.01);
  CHECK(delta(f, {0.5}, {0.25}) <= 0.02);
  CHECK(delta(f, {0.5}, {1.25}) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(delta(f, {9.0}, {0.0}) == kInf);  // empty section
}

TEST_CASE("delta dominates a power of the distance to the graph") {
  const auto f =
      fn_graph([](double x) { return x * x; }, -1.0, 1.0, 0.002, 0.003, 0.004);
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 4000; ++i) {
    const double x = hashed_uniform(42, 2 * i, -0.7, 0.7);
    const double y = hashed_uniform(42, 2 * i + 1, -0.7, 0.7);
    const double v = delta(f, {x}, {y});
    const double u = dist_point_set({x, y}, f.graph);
    if (u > 0.01 && v > 0 && v < kInf) samples.push_back({u, v});
  }
  const ExponentFit fit = fit_envelope(samples, 10);
  CHECK(fit.exponent >= 0.9);
  CHECK(fit.exponent <= 1.3);
}

TEST_CASE("field distances between two graphs") {
  const auto f =
      fn_graph([](double x) { return x; }, -1.0, 1.0, 0.01, 0.01, 0.02);
  const auto g =
      fn_graph([](double x) { return x + 0.5; }, -1.0, 1.0, 0.01, 0.01, 0.02);
  CHECK(dh_field(f, g, {0.0}) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(dk_field(f, g, {0.0}) <= dh_field(f, g, {0.0}) + 1e-12);
  CHECK(delta_sup(f, g, {0.0}, {0.0}) == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS(delta_sup(f, g, {9.0}, {0.0}), ValidationError);
}

TEST_CASE("kuratowski limits of the sign multifunction at 0") {
  // Domain omits 0 itself; values are exactly +-1.
  std::vector<Point> pts;
  for (int i = 1; i <= 100; ++i) {
    pts.push_back({0.01 * i, 1.0});
    pts.push_back({-0.01 * i, -1.0});
  }
  MultifunctionGraph f;
  f.m = 1;
  f.n = 1;
  f.slab = 0.01;
  f.graph = make_cloud(2, std::move(pts), 0.01);
  validate_graph(f);

  std::vector<double> radii;
  for (int k = 0; k <= 10; ++k) radii.push_back(0.5 * std::pow(2.0, -k));

  const auto sup = kuratowski_limsup(f, {0.0}, radii);
  REQUIRE(sup.points.size() == 2);
  std::vector<double> reps{sup.points.points[0][0], sup.points.points[1][0]};
  std::sort(reps.begin(), reps.end());
  const double tol = 2 * f.graph.resolution;
  CHECK(std::abs(reps[0] + 1.0) <= tol);
  CHECK(std::abs(reps[1] - 1.0) <= tol);
  CHECK_FALSE(sup.truncated);

  const auto inf = kuratowski_liminf(f, {0.0}, radii);
  CHECK(inf.points.empty());
}

TEST_CASE("kuratowski limits recover the value at a continuity point") {
  const double step = 1e-3;
  const auto f = fn_graph([](double x) { return x * x * x - x; }, -1.0, 1.0,
                          step, 2 * step, 2 * step);
  std::vector<double> radii;
  for (int k = 0; k <= 10; ++k) radii.push_back(0.5 * std::pow(2.0, -k));
  // Near the flat point of x^3 - x the section values stay well inside the
  // clustering tolerance, so both limits come back as one representative.
  const double a = 0.55;
  const double expected = a * a * a - a;

  const auto sup = kuratowski_limsup(f, {a}, radii);
  const auto inf = kuratowski_liminf(f, {a}, radii);
  REQUIRE(sup.points.size() == 1);
  REQUIRE(inf.points.size() == 1);
  CHECK(std::abs(sup.points.points[0][0] - expected) <=
        2 * f.graph.resolution);
  CHECK(std::abs(inf.points.points[0][0] - expected) <=
        2 * f.graph.resolution);
}

TEST_CASE("liminf representatives are a subset of limsup representatives") {
  std::vector<double> radii;
  for (int k = 0; k <= 10; ++k) radii.push_back(0.5 * std::pow(2.0, -k));
  for (int t = 0; t < 20; ++t) {
    const auto f = random_graph(800 + t);
    const auto dom = domain(f);
    const Point a = dom.points[(3 * t) % dom.size()];
    KuratowskiLimit sup, inf;
    try {
      sup = kuratowski_limsup(f, a, radii);
      inf = kuratowski_liminf(f, a, radii);
    } catch (const ValidationError&) {
      continue;  // isolated domain sample: both limits reject alike
    }
    for (const auto& p : inf.points.points) {
      bool found = false;
      for (const auto& q : sup.points.points) found = found || p == q;
      CHECK(found);
    }
  }
}

TEST_CASE("an unbounded branch sets the truncation flag") {
  std::vector<Point> pts;
  for (double x = 0.005; x <= 1.0; x += 5e-4) pts.push_back({x, 1.0 / x});
  MultifunctionGraph f;
  f.m = 1;
  f.n = 1;
  f.slab = 2e-3;
  f.graph = make_cloud(2, std::move(pts), 2e-3);
  validate_graph(f);
  std::vector<double> radii;
  for (int k = 0; k <= 10; ++k) radii.push_back(0.5 * std::pow(2.0, -k));
  const auto sup = kuratowski_limsup(f, {0.0}, radii);
  CHECK(sup.truncated);
}

TEST_CASE("an isolated base point is rejected") {
  MultifunctionGraph f;
  f.m = 1;
  f.n = 1;
  f.slab = 0.02;
  f.graph = make_cloud(2, {{0.0, 1.0}}, 0.01);
  validate_graph(f);
  std::vector<double> radii{0.5, 0.25, 0.125};
  CHECK_THROWS_AS(kuratowski_limsup(f, {0.0}, radii), ValidationError);
}

TEST_CASE("general zero set: |x|") {
  const auto f =
      fn_graph([](double x) { return std::abs(x); }, -1.0, 1.0, 0.005, 0.005,
               0.01);
  const auto z = general_zero_set(f);
  REQUIRE(!z.points.empty());
  for (const auto& p : z.points.points) CHECK(std::abs(p[0]) <= 0.02);
  CHECK(dist_point_set({0.0}, z.points) <= 0.02);
}

TEST_CASE("general zero set survives a removable discontinuity") {
  // Value 1 at x = 0 exactly, |x| elsewhere: (0, 0) is still in the closure
  // of the graph, and the sampled zero set keeps a point near 0.
  std::vector<Point> pts;
  for (double x = -1.0; x <= 1.0; x += 0.005) {
    if (std::abs(x) < 1e-12) continue;
    pts.push_back({x, std::abs(x)});
  }
  pts.push_back({0.0, 1.0});
  MultifunctionGraph f;
  f.m = 1;
  f.n = 1;
  f.slab = 0.01;
  f.graph = make_cloud(2, std::move(pts), 0.01);
  validate_graph(f);
  const auto z = general_zero_set(f);
  REQUIRE(!z.points.empty());
  CHECK(dist_point_set({0.0}, z.points) <= 0.02);
}

TEST_CASE("general zero set of a zero-free function is empty") {
  const auto f =
      fn_graph([](double x) { return x * x + 1.0; }, -1.0, 1.0, 0.01, 0.01,
               0.02);
  CHECK(general_zero_set(f).points.empty());
}
