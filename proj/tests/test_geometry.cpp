#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "tamegeo/errors.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/numerics.hpp"
#include "tamegeo/parallel.hpp"

using namespace tamegeo;

TEST_CASE("norms and distances") {
  const Point a{3.0, 4.0};
  const Point b{0.0, 0.0};
  CHECK(norm(a) == doctest::Approx(5.0));
  CHECK(squared_norm(a) == doctest::Approx(25.0));
  CHECK(dist(a, b) == doctest::Approx(5.0));
  CHECK(squared_dist(a, b) == doctest::Approx(25.0));
  CHECK(norm(Point{}) == 0.0);
}

TEST_CASE("make_cloud tight window bound") {
  auto c = make_cloud(2, {{1.0, 0.0}, {0.0, -2.0}}, 0.1);
  CHECK(c.window_radius == doctest::Approx(2.0));
  CHECK(c.dim == 2);
  CHECK(c.size() == 2);
  validate_cloud(c);
}

TEST_CASE("validate_cloud rejects malformed clouds") {
  PointCloud c = make_cloud(2, {{0.0, 0.0}}, 0.1);
  SUBCASE("dimension mismatch") {
    c.points.push_back({1.0});
    CHECK_THROWS_AS(validate_cloud(c), ValidationError);
  }
  SUBCASE("negative resolution") {
    c.resolution = -1.0;
    CHECK_THROWS_AS(validate_cloud(c), ValidationError);
  }
  SUBCASE("point outside the window") {
    c.points.push_back({10.0, 0.0});
    CHECK_THROWS_AS(validate_cloud(c), ValidationError);
  }
  SUBCASE("non-finite coordinate") {
    c.points.push_back({kInf, 0.0});
    CHECK_THROWS_AS(validate_cloud(c), ValidationError);
  }
}

TEST_CASE("dist_point_set") {
  const auto c = make_cloud(2, {{0.0, 0.0}, {2.0, 0.0}}, 0.1);
  CHECK(dist_point_set({1.0, 0.0}, c) == doctest::Approx(1.0));
  CHECK(dist_point_set({2.0, 3.0}, c) == doctest::Approx(3.0));
  const PointCloud empty{2, 0.1, 1.0, {}};
  CHECK(dist_point_set({0.0, 0.0}, empty) == kInf);
}

TEST_CASE("restrict_ball keeps exactly the points inside the radius") {
  const auto c =
      make_cloud(1, {{0.0}, {0.5}, {1.0}, {1.5}}, 0.1);
  const auto b = restrict_ball(c, 1.0);
  REQUIRE(b.size() == 3);
  for (const auto& p : b.points) CHECK(norm(p) <= 1.0);
}

TEST_CASE("intersect_sphere picks the shell and honors the resolution guard") {
  const auto c = make_cloud(1, {{0.0}, {0.5}, {1.0}, {1.5}}, 0.1);
  const auto s = intersect_sphere(c, 1.0, 0.2);
  REQUIRE(s.size() == 1);
  CHECK(s.points[0][0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(intersect_sphere(c, 1.0, 0.01), ValidationError);
}

TEST_CASE("dedup_points leaves representatives close to every input") {
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i)
    pts.push_back({hashed_uniform(1, i, 0.0, 1.0)});
  const double tol = 0.07;
  const auto kept = dedup_points(pts, tol);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j)
      CHECK(dist(kept[i], kept[j]) > tol);
  for (const auto& p : pts) {
    double best = kInf;
    for (const auto& q : kept) best = std::min(best, dist(p, q));
    CHECK(best <= tol);
  }
}

TEST_CASE("hashed_uniform is deterministic and in range") {
  for (int i = 0; i < 200; ++i) {
    const double u = hashed_uniform(42, i, -1.0, 3.0);
    CHECK(u >= -1.0);
    CHECK(u < 3.0);
    CHECK(u == hashed_uniform(42, i, -1.0, 3.0));
  }
  CHECK(hashed_uniform(1, 7, 0.0, 1.0) != hashed_uniform(2, 7, 0.0, 1.0));
}

TEST_CASE("least_squares_line recovers an exact line") {
  std::vector<std::pair<double, double>> xy;
  for (int i = 0; i < 25; ++i) {
    const double x = -2.0 + 0.2 * i;
    xy.push_back({x, 3.0 * x - 2.0});
  }
  const LineFit fit = least_squares_line(xy);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.max_residual <= 1e-10);
}

TEST_CASE("fd_gradient approximates a smooth gradient") {
  const auto f = [](std::span<const double> x) {
    return x[0] * x[0] + 3.0 * x[1];
  };
  const Point g = fd_gradient(f, {1.5, -0.5});
  CHECK(g[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("parallel_chunks covers the range once, in chunk order") {
  const std::size_t n = 100000;
  std::vector<char> seen(n, 0);
  std::atomic<long long> sum{0};
  parallel_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
    long long local = 0;
    for (std::size_t i = b; i < e; ++i) {
      seen[i] += 1;
      local += static_cast<long long>(i);
    }
    sum += local;
  });
  for (std::size_t i = 0; i < n; ++i) REQUIRE(seen[i] == 1);
  CHECK(sum == static_cast<long long>(n) * (n - 1) / 2);
  CHECK(chunk_count(n) == chunk_count(n));
  CHECK(chunk_count(10) >= 1);
}

TEST_CASE("parallel_chunks rethrows worker exceptions") {
  CHECK_THROWS_AS(
      parallel_chunks(10000,
                      [](std::size_t, std::size_t b, std::size_t) {
                        if (b == 0) throw ValidationError("boom");
                      }),
      ValidationError);
}
