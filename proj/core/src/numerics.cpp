#include "tamegeo/numerics.hpp"

#include <cmath>

#include "tamegeo/errors.hpp"

namespace tamegeo {

Point fd_gradient(const ScalarFn& f, const Point& x) {
  return fd_gradient(f, x, 1e-6 * std::max(1.0, norm(x)));
}

Point fd_gradient(const ScalarFn& f, const Point& x, double step) {
  Point g(x.size(), 0.0);
  Point probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double hi = f(probe);
    probe[i] = x[i] - step;
    const double lo = f(probe);
    probe[i] = x[i];
    g[i] = (hi - lo) / (2.0 * step);
  }
  return g;
}

LineFit least_squares_line(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) throw ValidationError("least_squares_line: need >= 2 points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(xy.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0) throw ValidationError("least_squares_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& [x, y] : xy) {
    fit.max_residual =
        std::max(fit.max_residual, std::abs(y - (fit.slope * x + fit.intercept)));
  }
  return fit;
}

namespace {

// splitmix64: cheap, well-mixed, stateless.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double hashed_uniform(std::uint64_t seed, std::uint64_t index, double lo,
                      double hi) {
  const std::uint64_t h = mix(mix(seed) ^ index);
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + unit * (hi - lo);
}

}  // namespace tamegeo
