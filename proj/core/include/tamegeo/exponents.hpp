#pragma once

#include <utility>
#include <vector>

#include "tamegeo/exponents_types.hpp"
#include "tamegeo/expr.hpp"
#include "tamegeo/geometry.hpp"
#include "tamegeo/piecewise.hpp"
#include "tamegeo/subgradient.hpp"

namespace tamegeo {

// Lower-envelope power fit of (u, v) samples, u, v > 0: bins by log u into
// `bins` equal-width bins (>= 5), takes the minimum log v per bin, and runs
// least squares through the bin minima. The envelope binds inequalities of
// the form v >= C u^l, which is what the minima capture. Throws
// ValidationError for bad inputs (fewer than 3 * bins samples, nonpositive
// u or v) and NumericError when more than 20% of bins are empty.
ExponentFit fit_envelope(const std::vector<std::pair<double, double>>& samples,
                         int bins, EnvelopeDump* dump = nullptr);

// Exponent l in ||f(x) - f(a)|| >= C d(x, f^{-1}(f(a)))^l near a.
// Grid-samples the window [a - w, a + w]^m (grid anchored at a), detects the
// level set as points whose value gap is below one grid cell of local
// variation, and envelope-fits |f - f(a)| against the distance to the level
// set over [10 grid_step, 0.3 w].
ExponentFit loj_function_exponent(const PiecewiseFn& f, const Point& a,
                                  double window, double grid_step,
                                  EnvelopeDump* dump = nullptr);

// Regular-separation exponent l in d(x, Y) >= C d(x, X ∩ Y)^l for x in X
// near a. The sampled intersection (X-points within 2 * resolution of Y) is
// reduced to cluster cores so that tangential contact does not inflate it;
// the interior case (Y covering X near a) is rejected as NumericError.
ExponentFit separation_exponent(const PointCloud& x_cloud,
                                const PointCloud& y_cloud, const Point& a,
                                double window, EnvelopeDump* dump = nullptr);

struct SubgradientExponentResult {
  ExponentFit fit;           // envelope fit of h against |f|
  double h_at_zero = 0.0;    // min-norm of the subgradient at 0
  bool hypothesis_ok = true; // h(0) <= 3 * hull_tol so 0 is critical
  bool theta_in_range = true;  // fitted exponent inside the open (0, 1)
};

// Exponent theta in h(x) >= c |f(x)|^theta near the critical point 0, where
// h is the min-norm Clarke subgradient. Requires f(0) = 0; when the
// criticality hypothesis fails the fit is still returned with
// hypothesis_ok = false and h(0) reported.
SubgradientExponentResult subgradient_exponent(const PiecewiseFn& f,
                                               double window, double grid_step,
                                               const SubgradientConfig& cfg,
                                               EnvelopeDump* dump = nullptr);

struct PhiRow {
  double t = 0.0;
  double phi = 0.0;
  int shell_count = 0;
  bool ok = false;  // false: empty level shell at this t
};

struct PhiProfile {
  std::vector<PhiRow> rows;
  bool monotone = true;          // phi nondecreasing over valid rows
  bool vanishes_at_zero = true;  // phi at the smallest valid t is the minimum
};

// phi(t) = min { h(x) : x in B(0, ball_radius), | |f(x)| - t | <= tol },
// tol = lipschitz_bound * grid_step. Rows for t beyond the observed range of
// |f| are marked not-ok instead of failing the whole profile.
PhiProfile phi_profile(const PiecewiseFn& f, double ball_radius,
                       const std::vector<double>& t_grid, double grid_step,
                       const SubgradientConfig& cfg);

struct OneDimExponentResult {
  double alpha = 0.0;            // growth exponent of phi at 0+
  double theta = 0.0;            // max(0, (alpha - 1) / alpha)
  double theta_envelope = 0.0;   // slope of the |phi'| vs |phi| envelope
  bool cross_check_applicable = false;  // only for alpha >= 1
  ExponentFit envelope_fit;
};

// One-dimensional gradient exponent of a profile phi(t) ~ t^alpha on
// t_window: theta = (alpha - 1) / alpha, cross-validated (when alpha >= 1)
// against the envelope fit of |phi'| vs |phi|; disagreement beyond 0.05 or
// alpha <= 0 is a NumericError.
OneDimExponentResult one_dim_gradient_exponent(
    const ExprFn& phi, std::pair<double, double> t_window);
OneDimExponentResult one_dim_gradient_exponent(
    const std::vector<std::pair<double, double>>& profile,
    std::pair<double, double> t_window);

}  // namespace tamegeo
