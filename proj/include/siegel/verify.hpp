#pragma once

#include <array>
#include <string>
#include <utility>

#include "siegel/map_core.hpp"

namespace siegel {

/// (R + 4R^2)/(R - 4): the smallest |a| for which the quadratic-limit
/// estimate closes on |z| = R. Throws DomainError for R <= 4.
double rouche_gap(double radius);

struct GapMinimum {
  double radius = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search of rouche_gap on [lo, hi] (lo > 4) down to the
/// given bracket width.
GapMinimum minimize_rouche_gap(double lo, double hi, double bracket = 1e-6, int max_iterations = 200);

struct RoucheReport {
  double R = 0.0;
  /// R^2/2 - 2R.
  double S = 0.0;
  double max_diff = 0.0;
  /// (R^2 / 2|a|)(1 + 4R).
  double analytic_bound = 0.0;
  double margin = 0.0;
  /// Largest change of |f - g| between neighbouring samples.
  double sample_variation = 0.0;
  int samples = 0;
  /// |a| > R and R/|a| below the overflow exponent.
  bool applicable = true;
  /// margin > 0.
  bool polynomial_like = false;
  /// margin > 10 * sample_variation.
  bool evidence = false;
};

/// Samples |f_a - lambda z(1 + z/2)| on m >= 256 points of |z| = R.
RoucheReport polylike_sample_check(const ParameterPoint& pp, const RotationNumber& rn, double radius,
                                   int samples = 4096);

inline constexpr int kMaxContourSamples = 1 << 20;

/// Winding number of t -> F(R e^{2 pi i t}) - w. Doubles the sample count
/// until every step turns by less than pi/2; throws ContourTooCoarse past
/// 2^20 samples and DomainError when the contour hits overflow or w itself.
int winding_number(const HolomorphicMap& map, double radius, cplx w, int samples = 4096);

/// Degree of f_a on D(0,R) over w. Requires |w| < R, m >= 4096, and a
/// positive Rouche margin (DomainError otherwise).
int degree_by_argument_principle(const ParameterPoint& pp, const RotationNumber& rn, double radius, cplx w,
                                 int samples = 4096);

struct H1vReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int sigma = 0;
  int rho = 0;
  double b = 0.0;
  double L = 0.0;
  double s_star = 0.0;
  double h_at_s_star = 0.0;
  double y = 0.0;
  /// |lambda1|(b^2 + sigma b) - s*.
  double target = 0.0;
  /// target - max |g_a| on C_1, C_2, C_3.
  std::array<double, 3> boundary_margins{};
  int samples_per_curve = 0;
  bool pass = false;
  /// a = -sigma b.
  double parameter() const noexcept { return -sigma * b; }
};

/// Evaluates h(s*) and samples the three boundary curves of the trapping
/// region around v_a for a = -sigma b. Requires lambda != +-i and b > 1.
H1vReport h1v_check(const RotationNumber& rn, double b, int samples_per_curve = 2048);
H1vReport h1v_check(cplx lambda, double b, int samples_per_curve = 2048);

struct H1vBound {
  /// Threshold (bisection to 1e-6) above which
  /// b log(b + sigma + L(b^2 + sigma b)) <= -b + |lambda1|(b^2 + sigma b)
  /// holds on the sampled range. The vacuous window just above b = 1, where
  /// the logarithm is negative, is skipped.
  double b_min = 0.0;
  /// Largest real root of the cubic obtained from exp(x) >= 1 + x + x^2/2 + x^3/6.
  double cubic_root = 0.0;
  /// max(1, sum |a_i|) for the monic normalization of that cubic.
  double cubic_cauchy_bound = 0.0;
};

/// Throws DomainError when lambda1 = 0.
H1vBound h1v_bound(const RotationNumber& rn);
H1vBound h1v_bound(cplx lambda);

}  // namespace siegel
