#pragma once

#include <utility>
#include <vector>

#include "siegel/map_core.hpp"

namespace siegel {

inline constexpr int kMaxSeriesOrder = 256;
inline constexpr double kSmallDivisorAbort = 1e-14;

struct ResidualSample {
  double radius = 0.0;
  /// max over the sample circle of |F(h(w)) - h(lambda w)|.
  double residual = 0.0;
};

/// Linearizing map h(w) = sum h_n w^n with F(h(w)) = h(lambda w), h_1 = 1.
struct LinearizationSeries {
  /// coefficients[n-1] = h_n.
  std::vector<cplx> coefficients;
  /// small_divisors[n-2] = lambda^n - lambda for n = 2..N.
  std::vector<cplx> small_divisors;
  /// Residuals at fractions 1/8, 1/4, 1/2 of the root-test radius.
  std::vector<ResidualSample> residual_profile;
  /// Root-test radius used to place the residual samples.
  double sample_radius_basis = 0.0;

  int order() const noexcept { return static_cast<int>(coefficients.size()); }
  cplx operator()(cplx w) const;
  double max_coefficient() const;
  /// Residual at the largest sampled radius (half the root-test radius).
  double residual() const;
};

/// Solves the linearization equation order by order up to order n,
/// 2 <= n <= 256. Throws SmallDivisorError on a vanishing divisor.
/// The residual profile is left empty when sample_residuals is false.
LinearizationSeries compute_series(const HolomorphicMap& map, int n, bool sample_residuals = true);
LinearizationSeries compute_series(const ParameterPoint& pp, const RotationNumber& rn, int n);

/// Residual max_{|w|=r} |F(h(w)) - h(lambda w)| on `samples` points.
double functional_residual(const HolomorphicMap& map, const LinearizationSeries& ls, double radius,
                           int samples = 32);

struct CapacityOptions {
  /// Clamp for degenerate series (h_n = 0 for n >= 2).
  double max_radius = 1e6;
  double safety_factor = 0.8;
  /// Above this relative spread between the N and N/2 estimates the
  /// estimate is rejected.
  double instability_spread = 0.25;
  double agreement_spread = 0.05;
};

struct CapacityEstimate {
  double radius_root_test = 0.0;
  double radius_half_order = 0.0;
  double radius_stable = 0.0;
  double trap_radius = 0.0;
  /// N and N/2 estimates agree within agreement_spread.
  bool agreement = false;
};

/// Root-test radius from a least-squares fit of log|h_n| over the upper
/// half of the indices. Returns +infinity when every h_n (n >= 2) vanishes.
double root_test_radius(const std::vector<cplx>& coefficients, int order);

/// Requires at least 20 coefficients. Throws InstabilityError when the N
/// and N/2 estimates differ by more than options.instability_spread.
CapacityEstimate capacity_estimate(const LinearizationSeries& ls, const CapacityOptions& options = {});

struct RotationCheck {
  bool passed = false;
  double mean_increment = 0.0;
  double max_modulus = 0.0;
};

/// Iterates `steps` times from z and checks the orbit stays in
/// D(0, bound) with mean argument increment within 10% of 2 pi theta.
RotationCheck rotation_check(const HolomorphicMap& map, cplx z, double bound, int steps = 50);

struct TrapDisc {
  double radius = 0.0;
  CapacityEstimate capacity;
  RotationCheck sanity;
};

inline constexpr int kTrapSeriesOrder = 64;

/// Koebe trap disc D(0, radius) inside the Siegel disc, from the series at
/// the given order. Propagates SmallDivisorError / InstabilityError and
/// throws InstabilityError when the rotation sanity check fails.
TrapDisc trap_disc(const HolomorphicMap& map, int order = kTrapSeriesOrder);
TrapDisc trap_disc(const ParameterPoint& pp, const RotationNumber& rn, int order = kTrapSeriesOrder);

}  // namespace siegel
