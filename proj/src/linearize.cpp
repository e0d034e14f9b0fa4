#include "siegel/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "siegel/errors.hpp"

namespace siegel {

cplx LinearizationSeries::operator()(cplx w) const {
  cplx acc{};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = (acc + *it) * w;
  return acc;
}

double LinearizationSeries::max_coefficient() const {
  double m = 0.0;
  for (const cplx& c : coefficients) m = std::max(m, std::abs(c));
  return m;
}

double LinearizationSeries::residual() const {
  return residual_profile.empty() ? std::numeric_limits<double>::quiet_NaN() : residual_profile.back().residual;
}

double functional_residual(const HolomorphicMap& map, const LinearizationSeries& ls, double radius, int samples) {
  const cplx lambda = map.rotation().lambda();
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * (k + 0.5) / samples;
    const cplx w = std::polar(radius, t);
    const MapValue lhs = map.value(ls(w));
    if (!lhs) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(*lhs - ls(lambda * w)));
  }
  return worst;
}

LinearizationSeries compute_series(const HolomorphicMap& map, int n, bool sample_residuals) {
  if (n < 2 || n > kMaxSeriesOrder) throw DomainError("series order must be in [2, 256]");
  const RotationNumber& rn = map.rotation();
  const cplx lambda = rn.lambda();
  const std::vector<cplx> c = map.taylor(n);

  LinearizationSeries ls;
  ls.coefficients.assign(static_cast<std::size_t>(n), cplx{});
  ls.small_divisors.reserve(static_cast<std::size_t>(n - 1));
  ls.coefficients[0] = 1.0;

  // power[k][m] = coefficient of w^m in h(w)^k, filled column by column:
  // [h^k]_m only needs h_1..h_{m-k+1}, so column m is complete before h_m.
  const auto N = static_cast<std::size_t>(n);
  std::vector<cplx> power((N + 1) * (N + 1), cplx{});
  auto P = [&](std::size_t k, std::size_t m) -> cplx& { return power[k * (N + 1) + m]; };
  P(1, 1) = 1.0;

  for (std::size_t m = 2; m <= N; ++m) {
    cplx rhs{};
    for (std::size_t k = 2; k <= m; ++k) {
      const cplx* h = ls.coefficients.data();
      const cplx* prev = &P(k - 1, 0);
      double re = 0.0, im = 0.0;
      for (std::size_t j = 1; j <= m - k + 1; ++j) {
        const cplx x = h[j - 1];
        const cplx y = prev[m - j];
        re += x.real() * y.real() - x.imag() * y.imag();
        im += x.real() * y.imag() + x.imag() * y.real();
      }
      const cplx acc{re, im};
      P(k, m) = acc;
      rhs += c[k - 1] * acc;
    }
    const cplx divisor = rn.lambda_power(static_cast<int>(m)) - lambda;
    ls.small_divisors.push_back(divisor);
    if (std::abs(divisor) < kSmallDivisorAbort) throw SmallDivisorError(static_cast<int>(m), std::abs(divisor));
    const cplx hm = rhs / divisor;
    if (!std::isfinite(hm.real()) || !std::isfinite(hm.imag())) {
      throw SmallDivisorError(static_cast<int>(m), std::abs(divisor));
    }
    ls.coefficients[m - 1] = hm;
    P(1, m) = hm;
  }

  double basis = root_test_radius(ls.coefficients, n);
  if (!std::isfinite(basis)) basis = 1.0;
  ls.sample_radius_basis = basis;
  if (!sample_residuals) return ls;
  for (double fraction : {0.125, 0.25, 0.5}) {
    const double r = fraction * basis;
    ls.residual_profile.push_back({r, functional_residual(map, ls, r)});
  }
  return ls;
}

LinearizationSeries compute_series(const ParameterPoint& pp, const RotationNumber& rn, int n) {
  return compute_series(FamilyMap(pp, rn), n);
}

double root_test_radius(const std::vector<cplx>& coefficients, int order) {
  const int lo = std::max(2, order / 2);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int k = lo; k <= order; ++k) {
    const double mag = std::abs(coefficients[static_cast<std::size_t>(k - 1)]);
    if (mag == 0.0) continue;
    const double y = std::log(mag);
    sx += k;
    sy += y;
    sxx += static_cast<double>(k) * k;
    sxy += k * y;
    ++count;
  }
  if (count == 0) return std::numeric_limits<double>::infinity();
  if (count == 1) {
    // Single nonzero coefficient: plain root test on it.
    const double k = sx;
    return std::exp(-sy / k);
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::exp(-slope);
}

CapacityEstimate capacity_estimate(const LinearizationSeries& ls, const CapacityOptions& options) {
  const int n = ls.order();
  if (n < 20) throw DomainError("capacity estimate needs at least 20 coefficients");
  CapacityEstimate est;
  est.radius_root_test = std::min(root_test_radius(ls.coefficients, n), options.max_radius);
  est.radius_half_order = std::min(root_test_radius(ls.coefficients, n / 2), options.max_radius);

  const double hi = std::max(est.radius_root_test, est.radius_half_order);
  const double lo = std::min(est.radius_root_test, est.radius_half_order);
  const double spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  if (!(spread <= options.instability_spread)) {
    throw InstabilityError("capacity estimates at orders " + std::to_string(n) + " and " + std::to_string(n / 2) +
                           " differ by " + std::to_string(100.0 * spread) + "%");
  }
  est.agreement = spread <= options.agreement_spread;
  est.radius_stable = lo;
  est.trap_radius = est.radius_stable / 4.0 * options.safety_factor;
  return est;
}

RotationCheck rotation_check(const HolomorphicMap& map, cplx z, double bound, int steps) {
  RotationCheck check;
  const double target = 2.0 * std::numbers::pi * map.rotation().theta();
  double total = 0.0;
  cplx cur = z;
  check.max_modulus = std::abs(z);
  for (int k = 0; k < steps; ++k) {
    const MapValue next = map.value(cur);
    if (!next || *next == cplx{}) return check;
    check.max_modulus = std::max(check.max_modulus, std::abs(*next));
    if (check.max_modulus >= bound) return check;
    // increment taken in (target - pi, target + pi]
    double step = std::arg(*next / cur) - target;
    step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
    total += target + step;
    cur = *next;
  }
  check.mean_increment = total / steps;
  check.passed = std::abs(check.mean_increment - target) <= 0.1 * target;
  return check;
}

TrapDisc trap_disc(const HolomorphicMap& map, int order) {
  const LinearizationSeries ls = compute_series(map, order, false);
  TrapDisc trap;
  trap.capacity = capacity_estimate(ls);
  trap.radius = trap.capacity.trap_radius;
  trap.sanity = rotation_check(map, cplx{0.5 * trap.radius, 0.0}, 2.0 * trap.capacity.radius_stable);
  if (!trap.sanity.passed) throw InstabilityError("rotation sanity check failed inside the trap disc");
  return trap;
}

TrapDisc trap_disc(const ParameterPoint& pp, const RotationNumber& rn, int order) {
  return trap_disc(FamilyMap(pp, rn), order);
}

}  // namespace siegel
