#include "siegel/map_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "siegel/errors.hpp"

namespace siegel {

namespace {

cplx unit_from_turns(double turns) {
  const double frac = turns - std::floor(turns);
  const double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

RotationNumber::RotationNumber(double theta, ContinuedFraction cf)
    : theta_(theta), lambda_(unit_from_turns(theta)), cf_(std::move(cf)) {}

RotationNumber RotationNumber::from_theta(double theta, int max_terms) {
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const double reduced = theta - std::floor(theta);
  if (!(reduced > 0.0 && reduced < 1.0)) throw DomainError("theta mod 1 must lie in (0,1)");
  return RotationNumber(reduced, cf_expand(reduced, max_terms));
}

RotationNumber RotationNumber::from_quotients(std::vector<std::uint64_t> quotients) {
  if (quotients.empty()) throw DomainError("at least one partial quotient is required");
  auto cf = ContinuedFraction::from_quotients(std::move(quotients));
  const double theta = cf.value();
  return RotationNumber(theta, std::move(cf));
}

RotationNumber RotationNumber::golden() {
  return RotationNumber((std::sqrt(5.0) - 1.0) / 2.0, golden_mean_expansion());
}

cplx RotationNumber::lambda_power(int n) const {
  return unit_from_turns(std::fmod(static_cast<double>(n) * theta_, 1.0));
}

ParameterPoint::ParameterPoint(cplx a, const RotationNumber& rn) : a_(a) {
  if (a == cplx{0.0, 0.0}) throw DomainError("parameter a must be nonzero");
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("parameter a must be finite");
  const double scale = std::max(std::abs(a.real()), std::abs(a.imag()));
  const cplx unit = a / scale;
  inv_a_ = std::conj(unit) / (std::norm(unit) * scale);
  v_ = rn.lambda() * a * (a - 1.0);
  // f_a(-1) = lambda a ((exp(-1/a) - 1)(-a) - 1)
  cv_ = *eval(*this, rn, {-1.0, 0.0});
}

cplx expm1(cplx u) {
  const double x = u.real();
  const double y = u.imag();
  const double em1 = std::expm1(x);
  const double s = std::sin(0.5 * y);
  const double c = std::cos(0.5 * y);
  // e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2)
  const double sin2 = 2.0 * s * s;
  const double re = em1 * (1.0 - sin2) - sin2;
  const double im = (em1 + 1.0) * (2.0 * s * c);
  return {re, im};
}

MapValue eval_conjugated(cplx a, const RotationNumber& rn, cplx u) {
  if (u.real() > kOverflowExponent) return std::nullopt;
  // exp(u)(a u + 1 - a) - 1 + a = (exp(u) - 1)(a u + 1 - a) + a u
  const cplx au = a * u;
  return rn.lambda() * (expm1(u) * (au + 1.0 - a) + au);
}

MapValue eval(const ParameterPoint& pp, const RotationNumber& rn, cplx z, double small_a_threshold) {
  const cplx a = pp.a();
  const cplx u = z * pp.inverse();
  if (u.real() > kOverflowExponent) return std::nullopt;
  if (std::norm(a) < small_a_threshold * small_a_threshold) {
    const MapValue g = eval_conjugated(a, rn, u);
    if (!g) return std::nullopt;
    return a * *g;
  }
  return rn.lambda() * a * (expm1(u) * (z + 1.0 - a) + z);
}

MapValue eval_deriv(const ParameterPoint& pp, const RotationNumber& rn, cplx z) {
  const cplx u = z * pp.inverse();
  if (u.real() > kOverflowExponent) return std::nullopt;
  return rn.lambda() * (z + 1.0) * std::exp(u);
}

cplx quadratic_limit(const RotationNumber& rn, cplx z) { return rn.lambda() * z * (1.0 + 0.5 * z); }

TaylorPrefix taylor_prefix(const ParameterPoint& pp, const RotationNumber& rn, int n) {
  if (n < 2 || n > 512) throw DomainError("Taylor prefix length must be in [2, 512]");
  const cplx a = pp.a();
  const cplx lambda = rn.lambda();
  TaylorPrefix out;
  out.coefficients.reserve(static_cast<std::size_t>(n));
  // t_k = 1 / (k! a^(k-1)),  c_k = lambda (a (k-1) + 1) t_k
  cplx t{1.0, 0.0};
  for (int k = 1; k <= n; ++k) {
    if (k > 1) t /= static_cast<double>(k) * a;
    const cplx c = lambda * (a * static_cast<double>(k - 1) + 1.0) * t;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("Taylor coefficient c_" + std::to_string(k) + " is not representable");
    }
    out.coefficients.push_back(c);
  }
  return out;
}

std::vector<cplx> QuadraticLimitMap::taylor(int n) const {
  if (n < 2) throw DomainError("Taylor prefix length must be at least 2");
  std::vector<cplx> c(static_cast<std::size_t>(n), cplx{});
  c[0] = rn_.lambda();
  c[1] = 0.5 * rn_.lambda();
  return c;
}

MapValue RescaledMap::value(cplx z) const {
  const MapValue w = inner_.value(scale_ * z);
  if (!w) return std::nullopt;
  return *w / scale_;
}

std::vector<cplx> RescaledMap::taylor(int n) const {
  std::vector<cplx> c = inner_.taylor(n);
  double s = 1.0;
  for (auto& ck : c) {
    ck *= s;
    s *= scale_;
  }
  return c;
}

}  // namespace siegel
