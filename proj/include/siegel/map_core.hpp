#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "siegel/arithmetic.hpp"

namespace siegel {

using cplx = std::complex<double>;

/// Value of a map evaluation; empty when Re(z/a) > kOverflowExponent, in
/// which case the point is treated as escaping.
using MapValue = std::optional<cplx>;

inline constexpr double kOverflowExponent = 700.0;
inline constexpr double kSmallParameterThreshold = 1e-3;

/// Rotation number theta in (0,1) with lambda = exp(2 pi i theta).
class RotationNumber {
 public:
  /// Reduces theta mod 1 and expands it from the double.
  static RotationNumber from_theta(double theta, int max_terms = 64);
  /// Exact quotient channel; theta is the value of the supplied fraction.
  static RotationNumber from_quotients(std::vector<std::uint64_t> quotients);
  static RotationNumber golden();

  double theta() const noexcept { return theta_; }
  cplx lambda() const noexcept { return lambda_; }
  const ContinuedFraction& expansion() const noexcept { return cf_; }

  /// lambda^n computed from the reduced angle n*theta mod 1.
  cplx lambda_power(int n) const;

 private:
  RotationNumber(double theta, ContinuedFraction cf);

  double theta_;
  cplx lambda_;
  ContinuedFraction cf_;
};

/// Parameter a != 0 together with its singular data.
class ParameterPoint {
 public:
  ParameterPoint(cplx a, const RotationNumber& rn);

  cplx a() const noexcept { return a_; }
  /// v_a = lambda a (a - 1).
  cplx asymptotic_value() const noexcept { return v_; }
  /// a - 1, the only finite pre-image of v_a.
  cplx preimage() const noexcept { return a_ - 1.0; }
  cplx critical_point() const noexcept { return {-1.0, 0.0}; }
  cplx critical_value() const noexcept { return cv_; }
  cplx inverse() const noexcept { return inv_a_; }

 private:
  cplx a_;
  cplx inv_a_;
  cplx v_;
  cplx cv_;
};

/// exp(u) - 1 without cancellation near u = 0.
cplx expm1(cplx u);

/// f_a(z) = lambda a (exp(z/a)(z + 1 - a) - 1 + a).
MapValue eval(const ParameterPoint& pp, const RotationNumber& rn, cplx z,
              double small_a_threshold = kSmallParameterThreshold);

/// f_a'(z) = lambda (z + 1) exp(z/a). Returns an empty value on overflow.
MapValue eval_deriv(const ParameterPoint& pp, const RotationNumber& rn, cplx z);

/// g_a(u) = lambda (exp(u)(a u + 1 - a) - 1 + a); a = 0 is allowed.
MapValue eval_conjugated(cplx a, const RotationNumber& rn, cplx u);

/// lambda z (1 + z/2), the limit of f_a as a -> infinity.
cplx quadratic_limit(const RotationNumber& rn, cplx z);

struct TaylorPrefix {
  /// coefficients[k-1] = c_k.
  std::vector<cplx> coefficients;
};

/// c_k = lambda (a(k-1) + 1) / (k! a^(k-1)) for k = 1..n, 2 <= n <= 512.
TaylorPrefix taylor_prefix(const ParameterPoint& pp, const RotationNumber& rn, int n);

/// A holomorphic map with an irrationally indifferent fixed point at 0.
/// Linearization and orbit classification work against this interface so
/// the family, its quadratic limit, and affine rescalings share one path.
class HolomorphicMap {
 public:
  virtual ~HolomorphicMap() = default;
  virtual MapValue value(cplx z) const = 0;
  virtual MapValue derivative(cplx z) const = 0;
  /// Taylor coefficients c_1..c_n at 0.
  virtual std::vector<cplx> taylor(int n) const = 0;
  virtual const RotationNumber& rotation() const = 0;
};

/// f_a for fixed a and theta. Holds references; both must outlive the map.
class FamilyMap final : public HolomorphicMap {
 public:
  FamilyMap(const ParameterPoint& pp, const RotationNumber& rn) : pp_(pp), rn_(rn) {}
  MapValue value(cplx z) const override { return eval(pp_, rn_, z); }
  MapValue derivative(cplx z) const override { return eval_deriv(pp_, rn_, z); }
  std::vector<cplx> taylor(int n) const override { return taylor_prefix(pp_, rn_, n).coefficients; }
  const RotationNumber& rotation() const override { return rn_; }
  const ParameterPoint& parameter() const noexcept { return pp_; }

 private:
  const ParameterPoint& pp_;
  const RotationNumber& rn_;
};

class QuadraticLimitMap final : public HolomorphicMap {
 public:
  explicit QuadraticLimitMap(const RotationNumber& rn) : rn_(rn) {}
  MapValue value(cplx z) const override { return quadratic_limit(rn_, z); }
  MapValue derivative(cplx z) const override { return rn_.lambda() * (1.0 + z); }
  std::vector<cplx> taylor(int n) const override;
  const RotationNumber& rotation() const override { return rn_; }

 private:
  const RotationNumber& rn_;
};

/// z -> F(s z)/s, affinely conjugate to F.
class RescaledMap final : public HolomorphicMap {
 public:
  RescaledMap(const HolomorphicMap& inner, double scale) : inner_(inner), scale_(scale) {}
  MapValue value(cplx z) const override;
  MapValue derivative(cplx z) const override { return inner_.derivative(scale_ * z); }
  std::vector<cplx> taylor(int n) const override;
  const RotationNumber& rotation() const override { return inner_.rotation(); }

 private:
  const HolomorphicMap& inner_;
  double scale_;
};

}  // namespace siegel
