#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "siegel/errors.hpp"
#include "siegel/linearize.hpp"
#include "oracles.hpp"

using namespace siegel;

namespace {

const RotationNumber& golden() {
  static const RotationNumber rn = RotationNumber::golden();
  return rn;
}

class PureRotation final : public HolomorphicMap {
 public:
  explicit PureRotation(const RotationNumber& rn) : rn_(rn) {}
  MapValue value(cplx z) const override { return rn_.lambda() * z; }
  MapValue derivative(cplx) const override { return rn_.lambda(); }
  std::vector<cplx> taylor(int n) const override {
    std::vector<cplx> c(static_cast<std::size_t>(n), cplx{});
    c[0] = rn_.lambda();
    return c;
  }
  const RotationNumber& rotation() const override { return rn_; }

 private:
  const RotationNumber& rn_;
};

}  // namespace

TEST(Series, FirstCoefficients) {
  const cplx a = 66.0;
  const cplx lambda = golden().lambda();
  const LinearizationSeries ls = compute_series(ParameterPoint(a, golden()), golden(), 40);
  ASSERT_EQ(ls.order(), 40);
  EXPECT_EQ(ls.coefficients[0], cplx(1.0, 0.0));
  const cplx h2 = lambda * (a + 1.0) / (2.0 * a) / (lambda * lambda - lambda);
  EXPECT_LT(std::abs(ls.coefficients[1] - h2), 1e-10);
}

TEST(Series, MatchesCompositionOracle) {
  for (cplx a : {cplx{66, 0}, cplx{1, 0}, cplx{-2.0, 1.5}, cplx{0.3, -0.4}}) {
    const ParameterPoint pp(a, golden());
    const LinearizationSeries ls = compute_series(pp, golden(), 12);
    const auto oracle = oracle::composition_solve(taylor_prefix(pp, golden(), 12).coefficients, golden().lambda(), 12);
    for (int n = 2; n <= 12; ++n) {
      const cplx got = ls.coefficients[static_cast<std::size_t>(n - 1)];
      const cplx want = oracle[static_cast<std::size_t>(n - 1)];
      EXPECT_LT(std::abs(got - want), 1e-9 * std::max(1.0, std::abs(want))) << "a=" << a << " n=" << n;
    }
  }
}

TEST(Series, ResidualSmallAtHalfRadius) {
  const LinearizationSeries ls = compute_series(ParameterPoint(66.0, golden()), golden(), 40);
  ASSERT_EQ(ls.residual_profile.size(), 3u);
  EXPECT_NEAR(ls.residual_profile.back().radius, 0.5 * ls.sample_radius_basis, 1e-15);
  EXPECT_LT(ls.residual(), 1e-10);
}

TEST(Series, ResidualProfileIncreasesOutward) {
  const LinearizationSeries ls = compute_series(ParameterPoint(cplx{1.0, 0.5}, golden()), golden(), 64);
  const auto& p = ls.residual_profile;
  ASSERT_EQ(p.size(), 3u);
  EXPECT_LT(p[0].radius, p[1].radius);
  EXPECT_LT(p[1].radius, p[2].radius);
  EXPECT_LE(p[0].residual, p[2].residual + 1e-15);
}

TEST(Series, OrderBounds) {
  const ParameterPoint pp(1.0, golden());
  EXPECT_THROW(compute_series(pp, golden(), 1), DomainError);
  EXPECT_THROW(compute_series(pp, golden(), 257), DomainError);
}

TEST(Series, SmallDivisorsStayAboveAbortForGolden) {
  const LinearizationSeries ls = compute_series(ParameterPoint(2.0, golden()), golden(), kMaxSeriesOrder);
  namespace bmp = boost::multiprecision;
  using mpf = bmp::cpp_bin_float_50;
  const mpf theta = (bmp::sqrt(mpf(5)) - 1) / 2;
  const mpf pi = boost::math::constants::pi<mpf>();
  for (int n = 2; n <= kMaxSeriesOrder; ++n) {
    // |lambda^n - lambda| = 2 |sin(pi (n-1) theta)|
    const double oracle = (2 * bmp::abs(bmp::sin(pi * (n - 1) * theta))).convert_to<double>();
    const double got = std::abs(ls.small_divisors[static_cast<std::size_t>(n - 2)]);
    EXPECT_GT(got, kSmallDivisorAbort);
    EXPECT_NEAR(got, oracle, 1e-12) << n;
  }
}

TEST(Series, RationalRotationAborts) {
  const RotationNumber rn = RotationNumber::from_quotients({1, 1, 1});  // 2/3
  try {
    compute_series(ParameterPoint(2.0, rn), rn, 16);
    FAIL() << "expected SmallDivisorError";
  } catch (const SmallDivisorError& e) {
    EXPECT_EQ(e.order(), 4);
  }
}

TEST(Capacity, RescalingLaw) {
  const ParameterPoint pp(cplx{1.5, 0.5}, golden());
  const FamilyMap f(pp, golden());
  const double s = 0.2;
  const RescaledMap g(f, s);
  const LinearizationSeries lf = compute_series(f, 64);
  const LinearizationSeries lg = compute_series(g, 64);
  for (int n = 2; n <= 20; ++n) {
    const cplx want = lf.coefficients[static_cast<std::size_t>(n - 1)] * std::pow(s, n - 1);
    EXPECT_LT(std::abs(lg.coefficients[static_cast<std::size_t>(n - 1)] - want), 1e-9 * std::abs(want) + 1e-300);
  }
  const CapacityEstimate ef = capacity_estimate(lf);
  const CapacityEstimate eg = capacity_estimate(lg);
  EXPECT_NEAR(eg.radius_stable, ef.radius_stable / s, 1e-6 * ef.radius_stable / s);
}

TEST(Capacity, PureRotationClampsToMaximum) {
  const PureRotation rot(golden());
  const LinearizationSeries ls = compute_series(rot, 32);
  for (int n = 2; n <= 32; ++n) EXPECT_EQ(ls.coefficients[static_cast<std::size_t>(n - 1)], cplx(0.0, 0.0));
  EXPECT_TRUE(std::isinf(root_test_radius(ls.coefficients, 32)));
  const CapacityEstimate est = capacity_estimate(ls);
  EXPECT_EQ(est.radius_stable, 1e6);
  EXPECT_EQ(est.trap_radius, 1e6 / 4.0 * 0.8);
  EXPECT_EQ(trap_disc(rot).radius, 2e5);
}

TEST(Capacity, TrapBelowKoebeQuarter) {
  for (cplx a : {cplx{1, 0}, cplx{66, 0}, cplx{-0.5, 0.3}, cplx{3, -2}}) {
    const LinearizationSeries ls = compute_series(ParameterPoint(a, golden()), golden(), 64);
    const CapacityEstimate est = capacity_estimate(ls);
    EXPECT_GT(est.trap_radius, 0.0);
    EXPECT_LE(est.trap_radius, est.radius_stable / 4.0);
    EXPECT_LE(est.radius_stable, std::min(est.radius_root_test, est.radius_half_order));
  }
}

TEST(Capacity, UnstableEstimateRejected) {
  LinearizationSeries ls;
  for (int n = 1; n <= 40; ++n) ls.coefficients.push_back(n <= 20 ? 1.0 : std::pow(10.0, n - 20));
  EXPECT_THROW(capacity_estimate(ls), InstabilityError);
  ls.coefficients.resize(19);
  EXPECT_THROW(capacity_estimate(ls), DomainError);
}

TEST(Capacity, AgreementFlagForGeometricSeries) {
  LinearizationSeries ls;
  for (int n = 1; n <= 64; ++n) ls.coefficients.push_back(std::pow(2.0, n));
  const CapacityEstimate est = capacity_estimate(ls);
  EXPECT_TRUE(est.agreement);
  EXPECT_NEAR(est.radius_root_test, 0.5, 1e-12);
}

TEST(Trap, SemiStandardContainsCentre) {
  const ParameterPoint pp(1.0, golden());
  const TrapDisc trap = trap_disc(pp, golden());
  EXPECT_GT(trap.radius, 0.0);
  EXPECT_LT(std::abs(pp.asymptotic_value()), trap.radius);
  EXPECT_TRUE(trap.sanity.passed);
}

TEST(Trap, RotationSanityAt66) {
  const ParameterPoint pp(66.0, golden());
  const FamilyMap f(pp, golden());
  const TrapDisc trap = trap_disc(f);
  const RotationCheck check = rotation_check(f, cplx{0.5 * trap.radius, 0.0}, 2.0 * trap.capacity.radius_stable);
  EXPECT_TRUE(check.passed);
  const double target = 2.0 * M_PI * golden().theta();
  EXPECT_NEAR(check.mean_increment, target, 0.1 * target);
  EXPECT_LT(check.max_modulus, 2.0 * trap.capacity.radius_stable);
}

TEST(Trap, OrbitFarOutsideFailsRotationCheck) {
  const ParameterPoint pp(1.0, golden());
  const FamilyMap f(pp, golden());
  EXPECT_FALSE(rotation_check(f, cplx{5.0, 0.0}, 10.0).passed);
}
