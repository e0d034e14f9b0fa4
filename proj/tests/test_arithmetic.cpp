#include <gtest/gtest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "siegel/arithmetic.hpp"
#include "siegel/errors.hpp"
#include "oracles.hpp"

using namespace siegel;
using mp50 = boost::multiprecision::cpp_bin_float_50;

namespace {

std::vector<std::uint64_t> gauss_oracle(mp50 x, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n && x != 0; ++i) {
    x = 1 / x;
    const mp50 a = floor(x);
    out.push_back(a.convert_to<std::uint64_t>());
    x -= a;
  }
  return out;
}

}  // namespace

TEST(ContinuedFraction, GoldenMeanHasAllOnes) {
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const ContinuedFraction cf = cf_expand(golden, 30);
  ASSERT_GE(cf.size(), 30u);
  for (std::uint64_t a : cf.partial_quotients()) EXPECT_EQ(a, 1u);
}

TEST(ContinuedFraction, InversePiQuotientsMatchOracle) {
  const ContinuedFraction cf = cf_expand(1.0 / M_PI, 64);
  const auto oracle = gauss_oracle(1 / boost::math::constants::pi<mp50>(), 8);
  ASSERT_GE(cf.size(), 8u);
  EXPECT_EQ(cf.partial_quotients()[0], 3u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(cf.partial_quotients()[i], oracle[i]) << i;
}

TEST(ContinuedFraction, GoldenDenominatorsAreFibonacci) {
  const ContinuedFraction cf = golden_mean_expansion(40);
  const auto& c = cf.convergents();
  ASSERT_EQ(c.size(), 40u);
  std::uint64_t f0 = 1, f1 = 1;
  for (const Convergent& conv : c) {
    EXPECT_EQ(conv.q, f1);
    EXPECT_EQ(conv.p, f0);
    const std::uint64_t next = f0 + f1;
    f0 = f1;
    f1 = next;
  }
}

TEST(ContinuedFraction, RecurrenceHoldsExactly) {
  const ContinuedFraction cf = ContinuedFraction::from_quotients({2, 7, 1, 5, 3, 11, 1, 1, 4});
  const auto& a = cf.partial_quotients();
  const auto& c = cf.convergents();
  std::uint64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::uint64_t pn = a[k] * p + p_prev;
    const std::uint64_t qn = a[k] * q + q_prev;
    EXPECT_EQ(c[k].p, pn);
    EXPECT_EQ(c[k].q, qn);
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
  }
  for (std::size_t k = 1; k < c.size(); ++k) EXPECT_GT(c[k].q, c[k - 1].q);
}

TEST(ContinuedFraction, ConvergentsApproximateTheta) {
  const ContinuedFraction cf = golden_mean_expansion(30);
  const double theta = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto& c = cf.convergents();
  for (std::size_t k = 0; k + 1 < 20; ++k) {
    const double err = std::abs(theta - static_cast<double>(c[k].p) / static_cast<double>(c[k].q));
    EXPECT_LT(err, 1.0 / (static_cast<double>(c[k].q) * static_cast<double>(c[k + 1].q))) << k;
  }
}

TEST(ContinuedFraction, RoundTripWithinLastConvergent) {
  const double theta = 0.3183098861837907;
  const ContinuedFraction cf = cf_expand(theta, 64);
  const double q = static_cast<double>(cf.convergents().back().q);
  EXPECT_LE(std::abs(cf.value() - theta), std::max(1.0 / (q * q), 1e-16));
}

TEST(ContinuedFraction, OverflowIsTypedNotWrapped) {
  std::vector<std::uint64_t> big(5, 1ull << 20);
  EXPECT_THROW(ContinuedFraction::from_quotients(big), ConvergentOverflow);
  EXPECT_THROW(ContinuedFraction::from_quotients({1, 0, 2}), DomainError);
}

TEST(ContinuedFraction, RejectsThetaOutsideUnitInterval) {
  EXPECT_THROW(cf_expand(0.0), DomainError);
  EXPECT_THROW(cf_expand(1.0), DomainError);
  EXPECT_THROW(cf_expand(1.5), DomainError);
}

TEST(Brjuno, GoldenSumMatchesMultiprecisionOracle) {
  const BrjunoEstimate est = brjuno_sum(golden_mean_expansion(), 1e-8);
  EXPECT_EQ(est.verdict, BrjunoVerdict::Brjuno);
  EXPECT_LT(est.tail_bound, 1e-8);
  EXPECT_NEAR(est.partial_sum, oracle::golden_brjuno_sum(), 1e-8);
  EXPECT_NEAR(est.partial_sum, 3.2861297012622964, 1e-12);
}

TEST(Brjuno, PartialSumsNondecreasing) {
  const BrjunoEstimate est = brjuno_sum(ContinuedFraction::from_quotients({3, 7, 15, 1, 292, 1, 1, 1, 2}), 1e-8);
  for (std::size_t k = 1; k < est.running_sums.size(); ++k) {
    EXPECT_GE(est.running_sums[k], est.running_sums[k - 1]);
  }
}

TEST(Brjuno, GoldenIncrementsContractGeometrically) {
  const BrjunoEstimate est = brjuno_sum(golden_mean_expansion(), 1e-8);
  const auto& s = est.running_sums;
  for (std::size_t n = 6; n + 2 < s.size() && n < 60; ++n) {
    const double d0 = s[n] - s[n - 1];
    const double d1 = s[n + 1] - s[n];
    EXPECT_LE(d1, 0.75 * d0) << n;
  }
}

TEST(Brjuno, DoublyExponentialQuotientsFlagged) {
  // a_n = 2^(2^n), as many terms as 64-bit convergents allow
  std::vector<std::uint64_t> quotients;
  for (int n = 0; n < 6; ++n) quotients.push_back(std::uint64_t{1} << (1u << n));
  const BrjunoEstimate est = brjuno_sum(ContinuedFraction::from_quotients(quotients), 1e-8);
  EXPECT_EQ(est.verdict, BrjunoVerdict::NotBrjunoSuspected) << "partial sum " << est.partial_sum;
}

TEST(Brjuno, DivergenceThresholdTriggers) {
  const BrjunoEstimate est = brjuno_sum(ContinuedFraction::from_quotients({1, 1, 1, 1, 1}), 1e-8, 1.0);
  EXPECT_EQ(est.verdict, BrjunoVerdict::NotBrjunoSuspected);
}

TEST(Brjuno, TwoTermsInconclusive) {
  EXPECT_EQ(brjuno_sum(ContinuedFraction::from_quotients({1, 1}), 1e-8).verdict, BrjunoVerdict::Inconclusive);
  EXPECT_EQ(brjuno_sum(ContinuedFraction::from_quotients({5, 2}), 1e-8).verdict, BrjunoVerdict::Inconclusive);
}

TEST(Brjuno, BrjunoVerdictOnlyWithSmallTail) {
  for (double theta : {0.1, 0.2718281828, 0.41421356237, 0.6180339887}) {
    for (double tol : {1e-2, 1e-8, 1e-14}) {
      const BrjunoEstimate est = brjuno_sum(cf_expand(theta), tol);
      if (est.verdict == BrjunoVerdict::Brjuno) EXPECT_LT(est.tail_bound, tol);
    }
  }
}

TEST(BoundedType, GoldenBoundOne) {
  const BoundedTypeReport r = is_bounded_type(golden_mean_expansion(), 1);
  EXPECT_TRUE(r.bounded);
  EXPECT_FALSE(r.precision_caveat);
}

TEST(BoundedType, LargeQuotientFails) {
  const BoundedTypeReport r = is_bounded_type(ContinuedFraction::from_quotients({1, 2, 7, 1}), 5);
  EXPECT_FALSE(r.bounded);
}

TEST(BoundedType, DoubleExpansionCarriesCaveat) {
  const double theta = (std::sqrt(5.0) - 1.0) / 2.0;
  const ContinuedFraction cf = cf_expand(theta);
  const BoundedTypeReport r = is_bounded_type(cf, 1);
  EXPECT_TRUE(r.bounded);
  EXPECT_TRUE(r.precision_caveat);
  EXPECT_EQ(r.inspected, cf.size());
  // the double is a rational; its exact expansion departs from all ones
  // shortly after the point where cf_expand stopped
  const auto oracle = gauss_oracle(mp50(theta), static_cast<int>(cf.size()) + 10);
  for (std::size_t i = 0; i < cf.size(); ++i) EXPECT_EQ(cf.partial_quotients()[i], oracle[i]) << i;
  bool departs = false;
  for (std::size_t i = cf.size(); i < oracle.size(); ++i) departs |= oracle[i] != 1;
  EXPECT_TRUE(departs);
}
