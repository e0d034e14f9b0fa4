#include "siegel/arithmetic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "siegel/errors.hpp"

namespace siegel {

namespace {

std::uint64_t checked_step(std::uint64_t a, std::uint64_t x, std::uint64_t prev, std::size_t k) {
  std::uint64_t product = 0;
  std::uint64_t sum = 0;
  if (__builtin_mul_overflow(a, x, &product) || __builtin_add_overflow(product, prev, &sum)) {
    throw ConvergentOverflow("convergent recurrence overflows 64 bits at k = " + std::to_string(k));
  }
  return sum;
}

// Appends the convergent for quotient a given the two previous ones.
Convergent next_convergent(std::uint64_t a, const Convergent& prev, const Convergent& prev2, std::size_t k) {
  return {checked_step(a, prev.p, prev2.p, k), checked_step(a, prev.q, prev2.q, k)};
}

}  // namespace

ContinuedFraction ContinuedFraction::from_quotients(std::vector<std::uint64_t> quotients) {
  ContinuedFraction cf;
  cf.convergents_.reserve(quotients.size());
  Convergent prev2{1, 0};  // p_{-1}/q_{-1}
  Convergent prev{0, 1};   // p_0/q_0
  for (std::size_t k = 0; k < quotients.size(); ++k) {
    if (quotients[k] == 0) throw DomainError("partial quotients must be positive");
    const Convergent c = next_convergent(quotients[k], prev, prev2, k + 1);
    cf.convergents_.push_back(c);
    prev2 = prev;
    prev = c;
  }
  cf.quotients_ = std::move(quotients);
  cf.exact_ = true;
  return cf;
}

double ContinuedFraction::value() const {
  if (convergents_.empty()) return 0.0;
  // Backward evaluation is more accurate than p_n/q_n once q_n is large.
  double x = 0.0;
  for (auto it = quotients_.rbegin(); it != quotients_.rend(); ++it) {
    x = 1.0 / (static_cast<double>(*it) + x);
  }
  return x;
}

ContinuedFraction cf_expand(double theta, int max_terms) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
  if (max_terms < 1 || max_terms > 64) throw DomainError("max_terms must be in [1, 64] for a double input");

  ContinuedFraction cf;
  cf.exact_ = false;
  Convergent prev2{1, 0};
  Convergent prev{0, 1};
  double x = theta;
  // Each Gauss step amplifies the initial rounding error by roughly q_k^2;
  // past this point the quotients are noise.
  constexpr double kPrecisionLimit = 1e15;
  for (int k = 0; k < max_terms; ++k) {
    if (x < 1e-15) {
      cf.truncated_ = true;
      break;
    }
    const double inv = 1.0 / x;
    const double a = std::floor(inv);
    x = inv - a;
    const auto q = static_cast<std::uint64_t>(a);
    const Convergent c = next_convergent(q, prev, prev2, static_cast<std::size_t>(k) + 1);
    cf.quotients_.push_back(q);
    cf.convergents_.push_back(c);
    prev2 = prev;
    prev = c;
    if (static_cast<double>(c.q) * static_cast<double>(c.q) > kPrecisionLimit) {
      cf.truncated_ = k + 1 < max_terms;
      break;
    }
  }
  return cf;
}

ContinuedFraction golden_mean_expansion(std::size_t n) {
  return ContinuedFraction::from_quotients(std::vector<std::uint64_t>(n, 1));
}

const char* to_string(BrjunoVerdict v) noexcept {
  switch (v) {
    case BrjunoVerdict::Brjuno:
      return "Brjuno";
    case BrjunoVerdict::NotBrjunoSuspected:
      return "NotBrjunoSuspected";
    case BrjunoVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

BrjunoEstimate brjuno_sum(const ContinuedFraction& cf, double tol, double divergence_threshold) {
  BrjunoEstimate est;
  const auto& conv = cf.convergents();
  est.running_sums.reserve(conv.size());

  // term n uses q_n and q_{n+1}, with q_0 = 1
  double q_prev = 1.0;
  for (const Convergent& c : conv) {
    const double q_next = static_cast<double>(c.q);
    est.partial_sum += std::log(q_next) / q_prev;
    est.running_sums.push_back(est.partial_sum);
    ++est.terms_used;
    q_prev = q_next;
    if (est.partial_sum > divergence_threshold) {
      est.verdict = BrjunoVerdict::NotBrjunoSuspected;
      est.tail_bound = std::numeric_limits<double>::infinity();
      return est;
    }
  }

  if (conv.size() < 3) {
    est.tail_bound = std::numeric_limits<double>::infinity();
    est.verdict = BrjunoVerdict::Inconclusive;
    return est;
  }

  // Continue with the slowest-growing denominators (all quotients 1).
  double qa = static_cast<double>(conv[conv.size() - 2].q);
  double qb = static_cast<double>(conv.back().q);
  double tail = 0.0;
  double term = 0.0;
  for (int k = 0; k < 4000; ++k) {
    const double qc = qa + qb;
    term = std::log(qc) / qb;
    tail += term;
    qa = qb;
    qb = qc;
    if (term < 1e-30 * (1.0 + tail) || !std::isfinite(qc)) break;
  }
  // Remaining terms decay at least with ratio 1/phi * (1 + small).
  constexpr double kRatio = 0.75;
  tail += term * kRatio / (1.0 - kRatio);
  est.tail_bound = tail;
  est.verdict = tail < tol ? BrjunoVerdict::Brjuno : BrjunoVerdict::Inconclusive;
  return est;
}

BoundedTypeReport is_bounded_type(const ContinuedFraction& cf, std::uint64_t bound) {
  BoundedTypeReport report;
  report.bounded = true;
  for (std::uint64_t a : cf.partial_quotients()) {
    ++report.inspected;
    if (a > bound) {
      report.bounded = false;
      break;
    }
  }
  report.precision_caveat = report.bounded && !cf.exact();
  return report;
}

}  // namespace siegel
