#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace siegel {

struct Convergent {
  std::uint64_t p = 0;
  std::uint64_t q = 1;
};

/// Continued fraction [0; a_1, a_2, ...] of a number in (0,1).
///
/// Two construction channels: from_quotients() is exact, cf_expand() works
/// from a double and stops once the Gauss map has exhausted the available
/// precision. The convergents are p_k/q_k for k = 1..n (p_0/q_0 = 0/1 is
/// implicit).
class ContinuedFraction {
 public:
  /// Throws ConvergentOverflow when p_k or q_k does not fit in 64 bits and
  /// DomainError on a zero quotient.
  static ContinuedFraction from_quotients(std::vector<std::uint64_t> quotients);

  const std::vector<std::uint64_t>& partial_quotients() const noexcept { return quotients_; }
  const std::vector<Convergent>& convergents() const noexcept { return convergents_; }
  std::size_t size() const noexcept { return quotients_.size(); }

  /// True when built from an explicit quotient list.
  bool exact() const noexcept { return exact_; }
  /// True when a double expansion stopped because precision ran out (or the
  /// fractional part vanished) rather than because max_terms was reached.
  bool truncated() const noexcept { return truncated_; }

  /// Evaluates the finite fraction back to a real number.
  double value() const;

 private:
  friend ContinuedFraction cf_expand(double theta, int max_terms);

  std::vector<std::uint64_t> quotients_;
  std::vector<Convergent> convergents_;
  bool exact_ = true;
  bool truncated_ = false;
};

/// Gauss-map expansion of theta in (0,1), at most max_terms (<= 64) quotients.
ContinuedFraction cf_expand(double theta, int max_terms = 64);

/// Explicit expansion of the golden mean (sqrt(5)-1)/2: n ones.
ContinuedFraction golden_mean_expansion(std::size_t n = 88);

enum class BrjunoVerdict { Brjuno, NotBrjunoSuspected, Inconclusive };

const char* to_string(BrjunoVerdict v) noexcept;

struct BrjunoEstimate {
  double partial_sum = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;
  BrjunoVerdict verdict = BrjunoVerdict::Inconclusive;
  /// S_1, S_2, ..., S_terms_used.
  std::vector<double> running_sums;
};

inline constexpr double kDefaultDivergenceThreshold = 1e3;

/// Partial sums of sum_{n>=0} log(q_{n+1})/q_n plus a tail estimate that
/// continues the denominators with all-ones quotients.
BrjunoEstimate brjuno_sum(const ContinuedFraction& cf, double tol,
                          double divergence_threshold = kDefaultDivergenceThreshold);

struct BoundedTypeReport {
  bool bounded = false;
  std::size_t inspected = 0;
  /// Set when the quotients came from a precision-limited double expansion,
  /// so only the first `inspected` quotients are known.
  bool precision_caveat = false;
};

BoundedTypeReport is_bounded_type(const ContinuedFraction& cf, std::uint64_t bound);

}  // namespace siegel
