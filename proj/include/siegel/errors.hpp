#pragma once

#include <stdexcept>
#include <string>

namespace siegel {

/// Invalid input to an operation (a = 0, theta outside (0,1), R <= 4, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Convergent recurrence p_k, q_k left the range of 64-bit integers.
class ConvergentOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// |lambda^n - lambda| fell below the abort threshold while solving for h_n.
class SmallDivisorError : public std::runtime_error {
 public:
  SmallDivisorError(int order, double divisor)
      : std::runtime_error("small divisor at order " + std::to_string(order) + ": |lambda^n - lambda| = " +
                           std::to_string(divisor)),
        order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// Capacity estimators disagree by more than the accepted spread.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument-principle refinement hit its sample cap.
class ContourTooCoarse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace siegel
