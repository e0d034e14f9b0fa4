#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "siegel/map_core.hpp"

namespace siegel {

struct LinearizerTrap {};
struct FixedTrap {
  double radius = 0.0;
};
using TrapSource = std::variant<LinearizerTrap, FixedTrap>;

struct IterationPolicy {
  int max_iter = 5000;
  double escape_radius = 1e10;
  TrapSource trap_source = LinearizerTrap{};
  int cycle_max_period = 64;
  double cycle_tol = 1e-9;
  int newton_max_steps = 50;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

struct Escaped {
  int first_exit_iter = 0;
};
struct Cycle {
  int period = 0;
  cplx multiplier;
  cplx representative;
  std::vector<cplx> points;
  /// Iteration at which the cycle was detected on the orbit.
  int detected_iter = 0;
};
struct Captured {
  int entry_iter = 0;
};

enum class UndecidedReason { Budget, NewtonFailed, NeutralCycle, RepellingCycle, NoTrap };
const char* to_string(UndecidedReason r) noexcept;

struct Undecided {
  UndecidedReason reason = UndecidedReason::Budget;
  int iterations = 0;
};

using OrbitClass = std::variant<Escaped, Cycle, Captured, Undecided>;

enum class Termination { Escaped, TrapEntry, PeriodicCandidate, Budget };

struct OrbitTrace {
  std::vector<cplx> points;
  Termination termination = Termination::Budget;
};

/// Raw orbit of z0 under the map. Stops on escape (or overflow), on entry
/// into D(0, trap_radius) (trap_radius <= 0 disables it), when
/// detect_cycle locks at one of the periodic checkpoints, or at max_iter.
OrbitTrace iterate_orbit(const HolomorphicMap& map, cplx z0, const IterationPolicy& policy,
                         double trap_radius = 0.0);

struct CycleCandidate {
  int period = 0;
  cplx point;
};

/// Smallest p <= cycle_max_period with |z_{n+p} - z_n| < tol (1 + |z_n|)
/// for 3p consecutive n at the end of the trace (within its trailing half).
std::optional<CycleCandidate> detect_cycle(const std::vector<cplx>& trace, const IterationPolicy& policy);

enum class CycleStatus { Converged, NewtonFailed, Overflow };

struct CycleSolution {
  CycleStatus status = CycleStatus::NewtonFailed;
  std::vector<cplx> points;
  cplx multiplier;
  int steps = 0;
};

/// Newton's method on F(z) = F^p(z) - z from seed.
CycleSolution find_cycle(const HolomorphicMap& map, cplx seed, int period, int max_steps = 50);
CycleSolution find_cycle(const ParameterPoint& pp, const RotationNumber& rn, cplx seed, int period,
                         int max_steps = 50);

inline constexpr double kNeutralBand = 1e-9;

/// Full classification of one orbit: escape, attracting cycle (refined by
/// find_cycle), capture in the trap disc (with rotation sanity check), or
/// undecided.
OrbitClass classify_orbit(const HolomorphicMap& map, cplx z0, const IterationPolicy& policy,
                          std::optional<double> trap_radius);

enum class LabelKind { Hc, Hv, Cc, Cv, BothAccumulate, EscapeC, EscapeV, Unknown };
const char* to_string(LabelKind k) noexcept;

struct Label {
  LabelKind kind = LabelKind::Unknown;
  /// Period for Hc/Hv, capture time for Cc/Cv, 0 otherwise.
  int p = 0;
  bool operator==(const Label&) const = default;
};

struct ParameterClass {
  OrbitClass critical_class;
  OrbitClass asymptotic_class;
  Label label;
  /// Trap radius used for capture tests; empty when the linearizer failed.
  std::optional<double> trap_radius;
  std::string trap_note;
};

/// Combines the two singular-orbit classes into a single label.
Label combine_label(const OrbitClass& critical, const OrbitClass& asymptotic);

ParameterClass classify_parameter(cplx a, const RotationNumber& rn, const IterationPolicy& policy);

std::string describe(const OrbitClass& c);

}  // namespace siegel
