#include "siegel/classify.hpp"

#include <cmath>
#include <sstream>

#include "siegel/errors.hpp"
#include "siegel/linearize.hpp"

namespace siegel {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// First checkpoint for cycle detection; later ones double.
constexpr std::size_t kFirstCycleCheck = 64;
constexpr int kMaxTrapRejections = 3;

OrbitClass resolve_cycle(const HolomorphicMap& map, const CycleCandidate& cand, const IterationPolicy& policy,
                         int iter) {
  const CycleSolution sol = find_cycle(map, cand.point, cand.period, policy.newton_max_steps);
  if (sol.status != CycleStatus::Converged) return Undecided{UndecidedReason::NewtonFailed, iter};
  const double mod = std::abs(sol.multiplier);
  if (mod < 1.0 - kNeutralBand) {
    return Cycle{cand.period, sol.multiplier, sol.points.front(), sol.points, iter};
  }
  if (mod <= 1.0 + kNeutralBand) return Undecided{UndecidedReason::NeutralCycle, iter};
  return Undecided{UndecidedReason::RepellingCycle, iter};
}

// Capture in D(0, trap) is confirmed by the rotation check; the orbit must
// stay within twice the stable capacity radius, i.e. 10x the trap radius.
bool confirm_capture(const HolomorphicMap& map, cplx z, double trap) {
  if (z == cplx{}) return true;
  return rotation_check(map, z, 10.0 * trap).passed;
}

}  // namespace

void IterationPolicy::validate() const {
  if (!(escape_radius > 1e3)) throw DomainError("escape_radius must exceed 1e3");
  if (cycle_max_period < 1 || cycle_max_period > 512) throw DomainError("cycle_max_period must be in [1, 512]");
  if (max_iter < 100) throw DomainError("max_iter must be at least 100");
  if (!(cycle_tol > 0.0)) throw DomainError("cycle_tol must be positive");
  if (newton_max_steps < 1) throw DomainError("newton_max_steps must be positive");
  if (const auto* fixed = std::get_if<FixedTrap>(&trap_source); fixed && !(fixed->radius >= 0.0)) {
    throw DomainError("fixed trap radius must be nonnegative");
  }
}

const char* to_string(UndecidedReason r) noexcept {
  switch (r) {
    case UndecidedReason::Budget:
      return "budget";
    case UndecidedReason::NewtonFailed:
      return "newton_failed";
    case UndecidedReason::NeutralCycle:
      return "neutral_cycle";
    case UndecidedReason::RepellingCycle:
      return "repelling_cycle";
    case UndecidedReason::NoTrap:
      return "no_trap";
  }
  return "?";
}

const char* to_string(LabelKind k) noexcept {
  switch (k) {
    case LabelKind::Hc:
      return "Hc";
    case LabelKind::Hv:
      return "Hv";
    case LabelKind::Cc:
      return "Cc";
    case LabelKind::Cv:
      return "Cv";
    case LabelKind::BothAccumulate:
      return "BothAccumulate";
    case LabelKind::EscapeC:
      return "EscapeC";
    case LabelKind::EscapeV:
      return "EscapeV";
    case LabelKind::Unknown:
      return "Unknown";
  }
  return "?";
}

OrbitTrace iterate_orbit(const HolomorphicMap& map, cplx z0, const IterationPolicy& policy, double trap_radius) {
  OrbitTrace trace;
  trace.points.reserve(static_cast<std::size_t>(std::min(policy.max_iter, 8192)) + 1);
  std::size_t next_check = kFirstCycleCheck;
  cplx z = z0;
  for (int n = 0;; ++n) {
    if (!finite(z) || std::abs(z) > policy.escape_radius) {
      trace.termination = Termination::Escaped;
      return trace;
    }
    trace.points.push_back(z);
    if (trap_radius > 0.0 && std::abs(z) < trap_radius) {
      trace.termination = Termination::TrapEntry;
      return trace;
    }
    if (trace.points.size() == next_check) {
      next_check *= 2;
      if (detect_cycle(trace.points, policy)) {
        trace.termination = Termination::PeriodicCandidate;
        return trace;
      }
    }
    if (n == policy.max_iter) break;
    const MapValue next = map.value(z);
    if (!next) {
      trace.termination = Termination::Escaped;
      return trace;
    }
    z = *next;
  }
  trace.termination = detect_cycle(trace.points, policy) ? Termination::PeriodicCandidate : Termination::Budget;
  return trace;
}

std::optional<CycleCandidate> detect_cycle(const std::vector<cplx>& trace, const IterationPolicy& policy) {
  const std::size_t len = trace.size();
  for (int p = 1; p <= policy.cycle_max_period; ++p) {
    const auto up = static_cast<std::size_t>(p);
    // 3p comparisons z_n vs z_{n+p} need 4p points inside the trailing half.
    if (8 * up > len) break;
    bool locked = true;
    for (std::size_t i = 0; i < 3 * up; ++i) {
      const std::size_t n = len - 1 - up - i;
      const cplx zn = trace[n];
      if (!(std::abs(trace[n + up] - zn) < policy.cycle_tol * (1.0 + std::abs(zn)))) {
        locked = false;
        break;
      }
    }
    if (locked) return CycleCandidate{p, trace.back()};
  }
  return std::nullopt;
}

CycleSolution find_cycle(const HolomorphicMap& map, cplx seed, int period, int max_steps) {
  if (period < 1) throw DomainError("cycle period must be positive");
  CycleSolution sol;
  cplx z = seed;
  std::vector<cplx> orbit(static_cast<std::size_t>(period));
  for (int step = 0; step <= max_steps; ++step) {
    cplx w = z;
    cplx d{1.0, 0.0};
    for (int j = 0; j < period; ++j) {
      orbit[static_cast<std::size_t>(j)] = w;
      const MapValue dw = map.derivative(w);
      const MapValue fw = map.value(w);
      if (!dw || !fw || !finite(*fw) || !finite(*dw)) {
        sol.status = CycleStatus::Overflow;
        sol.steps = step;
        return sol;
      }
      d *= *dw;
      w = *fw;
    }
    const cplx F = w - z;
    if (std::abs(F) < 1e-12 * (1.0 + std::abs(z))) {
      sol.status = CycleStatus::Converged;
      sol.points = orbit;
      sol.multiplier = d;
      sol.steps = step;
      return sol;
    }
    if (step == max_steps) break;
    const cplx dz = F / (d - 1.0);
    if (!finite(dz)) break;
    z -= dz;
  }
  sol.status = CycleStatus::NewtonFailed;
  sol.steps = max_steps;
  return sol;
}

CycleSolution find_cycle(const ParameterPoint& pp, const RotationNumber& rn, cplx seed, int period, int max_steps) {
  return find_cycle(FamilyMap(pp, rn), seed, period, max_steps);
}

OrbitClass classify_orbit(const HolomorphicMap& map, cplx z0, const IterationPolicy& policy,
                          std::optional<double> trap_radius) {
  std::vector<cplx> trace;
  trace.reserve(static_cast<std::size_t>(std::min(policy.max_iter, 8192)) + 1);
  std::size_t next_check = kFirstCycleCheck;
  int rejections = 0;
  const double escape2 = policy.escape_radius * policy.escape_radius;
  const double trap2 = trap_radius ? *trap_radius * *trap_radius : 0.0;
  cplx z = z0;
  for (int n = 0;; ++n) {
    if (!finite(z) || std::norm(z) > escape2) return Escaped{n};
    if (trap_radius && rejections < kMaxTrapRejections && std::norm(z) < trap2) {
      if (confirm_capture(map, z, *trap_radius)) return Captured{n};
      ++rejections;
    }
    trace.push_back(z);
    if (trace.size() == next_check) {
      next_check *= 2;
      if (auto cand = detect_cycle(trace, policy)) return resolve_cycle(map, *cand, policy, n);
    }
    if (n == policy.max_iter) break;
    const MapValue next = map.value(z);
    if (!next) return Escaped{n + 1};
    z = *next;
  }
  if (auto cand = detect_cycle(trace, policy)) return resolve_cycle(map, *cand, policy, policy.max_iter);
  return Undecided{trap_radius ? UndecidedReason::Budget : UndecidedReason::NoTrap, policy.max_iter};
}

Label combine_label(const OrbitClass& critical, const OrbitClass& asymptotic) {
  if (const auto* c = std::get_if<Captured>(&asymptotic)) return {LabelKind::Cv, c->entry_iter};
  if (const auto* c = std::get_if<Captured>(&critical)) return {LabelKind::Cc, c->entry_iter};
  if (const auto* c = std::get_if<Cycle>(&asymptotic)) return {LabelKind::Hv, c->period};
  if (const auto* c = std::get_if<Cycle>(&critical)) return {LabelKind::Hc, c->period};
  if (std::holds_alternative<Escaped>(asymptotic)) return {LabelKind::EscapeV, 0};
  if (std::holds_alternative<Escaped>(critical)) return {LabelKind::EscapeC, 0};
  const auto* uc = std::get_if<Undecided>(&critical);
  const auto* uv = std::get_if<Undecided>(&asymptotic);
  if (uc && uv && uc->reason == UndecidedReason::Budget && uv->reason == UndecidedReason::Budget) {
    return {LabelKind::BothAccumulate, 0};
  }
  return {LabelKind::Unknown, 0};
}

ParameterClass classify_parameter(cplx a, const RotationNumber& rn, const IterationPolicy& policy) {
  policy.validate();
  const ParameterPoint pp(a, rn);
  const FamilyMap map(pp, rn);

  ParameterClass out;
  if (const auto* fixed = std::get_if<FixedTrap>(&policy.trap_source)) {
    out.trap_radius = fixed->radius;
    out.trap_note = "fixed";
  } else {
    try {
      out.trap_radius = trap_disc(map).radius;
      out.trap_note = "linearizer";
    } catch (const std::exception& e) {
      out.trap_note = e.what();
    }
  }

  // The critical orbit is started at the critical value; counts are shifted
  // by one so they refer to iterates of the critical point -1 itself.
  out.critical_class = classify_orbit(map, pp.critical_value(), policy, out.trap_radius);
  std::visit(
      [](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Escaped>) ++c.first_exit_iter;
        if constexpr (std::is_same_v<T, Captured>) ++c.entry_iter;
        if constexpr (std::is_same_v<T, Cycle>) ++c.detected_iter;
      },
      out.critical_class);
  out.asymptotic_class = classify_orbit(map, pp.asymptotic_value(), policy, out.trap_radius);
  out.label = combine_label(out.critical_class, out.asymptotic_class);
  return out;
}

std::string describe(const OrbitClass& c) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Escaped>) {
          os << "Escaped{" << v.first_exit_iter << "}";
        } else if constexpr (std::is_same_v<T, Cycle>) {
          os << "Cycle{p=" << v.period << ", |chi|=" << std::abs(v.multiplier) << "}";
        } else if constexpr (std::is_same_v<T, Captured>) {
          os << "Captured{" << v.entry_iter << "}";
        } else {
          os << "Undecided{" << to_string(v.reason) << "}";
        }
      },
      c);
  return os.str();
}

}  // namespace siegel
