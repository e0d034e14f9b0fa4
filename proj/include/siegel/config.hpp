#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "siegel/classify.hpp"
#include "siegel/render.hpp"

namespace siegel {

struct ThetaSpec {
  enum class Kind { Golden, Value, Quotients };
  Kind kind = Kind::Golden;
  double value = 0.0;
  std::vector<std::uint64_t> quotients;

  RotationNumber resolve() const;
  bool operator==(const ThetaSpec&) const = default;
};

/// Everything needed to rerun a command; embedded next to every output.
struct RunConfig {
  std::string command;
  ThetaSpec theta;
  int max_iter = 5000;
  double escape_radius = 1e10;
  std::optional<double> trap_radius;
  int cycle_max_period = 64;
  double cycle_tol = 1e-9;
  int newton_max_steps = 50;
  std::optional<Viewport> viewport;
  std::optional<cplx> a;
  /// "family" (f_a) or "quadratic" (its a -> infinity limit).
  std::string map = "family";
  std::string palette = "escape";
  std::string output;
  int workers = 0;
  int supersample = 1;
  std::string figure;

  IterationPolicy policy() const;
  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace siegel
