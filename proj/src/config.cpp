#include "siegel/config.hpp"

#include "siegel/errors.hpp"

namespace siegel {

using nlohmann::json;

RotationNumber ThetaSpec::resolve() const {
  switch (kind) {
    case Kind::Golden:
      return RotationNumber::golden();
    case Kind::Value:
      return RotationNumber::from_theta(value);
    case Kind::Quotients:
      return RotationNumber::from_quotients(quotients);
  }
  throw DomainError("unknown theta kind");
}

IterationPolicy RunConfig::policy() const {
  IterationPolicy p;
  p.max_iter = max_iter;
  p.escape_radius = escape_radius;
  if (trap_radius) p.trap_source = FixedTrap{*trap_radius};
  p.cycle_max_period = cycle_max_period;
  p.cycle_tol = cycle_tol;
  p.newton_max_steps = newton_max_steps;
  return p;
}

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }
cplx complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  switch (c.theta.kind) {
    case ThetaSpec::Kind::Golden:
      j["theta"] = {{"kind", "golden"}};
      break;
    case ThetaSpec::Kind::Value:
      j["theta"] = {{"kind", "value"}, {"value", c.theta.value}};
      break;
    case ThetaSpec::Kind::Quotients:
      j["theta"] = {{"kind", "quotients"}, {"quotients", c.theta.quotients}};
      break;
  }
  j["policy"] = {{"max_iter", c.max_iter},
                 {"escape_radius", c.escape_radius},
                 {"cycle_max_period", c.cycle_max_period},
                 {"cycle_tol", c.cycle_tol},
                 {"newton_max_steps", c.newton_max_steps},
                 {"trap_radius", c.trap_radius ? json(*c.trap_radius) : json(nullptr)}};
  if (c.viewport) {
    j["viewport"] = {{"upper_left", complex_json(c.viewport->upper_left)},
                     {"lower_right", complex_json(c.viewport->lower_right)},
                     {"width", c.viewport->width_px},
                     {"height", c.viewport->height_px}};
  } else {
    j["viewport"] = nullptr;
  }
  j["a"] = c.a ? complex_json(*c.a) : json(nullptr);
  j["map"] = c.map;
  j["palette"] = c.palette;
  j["output"] = c.output;
  j["workers"] = c.workers;
  j["supersample"] = c.supersample;
  j["figure"] = c.figure;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  const json& t = j.at("theta");
  const auto kind = t.at("kind").get<std::string>();
  if (kind == "golden") {
    c.theta.kind = ThetaSpec::Kind::Golden;
  } else if (kind == "value") {
    c.theta.kind = ThetaSpec::Kind::Value;
    c.theta.value = t.at("value").get<double>();
  } else if (kind == "quotients") {
    c.theta.kind = ThetaSpec::Kind::Quotients;
    c.theta.quotients = t.at("quotients").get<std::vector<std::uint64_t>>();
  } else {
    throw DomainError("unknown theta kind: " + kind);
  }
  const json& p = j.at("policy");
  c.max_iter = p.at("max_iter").get<int>();
  c.escape_radius = p.at("escape_radius").get<double>();
  c.cycle_max_period = p.at("cycle_max_period").get<int>();
  c.cycle_tol = p.at("cycle_tol").get<double>();
  c.newton_max_steps = p.at("newton_max_steps").get<int>();
  if (!p.at("trap_radius").is_null()) c.trap_radius = p.at("trap_radius").get<double>();
  if (const json& v = j.at("viewport"); !v.is_null()) {
    c.viewport = Viewport{complex_from(v.at("upper_left")), complex_from(v.at("lower_right")), v.at("width").get<int>(),
                          v.at("height").get<int>()};
  }
  if (!j.at("a").is_null()) c.a = complex_from(j.at("a"));
  c.map = j.at("map").get<std::string>();
  c.palette = j.at("palette").get<std::string>();
  c.output = j.at("output").get<std::string>();
  c.workers = j.at("workers").get<int>();
  c.supersample = j.at("supersample").get<int>();
  c.figure = j.at("figure").get<std::string>();
  return c;
}

}  // namespace siegel
