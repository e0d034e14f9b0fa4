#include "siegel/cli.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "siegel/arithmetic.hpp"
#include "siegel/classify.hpp"
#include "siegel/config.hpp"
#include "siegel/errors.hpp"
#include "siegel/linearize.hpp"
#include "siegel/render.hpp"
#include "siegel/verify.hpp"

namespace siegel::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation succeeded but an --expect-pass assertion did not hold.
class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + what + ": " + s);
  }
}

cplx parse_complex(const std::string& s, const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError(what + " expects RE,IM but got " + s);
  return {parse_double(s.substr(0, comma), what), parse_double(s.substr(comma + 1), what)};
}

std::vector<std::uint64_t> parse_quotients(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0) {
      throw UsageError("--theta-cf expects positive integers, got " + tok);
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--theta-cf needs at least one quotient");
  return out;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json orbit_json(const OrbitClass& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Escaped>) {
          return {{"kind", "Escaped"}, {"first_exit_iter", v.first_exit_iter}};
        } else if constexpr (std::is_same_v<T, Cycle>) {
          json pts = json::array();
          for (const cplx& z : v.points) pts.push_back(complex_json(z));
          return {{"kind", "Cycle"},
                  {"period", v.period},
                  {"multiplier", complex_json(v.multiplier)},
                  {"multiplier_abs", std::abs(v.multiplier)},
                  {"representative", complex_json(v.representative)},
                  {"points", pts},
                  {"detected_iter", v.detected_iter}};
        } else if constexpr (std::is_same_v<T, Captured>) {
          return {{"kind", "Captured"}, {"entry_iter", v.entry_iter}};
        } else {
          return {{"kind", "Undecided"}, {"reason", to_string(v.reason)}, {"iterations", v.iterations}};
        }
      },
      c);
}

json policy_json(const IterationPolicy& p) {
  json j = {{"max_iter", p.max_iter},
            {"escape_radius", p.escape_radius},
            {"cycle_max_period", p.cycle_max_period},
            {"cycle_tol", p.cycle_tol},
            {"newton_max_steps", p.newton_max_steps}};
  if (const auto* f = std::get_if<FixedTrap>(&p.trap_source)) {
    j["trap_radius"] = f->radius;
  } else {
    j["trap_radius"] = "linearizer";
  }
  return j;
}

struct FigureRecipe {
  std::string command;
  std::string map = "family";
  std::optional<cplx> a;
  cplx upper_left;
  cplx lower_right;
  std::string palette;
};

const std::map<std::string, FigureRecipe>& figures() {
  static const std::map<std::string, FigureRecipe> table = {
      {"figure1-left", {"param-plane", "family", std::nullopt, {-2, 2}, {4, -4}, "escape"}},
      {"figure1-right", {"param-plane", "family", std::nullopt, {-2, 2}, {4, -4}, "capture"}},
      {"figure2-left", {"dyn-plane", "family", cplx{-0.62099, 0.0100973}, {-4, 3}, {2, -3}, "dynamical"}},
      {"figure2-right", {"dyn-plane", "family", cplx{1.0, 0.0}, {-3, 3}, {3, -3}, "dynamical"}},
      {"figure4-left", {"dyn-plane", "family", cplx{-0.330897, 0.101867}, {-1.5, 1.5}, {3, -3}, "dynamical"}},
      {"figure5", {"param-plane", "family", std::nullopt, {7.477, 4.098}, {7.777, 3.798}, "capture"}},
      {"figure6-left", {"dyn-plane", "family", cplx{15.0, -15.0}, {-4, 3}, {2, -3}, "dynamical"}},
      // the printed lower-right corner (-2,3) is degenerate; reuse the left panel's window
      {"figure6-right", {"dyn-plane", "quadratic", std::nullopt, {-4, 3}, {2, -3}, "dynamical"}},
      {"figure8", {"dyn-plane", "family", cplx{1.544913893, 0.32322773}, {-1.5, 1.5}, {3, -3}, "dynamical"}},
  };
  return table;
}

Palette palette_from(const std::string& name) {
  if (name == "escape") return Palette::escape();
  if (name == "capture") return Palette::capture();
  if (name == "dynamical") return Palette::dynamical();
  throw UsageError("unknown palette: " + name);
}

json class_counts(const ClassGrid& grid) {
  std::map<std::string, int> counts;
  for (const Cell& c : grid.cells) ++counts[std::string(to_string(c.code))];
  return counts;
}

json run_render(const RunConfig& config) {
  if (!config.viewport) throw UsageError("a viewport is required");
  if (config.output.empty()) throw UsageError("--out is required");
  const RotationNumber rn = config.theta.resolve();
  const IterationPolicy policy = config.policy();
  const Palette palette = palette_from(config.palette);
  const RenderOptions options{config.workers, config.supersample};

  Render r;
  if (config.command == "param-plane") {
    r = render_parameter_plane(*config.viewport, rn, policy, palette, options);
  } else if (config.map == "quadratic") {
    const QuadraticLimitMap map(rn);
    const std::array<cplx, 1> singular{quadratic_limit(rn, {-1.0, 0.0})};
    r = render_dynamical_plane(map, singular, *config.viewport, policy, palette, options);
  } else {
    if (!config.a) throw UsageError("--a is required for dyn-plane");
    r = render_dynamical_plane(*config.a, *config.viewport, rn, policy, palette, options);
  }

  const std::string stem = config.output;
  write_ppm(r.image, std::filesystem::path(stem + ".ppm"));
  write_grid_csv(r.grid, std::filesystem::path(stem + ".csv"));
  {
    std::ofstream meta(stem + ".json");
    if (!meta) throw std::runtime_error("cannot open " + stem + ".json for writing");
    meta << to_json(config).dump(2) << '\n';
  }
  return {{"ppm", stem + ".ppm"},
          {"csv", stem + ".csv"},
          {"config", stem + ".json"},
          {"width", r.grid.viewport.width_px},
          {"height", r.grid.viewport.height_px},
          {"counts", class_counts(r.grid)}};
}

struct CommonOptions {
  std::string theta = "golden";
  std::string theta_cf;
  int max_iter = 5000;
  double escape_radius = 1e10;
  std::optional<double> trap_radius;
  int cycle_max_period = 64;
  double cycle_tol = 1e-9;
  int newton_max_steps = 50;
  int workers = 0;
};

void add_theta(CLI::App* app, CommonOptions& o) {
  app->add_option("--theta", o.theta, "rotation number: 'golden' or a real (reduced mod 1)");
  app->add_option("--theta-cf", o.theta_cf, "explicit partial quotients a1,a2,...");
}

void add_policy(CLI::App* app, CommonOptions& o) {
  app->add_option("--max-iter", o.max_iter, "iteration budget per orbit");
  app->add_option("--escape-radius", o.escape_radius, "escape radius");
  app->add_option("--trap-radius", o.trap_radius, "fixed trap radius (default: from the linearizer)");
  app->add_option("--cycle-max-period", o.cycle_max_period, "largest detected period");
  app->add_option("--cycle-tol", o.cycle_tol, "cycle detection tolerance");
  app->add_option("--newton-max-steps", o.newton_max_steps, "Newton steps for cycle refinement");
}

ThetaSpec theta_spec(const CommonOptions& o) {
  ThetaSpec t;
  if (!o.theta_cf.empty()) {
    t.kind = ThetaSpec::Kind::Quotients;
    t.quotients = parse_quotients(o.theta_cf);
  } else if (o.theta == "golden") {
    t.kind = ThetaSpec::Kind::Golden;
  } else {
    t.kind = ThetaSpec::Kind::Value;
    t.value = parse_double(o.theta, "--theta");
  }
  return t;
}

RunConfig base_config(const std::string& command, const CommonOptions& o) {
  RunConfig c;
  c.command = command;
  c.theta = theta_spec(o);
  c.max_iter = o.max_iter;
  c.escape_radius = o.escape_radius;
  c.trap_radius = o.trap_radius;
  c.cycle_max_period = o.cycle_max_period;
  c.cycle_tol = o.cycle_tol;
  c.newton_max_steps = o.newton_max_steps;
  c.workers = o.workers;
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamics of the family f_a(z) = lambda a (exp(z/a)(z + 1 - a) - 1 + a)", "siegellab"};
  app.require_subcommand(1);
  CommonOptions common;

  std::string a_str, w_str, ul_str, lr_str, out_stem, palette = "escape", config_path, figure, out_dir = ".";
  double tol = 1e-8, divergence = kDefaultDivergenceThreshold, R = 8.12311;
  std::optional<double> b;
  int samples = 4096, order = 64, width = 400, height = 400, supersample = 1;
  bool expect_pass = false;

  auto* brjuno = app.add_subcommand("brjuno", "Brjuno sum of the rotation number");
  add_theta(brjuno, common);
  brjuno->add_option("--tol", tol, "tail tolerance");
  brjuno->add_option("--divergence-threshold", divergence, "partial sum flagged as divergent");

  auto* classify = app.add_subcommand("classify", "classify both singular orbits at one parameter");
  add_theta(classify, common);
  add_policy(classify, common);
  classify->add_option("--a", a_str, "parameter RE,IM")->required();

  auto* capacity = app.add_subcommand("capacity", "linearizer capacity and trap disc");
  add_theta(capacity, common);
  capacity->add_option("--a", a_str, "parameter RE,IM")->required();
  capacity->add_option("--N", order, "series order (20..256)");

  auto* polylike = app.add_subcommand("polylike", "sampled Rouche check against the quadratic limit");
  add_theta(polylike, common);
  polylike->add_option("--a", a_str, "parameter RE,IM")->required();
  polylike->add_option("--R", R, "contour radius");
  polylike->add_option("--m", samples, "contour samples");
  polylike->add_flag("--expect-pass", expect_pass, "exit 3 unless the margin is positive");

  auto* degree = app.add_subcommand("degree", "degree over w by the argument principle");
  add_theta(degree, common);
  degree->add_option("--a", a_str, "parameter RE,IM")->required();
  degree->add_option("--w", w_str, "target value RE,IM")->required();
  degree->add_option("--R", R, "contour radius");
  degree->add_option("--m", samples, "initial contour samples");

  auto* h1v = app.add_subcommand("h1v", "trapping-region inequalities for a real attracting fixed point");
  add_theta(h1v, common);
  h1v->add_option("--b", b, "|a| (default 1.01 * b_min)");
  h1v->add_flag("--expect-pass", expect_pass, "exit 3 unless every inequality holds");

  auto add_render_options = [&](CLI::App* sub) {
    add_theta(sub, common);
    add_policy(sub, common);
    sub->add_option("--ul", ul_str, "upper-left corner RE,IM");
    sub->add_option("--lr", lr_str, "lower-right corner RE,IM");
    sub->add_option("--width", width, "pixels");
    sub->add_option("--height", height, "pixels");
    sub->add_option("--out", out_stem, "output stem (.ppm, .csv, .json)");
    sub->add_option("--workers", common.workers, "worker threads (default: SIEGELLAB_WORKERS or all cores)");
    sub->add_option("--supersample", supersample, "image subsamples per axis");
    sub->add_option("--config", config_path, "rerun from an embedded config JSON");
  };
  auto* param_plane = app.add_subcommand("param-plane", "render the parameter plane");
  add_render_options(param_plane);
  param_plane->add_option("--palette", palette, "escape | capture");
  auto* dyn_plane = app.add_subcommand("dyn-plane", "render the dynamical plane of f_a");
  add_render_options(dyn_plane);
  dyn_plane->add_option("--a", a_str, "parameter RE,IM");

  auto* reproduce = app.add_subcommand("reproduce", "render one of the reference figures");
  reproduce->add_option("figure", figure, "figure id")->required();
  reproduce->add_option("--width", width, "pixels");
  reproduce->add_option("--height", height, "pixels");
  reproduce->add_option("--out-dir", out_dir, "output directory");
  reproduce->add_option("--workers", common.workers, "worker threads");
  reproduce->add_option("--max-iter", common.max_iter, "iteration budget per orbit");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    json result;
    if (brjuno->parsed()) {
      const RotationNumber rn = theta_spec(common).resolve();
      const BrjunoEstimate est = brjuno_sum(rn.expansion(), tol, divergence);
      result = {{"theta", rn.theta()},
                {"terms_used", est.terms_used},
                {"partial_sum", est.partial_sum},
                {"tail_bound", est.tail_bound},
                {"verdict", to_string(est.verdict)},
                {"exact_expansion", rn.expansion().exact()},
                {"truncated", rn.expansion().truncated()}};
    } else if (classify->parsed()) {
      const RunConfig config = base_config("classify", common);
      const RotationNumber rn = config.theta.resolve();
      const IterationPolicy policy = config.policy();
      const cplx a = parse_complex(a_str, "--a");
      const ParameterClass pc = classify_parameter(a, rn, policy);
      result = {{"a", complex_json(a)},
                {"critical_class", orbit_json(pc.critical_class)},
                {"asymptotic_class", orbit_json(pc.asymptotic_class)},
                {"label", {{"kind", to_string(pc.label.kind)}, {"p", pc.label.p}}},
                {"diagnostics",
                 {{"trap_radius", pc.trap_radius ? json(*pc.trap_radius) : json(nullptr)},
                  {"trap_source", pc.trap_note},
                  {"policy", policy_json(policy)},
                  {"theta", rn.theta()}}}};
    } else if (capacity->parsed()) {
      const RotationNumber rn = theta_spec(common).resolve();
      const cplx a = parse_complex(a_str, "--a");
      const ParameterPoint pp(a, rn);
      const LinearizationSeries ls = compute_series(pp, rn, order);
      const CapacityEstimate est = capacity_estimate(ls);
      result = {{"a", complex_json(a)},
                {"theta", rn.theta()},
                {"N", order},
                {"radius_root_test", est.radius_root_test},
                {"radius_stable", est.radius_stable},
                {"trap_radius", est.trap_radius},
                {"residual", ls.residual()},
                {"agreement", est.agreement},
                {"heuristic", true}};
    } else if (polylike->parsed()) {
      const RotationNumber rn = theta_spec(common).resolve();
      const cplx a = parse_complex(a_str, "--a");
      const RoucheReport r = polylike_sample_check(ParameterPoint(a, rn), rn, R, samples);
      result = {{"a", complex_json(a)},
                {"R", r.R},
                {"S", r.S},
                {"max_diff", r.max_diff},
                {"analytic_bound", r.analytic_bound},
                {"margin", r.margin},
                {"sample_variation", r.sample_variation},
                {"samples", r.samples},
                {"applicable", r.applicable},
                {"polynomial_like", r.polynomial_like},
                {"evidence", r.evidence}};
      out << result.dump(2) << '\n';
      if (expect_pass && !r.polynomial_like) throw VerificationFailed("Rouche margin is not positive");
      return kOk;
    } else if (degree->parsed()) {
      const RotationNumber rn = theta_spec(common).resolve();
      const cplx a = parse_complex(a_str, "--a");
      const cplx w = parse_complex(w_str, "--w");
      const int d = degree_by_argument_principle(ParameterPoint(a, rn), rn, R, w, samples);
      result = {{"a", complex_json(a)}, {"w", complex_json(w)}, {"R", R}, {"degree", d}};
    } else if (h1v->parsed()) {
      const RotationNumber rn = theta_spec(common).resolve();
      const H1vBound bound = h1v_bound(rn);
      const double bb = b.value_or(1.01 * bound.b_min);
      const H1vReport r = h1v_check(rn, bb);
      result = {{"lambda1", r.lambda1},
                {"lambda2", r.lambda2},
                {"sigma", r.sigma},
                {"rho", r.rho},
                {"b", r.b},
                {"a", r.parameter()},
                {"L", r.L},
                {"s_star", r.s_star},
                {"h_at_s_star", r.h_at_s_star},
                {"y", r.y},
                {"target", r.target},
                {"boundary_margins", r.boundary_margins},
                {"samples_per_curve", r.samples_per_curve},
                {"pass", r.pass},
                {"bound",
                 {{"b_min", bound.b_min},
                  {"cubic_root", bound.cubic_root},
                  {"cubic_cauchy_bound", bound.cubic_cauchy_bound}}}};
      out << result.dump(2) << '\n';
      if (expect_pass && !r.pass) throw VerificationFailed("H1v inequalities do not all hold");
      return kOk;
    } else if (param_plane->parsed() || dyn_plane->parsed()) {
      const bool is_param = param_plane->parsed();
      RunConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot read config " + config_path);
        config = run_config_from_json(json::parse(in));
        if (!out_stem.empty()) config.output = out_stem;
        if (common.workers > 0) config.workers = common.workers;
      } else {
        config = base_config(is_param ? "param-plane" : "dyn-plane", common);
        if (ul_str.empty() || lr_str.empty()) throw UsageError("--ul and --lr are required");
        config.viewport = Viewport{parse_complex(ul_str, "--ul"), parse_complex(lr_str, "--lr"), width, height};
        if (!is_param) config.a = parse_complex(a_str.empty() ? std::string("1,0") : a_str, "--a");
        config.palette = is_param ? palette : "dynamical";
        config.output = out_stem;
        config.supersample = supersample;
      }
      result = run_render(config);
    } else if (reproduce->parsed()) {
      const auto it = figures().find(figure);
      if (it == figures().end()) throw UsageError("unknown figure id: " + figure);
      const FigureRecipe& recipe = it->second;
      RunConfig config = base_config(recipe.command, common);
      config.figure = figure;
      config.map = recipe.map;
      config.a = recipe.a;
      config.viewport = Viewport{recipe.upper_left, recipe.lower_right, width, height};
      config.palette = recipe.palette;
      std::filesystem::create_directories(out_dir);
      config.output = (std::filesystem::path(out_dir) / figure).string();
      result = run_render(config);
      result["figure"] = figure;
    }
    out << result.dump(2) << '\n';
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const VerificationFailed& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace siegel::cli
