#include "presslab/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "presslab/error.hpp"

namespace presslab {

using nlohmann::json;

std::string to_string(Command cmd) {
  switch (cmd) {
    case Command::Pressure: return "pressure";
    case Command::LocalPressure: return "local-pressure";
    case Command::Katok: return "katok";
    case Command::VpCheck: return "vp-check";
    case Command::Properties: return "properties";
    case Command::Oracle: return "oracle";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  if (name == "pressure") return Command::Pressure;
  if (name == "local-pressure") return Command::LocalPressure;
  if (name == "katok") return Command::Katok;
  if (name == "vp-check") return Command::VpCheck;
  if (name == "properties") return Command::Properties;
  if (name == "oracle") return Command::Oracle;
  throw ConfigError("unknown command '" + name + "'");
}

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ConfigError(origin + ": " + what);
}

SpaceKind parse_space_kind(const std::string& origin, const std::string& kind) {
  if (kind == "torus") return SpaceKind::Torus;
  if (kind == "symbolic") return SpaceKind::Symbolic;
  fail(origin, "space.kind must be 'torus' or 'symbolic', got '" + kind + "'");
}

GeneratorSpec parse_generator(const std::string& origin, const json& g, int index) {
  const std::string tag = origin + ": generators[" + std::to_string(index) + "]";
  if (!g.is_object() || !g.contains("kind")) fail(tag, "needs a 'kind'");
  const std::string kind = g.at("kind").get<std::string>();
  GeneratorSpec spec;
  if (kind == "shift") {
    spec.kind = GeneratorKind::Shift;
  } else if (kind == "affine_mod1") {
    spec.kind = GeneratorKind::AffineMod1;
  } else if (kind == "contraction") {
    spec.kind = GeneratorKind::AffineContraction;
  } else {
    fail(tag, "unknown generator kind '" + kind + "'");
  }
  if (g.contains("slopes")) spec.slopes = g.at("slopes").get<std::vector<double>>();
  if (g.contains("offsets")) spec.offsets = g.at("offsets").get<std::vector<double>>();
  return spec;
}

Potential parse_potential(const std::string& origin, const json& p) {
  const std::string tag = origin + ": potential";
  if (!p.is_object() || !p.contains("kind")) fail(tag, "needs a 'kind'");
  const std::string kind = p.at("kind").get<std::string>();
  if (kind == "constant") return Potential::constant(p.value("value", 0.0));
  if (kind == "coordinate_affine")
    return Potential::coordinate_affine(p.at("coeffs").get<std::vector<double>>(),
                                        p.value("offset", 0.0));
  if (kind == "first_symbol")
    return Potential::first_symbol(p.at("table").get<std::vector<double>>());
  fail(tag, "unknown potential kind '" + kind + "'");
}

SampleConfig parse_sample(const std::string& origin, const json& s) {
  const std::string tag = origin + ": sample";
  SampleConfig cfg;
  if (!s.is_object() || !s.contains("kind")) fail(tag, "needs a 'kind'");
  const std::string kind = s.at("kind").get<std::string>();
  if (kind == "grid") {
    cfg.kind = SampleKind::Grid;
    cfg.size = s.value("size", std::size_t{256});
  } else if (kind == "random") {
    cfg.kind = SampleKind::Random;
    cfg.size = s.value("size", std::size_t{256});
    cfg.seed = s.value("seed", std::uint64_t{0});
  } else if (kind == "cylinder_complete") {
    cfg.kind = SampleKind::CylinderComplete;
    cfg.depth = s.value("depth", 8);
  } else {
    fail(tag, "unknown sample kind '" + kind + "'");
  }
  return cfg;
}

void parse_scales(const std::string& origin, const json& s, ScalesConfig& cfg) {
  const std::string tag = origin + ": scales";
  if (s.contains("n")) {
    if (s.at("n").is_array())
      cfg.n_grid = s.at("n").get<std::vector<int>>();
    else
      cfg.n_grid = {s.at("n").get<int>()};
  }
  cfg.n_max = s.value("n_max", cfg.n_max);
  if (s.contains("epsilons"))
    cfg.epsilons = s.at("epsilons").get<std::vector<double>>();
  cfg.delta = s.value("delta", cfg.delta);
  cfg.window = s.value("window", cfg.window);
  cfg.trace_lo = s.value("trace_lo", cfg.trace_lo);
  cfg.tol = s.value("tol", cfg.tol);
  cfg.alpha_lo = s.value("alpha_lo", cfg.alpha_lo);
  cfg.alpha_hi = s.value("alpha_hi", cfg.alpha_hi);
  cfg.slack = s.value("slack", cfg.slack);
  cfg.budget = s.value("budget", cfg.budget);

  if (cfg.n_grid.empty()) fail(tag, "n grid must be nonempty");
  for (int n : cfg.n_grid)
    if (n < 1) fail(tag, "every n must be >= 1");
  if (cfg.epsilons.empty()) fail(tag, "epsilon list must be nonempty");
  for (double e : cfg.epsilons)
    if (!(e > 0.0)) fail(tag, "every epsilon must be > 0");
  for (std::size_t i = 0; i + 1 < cfg.epsilons.size(); ++i)
    if (!(cfg.epsilons[i] > cfg.epsilons[i + 1]))
      fail(tag, "epsilon list must be strictly decreasing (entry " +
                    std::to_string(i + 1) + ")");
  if (!(cfg.tol > 0.0)) fail(tag, "tol must be > 0");
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0)) fail(tag, "delta must lie in [0,1)");
  if (cfg.window < 1) fail(tag, "window must be >= 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");

  RunConfig cfg;
  cfg.config_path = origin;
  if (doc.contains("command"))
    cfg.command = command_from_string(doc.at("command").get<std::string>());

  if (!doc.contains("space")) fail(origin, "missing 'space'");
  const json& space = doc.at("space");
  cfg.system.space = parse_space_kind(origin, space.value("kind", std::string{}));
  cfg.system.dim = space.value("dim", 1);
  cfg.system.alphabet = space.value("alphabet", 2);
  cfg.system.metric_base = space.value("metric_base", cfg.system.alphabet);
  if (space.contains("metric")) {
    const std::string metric = space.at("metric").get<std::string>();
    if (metric == "torus_sup")
      cfg.system.metric = MetricKind::TorusSup;
    else if (metric == "symbolic_base")
      cfg.system.metric = MetricKind::SymbolicBase;
    else
      fail(origin, "unknown metric kind '" + metric + "'");
  }
  cfg.system.name = doc.value("name", std::string{"system"});

  if (!doc.contains("generators") || !doc.at("generators").is_array() ||
      doc.at("generators").empty())
    fail(origin, "'generators' must be a nonempty array");
  int gi = 0;
  for (const json& g : doc.at("generators"))
    cfg.system.generators.push_back(parse_generator(origin, g, gi++));

  if (doc.contains("potential")) cfg.potential = parse_potential(origin, doc.at("potential"));
  if (doc.contains("sample")) cfg.sample = parse_sample(origin, doc.at("sample"));
  if (doc.contains("scales")) parse_scales(origin, doc.at("scales"), cfg.scales);
  if (doc.contains("measures"))
    cfg.measures = doc.at("measures").get<std::vector<std::string>>();
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.threads = doc.value("threads", cfg.threads);
  if (doc.contains("strategy")) {
    const std::string s = doc.at("strategy").get<std::string>();
    if (s == "greedy")
      cfg.strategy = PackStrategy::Greedy;
    else if (s == "exact")
      cfg.strategy = PackStrategy::Exact;
    else
      fail(origin, "strategy must be 'greedy' or 'exact'");
  }
  if (doc.contains("disjoint")) {
    const std::string m = doc.at("disjoint").get<std::string>();
    if (m == "triangle")
      cfg.mode = DisjointMode::Triangle;
    else if (m == "shared-sample")
      cfg.mode = DisjointMode::SharedSample;
    else
      fail(origin, "disjoint must be 'triangle' or 'shared-sample'");
  }
  cfg.sup_variant = doc.value("sup_variant", false);
  cfg.out_dir = doc.value("out", cfg.out_dir);

  // validates the full system spec (space/metric/generator compatibility)
  System probe(cfg.system);
  (void)probe;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

SampleSet build_sample(const System& sys, const SampleConfig& config) {
  switch (config.kind) {
    case SampleKind::Grid:
      return SampleSet::grid(sys, config.size);
    case SampleKind::Random:
      return SampleSet::random_points(sys, config.size, config.seed);
    case SampleKind::CylinderComplete:
      return SampleSet::cylinder_complete(sys, config.depth);
    case SampleKind::Derived:
      break;
  }
  throw ConfigError("sample kind cannot be built from configuration");
}

}  // namespace presslab
