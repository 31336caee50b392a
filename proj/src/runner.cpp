#include "presslab/runner.hpp"

#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "presslab/bowen.hpp"
#include "presslab/error.hpp"
#include "presslab/io.hpp"
#include "presslab/measures.hpp"
#include "presslab/oracles.hpp"
#include "presslab/packing.hpp"
#include "presslab/parallel.hpp"
#include "presslab/version.hpp"
#include "presslab/vp.hpp"
#include "presslab/words.hpp"

namespace presslab {

using nlohmann::json;

namespace {

json system_json(const SystemSpec& spec) {
  json out;
  bool duplicates = false;
  for (std::size_t i = 0; i + 1 < spec.generators.size(); ++i)
    for (std::size_t j = i + 1; j < spec.generators.size(); ++j)
      if (spec.generators[i].kind == spec.generators[j].kind &&
          spec.generators[i].slopes == spec.generators[j].slopes &&
          spec.generators[i].offsets == spec.generators[j].offsets)
        duplicates = true;
  // |G_n| counts formal words; coinciding generators keep the formal count
  out["duplicate_generators"] = duplicates;
  out["kind"] = spec.space == SpaceKind::Torus ? "torus" : "symbolic";
  if (spec.space == SpaceKind::Torus) {
    out["dim"] = spec.dim;
  } else {
    out["alphabet"] = spec.alphabet;
    out["metric_base"] = spec.metric_base;
  }
  json gens = json::array();
  for (const GeneratorSpec& g : spec.generators) {
    json j;
    switch (g.kind) {
      case GeneratorKind::Shift: j["kind"] = "shift"; break;
      case GeneratorKind::AffineMod1: j["kind"] = "affine_mod1"; break;
      case GeneratorKind::AffineContraction: j["kind"] = "contraction"; break;
    }
    if (!g.slopes.empty()) j["slopes"] = g.slopes;
    if (!g.offsets.empty()) j["offsets"] = g.offsets;
    gens.push_back(j);
  }
  out["generators"] = gens;
  out["name"] = spec.name;
  return out;
}

json potential_json(const Potential& f) {
  json out;
  switch (f.kind()) {
    case PotentialKind::Constant:
      out["kind"] = "constant";
      out["value"] = f.constant_value();
      break;
    case PotentialKind::CoordinateAffine:
      out["kind"] = "coordinate_affine";
      out["coeffs"] = f.coeffs();
      out["offset"] = f.affine_offset();
      break;
    case PotentialKind::FirstSymbol:
      out["kind"] = "first_symbol";
      out["table"] = f.table();
      break;
    case PotentialKind::Tabulated:
      out["kind"] = "tabulated";
      break;
  }
  out["sup_norm"] = f.sup_norm();
  return out;
}

json manifest_json(const RunConfig& cfg) {
  json m;
  m["version"] = kVersion;
  m["command"] = to_string(cfg.command);
  m["system"] = system_json(cfg.system);
  m["potential"] = potential_json(cfg.potential);
  json sample;
  switch (cfg.sample.kind) {
    case SampleKind::Grid:
      sample["kind"] = "grid";
      sample["size"] = cfg.sample.size;
      break;
    case SampleKind::Random:
      sample["kind"] = "random";
      sample["size"] = cfg.sample.size;
      sample["seed"] = cfg.sample.seed;
      break;
    case SampleKind::CylinderComplete:
      sample["kind"] = "cylinder_complete";
      sample["depth"] = cfg.sample.depth;
      break;
    case SampleKind::Derived:
      sample["kind"] = "derived";
      break;
  }
  m["sample"] = sample;
  json scales;
  scales["n"] = cfg.scales.n_grid;
  scales["n_max"] = cfg.scales.n_max;
  scales["epsilons"] = cfg.scales.epsilons;
  scales["delta"] = cfg.scales.delta;
  scales["window"] = cfg.scales.window;
  scales["trace_lo"] = cfg.scales.trace_lo;
  scales["tol"] = cfg.scales.tol;
  scales["alpha_lo"] = cfg.scales.alpha_lo;
  scales["alpha_hi"] = cfg.scales.alpha_hi;
  scales["slack"] = cfg.scales.slack;
  scales["budget"] = cfg.scales.budget;
  m["scales"] = scales;
  m["measures"] = cfg.measures;
  m["seed"] = cfg.seed;
  m["threads"] = cfg.threads;
  m["strategy"] = to_string(cfg.strategy);
  m["disjoint"] = cfg.mode ? to_string(*cfg.mode) : "auto";
  m["sup_variant"] = cfg.sup_variant;
  return m;
}

json collection_certificate(const System& sys, const SampleSet& Z,
                            const PackingCollection& col, std::size_t margin_cap) {
  json cert;
  cert["mode"] = to_string(col.mode);
  cert["alpha"] = col.alpha;
  cert["sum"] = col.sum;
  cert["size"] = col.balls.size();
  json balls = json::array();
  for (const PackedBall& b : col.balls) {
    json jb;
    jb["center"] = b.center;
    jb["depth"] = b.depth;
    jb["radius"] = b.radius;
    jb["weight_exponent"] = b.weight_exponent(col.alpha);
    balls.push_back(jb);
  }
  cert["balls"] = balls;
  if (col.balls.size() <= margin_cap) {
    std::vector<double> margins;
    bool ok = verify_collection(sys, Z, col, &margins);
    cert["verified"] = ok;
    if (col.mode == DisjointMode::Triangle) cert["margins"] = margins;
  } else {
    cert["verified"] = verify_collection(sys, Z, col);
  }
  return cert;
}

BisectionSpec bisect_from(const ScalesConfig& scales) {
  BisectionSpec b;
  b.alpha_lo = scales.alpha_lo;
  b.alpha_hi = scales.alpha_hi;
  b.tol = scales.tol;
  return b;
}

struct Outputs {
  std::string csv;
  json summary;
  json certificates;
  bool asserted_failed = false;
};

Outputs run_pressure(const RunConfig& cfg, const System& sys, const SampleSet& Z) {
  Outputs out;
  DisjointMode mode = cfg.mode.value_or(default_mode(sys));
  PackingParams params;
  params.n_max = cfg.scales.n_max;
  params.mode = mode;
  params.strategy = cfg.strategy;
  PressureScan scan =
      pressure_report(sys, Z, cfg.potential, cfg.scales.n_grid, cfg.scales.epsilons,
                      params, bisect_from(cfg.scales), cfg.sup_variant);
  CsvWriter csv;
  std::vector<std::string> cols = {"n",       "epsilon",  "alpha_hat", "alpha_lo",
                                   "alpha_hi", "pre_lo",   "pre_hi",    "tol",
                                   "size",    "n_max",    "strategy",  "disjoint"};
  if (cfg.sup_variant) cols.push_back("alpha_sup_variant");
  csv.header(cols);
  for (const PressureCell& c : scan.cells) {
    csv.cell(static_cast<long long>(c.n));
    csv.cell(c.epsilon);
    csv.cell(c.result.alpha_hat);
    csv.cell(c.result.alpha_lo);
    csv.cell(c.result.alpha_hi);
    csv.cell(c.result.pre_lo);
    csv.cell(c.result.pre_hi);
    csv.cell(c.result.tol);
    csv.cell(c.result.collection_size);
    csv.cell(static_cast<long long>(c.result.n_max));
    csv.cell(to_string(cfg.strategy));
    csv.cell(to_string(mode));
    if (cfg.sup_variant) csv.cell(c.sup_variant_alpha.value_or(0.0));
    csv.end_row();
  }
  out.csv = csv.str();
  out.summary["fit"] = {{"intercept", scan.fit.intercept}, {"slope", scan.fit.slope}};
  out.summary["rows"] = scan.cells.size();
  out.summary["eps_monotonicity_violations"] = scan.eps_monotonicity_violations;
  out.summary["extrapolation_note"] =
      "intercept is the eps->0 extrapolation of the fitted line, not a limit";

  // certificate for the last cell's collection at its alpha_hat
  const PressureCell& last = scan.cells.back();
  PackingParams cp = params;
  cp.n = last.n;
  cp.epsilon = last.epsilon;
  PackingCollection col =
      greedy_packing(sys, Z, cfg.potential, last.result.alpha_hat, cp);
  out.certificates["packing"] = collection_certificate(sys, Z, col, 64);
  return out;
}

SampleMeasure first_measure(const RunConfig& cfg, const System& sys,
                            const SampleSet& Z) {
  VpScales scales;
  scales.n = cfg.scales.n_grid.back();
  std::vector<MeasureCandidate> cands =
      default_candidates(sys, Z, cfg.potential, scales, cfg.scales.epsilons.front(),
                         cfg.seed, cfg.measures);
  return cands.front().measure;
}

Outputs run_local_pressure(const RunConfig& cfg, const System& sys,
                           const SampleSet& Z) {
  Outputs out;
  SampleMeasure mu = first_measure(cfg, sys, Z);
  const int n_hi = cfg.scales.n_grid.back();
  const int n_lo = cfg.scales.trace_lo > 0 ? cfg.scales.trace_lo : 1;
  CsvWriter csv;
  csv.header({"atom", "epsilon", "n", "ball_mass", "f_n", "quotient"});
  std::size_t divergent = 0;
  for (double eps : cfg.scales.epsilons) {
    for (std::size_t a = 0; a < mu.atom_count(); ++a) {
      LocalPressureTrace t = local_pressure(sys, mu, mu.atom(a), cfg.potential,
                                            eps, n_lo, n_hi, cfg.scales.window);
      if (t.divergent) ++divergent;
      for (int n = n_lo; n <= n_hi; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - n_lo);
        csv.cell(a);
        csv.cell(eps);
        csv.cell(static_cast<long long>(n));
        csv.cell(t.ball_masses[i]);
        csv.cell(t.f_sums[i]);
        csv.cell(std::isinf(t.quotients[i]) ? std::string("inf")
                                            : format_double(t.quotients[i]));
        csv.end_row();
      }
    }
  }
  out.csv = csv.str();
  out.summary["atoms"] = mu.atom_count();
  out.summary["divergent_traces"] = divergent;
  return out;
}

Outputs run_katok(const RunConfig& cfg, const System& sys, const SampleSet& Z) {
  Outputs out;
  SampleMeasure mu = first_measure(cfg, sys, Z);
  KatokScales scales;
  scales.n = cfg.scales.n_grid.back();
  scales.n_max = cfg.scales.n_max;
  scales.mode = cfg.mode.value_or(default_mode(sys));
  scales.strategy = cfg.strategy;
  scales.bisect = bisect_from(cfg.scales);
  scales.trace_lo = cfg.scales.trace_lo > 0 ? cfg.scales.trace_lo : scales.n;
  scales.window = cfg.scales.window;
  CsvWriter csv;
  csv.header({"epsilon", "delta", "alpha_hat", "retained_mass", "dropped_atoms",
              "mu_inf"});
  for (double eps : cfg.scales.epsilons) {
    KatokEstimate est =
        katok_pressure(sys, mu, eps, cfg.scales.delta, cfg.potential, scales);
    double inf = mu_inf_pressure(sys, mu, cfg.potential, eps, cfg.scales.delta,
                                 scales, cfg.seed, 3);
    csv.cell(eps);
    csv.cell(cfg.scales.delta);
    csv.cell(est.alpha_hat);
    csv.cell(est.retained_mass);
    csv.cell(est.dropped_atoms.size());
    csv.cell(inf);
    csv.end_row();
  }
  out.csv = csv.str();
  out.summary["atoms"] = mu.atom_count();
  return out;
}

Outputs run_vp_check(const RunConfig& cfg, const System& sys, const SampleSet& Z) {
  Outputs out;
  VpScales scales;
  scales.n = cfg.scales.n_grid.back();
  scales.n_max = cfg.scales.n_max;
  scales.trace_lo = cfg.scales.trace_lo;
  scales.window = cfg.scales.window;
  scales.delta = cfg.scales.delta;
  scales.slack = cfg.scales.slack;
  scales.bisect = bisect_from(cfg.scales);
  scales.mode = cfg.mode;
  scales.strategy = cfg.strategy;
  std::vector<MeasureCandidate> candidates =
      default_candidates(sys, Z, cfg.potential, scales, cfg.scales.epsilons.front(),
                         cfg.seed, cfg.measures);
  VpReport report =
      vp_experiment(sys, Z, cfg.potential, cfg.scales.epsilons, candidates, scales);
  CsvWriter csv;
  csv.header({"epsilon", "alpha_hat", "measure", "integrated", "katok_alpha",
              "excluded_mass", "gap", "lower_ok"});
  for (const VpCell& cell : report.cells) {
    for (const VpMeasureCell& mc : cell.measures) {
      csv.cell(cell.epsilon);
      csv.cell(cell.packing.alpha_hat);
      csv.cell(mc.measure);
      csv.cell(mc.integrated);
      csv.cell(mc.katok_alpha);
      csv.cell(mc.excluded_mass);
      csv.cell(cell.packing.alpha_hat - mc.integrated);
      csv.cell(std::string(mc.lower_bound_ok ? "1" : "0"));
      csv.end_row();
    }
  }
  out.csv = csv.str();
  json cells = json::array();
  for (const VpCell& cell : report.cells) {
    json jc;
    jc["epsilon"] = cell.epsilon;
    jc["alpha_hat"] = cell.packing.alpha_hat;
    jc["sup_integrated"] = cell.sup_integrated;
    jc["argmax_measure"] = cell.argmax_measure;
    jc["gap"] = cell.gap;
    jc["all_lower_ok"] = cell.all_lower_ok;
    cells.push_back(jc);
  }
  out.summary["cells"] = cells;
  out.summary["intercept"] = report.intercept;
  out.summary["slope"] = report.slope;
  out.summary["hypothesis_ok"] = report.hypothesis_ok;
  out.summary["all_asserted_ok"] = report.all_asserted_ok;
  out.summary["tightness_note"] =
      "sup over the finite candidate family certifies a lower bound only";
  // informational property matrix; violations fail the `properties` command,
  // not this one
  json props = json::array();
  for (const PropertyResult& r :
       property_suite(cfg.seed, std::min(cfg.scales.budget, 10))) {
    props.push_back({{"name", r.name},
                     {"runs", r.runs},
                     {"violations", r.violations},
                     {"worst_margin", r.worst_margin}});
  }
  out.summary["property_matrix"] = props;
  out.asserted_failed = !report.all_asserted_ok;
  return out;
}

Outputs run_properties(const RunConfig& cfg) {
  Outputs out;
  std::vector<PropertyResult> results = property_suite(cfg.seed, cfg.scales.budget);
  CsvWriter csv;
  csv.header({"property", "runs", "violations", "worst_margin"});
  bool failed = false;
  for (const PropertyResult& r : results) {
    csv.cell(r.name);
    csv.cell(static_cast<long long>(r.runs));
    csv.cell(static_cast<long long>(r.violations));
    csv.cell(r.worst_margin);
    csv.end_row();
    if (r.violations > 0) failed = true;
  }
  out.csv = csv.str();
  out.summary["properties"] = results.size();
  out.asserted_failed = failed;
  return out;
}

Outputs run_oracle(const RunConfig& cfg, const System& sys) {
  if (sys.space_kind() != SpaceKind::Symbolic)
    throw ConfigError("oracle command requires a symbolic system");
  Outputs out;
  CsvWriter csv;
  csv.header({"n", "epsilon", "s_min_closed", "s_min_open", "alpha_n",
              "alpha_limit", "multi_gen_alpha"});
  std::vector<double> table;
  if (cfg.potential.kind() == PotentialKind::FirstSymbol)
    table = cfg.potential.table();
  for (int n : cfg.scales.n_grid) {
    for (double eps : cfg.scales.epsilons) {
      ShiftOracleSpec spec;
      spec.alphabet = sys.alphabet();
      spec.base = sys.metric_base();
      spec.table = table;
      spec.epsilon = eps;
      spec.n = n;
      ShiftOracleValue v = shift_oracle_alpha(spec);
      csv.cell(static_cast<long long>(n));
      csv.cell(eps);
      csv.cell(static_cast<long long>(forced_cylinder_length(n, eps, sys.metric_base(), true)));
      csv.cell(static_cast<long long>(forced_cylinder_length(n, eps, sys.metric_base(), false)));
      csv.cell(v.alpha_n);
      csv.cell(v.alpha_limit);
      csv.cell(multi_generator_identical_shift_alpha(
          sys.alphabet(), sys.metric_base(), eps, sys.generator_count(), n));
      csv.end_row();
    }
  }
  out.csv = csv.str();
  out.summary["note"] = "exact cylinder-arithmetic fixtures";
  return out;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  set_worker_threads(cfg.threads);
  std::filesystem::path dir(cfg.out_dir);
  try {
    std::filesystem::create_directories(dir);
  } catch (const std::exception& e) {
    throw ConfigError("cannot create output directory '" + cfg.out_dir + "': " +
                      e.what());
  }

  json manifest = manifest_json(cfg);
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
  result.files.push_back((dir / "manifest.json").string());

  Outputs out;
  if (cfg.command == Command::Properties) {
    out = run_properties(cfg);
  } else {
    System sys(cfg.system);
    if (cfg.command == Command::Oracle) {
      out = run_oracle(cfg, sys);
    } else {
      SampleSet Z = build_sample(sys, cfg.sample);
      switch (cfg.command) {
        case Command::Pressure:
          out = run_pressure(cfg, sys, Z);
          break;
        case Command::LocalPressure:
          out = run_local_pressure(cfg, sys, Z);
          break;
        case Command::Katok:
          out = run_katok(cfg, sys, Z);
          break;
        case Command::VpCheck:
          out = run_vp_check(cfg, sys, Z);
          break;
        default:
          throw ConfigError("unhandled command");
      }
    }
  }

  write_text_file((dir / "results.csv").string(), out.csv);
  result.files.push_back((dir / "results.csv").string());
  json summary;
  summary["command"] = to_string(cfg.command);
  summary["version"] = kVersion;
  summary["summary"] = out.summary;
  write_text_file((dir / "results.json").string(), summary.dump(2) + "\n");
  result.files.push_back((dir / "results.json").string());
  if (!out.certificates.is_null()) {
    write_text_file((dir / "certificates.json").string(),
                    out.certificates.dump(2) + "\n");
    result.files.push_back((dir / "certificates.json").string());
  }
  result.exit_code = out.asserted_failed ? 1 : 0;
  return result;
}

}  // namespace presslab
