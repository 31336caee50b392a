#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "presslab/packing.hpp"
#include "presslab/potential.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"

namespace presslab {

enum class Command { Pressure, LocalPressure, Katok, VpCheck, Properties, Oracle };

std::string to_string(Command cmd);
Command command_from_string(const std::string& name);

struct SampleConfig {
  SampleKind kind = SampleKind::CylinderComplete;
  std::size_t size = 256;
  int depth = 8;
  std::uint64_t seed = 0;
};

struct ScalesConfig {
  std::vector<int> n_grid = {8};
  int n_max = 0;  // 0 tracks each row's n
  std::vector<double> epsilons = {0.3, 0.2, 0.1};
  double delta = 0.1;
  int window = 1;
  int trace_lo = 0;
  double tol = 1e-6;
  double alpha_lo = -1.0;
  double alpha_hi = 2.0;
  double slack = 0.05;
  int budget = 25;  // property-suite instances
};

struct RunConfig {
  Command command = Command::Pressure;
  SystemSpec system;
  Potential potential = Potential::constant(0.0);
  SampleConfig sample;
  ScalesConfig scales;
  std::vector<std::string> measures;  // empty = full default family
  std::uint64_t seed = 1;
  int threads = 1;
  PackStrategy strategy = PackStrategy::Greedy;
  std::optional<DisjointMode> mode;
  bool sup_variant = false;
  std::string out_dir = "out";
  std::string config_path;
};

// Parses and validates the declarative JSON config; throws ConfigError with a
// field-anchored message on any problem.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

SampleSet build_sample(const System& sys, const SampleConfig& config);

}  // namespace presslab
