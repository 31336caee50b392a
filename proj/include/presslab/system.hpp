#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "presslab/point.hpp"

namespace presslab {

enum class MetricKind { TorusSup, SymbolicBase };

enum class GeneratorKind { AffineMod1, Shift, AffineContraction };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Shift;
  std::vector<double> slopes;   // per coordinate; integer-valued for AffineMod1
  std::vector<double> offsets;  // per coordinate
};

struct SystemSpec {
  SpaceKind space = SpaceKind::Symbolic;
  int dim = 1;          // torus
  int alphabet = 2;     // symbolic
  int metric_base = 2;  // symbolic metric d(x,y) = base^{-s}
  std::optional<MetricKind> metric;  // defaults to the space's own metric
  std::vector<GeneratorSpec> generators;
  std::string name;
};

// d(x,y) = base^{-g}; centralized so oracle and estimator make identical
// floating comparisons.
inline double symbolic_power(int base, long long g) {
  if (g <= 0) return 1.0;
  return std::pow(static_cast<double>(base), -static_cast<double>(g));
}

double torus_wrap_distance(double a, double b);

struct DistanceResult {
  double value = 0.0;
  // stored prefixes agree entirely and tails cannot separate the points
  bool indistinguishable = false;
};

// Compact metric space with a finite generator family acting on it.
class System {
 public:
  explicit System(const SystemSpec& spec);  // validates; throws ConfigError

  SpaceKind space_kind() const { return spec_.space; }
  MetricKind metric_kind() const { return metric_; }
  int dim() const { return spec_.dim; }
  int alphabet() const { return spec_.alphabet; }
  int metric_base() const { return spec_.metric_base; }
  int generator_count() const { return static_cast<int>(spec_.generators.size()); }
  const std::vector<GeneratorSpec>& generators() const { return spec_.generators; }
  const std::string& name() const { return spec_.name; }

  // Two generators are the same map; |G_n| still counts formal words.
  bool has_duplicate_generators() const { return duplicate_generators_; }
  bool all_shift() const { return all_shift_; }

  Point apply(int generator_index, const Point& p) const;  // index in [0, k)
  DistanceResult distance_checked(const Point& p, const Point& q) const;
  double distance(const Point& p, const Point& q) const {
    return distance_checked(p, q).value;
  }

  void validate_point(const Point& p) const;  // space membership

 private:
  SystemSpec spec_;
  MetricKind metric_ = MetricKind::SymbolicBase;
  bool duplicate_generators_ = false;
  bool all_shift_ = false;
};

System build_system(const SystemSpec& spec);

Point apply_generator(const System& sys, int generator_index, const Point& p);

double distance(const System& sys, const Point& p, const Point& q);

}  // namespace presslab
