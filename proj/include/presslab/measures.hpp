#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "presslab/packing.hpp"
#include "presslab/point.hpp"
#include "presslab/potential.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"

namespace presslab {

// Finitely supported probability measure; atoms distinct, weights normalized
// to 1 within 1e-12 and renormalized exactly at construction.
class SampleMeasure {
 public:
  SampleMeasure(const System& sys, std::vector<Point> atoms,
                std::vector<double> weights);

  static SampleMeasure dirac(const System& sys, Point at);
  static SampleMeasure uniform_on(const System& sys, const SampleSet& sample);
  // uniform mass on one representative per length-depth cylinder
  static SampleMeasure cylinder_uniform(const System& sys, int depth);

  std::size_t atom_count() const { return atoms_.size(); }
  const Point& atom(std::size_t i) const { return atoms_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

  // mass of atoms in the cylinder of x with the given length (symbolic)
  double cylinder_mass(const Point& x, std::size_t length) const;

 private:
  std::vector<Point> atoms_;
  std::vector<double> weights_;
  // lex-sorted atom order with weight prefix sums, for cylinder queries
  std::vector<std::uint32_t> order_;
  std::vector<double> prefix_mass_;
  bool symbolic_ = false;
};

// Uniform weights on orbit-sampled points; duplicates collapse and weights
// renormalize. Deterministic for a fixed seed.
SampleMeasure empirical_from_orbits(const System& sys, std::uint64_t seed,
                                    std::size_t atom_count, int word_depth);

// JSON atom-list serialization: {"atoms": [{"point": ..., "weight": ...}]}
// with torus points as {"coords": [...]} and symbolic points as
// {"prefix": [...], "tail": [...]}.
std::string measure_to_json(const SampleMeasure& mu);
SampleMeasure measure_from_json(const System& sys, const std::string& text);

double ball_mass(const System& sys, const SampleMeasure& mu, const Point& x,
                 int n, double epsilon, bool closed);

struct LocalPressureTrace {
  int n_lo = 0;
  int n_hi = 0;
  int window = 1;
  double epsilon = 0.0;
  std::vector<double> ball_masses;  // per n
  std::vector<double> f_sums;       // per n
  std::vector<double> quotients;    // (-log mass + f_n) / |G_n|; +inf on mass 0
  double proxy = 0.0;               // max over the last `window` finite entries
  bool divergent = false;           // zero mass inside the window
};

// Local pressure quotient trace over a depth range; the limsup is proxied by
// a max over the tail window.
LocalPressureTrace local_pressure(const System& sys, const SampleMeasure& mu,
                                  const Point& x, const Potential& f,
                                  double epsilon, int n_lo, int n_hi,
                                  int window);

struct IntegratedPressure {
  double value = 0.0;
  double excluded_mass = 0.0;  // atoms with divergent local traces
  std::size_t excluded_atoms = 0;
};

// mu-weighted local pressure over the atoms; theorem mode requires every atom
// to be a member of Z (mu(Z) = 1 at atom level), exploratory mode only skips
// non-members and reports their mass as excluded.
IntegratedPressure integrated_pressure(const System& sys, const SampleMeasure& mu,
                                       const SampleSet& Z, const Potential& f,
                                       double epsilon, int n_lo, int n_hi,
                                       int window, bool theorem_mode = true);

struct KatokScales {
  int n = 8;
  int n_max = 0;  // < n tracks n
  DisjointMode mode = DisjointMode::SharedSample;
  PackStrategy strategy = PackStrategy::Greedy;
  BisectionSpec bisect;
  int trace_lo = 1;   // local-pressure range used to rank atom complexity
  int window = 1;
};

struct KatokEstimate {
  double alpha_hat = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double retained_mass = 1.0;
  std::vector<std::uint32_t> dropped_atoms;  // atom indices, drop order
  CriticalExponentResult packing;
};

// Katok-style pressure: drop the highest-complexity atoms up to mass delta,
// then take the packing critical exponent of the retained support. An upper
// bound for the true infimum over countable families.
KatokEstimate katok_pressure(const System& sys, const SampleMeasure& mu,
                             double epsilon, double delta, const Potential& f,
                             const KatokScales& scales);

// Minimum critical exponent over a menu of retained sets of mass >= 1-delta:
// complexity-ranked trimming plus random trimmings.
double mu_inf_pressure(const System& sys, const SampleMeasure& mu,
                       const Potential& f, double epsilon, double delta,
                       const KatokScales& scales, std::uint64_t seed,
                       int random_menus = 3);

struct FiveRBall {
  std::uint32_t center = 0;  // index into the sample set
  double radius = 0.0;
};

struct FiveRResult {
  std::vector<std::uint32_t> admitted;  // indices into the input family
  bool coverage_ok = true;
  // for every input ball: index of an admitted ball whose 5x inflation covers
  // its sampled points
  std::vector<std::uint32_t> covered_by;
};

// Vitali-type extraction in the d_n metric: greedy by radius (descending),
// admitted balls pairwise disjoint by the sound triangle test; certificate
// checks every input ball's sampled points against 5x-inflated admitted balls.
FiveRResult five_r_subfamily(const System& sys, int n,
                             const std::vector<FiveRBall>& balls,
                             const SampleSet& sample);

}  // namespace presslab
