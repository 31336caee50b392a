#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "presslab/measures.hpp"
#include "presslab/packing.hpp"
#include "presslab/potential.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"

namespace presslab {

struct VpScales {
  int n = 12;
  int n_max = 0;    // < n tracks n
  int trace_lo = 0; // 0 = matched scale: local traces at depth n only
  int window = 1;
  double delta = 0.1;   // Katok trimming mass
  double slack = 0.05;  // asserted lower-bound slack
  BisectionSpec bisect;
  std::optional<DisjointMode> mode;  // default: shared-sample on symbolic, triangle on torus
  PackStrategy strategy = PackStrategy::Greedy;
};

DisjointMode default_mode(const System& sys);

struct MeasureCandidate {
  std::string name;
  SampleMeasure measure;
};

// The harness family: uniform on Z, orbit-visit empirical (walks snapped back
// to the nearest sample point, several seeds), and a complexity-reweighted
// tilt. Every candidate is supported on Z at atom level.
std::vector<MeasureCandidate> default_candidates(
    const System& sys, const SampleSet& Z, const Potential& f,
    const VpScales& scales, double epsilon, std::uint64_t seed,
    const std::vector<std::string>& names);

std::size_t nearest_in_sample(const System& sys, const SampleSet& Z,
                              const Point& p);

struct VpMeasureCell {
  std::string measure;
  double integrated = 0.0;
  double excluded_mass = 0.0;
  double katok_alpha = 0.0;
  bool lower_bound_ok = true;  // integrated <= alpha_hat + slack
};

struct VpCell {
  double epsilon = 0.0;
  CriticalExponentResult packing;
  std::vector<VpMeasureCell> measures;
  double sup_integrated = 0.0;
  std::string argmax_measure;
  double gap = 0.0;  // alpha_hat - sup over candidates
  bool all_lower_ok = true;
};

struct VpReport {
  std::string system_name;
  std::string sample_desc;
  VpScales scales;
  std::vector<VpCell> cells;  // one per epsilon, in the given (decreasing) order
  double intercept = 0.0;     // affine extrapolation of alpha_hat over epsilon
  double slope = 0.0;
  bool hypothesis_ok = true;  // finite-scale check of P^P > ||f||
  bool all_asserted_ok = true;
};

// Runs the variational-principle experiment: per epsilon the packing critical
// exponent, the integrated pressure of every candidate measure, the Katok
// value, the gap, and the asserted lower-bound direction. Tightness is
// reported, never asserted, except where oracle checks are run by the caller.
VpReport vp_experiment(const System& sys, const SampleSet& Z, const Potential& f,
                       const std::vector<double>& epsilons,
                       const std::vector<MeasureCandidate>& candidates,
                       const VpScales& scales);

struct PropertyResult {
  std::string name;
  int runs = 0;
  int violations = 0;
  double worst_margin = 0.0;  // most negative slack seen
};

// Randomized structural suite: Z-monotonicity, finite-union sup, premeasure
// decrease in n, alpha decrease as epsilon decreases, metric-base independence
// of the extrapolated intercept. Failures are results, not errors.
std::vector<PropertyResult> property_suite(std::uint64_t seed, int budget);

}  // namespace presslab
