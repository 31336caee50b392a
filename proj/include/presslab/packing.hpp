#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "presslab/bowen.hpp"
#include "presslab/potential.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"

namespace presslab {

enum class DisjointMode { Triangle, SharedSample };
enum class PackStrategy { Greedy, Exact };

std::string to_string(DisjointMode mode);
std::string to_string(PackStrategy strategy);

// Closed neutralized ball around a sample point, with the data its packing
// weight e^{-alpha |G_{n_i}| + f_{n_i}(x_i)} needs.
struct PackedBall {
  std::uint32_t center = 0;  // index into the sample set
  int depth = 1;             // n_i
  double radius = 1.0;       // exp(-depth * epsilon)
  double f_sum = 0.0;        // f_{depth}(center)
  double g_level = 1.0;      // |G_depth|

  double weight_exponent(double alpha) const { return -alpha * g_level + f_sum; }
};

PackedBall make_packed_ball(const System& sys, const SampleSet& Z,
                            const Potential& f, std::uint32_t center, int depth,
                            double epsilon);

struct PackingCollection {
  DisjointMode mode = DisjointMode::Triangle;
  double alpha = 0.0;
  std::vector<PackedBall> balls;  // admission order
  double sum = 0.0;               // canonical weight sum at alpha

  // Deterministic summation: terms ordered by (exponent desc, center, depth),
  // accumulated smallest-first with compensation.
  double weight_sum(double alpha) const;
};

// Triangle mode: sound sufficient condition d_min(n_a,n_b)(x_a,x_b) > r_a+r_b.
// Shared-sample mode: no point of `Z` lies in both closed balls (optimistic;
// exact on single-depth symbolic pools where balls are cylinders).
bool disjoint_test(const System& sys, const SampleSet& Z, const PackedBall& a,
                   const PackedBall& b, DisjointMode mode);

struct PackingParams {
  int n = 1;
  int n_max = 0;  // < n means "track n"
  double epsilon = 0.1;
  DisjointMode mode = DisjointMode::Triangle;
  PackStrategy strategy = PackStrategy::Greedy;
  std::size_t exhaustive_cap = 18;
  bool use_ball_sup = false;  // P^{P'} pathway: f_n replaced by its ball-sup estimate

  int effective_n_max() const { return n_max < n ? n : n_max; }
};

std::vector<PackedBall> build_pool(const System& sys, const SampleSet& Z,
                                   const Potential& f, const PackingParams& params);

// Candidate pool with cached per-candidate data; premeasure evaluations at
// successive alphas reuse the admitted set whenever the ranking is unchanged.
class PackingEngine {
 public:
  PackingEngine(const System& sys, const SampleSet& Z, const Potential& f,
                const PackingParams& params);

  double premeasure(double alpha, PackingCollection* out = nullptr);
  std::size_t pool_size() const { return pool_.size(); }
  const PackingParams& params() const { return params_; }

 private:
  void admit(const std::vector<std::uint32_t>& order,
             std::vector<std::uint32_t>& admitted);
  void admit_fast_symbolic(const std::vector<std::uint32_t>& order,
                           std::vector<std::uint32_t>& admitted);
  double exact_max(double alpha, std::vector<std::uint32_t>& chosen);

  const System& sys_;
  const SampleSet& Z_;
  PackingParams params_;
  std::vector<PackedBall> pool_;
  bool fast_symbolic_ = false;
  std::size_t conflict_s_triangle_ = 0;
  std::size_t conflict_s_shared_ = 0;
  bool all_conflict_ = false;

  std::vector<std::uint32_t> cached_order_;
  std::vector<std::uint32_t> cached_admitted_;
  bool has_cache_ = false;
};

// Weight-greedy maximal disjoint family; a certified lower bound for the
// packing pre-measure sup over disjoint weighted ball collections.
PackingCollection greedy_packing(const System& sys, const SampleSet& Z,
                                 const Potential& f, double alpha,
                                 const PackingParams& params);

// Exact maximum-weight disjoint subfamily by branch and bound; the incumbent
// is seeded with the greedy solution, so the result never falls below it.
PackingCollection exhaustive_packing(const System& sys, const SampleSet& Z,
                                     std::vector<PackedBall> pool, double alpha,
                                     DisjointMode mode, std::size_t cap = 18);

double premeasure_estimate(const System& sys, const SampleSet& Z,
                           const Potential& f, double alpha,
                           const PackingParams& params);

// Independent replay of the declared disjointness mode; fills the pairwise
// margin matrix (triangle mode, row-major) when requested.
bool verify_collection(const System& sys, const SampleSet& Z,
                       const PackingCollection& col,
                       std::vector<double>* margins = nullptr);

struct BisectionSpec {
  double alpha_lo = -1.0;
  double alpha_hi = 2.0;
  double tol = 1e-6;
  int max_widen = 64;
};

struct CriticalExponentResult {
  double alpha_hat = 0.0;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  double pre_lo = 0.0;  // premeasure at alpha_lo (> 1)
  double pre_hi = 0.0;  // premeasure at alpha_hi (<= 1)
  double tol = 0.0;
  int n = 0;
  int n_max = 0;
  double epsilon = 0.0;
  std::size_t collection_size = 0;
  std::vector<std::pair<double, double>> evals;  // (alpha, premeasure)
};

// Finite-scale critical exponent: root of the packing sum = 1 in alpha.
CriticalExponentResult critical_exponent(const System& sys, const SampleSet& Z,
                                         const Potential& f,
                                         const PackingParams& params,
                                         const BisectionSpec& bisect);

struct CoverStrategyValue {
  std::string name;
  double value = 0.0;
};

struct OuterEstimate {
  double value = 0.0;  // min over strategies; trivial cover always included
  std::vector<CoverStrategyValue> strategies;
};

OuterEstimate outer_estimate(const System& sys, const SampleSet& Z,
                             const Potential& f, double alpha,
                             const PackingParams& params,
                             const std::vector<int>& granularities = {1, 2});

// Discards largest terms until the weighted sum at exponent s lies in (a, b).
// Every term must be < b - a, which guarantees the sum cannot jump past a.
PackingCollection trim_packing_sum(const PackingCollection& col, double s,
                                   double a, double b);

struct PressureFit {
  double intercept = 0.0;
  double slope = 0.0;
};

struct PressureCell {
  int n = 0;
  double epsilon = 0.0;
  CriticalExponentResult result;
  std::optional<double> sup_variant_alpha;
};

struct PressureScan {
  std::vector<PressureCell> cells;  // n-major, epsilon-minor
  PressureFit fit;                  // alpha(n_last, eps) against eps
  std::vector<double> epsilons;
  std::vector<int> n_grid;
  // rows where alpha failed to shrink along with epsilon, beyond tolerance
  int eps_monotonicity_violations = 0;
};

// Scans the (n, eps) grid, fits alpha(n_last, eps) affinely in eps, and
// reports the intercept as the eps->0 extrapolation (an extrapolation, not a
// limit). The eps grid must be strictly decreasing.
PressureScan pressure_report(const System& sys, const SampleSet& Z,
                             const Potential& f, const std::vector<int>& n_grid,
                             const std::vector<double>& epsilons,
                             PackingParams params, const BisectionSpec& bisect,
                             bool include_sup_variant = false);

}  // namespace presslab
