#include "presslab/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "presslab/error.hpp"
#include "presslab/parallel.hpp"
#include "presslab/words.hpp"

namespace presslab {

std::string to_string(DisjointMode mode) {
  return mode == DisjointMode::Triangle ? "triangle" : "shared-sample";
}

std::string to_string(PackStrategy strategy) {
  return strategy == PackStrategy::Greedy ? "greedy" : "exact";
}

PackedBall make_packed_ball(const System& sys, const SampleSet& Z,
                            const Potential& f, std::uint32_t center, int depth,
                            double epsilon) {
  if (center >= Z.size()) throw Error("packed ball center outside the sample");
  if (depth < 1) throw Error("packed ball depth must be >= 1");
  PackedBall b;
  b.center = center;
  b.depth = depth;
  b.radius = std::exp(-static_cast<double>(depth) * epsilon);
  b.f_sum = potential_sum(sys, f, Z[center], depth);
  b.g_level = static_cast<double>(level_size(sys.generator_count(), depth));
  return b;
}

double PackingCollection::weight_sum(double alpha) const {
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> expo(balls.size());
  double max_expo = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < balls.size(); ++i) {
    expo[i] = balls[i].weight_exponent(alpha);
    max_expo = std::max(max_expo, expo[i]);
  }
  // a single term already above the double range dominates everything
  if (max_expo > 709.0) return std::numeric_limits<double>::infinity();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (expo[a] != expo[b]) return expo[a] > expo[b];
    if (balls[a].center != balls[b].center) return balls[a].center < balls[b].center;
    return balls[a].depth < balls[b].depth;
  });
  // smallest terms first, compensated
  double sum = 0.0, comp = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double term = std::exp(expo[*it]) - comp;
    double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

namespace {

// Sorted sample indices inside the closed ball.
std::vector<std::uint32_t> ball_members(const System& sys, const SampleSet& Z,
                                        const PackedBall& b) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < Z.size(); ++i) {
    BowenDistance d = bowen_distance_pruned(sys, Z[b.center], Z[i], b.depth, b.radius);
    if (!d.truncated && d.value <= b.radius) out.push_back(i);
  }
  return out;
}

bool sorted_intersect(const std::vector<std::uint32_t>& a,
                      const std::vector<std::uint32_t>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return false;
}

}  // namespace

bool disjoint_test(const System& sys, const SampleSet& Z, const PackedBall& a,
                   const PackedBall& b, DisjointMode mode) {
  if (a.center == b.center) return false;  // both closed balls contain the center
  if (mode == DisjointMode::Triangle) {
    int n_min = std::min(a.depth, b.depth);
    double threshold = a.radius + b.radius;
    BowenDistance d =
        bowen_distance_pruned(sys, Z[a.center], Z[b.center], n_min, threshold);
    if (d.truncated) return true;
    return d.value > threshold;
  }
  std::vector<std::uint32_t> ma = ball_members(sys, Z, a);
  std::vector<std::uint32_t> mb = ball_members(sys, Z, b);
  return !sorted_intersect(ma, mb);
}

std::vector<PackedBall> build_pool(const System& sys, const SampleSet& Z,
                                   const Potential& f, const PackingParams& params) {
  if (params.n < 1) throw Error("packing depth n must be >= 1");
  const int n_hi = params.effective_n_max();
  const std::size_t depths = static_cast<std::size_t>(n_hi - params.n + 1);
  std::vector<double> radii, glevels;
  for (int d = params.n; d <= n_hi; ++d) {
    radii.push_back(std::exp(-static_cast<double>(d) * params.epsilon));
    glevels.push_back(static_cast<double>(level_size(sys.generator_count(), d)));
  }
  std::vector<double> sums(Z.size() * depths);
  parallel_for(Z.size(), worker_threads(), [&](std::size_t c) {
    if (params.use_ball_sup) {
      for (int d = params.n; d <= n_hi; ++d) {
        BowenQuery q = make_bowen_query(d, params.epsilon, true);
        sums[c * depths + static_cast<std::size_t>(d - params.n)] =
            ball_sup_sum(sys, f, Z[c], q, Z);
      }
    } else {
      std::vector<double> row = potential_sum_range(sys, f, Z[c], params.n, n_hi);
      std::copy(row.begin(), row.end(), sums.begin() + static_cast<std::ptrdiff_t>(c * depths));
    }
  });
  std::vector<PackedBall> pool;
  pool.reserve(Z.size() * depths);
  for (std::uint32_t c = 0; c < Z.size(); ++c) {
    for (int d = params.n; d <= n_hi; ++d) {
      const std::size_t di = static_cast<std::size_t>(d - params.n);
      PackedBall b;
      b.center = c;
      b.depth = d;
      b.radius = radii[di];
      b.f_sum = sums[c * depths + di];
      b.g_level = glevels[di];
      pool.push_back(b);
    }
  }
  return pool;
}

PackingEngine::PackingEngine(const System& sys, const SampleSet& Z,
                             const Potential& f, const PackingParams& params)
    : sys_(sys), Z_(Z), params_(params) {
  params_.n_max = params_.effective_n_max();
  pool_ = build_pool(sys, Z, f, params_);
  fast_symbolic_ = sys.space_kind() == SpaceKind::Symbolic &&
                   params_.n == params_.n_max &&
                   params_.strategy == PackStrategy::Greedy;
  if (fast_symbolic_) {
    const double r = std::exp(-static_cast<double>(params_.n) * params_.epsilon);
    auto first_g_below = [&](double threshold) {
      std::size_t g = 0;
      while (symbolic_power(sys.metric_base(), static_cast<long long>(g)) > threshold) {
        ++g;
        if (g > 1u << 20) throw Error("conflict threshold search ran away");
      }
      return g;
    };
    std::size_t g_tri = first_g_below(r + r);
    std::size_t g_mem = first_g_below(r);
    all_conflict_ = g_tri == 0;
    conflict_s_triangle_ = static_cast<std::size_t>(params_.n - 1) + g_tri;
    conflict_s_shared_ = static_cast<std::size_t>(params_.n - 1) + g_mem;
  }
}

namespace {

// conflict iff the centers agree on at least s_threshold symbols
bool symbolic_conflict(const Point& a, const Point& b, std::size_t s_threshold) {
  Disagreement d = first_disagreement(a, 0, b, 0);
  if (!d.found) return true;  // equal or indistinguishable sequences
  return d.index >= s_threshold;
}

}  // namespace

void PackingEngine::admit_fast_symbolic(const std::vector<std::uint32_t>& order,
                                        std::vector<std::uint32_t>& admitted) {
  const bool triangle = params_.mode == DisjointMode::Triangle;
  const std::size_t s_thr = triangle ? conflict_s_triangle_ : conflict_s_shared_;
  std::set<std::uint32_t> ranks;  // admitted centers by lex rank
  for (std::uint32_t id : order) {
    const std::uint32_t c = pool_[id].center;
    const std::uint32_t rank = Z_.lex_rank(c);
    bool conflict = false;
    if (triangle && all_conflict_ && !ranks.empty()) {
      conflict = true;
    } else {
      auto it = ranks.lower_bound(rank);
      // lex neighbors maximize the common prefix with the candidate
      if (it != ranks.end())
        conflict = symbolic_conflict(Z_[c], Z_[Z_.index_at_rank(*it)], s_thr);
      if (!conflict && it != ranks.begin())
        conflict = symbolic_conflict(Z_[c], Z_[Z_.index_at_rank(*std::prev(it))], s_thr);
    }
    if (!conflict) {
      ranks.insert(rank);
      admitted.push_back(id);
    }
  }
}

void PackingEngine::admit(const std::vector<std::uint32_t>& order,
                          std::vector<std::uint32_t>& admitted) {
  if (fast_symbolic_) {
    admit_fast_symbolic(order, admitted);
    return;
  }
  for (std::uint32_t id : order) {
    bool ok = true;
    for (std::uint32_t adm : admitted) {
      if (!disjoint_test(sys_, Z_, pool_[id], pool_[adm], params_.mode)) {
        ok = false;
        break;
      }
    }
    if (ok) admitted.push_back(id);
  }
}

double PackingEngine::exact_max(double alpha, std::vector<std::uint32_t>& chosen) {
  const std::size_t P = pool_.size();
  if (P > params_.exhaustive_cap || P > 31)
    throw Error("candidate pool of " + std::to_string(P) +
                " exceeds the exhaustive cap of " +
                std::to_string(std::min<std::size_t>(params_.exhaustive_cap, 31)));
  std::vector<std::uint32_t> order(P);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> expo(P);
  for (std::size_t i = 0; i < P; ++i) expo[i] = pool_[i].weight_exponent(alpha);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (expo[a] != expo[b]) return expo[a] > expo[b];
    if (pool_[a].center != pool_[b].center)
      return Z_.lex_rank(pool_[a].center) < Z_.lex_rank(pool_[b].center);
    return pool_[a].depth < pool_[b].depth;
  });
  std::vector<double> w(P);
  for (std::size_t i = 0; i < P; ++i) w[i] = std::exp(expo[order[i]]);
  std::vector<std::uint32_t> conf(P, 0);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = i + 1; j < P; ++j)
      if (!disjoint_test(sys_, Z_, pool_[order[i]], pool_[order[j]], params_.mode)) {
        conf[i] |= 1u << j;
        conf[j] |= 1u << i;
      }
  std::vector<double> suffix(P + 1, 0.0);
  for (std::size_t i = P; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];

  // greedy incumbent over the same ordering
  double best = 0.0;
  std::uint32_t best_set = 0;
  {
    std::uint32_t banned = 0, set = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
      if (banned & (1u << i)) continue;
      set |= 1u << i;
      banned |= conf[i];
      sum += w[i];
    }
    best = sum;
    best_set = set;
  }

  struct Dfs {
    const std::vector<double>& w;
    const std::vector<std::uint32_t>& conf;
    const std::vector<double>& suffix;
    std::size_t P;
    double best;
    std::uint32_t best_set;
    void run(std::size_t i, std::uint32_t banned, double sum, std::uint32_t set) {
      if (sum + suffix[i] <= best) return;
      if (i == P) {
        best = sum;
        best_set = set;
        return;
      }
      if (!(banned & (1u << i)))
        run(i + 1, banned | conf[i], sum + w[i], set | (1u << i));
      run(i + 1, banned, sum, set);
    }
  } dfs{w, conf, suffix, P, best, best_set};
  dfs.run(0, 0, 0.0, 0);

  chosen.clear();
  for (std::size_t i = 0; i < P; ++i)
    if (dfs.best_set & (1u << i)) chosen.push_back(order[i]);
  return dfs.best;
}

double PackingEngine::premeasure(double alpha, PackingCollection* out) {
  std::vector<std::uint32_t> admitted;
  if (params_.strategy == PackStrategy::Exact) {
    exact_max(alpha, admitted);
  } else {
    std::vector<std::uint32_t> order(pool_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::vector<double> expo(pool_.size());
    for (std::size_t i = 0; i < pool_.size(); ++i)
      expo[i] = pool_[i].weight_exponent(alpha);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (expo[a] != expo[b]) return expo[a] > expo[b];
      if (pool_[a].center != pool_[b].center)
        return Z_.lex_rank(pool_[a].center) < Z_.lex_rank(pool_[b].center);
      return pool_[a].depth < pool_[b].depth;
    });
    if (has_cache_ && order == cached_order_) {
      admitted = cached_admitted_;
    } else {
      admit(order, admitted);
      cached_order_ = std::move(order);
      cached_admitted_ = admitted;
      has_cache_ = true;
    }
  }
  PackingCollection col;
  col.mode = params_.mode;
  col.alpha = alpha;
  col.balls.reserve(admitted.size());
  for (std::uint32_t id : admitted) col.balls.push_back(pool_[id]);
  col.sum = col.weight_sum(alpha);
  if (out) *out = std::move(col);
  return out ? out->sum : col.sum;
}

PackingCollection greedy_packing(const System& sys, const SampleSet& Z,
                                 const Potential& f, double alpha,
                                 const PackingParams& params) {
  PackingParams p = params;
  p.strategy = PackStrategy::Greedy;
  PackingEngine engine(sys, Z, f, p);
  PackingCollection col;
  engine.premeasure(alpha, &col);
  return col;
}

PackingCollection exhaustive_packing(const System& sys, const SampleSet& Z,
                                     std::vector<PackedBall> pool, double alpha,
                                     DisjointMode mode, std::size_t cap) {
  const std::size_t P = pool.size();
  if (P > cap || P > 31)
    throw Error("candidate pool of " + std::to_string(P) +
                " exceeds the exhaustive cap of " +
                std::to_string(std::min<std::size_t>(cap, 31)));
  PackingCollection col;
  col.mode = mode;
  col.alpha = alpha;
  if (P == 0) {
    col.sum = 0.0;
    return col;
  }
  std::vector<std::uint32_t> order(P);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> expo(P);
  for (std::size_t i = 0; i < P; ++i) expo[i] = pool[i].weight_exponent(alpha);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (expo[a] != expo[b]) return expo[a] > expo[b];
    if (pool[a].center != pool[b].center)
      return Z.lex_rank(pool[a].center) < Z.lex_rank(pool[b].center);
    return pool[a].depth < pool[b].depth;
  });
  std::vector<double> w(P);
  for (std::size_t i = 0; i < P; ++i) w[i] = std::exp(expo[order[i]]);
  std::vector<std::uint32_t> conf(P, 0);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = i + 1; j < P; ++j)
      if (!disjoint_test(sys, Z, pool[order[i]], pool[order[j]], mode)) {
        conf[i] |= 1u << j;
        conf[j] |= 1u << i;
      }
  std::vector<double> suffix(P + 1, 0.0);
  for (std::size_t i = P; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];

  double best = 0.0;
  std::uint32_t best_set = 0;
  std::uint32_t greedy_set = 0;
  {
    std::uint32_t banned = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < P; ++i) {
      if (banned & (1u << i)) continue;
      greedy_set |= 1u << i;
      banned |= conf[i];
      sum += w[i];
    }
    best = sum;
    best_set = greedy_set;
  }
  struct Dfs {
    const std::vector<double>& w;
    const std::vector<std::uint32_t>& conf;
    const std::vector<double>& suffix;
    std::size_t P;
    double best;
    std::uint32_t best_set;
    void run(std::size_t i, std::uint32_t banned, double sum, std::uint32_t set) {
      if (sum + suffix[i] <= best) return;
      if (i == P) {
        best = sum;
        best_set = set;
        return;
      }
      if (!(banned & (1u << i)))
        run(i + 1, banned | conf[i], sum + w[i], set | (1u << i));
      run(i + 1, banned, sum, set);
    }
  } dfs{w, conf, suffix, P, best, best_set};
  dfs.run(0, 0, 0.0, 0);

  auto assemble = [&](std::uint32_t set) {
    PackingCollection c;
    c.mode = mode;
    c.alpha = alpha;
    for (std::size_t i = 0; i < P; ++i)
      if (set & (1u << i)) c.balls.push_back(pool[order[i]]);
    c.sum = c.weight_sum(alpha);
    return c;
  };
  PackingCollection result = assemble(dfs.best_set);
  if (dfs.best_set != greedy_set) {
    PackingCollection greedy_col = assemble(greedy_set);
    if (greedy_col.sum > result.sum) return greedy_col;
  }
  return result;
}

double premeasure_estimate(const System& sys, const SampleSet& Z,
                           const Potential& f, double alpha,
                           const PackingParams& params) {
  PackingEngine engine(sys, Z, f, params);
  return engine.premeasure(alpha);
}

bool verify_collection(const System& sys, const SampleSet& Z,
                       const PackingCollection& col,
                       std::vector<double>* margins) {
  const std::size_t P = col.balls.size();
  if (margins) margins->assign(P * P, 0.0);
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = i + 1; j < P; ++j) {
      const PackedBall& a = col.balls[i];
      const PackedBall& b = col.balls[j];
      if (!disjoint_test(sys, Z, a, b, col.mode)) return false;
      if (margins && col.mode == DisjointMode::Triangle) {
        double d = bowen_distance(sys, Z[a.center], Z[b.center],
                                  std::min(a.depth, b.depth));
        double m = d - (a.radius + b.radius);
        (*margins)[i * P + j] = m;
        (*margins)[j * P + i] = m;
      }
    }
  }
  return true;
}

CriticalExponentResult critical_exponent(const System& sys, const SampleSet& Z,
                                         const Potential& f,
                                         const PackingParams& params,
                                         const BisectionSpec& bisect) {
  if (!(bisect.tol > 0.0)) throw Error("bisection tolerance must be > 0");
  PackingEngine engine(sys, Z, f, params);
  CriticalExponentResult res;
  res.tol = bisect.tol;
  res.n = params.n;
  res.n_max = params.effective_n_max();
  res.epsilon = params.epsilon;

  double lo = bisect.alpha_lo;
  double hi = bisect.alpha_hi;
  if (!(lo < hi)) throw Error("bisection bracket must satisfy alpha_lo < alpha_hi");
  auto eval = [&](double a) {
    double v = engine.premeasure(a);
    res.evals.emplace_back(a, v);
    return v;
  };
  double pre_lo = eval(lo);
  double pre_hi = eval(hi);
  int widen = 0;
  while (!(pre_lo > 1.0)) {
    double span = hi - lo;
    lo -= span;
    pre_lo = eval(lo);
    if (++widen > bisect.max_widen)
      throw Error("no lower bracket with premeasure > 1 within the widening bound");
  }
  while (!(pre_hi < 1.0)) {
    double span = hi - lo;
    hi += span;
    pre_hi = eval(hi);
    if (++widen > bisect.max_widen)
      throw Error("no upper bracket with premeasure < 1 within the widening bound");
  }
  while (hi - lo > bisect.tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating resolution
    double v = eval(mid);
    if (v > 1.0) {
      lo = mid;
      pre_lo = v;
    } else {
      hi = mid;
      pre_hi = v;
    }
  }
  res.alpha_lo = lo;
  res.alpha_hi = hi;
  res.pre_lo = pre_lo;
  res.pre_hi = pre_hi;
  res.alpha_hat = 0.5 * (lo + hi);
  PackingCollection col;
  engine.premeasure(res.alpha_hat, &col);
  res.collection_size = col.balls.size();
  return res;
}

namespace {

std::vector<std::vector<std::uint32_t>> partition_blocks(const System& sys,
                                                         const SampleSet& Z,
                                                         int granularity) {
  std::vector<std::vector<std::uint32_t>> blocks;
  if (sys.space_kind() == SpaceKind::Symbolic) {
    // blocks = cylinders of length `granularity`
    std::size_t count = 1;
    for (int i = 0; i < granularity; ++i)
      count *= static_cast<std::size_t>(sys.alphabet());
    blocks.resize(count);
    for (std::uint32_t i = 0; i < Z.size(); ++i) {
      std::size_t key = 0;
      for (int s = 0; s < granularity; ++s)
        key = key * static_cast<std::size_t>(sys.alphabet()) +
              static_cast<std::size_t>(Z[i].symbol_at(static_cast<std::size_t>(s)));
      blocks[key].push_back(i);
    }
  } else {
    const int bins = 1 << granularity;
    std::size_t count = 1;
    for (int d = 0; d < sys.dim(); ++d) count *= static_cast<std::size_t>(bins);
    blocks.resize(count);
    for (std::uint32_t i = 0; i < Z.size(); ++i) {
      std::size_t key = 0;
      for (int d = 0; d < sys.dim(); ++d) {
        int bin = static_cast<int>(Z[i].coord(d) * bins);
        bin = std::min(bin, bins - 1);
        key = key * static_cast<std::size_t>(bins) + static_cast<std::size_t>(bin);
      }
      blocks[key].push_back(i);
    }
  }
  std::vector<std::vector<std::uint32_t>> nonempty;
  std::size_t covered = 0;
  for (auto& b : blocks) {
    covered += b.size();
    if (!b.empty()) nonempty.push_back(std::move(b));
  }
  if (covered != Z.size())
    throw Error("cover strategy failed to cover the sample set");
  return nonempty;
}

}  // namespace

OuterEstimate outer_estimate(const System& sys, const SampleSet& Z,
                             const Potential& f, double alpha,
                             const PackingParams& params,
                             const std::vector<int>& granularities) {
  OuterEstimate out;
  double trivial = premeasure_estimate(sys, Z, f, alpha, params);
  out.strategies.push_back({"trivial", trivial});
  out.value = trivial;
  for (int g : granularities) {
    if (g < 1) throw Error("cover granularity must be >= 1");
    double total = 0.0;
    for (const auto& block : partition_blocks(sys, Z, g)) {
      SampleSet part = Z.subset(block);
      total += premeasure_estimate(sys, part, f, alpha, params);
    }
    out.strategies.push_back({"partition-" + std::to_string(g), total});
    out.value = std::min(out.value, total);
  }
  return out;
}

PackingCollection trim_packing_sum(const PackingCollection& col, double s,
                                   double a, double b) {
  if (!(a >= 0.0 && b > a)) throw Error("trim interval must satisfy 0 <= a < b");
  std::vector<double> terms(col.balls.size());
  for (std::size_t i = 0; i < col.balls.size(); ++i) {
    terms[i] = std::exp(col.balls[i].weight_exponent(s));
    if (!(terms[i] < b - a))
      throw Error("trim precondition violated: a term of " +
                  std::to_string(terms[i]) + " is not below b - a");
  }
  PackingCollection cur = col;
  cur.alpha = s;
  cur.sum = cur.weight_sum(s);
  if (cur.sum > a && cur.sum < b) return cur;
  if (!(cur.sum >= b))
    throw Error("trim precondition violated: initial sum " +
                std::to_string(cur.sum) + " is not above b and not inside (a,b)");
  while (cur.sum >= b) {
    std::size_t largest = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cur.balls.size(); ++i) {
      double t = std::exp(cur.balls[i].weight_exponent(s));
      if (t > best) {
        best = t;
        largest = i;
      }
    }
    cur.balls.erase(cur.balls.begin() + static_cast<std::ptrdiff_t>(largest));
    cur.sum = cur.weight_sum(s);
    if (!(cur.sum > a))
      throw Error("trim invariant broken: sum fell to " + std::to_string(cur.sum) +
                  " <= a; termwise precondition should forbid this");
  }
  return cur;
}

PressureScan pressure_report(const System& sys, const SampleSet& Z,
                             const Potential& f, const std::vector<int>& n_grid,
                             const std::vector<double>& epsilons,
                             PackingParams params, const BisectionSpec& bisect,
                             bool include_sup_variant) {
  if (n_grid.empty() || epsilons.empty())
    throw Error("pressure report needs nonempty n and epsilon grids");
  for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
    if (!(epsilons[i] > epsilons[i + 1]))
      throw ConfigError("epsilon grid must be strictly decreasing");
  PressureScan scan;
  scan.n_grid = n_grid;
  scan.epsilons = epsilons;
  for (int n : n_grid) {
    for (double eps : epsilons) {
      PackingParams p = params;
      p.n = n;
      p.epsilon = eps;
      PressureCell cell;
      cell.n = n;
      cell.epsilon = eps;
      cell.result = critical_exponent(sys, Z, f, p, bisect);
      if (include_sup_variant) {
        PackingParams ps = p;
        ps.use_ball_sup = true;
        cell.sup_variant_alpha = critical_exponent(sys, Z, f, ps, bisect).alpha_hat;
      }
      scan.cells.push_back(std::move(cell));
    }
  }
  // epsilon decreases along each row; alpha should not increase
  const std::size_t row = epsilons.size();
  for (std::size_t i = 0; i < scan.cells.size(); ++i) {
    if (i % row == 0) continue;
    if (scan.cells[i].result.alpha_hat >
        scan.cells[i - 1].result.alpha_hat + 2.0 * bisect.tol)
      ++scan.eps_monotonicity_violations;
  }

  // affine fit of alpha(n_last, eps) against eps
  const int n_last = n_grid.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double count = 0;
  for (const PressureCell& c : scan.cells) {
    if (c.n != n_last) continue;
    sx += c.epsilon;
    sy += c.result.alpha_hat;
    sxx += c.epsilon * c.epsilon;
    sxy += c.epsilon * c.result.alpha_hat;
    count += 1;
  }
  double denom = count * sxx - sx * sx;
  if (count >= 2 && denom != 0.0) {
    scan.fit.slope = (count * sxy - sx * sy) / denom;
    scan.fit.intercept = (sy - scan.fit.slope * sx) / count;
  } else {
    scan.fit.slope = 0.0;
    scan.fit.intercept = count > 0 ? sy / count : 0.0;
  }
  return scan;
}

}  // namespace presslab
