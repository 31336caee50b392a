#include "presslab/bowen.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "presslab/error.hpp"
#include "presslab/rng.hpp"

namespace presslab {

BowenQuery make_bowen_query(int n, double epsilon, bool closed) {
  if (n < 1) throw Error("bowen query depth must be >= 1");
  if (!(epsilon > 0.0)) throw Error("neutralization rate epsilon must be > 0");
  BowenQuery q;
  q.n = n;
  q.epsilon = epsilon;
  q.closed = closed;
  q.radius = std::exp(-static_cast<double>(n) * epsilon);
  return q;
}

namespace {

constexpr int kMaxDim = 4;

// Stack-resident torus point used during word walks.
struct TorusCursor {
  std::array<double, kMaxDim> x{};
  int dim = 0;

  static TorusCursor from(const Point& p) {
    TorusCursor c;
    c.dim = p.dim();
    for (int i = 0; i < c.dim; ++i) c.x[static_cast<std::size_t>(i)] = p.coord(i);
    return c;
  }
  Point to_point() const {
    std::vector<double> v(x.begin(), x.begin() + dim);
    return Point::torus(std::move(v));
  }
};

TorusCursor apply_torus(const GeneratorSpec& g, const TorusCursor& c) {
  TorusCursor out;
  out.dim = c.dim;
  for (int i = 0; i < c.dim; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    double off = u < g.offsets.size() ? g.offsets[u] : 0.0;
    double y = g.slopes[u] * c.x[u] + off;
    out.x[u] = g.kind == GeneratorKind::AffineMod1 ? reduce_mod1(y) : y;
  }
  return out;
}

double torus_pair_distance(const TorusCursor& a, const TorusCursor& b) {
  double best = 0.0;
  for (int i = 0; i < a.dim; ++i)
    best = std::max(best, torus_wrap_distance(a.x[static_cast<std::size_t>(i)],
                                              b.x[static_cast<std::size_t>(i)]));
  return best;
}

struct TorusMaxWalk {
  const System& sys;
  double threshold;
  double best = 0.0;
  bool truncated = false;

  void walk(const TorusCursor& a, const TorusCursor& b, int remaining) {
    best = std::max(best, torus_pair_distance(a, b));
    if (best > threshold) {
      truncated = true;
      return;
    }
    if (remaining == 0) return;
    for (int g = 0; g < sys.generator_count(); ++g) {
      const GeneratorSpec& gen = sys.generators()[static_cast<std::size_t>(g)];
      walk(apply_torus(gen, a), apply_torus(gen, b), remaining - 1);
      if (truncated) return;
    }
  }
};

}  // namespace

BowenDistance bowen_distance_pruned(const System& sys, const Point& p,
                                    const Point& q, int n, double threshold) {
  if (n < 1) throw Error("bowen distance depth must be >= 1");
  BowenDistance out;
  if (sys.space_kind() == SpaceKind::Symbolic) {
    // All symbolic generators are shifts, so over G_n the sharpest pair of
    // images is the (n-1)-fold shift of the first disagreement:
    //   d_n = base^{-(s-(n-1))} for s >= n-1, and 1 when s < n-1.
    Disagreement d = first_disagreement(p, 0, q, 0);
    if (!d.found) {
      out.value = 0.0;
      out.indistinguishable = !d.exactly_equal;
      return out;
    }
    long long g = static_cast<long long>(d.index) - (n - 1);
    out.value = symbolic_power(sys.metric_base(), g);
    out.truncated = false;
    return out;
  }
  TorusMaxWalk walk{sys, threshold};
  walk.walk(TorusCursor::from(p), TorusCursor::from(q), n - 1);
  out.value = walk.best;
  out.truncated = walk.truncated;
  return out;
}

double bowen_distance(const System& sys, const Point& p, const Point& q, int n) {
  return bowen_distance_pruned(sys, p, q, n,
                               std::numeric_limits<double>::infinity())
      .value;
}

bool ball_membership(const System& sys, const Point& center, const Point& y,
                     const BowenQuery& query) {
  BowenDistance d = bowen_distance_pruned(sys, center, y, query.n, query.radius);
  if (d.truncated) return false;  // running max already above the radius
  return query.closed ? d.value <= query.radius : d.value < query.radius;
}

namespace {

double eval_torus(const Potential& f, const TorusCursor& c) {
  switch (f.kind()) {
    case PotentialKind::Constant:
      return f.constant_value();
    case PotentialKind::CoordinateAffine: {
      double v = f.affine_offset();
      const auto& coeffs = f.coeffs();
      for (std::size_t i = 0; i < coeffs.size() && i < static_cast<std::size_t>(c.dim); ++i)
        v += coeffs[i] * c.x[i];
      return v;
    }
    default:
      return f.eval(c.to_point());
  }
}

double eval_symbolic(const Potential& f, const Point& base, std::size_t offset) {
  switch (f.kind()) {
    case PotentialKind::Constant:
      return f.constant_value();
    case PotentialKind::FirstSymbol: {
      int s = base.symbol_at(offset);
      return f.table()[static_cast<std::size_t>(s)];
    }
    default: {
      // rebuild the shifted point for table lookups
      Point p = base;
      for (std::size_t i = 0; i < offset; ++i) p = p.shifted();
      return f.eval(p);
    }
  }
}

}  // namespace

std::vector<double> potential_sum_range(const System& sys, const Potential& f,
                                        const Point& x, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw Error("bad potential sum range");
  std::vector<double> out(static_cast<std::size_t>(n_hi - n_lo + 1), 0.0);
  // level_sums[j] = sum of f over all word images at word length j
  std::vector<double> level_sums(static_cast<std::size_t>(n_hi), 0.0);
  if (sys.space_kind() == SpaceKind::Symbolic) {
    // every length-j word acts as shift^j; k^j formal words share the value
    double mult = 1.0;
    const double k = static_cast<double>(sys.generator_count());
    for (int j = 0; j < n_hi; ++j) {
      level_sums[static_cast<std::size_t>(j)] =
          mult * eval_symbolic(f, x, static_cast<std::size_t>(j));
      mult *= k;
    }
  } else {
    struct Rec {
      const System& sys;
      const Potential& f;
      std::vector<double>& level_sums;
      int max_len;
      void walk(const TorusCursor& c, int len) {
        level_sums[static_cast<std::size_t>(len)] += eval_torus(f, c);
        if (len + 1 >= max_len + 1) return;
        for (int g = 0; g < sys.generator_count(); ++g)
          walk(apply_torus(sys.generators()[static_cast<std::size_t>(g)], c), len + 1);
      }
    } rec{sys, f, level_sums, n_hi - 1};
    rec.walk(TorusCursor::from(x), 0);
  }
  double acc = 0.0;
  for (int j = 0; j < n_hi; ++j) {
    acc += level_sums[static_cast<std::size_t>(j)];
    if (j + 1 >= n_lo)
      out[static_cast<std::size_t>(j + 1 - n_lo)] = acc;
  }
  return out;
}

double potential_sum(const System& sys, const Potential& f, const Point& x, int n) {
  return potential_sum_range(sys, f, x, n, n).front();
}

double ball_sup_sum(const System& sys, const Potential& f, const Point& x,
                    const BowenQuery& query, const SampleSet& sample) {
  BowenQuery closed = query;
  closed.closed = true;
  double best = potential_sum(sys, f, x, query.n);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!ball_membership(sys, x, sample[i], closed)) continue;
    best = std::max(best, potential_sum(sys, f, sample[i], query.n));
  }
  return best;
}

double continuity_modulus(const System& sys, const Potential& f, int n,
                          double epsilon, const SampleSet& sample,
                          std::size_t pair_budget, std::uint64_t seed) {
  if (pair_budget < 1) throw Error("continuity modulus needs pair budget >= 1");
  const double bound = 2.0 * std::exp(-static_cast<double>(n) * epsilon);
  Rng rng(seed);
  double best = 0.0;
  for (std::size_t t = 0; t < pair_budget; ++t) {
    std::size_t i = rng.next_below(sample.size());
    std::size_t j = rng.next_below(sample.size());
    if (i == j) continue;
    if (sys.distance(sample[i], sample[j]) > bound) continue;
    best = std::max(best, std::fabs(f.eval(sample[i]) - f.eval(sample[j])));
  }
  return best;
}

}  // namespace presslab
