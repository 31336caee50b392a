#include "presslab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "presslab/bowen.hpp"
#include "presslab/error.hpp"
#include "presslab/parallel.hpp"
#include "presslab/rng.hpp"
#include "presslab/words.hpp"

namespace presslab {

namespace {

bool point_less_total(const Point& a, const Point& b) {
  int c = Point::compare(a, b);
  if (c != 0) return c < 0;
  if (a.kind() == SpaceKind::Symbolic) {
    if (a.prefix() != b.prefix()) return a.prefix() < b.prefix();
    return a.tail() < b.tail();
  }
  return false;
}

// -1/0/+1 of the first L symbols of y against x
int cylinder_compare(const Point& y, const Point& x, std::size_t length) {
  for (std::size_t i = 0; i < length; ++i) {
    int sy = y.symbol_or_end(i);
    int sx = x.symbol_or_end(i);
    if (sy < 0 || sx < 0) return sy < sx ? -1 : (sy > sx ? 1 : 0);
    if (sy != sx) return sy < sx ? -1 : 1;
  }
  return 0;
}

}  // namespace

SampleMeasure::SampleMeasure(const System& sys, std::vector<Point> atoms,
                             std::vector<double> weights) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw Error("measure needs matching nonempty atom/weight lists");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw Error("atom weights must be positive");
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw Error("degenerate weight total");
  for (const Point& p : atoms) sys.validate_point(p);

  // collapse representation-identical atoms, then renormalize exactly
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return point_less_total(atoms[a], atoms[b]);
  });
  for (std::size_t i : order) {
    if (!atoms_.empty() && Point::identical(atoms_.back(), atoms[i])) {
      weights_.back() += weights[i];
      continue;
    }
    atoms_.push_back(std::move(atoms[i]));
    weights_.push_back(weights[i]);
  }
  double kept = 0.0;
  for (double w : weights_) kept += w;
  for (double& w : weights_) w /= kept;

  symbolic_ = atoms_.front().kind() == SpaceKind::Symbolic;
  order_.resize(atoms_.size());
  std::iota(order_.begin(), order_.end(), 0u);  // atoms_ already sorted
  prefix_mass_.resize(atoms_.size() + 1, 0.0);
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    prefix_mass_[i + 1] = prefix_mass_[i] + weights_[i];
}

SampleMeasure SampleMeasure::dirac(const System& sys, Point at) {
  return SampleMeasure(sys, {std::move(at)}, {1.0});
}

SampleMeasure SampleMeasure::uniform_on(const System& sys, const SampleSet& sample) {
  std::vector<double> w(sample.size(), 1.0 / static_cast<double>(sample.size()));
  return SampleMeasure(sys, sample.points(), std::move(w));
}

SampleMeasure SampleMeasure::cylinder_uniform(const System& sys, int depth) {
  SampleSet s = SampleSet::cylinder_complete(sys, depth);
  return uniform_on(sys, s);
}

double SampleMeasure::cylinder_mass(const Point& x, std::size_t length) const {
  if (!symbolic_) throw Error("cylinder mass applies to symbolic measures only");
  // atoms_ are lex-sorted, so a cylinder is a contiguous range
  auto lo = std::lower_bound(
      atoms_.begin(), atoms_.end(), 0,
      [&](const Point& a, int) { return cylinder_compare(a, x, length) < 0; });
  auto hi = std::upper_bound(
      atoms_.begin(), atoms_.end(), 0,
      [&](int, const Point& a) { return cylinder_compare(a, x, length) > 0; });
  std::size_t i = static_cast<std::size_t>(lo - atoms_.begin());
  std::size_t j = static_cast<std::size_t>(hi - atoms_.begin());
  return prefix_mass_[j] - prefix_mass_[i];
}

SampleMeasure empirical_from_orbits(const System& sys, std::uint64_t seed,
                                    std::size_t atom_count, int word_depth) {
  if (atom_count < 1) throw Error("empirical measure needs atom count >= 1");
  if (word_depth < 1) throw Error("word sampling depth must be >= 1");
  Rng rng(seed);
  auto random_point = [&] {
    if (sys.space_kind() == SpaceKind::Torus) {
      std::vector<double> coords(static_cast<std::size_t>(sys.dim()));
      for (double& c : coords) c = rng.next_unit();
      return Point::torus(std::move(coords));
    }
    std::vector<std::uint8_t> prefix(48);
    for (auto& s : prefix)
      s = static_cast<std::uint8_t>(
          rng.next_below(static_cast<std::uint64_t>(sys.alphabet())));
    return Point::symbolic(std::move(prefix),
                           {static_cast<std::uint8_t>(rng.next_below(
                               static_cast<std::uint64_t>(sys.alphabet())))});
  };
  Point base = random_point();
  std::vector<Point> atoms;
  atoms.reserve(atom_count);
  for (std::size_t i = 0; i < atom_count; ++i) {
    std::size_t len = rng.next_below(static_cast<std::uint64_t>(word_depth));
    Point p = base;
    for (std::size_t j = 0; j < len; ++j)
      p = sys.apply(static_cast<int>(rng.next_below(
                        static_cast<std::uint64_t>(sys.generator_count()))),
                    p);
    atoms.push_back(std::move(p));
  }
  std::vector<double> w(atom_count, 1.0 / static_cast<double>(atom_count));
  return SampleMeasure(sys, std::move(atoms), std::move(w));
}

std::string measure_to_json(const SampleMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    nlohmann::json p;
    const Point& at = mu.atom(i);
    if (at.kind() == SpaceKind::Torus) {
      p["coords"] = at.coords();
    } else {
      p["prefix"] = at.prefix();
      p["tail"] = at.tail();
    }
    atoms.push_back({{"point", p}, {"weight", mu.weight(i)}});
  }
  nlohmann::json out;
  out["atoms"] = atoms;
  return out.dump(2);
}

SampleMeasure measure_from_json(const System& sys, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("measure json: ") + e.what());
  }
  if (!doc.contains("atoms") || !doc.at("atoms").is_array())
    throw Error("measure json needs an 'atoms' array");
  std::vector<Point> atoms;
  std::vector<double> weights;
  for (const auto& entry : doc.at("atoms")) {
    const auto& p = entry.at("point");
    if (p.contains("coords")) {
      atoms.push_back(Point::torus(p.at("coords").get<std::vector<double>>()));
    } else {
      atoms.push_back(
          Point::symbolic(p.at("prefix").get<std::vector<std::uint8_t>>(),
                          p.value("tail", std::vector<std::uint8_t>{})));
    }
    weights.push_back(entry.at("weight").get<double>());
  }
  return SampleMeasure(sys, std::move(atoms), std::move(weights));
}

double ball_mass(const System& sys, const SampleMeasure& mu, const Point& x,
                 int n, double epsilon, bool closed) {
  BowenQuery q = make_bowen_query(n, epsilon, closed);
  if (sys.space_kind() == SpaceKind::Symbolic) {
    // the neutralized ball is the cylinder of the forced length
    std::size_t g = 0;
    if (closed) {
      while (symbolic_power(sys.metric_base(), static_cast<long long>(g)) > q.radius)
        ++g;
    } else {
      while (symbolic_power(sys.metric_base(), static_cast<long long>(g)) >= q.radius)
        ++g;
    }
    std::size_t length = static_cast<std::size_t>(n - 1) + g;
    return mu.cylinder_mass(x, length);
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < mu.atom_count(); ++i)
    if (ball_membership(sys, x, mu.atom(i), q)) mass += mu.weight(i);
  return mass;
}

LocalPressureTrace local_pressure(const System& sys, const SampleMeasure& mu,
                                  const Point& x, const Potential& f,
                                  double epsilon, int n_lo, int n_hi,
                                  int window) {
  if (n_lo < 1 || n_hi < n_lo) throw Error("bad local pressure depth range");
  if (window < 1) throw Error("tail window must be >= 1");
  LocalPressureTrace t;
  t.n_lo = n_lo;
  t.n_hi = n_hi;
  t.window = window;
  t.epsilon = epsilon;
  std::vector<double> fs = potential_sum_range(sys, f, x, n_lo, n_hi);
  for (int n = n_lo; n <= n_hi; ++n) {
    double mass = ball_mass(sys, mu, x, n, epsilon, false);  // open balls
    double fn = fs[static_cast<std::size_t>(n - n_lo)];
    double g = static_cast<double>(level_size(sys.generator_count(), n));
    t.ball_masses.push_back(mass);
    t.f_sums.push_back(fn);
    if (mass > 0.0) {
      t.quotients.push_back((-std::log(mass) + fn) / g);
    } else {
      t.quotients.push_back(std::numeric_limits<double>::infinity());
    }
  }
  int count = n_hi - n_lo + 1;
  int w = std::min(window, count);
  double proxy = -std::numeric_limits<double>::infinity();
  for (int i = count - w; i < count; ++i) {
    double v = t.quotients[static_cast<std::size_t>(i)];
    if (std::isinf(v)) {
      t.divergent = true;
      continue;
    }
    proxy = std::max(proxy, v);
  }
  t.proxy = std::isinf(proxy) ? std::numeric_limits<double>::infinity() : proxy;
  if (t.divergent) t.proxy = std::numeric_limits<double>::infinity();
  return t;
}

IntegratedPressure integrated_pressure(const System& sys, const SampleMeasure& mu,
                                       const SampleSet& Z, const Potential& f,
                                       double epsilon, int n_lo, int n_hi,
                                       int window, bool theorem_mode) {
  IntegratedPressure out;
  std::vector<bool> member(mu.atom_count());
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    member[i] = Z.find(mu.atom(i)).has_value();
    if (!member[i] && theorem_mode)
      throw Error("measure not supported on Z: atom " + std::to_string(i) +
                  " is not a sample member");
  }
  std::vector<double> proxies(mu.atom_count());
  std::vector<char> divergent(mu.atom_count(), 0);
  parallel_for(mu.atom_count(), worker_threads(), [&](std::size_t i) {
    if (!member[i]) return;
    LocalPressureTrace t =
        local_pressure(sys, mu, mu.atom(i), f, epsilon, n_lo, n_hi, window);
    proxies[i] = t.proxy;
    divergent[i] = t.divergent ? 1 : 0;
  });
  bool any = false;
  for (std::size_t i = 0; i < mu.atom_count(); ++i) {
    if (!member[i] || divergent[i]) {
      out.excluded_mass += mu.weight(i);
      ++out.excluded_atoms;
      continue;
    }
    any = true;
    out.value += mu.weight(i) * proxies[i];
  }
  if (!any) throw Error("measure not supported on Z: no atom is a sample member");
  return out;
}

namespace {

// retained atoms -> packing critical exponent on their support
CriticalExponentResult retained_exponent(const System& sys,
                                         const SampleMeasure& mu,
                                         const std::vector<std::uint32_t>& retained,
                                         const Potential& f, double epsilon,
                                         const KatokScales& scales) {
  std::vector<Point> pts;
  pts.reserve(retained.size());
  for (std::uint32_t i : retained) pts.push_back(mu.atom(i));
  SampleSet support = SampleSet::from_points(
      sys, std::move(pts), {SampleKind::Derived, 0, 0, retained.size()});
  PackingParams params;
  params.n = scales.n;
  params.n_max = scales.n_max;
  params.epsilon = epsilon;
  params.mode = scales.mode;
  params.strategy = scales.strategy;
  return critical_exponent(sys, support, f, params, scales.bisect);
}

}  // namespace

KatokEstimate katok_pressure(const System& sys, const SampleMeasure& mu,
                             double epsilon, double delta, const Potential& f,
                             const KatokScales& scales) {
  if (!(delta >= 0.0 && delta < 1.0)) throw Error("delta must lie in [0, 1)");
  KatokEstimate est;
  est.epsilon = epsilon;
  est.delta = delta;

  // rank atoms by local-pressure proxy, most complex first
  std::vector<double> proxy(mu.atom_count());
  int lo = std::max(1, std::min(scales.trace_lo, scales.n));
  parallel_for(mu.atom_count(), worker_threads(), [&](std::size_t i) {
    LocalPressureTrace t = local_pressure(sys, mu, mu.atom(i), f, epsilon, lo,
                                          scales.n, scales.window);
    proxy[i] = t.proxy;  // +inf sorts first and is dropped first
  });
  std::vector<std::uint32_t> by_complexity(mu.atom_count());
  std::iota(by_complexity.begin(), by_complexity.end(), 0u);
  std::sort(by_complexity.begin(), by_complexity.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (proxy[a] != proxy[b]) return proxy[a] > proxy[b];
              return a < b;
            });
  std::vector<bool> dropped(mu.atom_count(), false);
  double dropped_mass = 0.0;
  for (std::uint32_t i : by_complexity) {
    if (mu.atom_count() - est.dropped_atoms.size() <= 1) break;  // keep one atom
    if (dropped_mass + mu.weight(i) > delta) continue;
    dropped_mass += mu.weight(i);
    dropped[i] = true;
    est.dropped_atoms.push_back(i);
  }
  est.retained_mass = 1.0 - dropped_mass;
  std::vector<std::uint32_t> retained;
  for (std::uint32_t i = 0; i < mu.atom_count(); ++i)
    if (!dropped[i]) retained.push_back(i);
  est.packing = retained_exponent(sys, mu, retained, f, epsilon, scales);
  est.alpha_hat = est.packing.alpha_hat;
  return est;
}

double mu_inf_pressure(const System& sys, const SampleMeasure& mu,
                       const Potential& f, double epsilon, double delta,
                       const KatokScales& scales, std::uint64_t seed,
                       int random_menus) {
  double best = katok_pressure(sys, mu, epsilon, delta, f, scales).alpha_hat;
  for (int menu = 0; menu < random_menus; ++menu) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(menu)));
    std::vector<std::uint32_t> order(mu.atom_count());
    std::iota(order.begin(), order.end(), 0u);
    // deterministic shuffle
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.next_below(i)]);
    std::vector<bool> dropped(mu.atom_count(), false);
    double dropped_mass = 0.0;
    std::size_t dropped_count = 0;
    for (std::uint32_t i : order) {
      if (mu.atom_count() - dropped_count <= 1) break;
      if (dropped_mass + mu.weight(i) > delta) continue;
      dropped_mass += mu.weight(i);
      dropped[i] = true;
      ++dropped_count;
    }
    std::vector<std::uint32_t> retained;
    for (std::uint32_t i = 0; i < mu.atom_count(); ++i)
      if (!dropped[i]) retained.push_back(i);
    best = std::min(best,
                    retained_exponent(sys, mu, retained, f, epsilon, scales).alpha_hat);
  }
  return best;
}

FiveRResult five_r_subfamily(const System& sys, int n,
                             const std::vector<FiveRBall>& balls,
                             const SampleSet& sample) {
  FiveRResult res;
  res.covered_by.assign(balls.size(), 0);
  std::vector<std::uint32_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    if (balls[a].center != balls[b].center)
      return sample.lex_rank(balls[a].center) < sample.lex_rank(balls[b].center);
    return a < b;
  });
  // greedy extraction, sound triangle disjointness
  std::vector<std::uint32_t> rejected_by(balls.size(), 0);
  std::vector<bool> admitted(balls.size(), false);
  for (std::uint32_t id : order) {
    bool ok = true;
    for (std::uint32_t adm : res.admitted) {
      double threshold = balls[id].radius + balls[adm].radius;
      BowenDistance d = bowen_distance_pruned(
          sys, sample[balls[id].center], sample[balls[adm].center], n, threshold);
      if (!(d.truncated || d.value > threshold)) {
        ok = false;
        rejected_by[id] = adm;
        break;
      }
    }
    if (ok) {
      admitted[id] = true;
      res.admitted.push_back(id);
    }
  }
  // coverage certificate: sampled points of every input ball lie inside a
  // 5x-inflated admitted ball
  for (std::uint32_t id = 0; id < balls.size(); ++id) {
    std::uint32_t cover = admitted[id] ? id : rejected_by[id];
    res.covered_by[id] = cover;
    for (std::size_t s = 0; s < sample.size(); ++s) {
      BowenDistance din = bowen_distance_pruned(sys, sample[balls[id].center],
                                                sample[s], n, balls[id].radius);
      if (din.truncated || din.value > balls[id].radius) continue;
      double inflated = 5.0 * balls[cover].radius;
      BowenDistance dout = bowen_distance_pruned(sys, sample[balls[cover].center],
                                                 sample[s], n, inflated);
      if (dout.truncated || dout.value > inflated) {
        res.coverage_ok = false;
      }
    }
  }
  return res;
}

}  // namespace presslab
