#include "presslab/system.hpp"

#include <algorithm>
#include <cmath>

#include "presslab/error.hpp"

namespace presslab {

double torus_wrap_distance(double a, double b) {
  double t = std::fabs(a - b);
  return std::min(t, 1.0 - t);
}

namespace {

bool spec_equal(const GeneratorSpec& a, const GeneratorSpec& b) {
  return a.kind == b.kind && a.slopes == b.slopes && a.offsets == b.offsets;
}

void validate_generator(const SystemSpec& spec, const GeneratorSpec& g,
                        int index) {
  const std::string tag = "generator " + std::to_string(index + 1);
  if (spec.space == SpaceKind::Symbolic) {
    if (g.kind != GeneratorKind::Shift)
      throw ConfigError(tag + ": only the left shift acts on symbolic spaces");
    return;
  }
  const std::size_t d = static_cast<std::size_t>(spec.dim);
  switch (g.kind) {
    case GeneratorKind::Shift:
      throw ConfigError(tag + ": shift does not act on the torus");
    case GeneratorKind::AffineMod1: {
      if (g.slopes.size() != d || (g.offsets.size() != d && !g.offsets.empty()))
        throw ConfigError(tag + ": slope/offset arity mismatch");
      for (double s : g.slopes) {
        if (!std::isfinite(s) || s != std::nearbyint(s))
          throw ConfigError(tag + ": affine-mod-1 slopes must be integers");
      }
      break;
    }
    case GeneratorKind::AffineContraction: {
      if (g.slopes.size() != d || g.offsets.size() != d)
        throw ConfigError(tag + ": contraction needs slope and offset per coordinate");
      for (std::size_t i = 0; i < d; ++i) {
        double a = g.slopes[i], c = g.offsets[i];
        if (!(a >= 0.0 && a < 1.0) || c < 0.0 || a + c > 1.0)
          throw ConfigError(tag + ": contraction leaves the torus (slope " +
                            std::to_string(a) + ", offset " + std::to_string(c) +
                            ")");
      }
      break;
    }
  }
}

}  // namespace

System::System(const SystemSpec& spec) : spec_(spec) {
  if (spec_.generators.empty())
    throw ConfigError("system needs at least one generator (k >= 1)");
  MetricKind natural = spec_.space == SpaceKind::Torus ? MetricKind::TorusSup
                                                       : MetricKind::SymbolicBase;
  metric_ = spec_.metric.value_or(natural);
  if (metric_ != natural)
    throw ConfigError("metric kind does not match the space kind");
  if (spec_.space == SpaceKind::Torus) {
    if (spec_.dim < 1 || spec_.dim > 4)
      throw ConfigError("torus dimension must be in 1..4");
  } else {
    if (spec_.alphabet < 2 || spec_.alphabet > 255)
      throw ConfigError("symbolic alphabet must be in 2..255");
    if (spec_.metric_base < 2)
      throw ConfigError("symbolic metric base must be >= 2");
  }
  for (int i = 0; i < generator_count(); ++i)
    validate_generator(spec_, spec_.generators[static_cast<std::size_t>(i)], i);

  all_shift_ = spec_.space == SpaceKind::Symbolic;
  for (std::size_t i = 0; i + 1 < spec_.generators.size() && !duplicate_generators_; ++i)
    for (std::size_t j = i + 1; j < spec_.generators.size(); ++j)
      if (spec_equal(spec_.generators[i], spec_.generators[j])) {
        duplicate_generators_ = true;
        break;
      }
}

Point System::apply(int generator_index, const Point& p) const {
  if (generator_index < 0 || generator_index >= generator_count())
    throw Error("generator index out of range: " +
                std::to_string(generator_index + 1) + " of k=" +
                std::to_string(generator_count()));
  const GeneratorSpec& g = spec_.generators[static_cast<std::size_t>(generator_index)];
  if (g.kind == GeneratorKind::Shift) return p.shifted();

  std::vector<double> out(static_cast<std::size_t>(p.dim()));
  for (int i = 0; i < p.dim(); ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    double off = u < g.offsets.size() ? g.offsets[u] : 0.0;
    double y = g.slopes[u] * p.coord(i) + off;
    out[u] = g.kind == GeneratorKind::AffineMod1 ? reduce_mod1(y) : y;
  }
  return Point::torus(std::move(out));
}

DistanceResult System::distance_checked(const Point& p, const Point& q) const {
  DistanceResult res;
  if (spec_.space == SpaceKind::Torus) {
    double best = 0.0;
    for (int i = 0; i < p.dim(); ++i)
      best = std::max(best, torus_wrap_distance(p.coord(i), q.coord(i)));
    res.value = best;
    return res;
  }
  Disagreement d = first_disagreement(p, 0, q, 0);
  if (d.found) {
    res.value = symbolic_power(spec_.metric_base, static_cast<long long>(d.index));
    return res;
  }
  res.value = 0.0;
  res.indistinguishable = !d.exactly_equal;
  return res;
}

void System::validate_point(const Point& p) const {
  if (spec_.space == SpaceKind::Torus) {
    if (p.kind() != SpaceKind::Torus || p.dim() != spec_.dim)
      throw ConfigError("point does not belong to the torus space");
    return;
  }
  if (p.kind() != SpaceKind::Symbolic)
    throw ConfigError("point does not belong to the symbolic space");
  for (std::uint8_t s : p.prefix())
    if (s >= spec_.alphabet)
      throw ConfigError("symbol out of alphabet range");
  for (std::uint8_t s : p.tail())
    if (s >= spec_.alphabet)
      throw ConfigError("symbol out of alphabet range");
}

System build_system(const SystemSpec& spec) { return System(spec); }

Point apply_generator(const System& sys, int generator_index, const Point& p) {
  return sys.apply(generator_index, p);
}

double distance(const System& sys, const Point& p, const Point& q) {
  return sys.distance(p, q);
}

}  // namespace presslab
