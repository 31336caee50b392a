#include "presslab/sample_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "presslab/error.hpp"
#include "presslab/rng.hpp"

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

}  // namespace

std::string SampleProvenance::describe() const {
  switch (kind) {
    case SampleKind::Grid:
      return "grid(" + std::to_string(requested) + ")";
    case SampleKind::Random:
      return "random(" + std::to_string(requested) + ",seed=" +
             std::to_string(seed) + ")";
    case SampleKind::CylinderComplete:
      return "cylinder-complete(depth=" + std::to_string(depth) + ")";
    case SampleKind::Derived:
      return "derived";
  }
  return "unknown";
}

void SampleSet::build_order() {
  if (points_.empty()) throw ConfigError("sample set must be nonempty");
  lex_order_.resize(points_.size());
  std::iota(lex_order_.begin(), lex_order_.end(), 0u);
  std::sort(lex_order_.begin(), lex_order_.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              return point_less_total(points_[a], points_[b]);
            });
  for (std::size_t r = 0; r + 1 < lex_order_.size(); ++r) {
    const Point& a = points_[lex_order_[r]];
    const Point& b = points_[lex_order_[r + 1]];
    if (!point_less_total(a, b) && !point_less_total(b, a))
      throw ConfigError("sample set contains duplicate points");
  }
  lex_rank_.resize(points_.size());
  for (std::uint32_t r = 0; r < lex_order_.size(); ++r)
    lex_rank_[lex_order_[r]] = r;
}

SampleSet SampleSet::grid(const System& sys, std::size_t size) {
  if (size == 0) throw ConfigError("grid sample size must be positive");
  SampleSet s;
  s.prov_ = {SampleKind::Grid, 0, 0, size};
  if (sys.space_kind() == SpaceKind::Torus) {
    const int d = sys.dim();
    std::size_t per_dim = size;
    if (d > 1) {
      per_dim = 1;
      while (true) {
        std::size_t next = per_dim + 1;
        std::size_t vol = 1;
        bool fits = true;
        for (int i = 0; i < d; ++i) {
          if (vol > size / next) { fits = false; break; }
          vol *= next;
        }
        if (!fits || vol > size) break;
        per_dim = next;
      }
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    while (true) {
      std::vector<double> coords(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        coords[static_cast<std::size_t>(i)] =
            static_cast<double>(idx[static_cast<std::size_t>(i)]) /
            static_cast<double>(per_dim);
      s.points_.push_back(Point::torus(std::move(coords)));
      int i = d - 1;
      while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == per_dim) {
        idx[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
  } else {
    // symbolic grid: all cylinders at the depth that fits in `size`
    int depth = 0;
    std::size_t count = 1;
    while (count * static_cast<std::size_t>(sys.alphabet()) <= size) {
      count *= static_cast<std::size_t>(sys.alphabet());
      ++depth;
    }
    return cylinder_complete(sys, std::max(depth, 1));
  }
  s.build_order();
  return s;
}

SampleSet SampleSet::random_points(const System& sys, std::size_t size,
                                   std::uint64_t seed, std::size_t prefix_len) {
  if (size == 0) throw ConfigError("random sample size must be positive");
  SampleSet s;
  s.prov_ = {SampleKind::Random, seed, 0, size};
  Rng rng(seed);
  auto draw = [&] {
    if (sys.space_kind() == SpaceKind::Torus) {
      std::vector<double> coords(static_cast<std::size_t>(sys.dim()));
      for (double& c : coords) c = rng.next_unit();
      return Point::torus(std::move(coords));
    }
    std::vector<std::uint8_t> prefix(prefix_len);
    for (auto& sym : prefix)
      sym = static_cast<std::uint8_t>(
          rng.next_below(static_cast<std::uint64_t>(sys.alphabet())));
    std::vector<std::uint8_t> tail = {static_cast<std::uint8_t>(
        rng.next_below(static_cast<std::uint64_t>(sys.alphabet())))};
    return Point::symbolic(std::move(prefix), std::move(tail));
  };
  std::vector<Point> sorted;  // accepted points in total order
  auto try_accept = [&](Point p) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), p, point_less_total);
    if (it != sorted.end() && !point_less_total(p, *it)) return false;
    sorted.insert(it, p);
    s.points_.push_back(std::move(p));
    return true;
  };
  std::size_t attempts = 0;
  while (s.points_.size() < size) {
    if (++attempts > 64 * size + 1024)
      throw ConfigError("random sampling failed to produce distinct points");
    try_accept(draw());
  }
  s.build_order();
  return s;
}

SampleSet SampleSet::cylinder_complete(const System& sys, int depth,
                                       std::size_t cap) {
  if (sys.space_kind() != SpaceKind::Symbolic)
    throw ConfigError("cylinder-complete samples exist on symbolic spaces only");
  if (depth < 1) throw ConfigError("cylinder depth must be >= 1");
  const std::size_t m = static_cast<std::size_t>(sys.alphabet());
  std::size_t count = 1;
  for (int i = 0; i < depth; ++i) {
    if (count > cap / m)
      throw ConfigError("cylinder-complete sample exceeds the size cap");
    count *= m;
  }
  SampleSet s;
  s.prov_ = {SampleKind::CylinderComplete, 0, depth, count};
  s.points_.reserve(count);
  std::vector<std::uint8_t> prefix(static_cast<std::size_t>(depth), 0);
  while (true) {
    s.points_.push_back(Point::symbolic(prefix, {0}));
    int i = depth - 1;
    while (i >= 0 && ++prefix[static_cast<std::size_t>(i)] == m) {
      prefix[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  s.build_order();
  return s;
}

SampleSet SampleSet::from_points(const System& sys, std::vector<Point> points,
                                 SampleProvenance prov) {
  SampleSet s;
  s.prov_ = prov;
  for (const Point& p : points) sys.validate_point(p);
  s.points_ = std::move(points);
  s.build_order();
  return s;
}

std::optional<std::size_t> SampleSet::find(const Point& p) const {
  auto it = std::lower_bound(
      lex_order_.begin(), lex_order_.end(), p,
      [&](std::uint32_t i, const Point& q) { return point_less_total(points_[i], q); });
  if (it == lex_order_.end()) return std::nullopt;
  const Point& cand = points_[*it];
  if (Point::identical(cand, p)) return static_cast<std::size_t>(*it);
  return std::nullopt;
}

SampleSet SampleSet::subset(const std::vector<std::uint32_t>& indices) const {
  SampleSet s;
  s.prov_ = {SampleKind::Derived, prov_.seed, prov_.depth, indices.size()};
  s.points_.reserve(indices.size());
  for (std::uint32_t i : indices) s.points_.push_back(points_[i]);
  s.build_order();
  return s;
}

}  // namespace presslab
