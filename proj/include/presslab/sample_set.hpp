#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "presslab/point.hpp"
#include "presslab/system.hpp"

namespace presslab {

enum class SampleKind { Grid, Random, CylinderComplete, Derived };

struct SampleProvenance {
  SampleKind kind = SampleKind::Derived;
  std::uint64_t seed = 0;
  int depth = 0;            // cylinder-complete
  std::size_t requested = 0;
  std::string describe() const;
};

// Finite stand-in for the subset Z. Immutable after construction; all
// set-level quantities computed against it are estimates, not true values.
class SampleSet {
 public:
  static SampleSet grid(const System& sys, std::size_t size);
  static SampleSet random_points(const System& sys, std::size_t size,
                                 std::uint64_t seed, std::size_t prefix_len = 48);
  // one representative per length-`depth` cylinder (symbolic systems)
  static SampleSet cylinder_complete(const System& sys, int depth,
                                     std::size_t cap = (std::size_t{1} << 22));
  static SampleSet from_points(const System& sys, std::vector<Point> points,
                               SampleProvenance prov);

  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  const SampleProvenance& provenance() const { return prov_; }

  // indices sorted by the deterministic point order
  const std::vector<std::uint32_t>& lex_order() const { return lex_order_; }
  std::uint32_t lex_rank(std::size_t index) const { return lex_rank_[index]; }
  std::size_t index_at_rank(std::uint32_t rank) const { return lex_order_[rank]; }

  // representation-identical membership
  std::optional<std::size_t> find(const Point& p) const;

  SampleSet subset(const std::vector<std::uint32_t>& indices) const;

 private:
  SampleSet() = default;
  void build_order();

  std::vector<Point> points_;
  SampleProvenance prov_;
  std::vector<std::uint32_t> lex_order_;
  std::vector<std::uint32_t> lex_rank_;
};

}  // namespace presslab
