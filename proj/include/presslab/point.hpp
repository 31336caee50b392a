#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace presslab {

enum class SpaceKind { Torus, Symbolic };

// Reduce a real to [0, 1).
double reduce_mod1(double x);

// A point of the model space. Torus points are coordinate vectors reduced
// mod 1. Symbolic points store a finite prefix plus an optional periodic
// tail rule; reading past the prefix of a tailless point throws
// DepthUnderflow rather than inventing symbols.
class Point {
 public:
  static Point torus(std::vector<double> coords);
  static Point symbolic(std::vector<std::uint8_t> prefix,
                        std::vector<std::uint8_t> tail = {});

  SpaceKind kind() const { return kind_; }

  // torus access
  int dim() const { return static_cast<int>(coords_.size()); }
  double coord(int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& coords() const { return coords_; }

  // symbolic access
  std::size_t prefix_length() const { return prefix_.size(); }
  bool has_tail() const { return !tail_.empty(); }
  const std::vector<std::uint8_t>& prefix() const { return prefix_; }
  const std::vector<std::uint8_t>& tail() const { return tail_; }

  // Symbol at position i of the (conceptually infinite) sequence.
  int symbol_at(std::size_t i) const;

  // Symbol at position i, or -1 when undecidable (past a tailless prefix).
  int symbol_or_end(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    if (!tail_.empty()) return tail_[(i - prefix_.size()) % tail_.size()];
    return -1;
  }

  // Left shift: drop the first symbol. Rotates the tail when the prefix is
  // exhausted; throws DepthUnderflow when there is nothing left to shift.
  Point shifted() const;

  // Total order used for deterministic tie-breaking. Lexicographic where
  // decidable, representation order as the final tiebreak.
  static int compare(const Point& a, const Point& b);

  // Representation identity (exact stored data).
  static bool identical(const Point& a, const Point& b);

 private:
  Point() = default;
  SpaceKind kind_ = SpaceKind::Torus;
  std::vector<double> coords_;
  std::vector<std::uint8_t> prefix_;
  std::vector<std::uint8_t> tail_;
};

struct Disagreement {
  std::size_t index = 0;  // first index where the sequences differ
  bool found = false;
  bool exactly_equal = false;  // both tails periodic and provably equal
};

// First disagreement of two shifted symbolic sequences a[off_a..], b[off_b..].
// Scans up to the decidable horizon of the two representations.
Disagreement first_disagreement(const Point& a, std::size_t off_a,
                                const Point& b, std::size_t off_b);

}  // namespace presslab
