#include "presslab/point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "presslab/error.hpp"

namespace presslab {

double reduce_mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // rounding at the seam
  if (r == 0.0) r = 0.0;  // normalize -0.0
  return r;
}

Point Point::torus(std::vector<double> coords) {
  if (coords.empty()) throw Error("torus point needs at least one coordinate");
  for (double& c : coords) {
    if (!std::isfinite(c)) throw Error("torus coordinate must be finite");
    c = reduce_mod1(c);
  }
  Point p;
  p.kind_ = SpaceKind::Torus;
  p.coords_ = std::move(coords);
  return p;
}

Point Point::symbolic(std::vector<std::uint8_t> prefix,
                      std::vector<std::uint8_t> tail) {
  if (prefix.empty() && tail.empty())
    throw Error("symbolic point needs a nonempty prefix or tail");
  Point p;
  p.kind_ = SpaceKind::Symbolic;
  p.prefix_ = std::move(prefix);
  p.tail_ = std::move(tail);
  return p;
}

int Point::symbol_at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  if (!tail_.empty()) return tail_[(i - prefix_.size()) % tail_.size()];
  throw DepthUnderflow("symbolic read past stored prefix (index " +
                       std::to_string(i) + ", prefix length " +
                       std::to_string(prefix_.size()) + ")");
}

Point Point::shifted() const {
  if (kind_ != SpaceKind::Symbolic)
    throw Error("shift applies to symbolic points only");
  Point p;
  p.kind_ = SpaceKind::Symbolic;
  if (!prefix_.empty()) {
    p.prefix_.assign(prefix_.begin() + 1, prefix_.end());
    p.tail_ = tail_;
    if (p.prefix_.empty() && p.tail_.empty())
      throw DepthUnderflow("symbolic prefix exhausted by shift");
    return p;
  }
  if (tail_.empty()) throw DepthUnderflow("symbolic prefix exhausted by shift");
  p.tail_.assign(tail_.begin() + 1, tail_.end());
  p.tail_.push_back(tail_.front());
  return p;
}

namespace {

std::size_t lcm_capped(std::size_t a, std::size_t b, std::size_t cap) {
  std::size_t g = std::gcd(a, b);
  std::size_t l = a / g * b;
  return std::min(l, cap);
}

// Number of positions after which two (offset) sequences are provably equal
// if no disagreement was seen, or 0 when equality is undecidable.
std::size_t equality_horizon(const Point& a, std::size_t off_a, const Point& b,
                             std::size_t off_b) {
  if (!a.has_tail() || !b.has_tail()) return 0;
  std::size_t pre_a = a.prefix_length() > off_a ? a.prefix_length() - off_a : 0;
  std::size_t pre_b = b.prefix_length() > off_b ? b.prefix_length() - off_b : 0;
  std::size_t period = lcm_capped(a.tail().size(), b.tail().size(), 1u << 16);
  return std::max(pre_a, pre_b) + period;
}

}  // namespace

Disagreement first_disagreement(const Point& a, std::size_t off_a,
                                const Point& b, std::size_t off_b) {
  Disagreement out;
  std::size_t horizon = equality_horizon(a, off_a, b, off_b);
  for (std::size_t i = 0;; ++i) {
    int sa = a.symbol_or_end(off_a + i);
    int sb = b.symbol_or_end(off_b + i);
    if (sa < 0 || sb < 0) return out;  // undecidable tail, no disagreement seen
    if (sa != sb) {
      out.index = i;
      out.found = true;
      return out;
    }
    if (horizon > 0 && i + 1 >= horizon) {
      out.exactly_equal = true;
      return out;
    }
  }
}

int Point::compare(const Point& a, const Point& b) {
  if (a.kind_ != b.kind_) return a.kind_ == SpaceKind::Torus ? -1 : 1;
  if (a.kind_ == SpaceKind::Torus) {
    std::size_t n = std::min(a.coords_.size(), b.coords_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coords_[i] < b.coords_[i]) return -1;
      if (a.coords_[i] > b.coords_[i]) return 1;
    }
    if (a.coords_.size() != b.coords_.size())
      return a.coords_.size() < b.coords_.size() ? -1 : 1;
    return 0;
  }
  Disagreement d = first_disagreement(a, 0, b, 0);
  if (d.found) {
    int sa = a.symbol_or_end(d.index);
    int sb = b.symbol_or_end(d.index);
    return sa < sb ? -1 : 1;
  }
  if (d.exactly_equal) return 0;
  // Undecidable: fall back to representation order so the relation stays total.
  if (a.prefix_ != b.prefix_) return a.prefix_ < b.prefix_ ? -1 : 1;
  if (a.tail_ != b.tail_) return a.tail_ < b.tail_ ? -1 : 1;
  return 0;
}

bool Point::identical(const Point& a, const Point& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == SpaceKind::Torus) return a.coords_ == b.coords_;
  return a.prefix_ == b.prefix_ && a.tail_ == b.tail_;
}

}  // namespace presslab
