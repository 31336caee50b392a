#include "presslab/words.hpp"

#include <algorithm>

namespace presslab {

std::uint64_t level_size(int k, int n) {
  if (k < 1 || n < 1) throw Error("level_size requires k >= 1 and n >= 1");
  std::uint64_t total = 0;
  std::uint64_t power = 1;  // k^i
  for (int i = 0; i < n; ++i) {
    if (total > UINT64_MAX - power)
      throw OverflowError("|G_n| overflows 64-bit range for k=" +
                          std::to_string(k) + ", n=" + std::to_string(n));
    total += power;
    if (i + 1 < n) {
      if (power > UINT64_MAX / static_cast<std::uint64_t>(k))
        throw OverflowError("|G_n| overflows 64-bit range for k=" +
                            std::to_string(k) + ", n=" + std::to_string(n));
      power *= static_cast<std::uint64_t>(k);
    }
  }
  return total;
}

WordLevel::WordLevel(int k, int n) : k_(k), n_(n) {
  if (k < 1 || n < 1) throw Error("word level requires k >= 1 and n >= 1");
}

bool WordLevel::next(Word& out) {
  if (!started_) {
    started_ = true;
    current_.clear();
    out.letters = current_;
    return true;
  }
  // DFS pre-order successor: descend if possible, else increment the last
  // letter, carrying to the left.
  if (static_cast<int>(current_.size()) + 1 < n_) {
    current_.push_back(0);
    out.letters = current_;
    return true;
  }
  while (!current_.empty() && current_.back() == k_ - 1) current_.pop_back();
  if (current_.empty()) return false;
  ++current_.back();
  out.letters = current_;
  return true;
}

OrbitTable orbit_images(const System& sys, const Point& p, int n,
                        std::size_t cap) {
  if (n < 1) throw Error("orbit depth must be >= 1");
  std::uint64_t total = level_size(sys.generator_count(), n);
  if (total > cap)
    throw Error("orbit table of " + std::to_string(total) +
                " entries exceeds the materialization cap; stream instead");
  OrbitTable t;
  t.k = sys.generator_count();
  t.n = n;
  t.images.reserve(total);
  t.parent.reserve(total);
  t.letter.reserve(total);
  struct Rec {
    const System& sys;
    OrbitTable& out;
    int n;
    void walk(const Point& q, int depth, std::uint32_t parent, std::uint8_t letter) {
      std::uint32_t self = static_cast<std::uint32_t>(out.images.size());
      out.images.push_back(q);
      out.parent.push_back(parent);
      out.letter.push_back(letter);
      if (depth + 1 >= n) return;
      for (int g = 0; g < sys.generator_count(); ++g)
        walk(sys.apply(g, q), depth + 1, self, static_cast<std::uint8_t>(g));
    }
  } rec{sys, t, n};
  rec.walk(p, 0, 0, 0);
  return t;
}

Word OrbitTable::word_at(std::size_t index) const {
  Word w;
  std::size_t cur = index;
  while (cur != 0) {
    w.letters.push_back(letter[cur]);
    cur = parent[cur];
  }
  std::reverse(w.letters.begin(), w.letters.end());
  return w;
}

std::map<Word, Point> OrbitTable::as_map() const {
  std::map<Word, Point> m;
  for (std::size_t i = 0; i < images.size(); ++i)
    m.emplace(word_at(i), images[i]);
  return m;
}

}  // namespace presslab
