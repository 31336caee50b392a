#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "presslab/error.hpp"
#include "presslab/point.hpp"
#include "presslab/system.hpp"

namespace presslab {

// |G_n| = sum_{i=0}^{n-1} k^i, exact checked arithmetic.
std::uint64_t level_size(int k, int n);

// Formal generator word; letters are 0-based generator indices. Words of
// length < n make up the level G_n, the empty word acting as the identity.
struct Word {
  std::vector<int> letters;
  bool operator<(const Word& other) const { return letters < other.letters; }
  bool operator==(const Word& other) const { return letters == other.letters; }
};

// Enumerates all words of length 0..n-1 in DFS pre-order (empty word first).
class WordLevel {
 public:
  WordLevel(int k, int n);
  // Fills `out` with the next word; returns false when exhausted.
  bool next(Word& out);

 private:
  int k_;
  int n_;
  bool started_ = false;
  std::vector<int> current_;
};

// Orbit of a point under G_n, laid out in the same DFS pre-order as
// WordLevel. images[0] is the base point; each entry derives from its
// parent by one generator application (the word's last letter).
struct OrbitTable {
  int k = 0;
  int n = 0;
  std::vector<Point> images;
  std::vector<std::uint32_t> parent;
  std::vector<std::uint8_t> letter;

  Word word_at(std::size_t index) const;
  std::map<Word, Point> as_map() const;
};

OrbitTable orbit_images(const System& sys, const Point& p, int n,
                        std::size_t cap = 1'000'000);

// Streaming DFS over all |G_n| word images; fn(point) is called once per
// formal word (duplicate maps are visited with multiplicity).
template <class Fn>
void for_each_orbit_image(const System& sys, const Point& p, int n, Fn&& fn) {
  struct Walker {
    const System& sys;
    Fn& fn;
    void walk(const Point& q, int remaining) {
      fn(static_cast<const Point&>(q));
      if (remaining == 0) return;
      for (int g = 0; g < sys.generator_count(); ++g)
        walk(sys.apply(g, q), remaining - 1);
    }
  } walker{sys, fn};
  if (n < 1) throw Error("orbit depth must be >= 1");
  walker.walk(p, n - 1);
}

}  // namespace presslab
