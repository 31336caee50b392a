#pragma once

#include <cstdint>

namespace presslab {

// splitmix64. Portable and bit-stable across platforms, which the report
// determinism contract needs; std:: distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, m); m > 0
  std::uint64_t next_below(std::uint64_t m) { return next() % m; }

 private:
  std::uint64_t state_;
};

// Deterministic per-subtask seed derivation from one top-level seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) {
  std::uint64_t z = seed ^ (0x632be59bd9b4e019ull * (label + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace presslab
