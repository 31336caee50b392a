#pragma once

#include <vector>

#include "presslab/potential.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"

namespace presslab::testing {

inline System doubling_map() {
  SystemSpec spec;
  spec.space = SpaceKind::Torus;
  spec.dim = 1;
  spec.generators = {{GeneratorKind::AffineMod1, {2.0}, {0.0}}};
  spec.name = "doubling";
  return System(spec);
}

inline System two_three_map() {
  SystemSpec spec;
  spec.space = SpaceKind::Torus;
  spec.dim = 1;
  spec.generators = {{GeneratorKind::AffineMod1, {2.0}, {0.0}},
                     {GeneratorKind::AffineMod1, {3.0}, {0.0}}};
  spec.name = "times2-times3";
  return System(spec);
}

inline System full_shift(int m = 2, int base = 2, int k = 1) {
  SystemSpec spec;
  spec.space = SpaceKind::Symbolic;
  spec.alphabet = m;
  spec.metric_base = base;
  spec.generators.assign(static_cast<std::size_t>(k), {GeneratorKind::Shift, {}, {}});
  spec.name = "shift-" + std::to_string(m);
  return System(spec);
}

inline Point sym(std::vector<std::uint8_t> prefix, std::vector<std::uint8_t> tail = {0}) {
  return Point::symbolic(std::move(prefix), std::move(tail));
}

}  // namespace presslab::testing
