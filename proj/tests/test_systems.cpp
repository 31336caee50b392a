#include <cmath>

#include "doctest.h"
#include "presslab/error.hpp"
#include "presslab/potential.hpp"
#include "presslab/rng.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"
#include "test_helpers.hpp"

using namespace presslab;
using namespace presslab::testing;

TEST_CASE("build_system accepts the classical examples") {
  System doubling = doubling_map();
  CHECK(doubling.generator_count() == 1);
  CHECK(doubling.space_kind() == SpaceKind::Torus);

  System shift = full_shift();
  CHECK(shift.generator_count() == 1);
  CHECK(shift.metric_base() == 2);

  System two = two_three_map();
  CHECK(two.generator_count() == 2);
  // validated by applying both maps to a grid and checking the range
  SampleSet grid = SampleSet::grid(two, 64);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int g = 0; g < 2; ++g) {
      Point img = apply_generator(two, g, grid[i]);
      CHECK(img.coord(0) >= 0.0);
      CHECK(img.coord(0) < 1.0);
    }
  }
}

TEST_CASE("build_system rejects bad configurations") {
  SystemSpec no_gens;
  no_gens.space = SpaceKind::Torus;
  CHECK_THROWS_AS(System{no_gens}, ConfigError);

  SystemSpec mismatch;
  mismatch.space = SpaceKind::Torus;
  mismatch.metric = MetricKind::SymbolicBase;
  mismatch.generators = {{GeneratorKind::AffineMod1, {2.0}, {0.0}}};
  CHECK_THROWS_AS(System{mismatch}, ConfigError);

  SystemSpec leaves;
  leaves.space = SpaceKind::Torus;
  leaves.generators = {{GeneratorKind::AffineContraction, {0.7}, {0.5}}};
  CHECK_THROWS_AS(System{leaves}, ConfigError);

  SystemSpec shift_on_torus;
  shift_on_torus.space = SpaceKind::Torus;
  shift_on_torus.generators = {{GeneratorKind::Shift, {}, {}}};
  CHECK_THROWS_AS(System{shift_on_torus}, ConfigError);

  SystemSpec fractional_slope;
  fractional_slope.space = SpaceKind::Torus;
  fractional_slope.generators = {{GeneratorKind::AffineMod1, {1.5}, {0.0}}};
  CHECK_THROWS_AS(System{fractional_slope}, ConfigError);
}

TEST_CASE("duplicate generators are flagged, not rejected") {
  System sys = full_shift(2, 2, 2);
  CHECK(sys.has_duplicate_generators());
  CHECK(sys.generator_count() == 2);
}

TEST_CASE("apply_generator basics") {
  System doubling = doubling_map();
  Point p = Point::torus({0.7});
  CHECK(apply_generator(doubling, 0, p).coord(0) == doctest::Approx(0.4).epsilon(1e-12));

  System shift = full_shift();
  Point s = sym({0, 1, 1, 0});
  Point shifted = apply_generator(shift, 0, s);
  CHECK(shifted.symbol_at(0) == 1);
  CHECK(shifted.symbol_at(1) == 1);
  CHECK(shifted.symbol_at(2) == 0);

  SystemSpec tripling_spec;
  tripling_spec.space = SpaceKind::Torus;
  tripling_spec.generators = {{GeneratorKind::AffineMod1, {3.0}, {0.0}}};
  System tripling(tripling_spec);
  CHECK(apply_generator(tripling, 0, Point::torus({0.5})).coord(0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS(apply_generator(doubling, 5, p));
}

TEST_CASE("shift underflow errors loudly") {
  System shift = full_shift();
  Point tailless = Point::symbolic({1, 0}, {});
  Point once = apply_generator(shift, 0, tailless);
  CHECK(once.symbol_at(0) == 0);
  CHECK_THROWS_AS(apply_generator(shift, 0, once), DepthUnderflow);
  CHECK_THROWS_AS(once.symbol_at(3), DepthUnderflow);
}

TEST_CASE("distance examples") {
  System doubling = doubling_map();
  CHECK(distance(doubling, Point::torus({0.1}), Point::torus({0.9})) ==
        doctest::Approx(0.2).epsilon(1e-12));
  Point p = Point::torus({0.37});
  CHECK(distance(doubling, p, p) == 0.0);

  System shift = full_shift();
  // first disagreement at index 2 -> 2^-2
  CHECK(distance(shift, sym({0, 1, 1}), sym({0, 1, 0})) == doctest::Approx(0.25));
  CHECK(distance(shift, sym({0, 1}), sym({0, 1})) == 0.0);
}

TEST_CASE("indistinguishable prefixes return zero with a flag") {
  System shift = full_shift();
  Point a = Point::symbolic({0, 1, 1}, {});
  Point b = Point::symbolic({0, 1, 1}, {});
  DistanceResult r = shift.distance_checked(a, b);
  CHECK(r.value == 0.0);
  CHECK(r.indistinguishable);
  // with tails the same prefixes are provably equal
  DistanceResult s = shift.distance_checked(sym({0, 1, 1}), sym({0, 1, 1}));
  CHECK(s.value == 0.0);
  CHECK_FALSE(s.indistinguishable);
}

TEST_CASE("metric axioms hold on random triples") {
  auto check_system = [](const System& sys, const SampleSet& sample) {
    Rng rng(17);
    for (int t = 0; t < 1200; ++t) {
      const Point& a = sample[rng.next_below(sample.size())];
      const Point& b = sample[rng.next_below(sample.size())];
      const Point& c = sample[rng.next_below(sample.size())];
      double ab = distance(sys, a, b);
      double ba = distance(sys, b, a);
      CHECK(ab == ba);
      CHECK(ab >= 0.0);
      CHECK(distance(sys, a, c) <= ab + distance(sys, b, c) + 1e-15);
      if (Point::identical(a, b)) CHECK(ab == 0.0);
    }
  };
  System doubling = doubling_map();
  check_system(doubling, SampleSet::random_points(doubling, 64, 5));
  System shift = full_shift();
  check_system(shift, SampleSet::random_points(shift, 64, 7));
}

TEST_CASE("apply_generator is deterministic bit-for-bit") {
  System two = two_three_map();
  Point p = Point::torus({0.1234567});
  for (int g = 0; g < 2; ++g) {
    Point a = apply_generator(two, g, p);
    Point b = apply_generator(two, g, p);
    CHECK(Point::identical(a, b));
  }
}

TEST_CASE("potential evaluation respects the sup norm") {
  System doubling = doubling_map();
  Potential affine = Potential::coordinate_affine({1.0}, -0.25);
  SampleSet sample = SampleSet::random_points(doubling, 200, 11);
  for (std::size_t i = 0; i < sample.size(); ++i)
    CHECK(std::fabs(affine.eval(sample[i])) <= affine.sup_norm() + 1e-15);

  Potential table = Potential::first_symbol({0.0, 0.5});
  CHECK(table.sup_norm() == doctest::Approx(0.5));
  System shift = full_shift();
  SampleSet cyl = SampleSet::cylinder_complete(shift, 4);
  for (std::size_t i = 0; i < cyl.size(); ++i)
    CHECK(std::fabs(table.eval(cyl[i])) <= table.sup_norm());

  Potential constant = Potential::constant(-2.5);
  CHECK(constant.sup_norm() == doctest::Approx(2.5));
  CHECK(constant.eval(Point::torus({0.3})) == -2.5);
}

TEST_CASE("shifted potential adds a constant everywhere") {
  Potential table = Potential::first_symbol({0.0, 0.5});
  Potential bumped = table.shifted(0.75);
  System shift = full_shift();
  SampleSet cyl = SampleSet::cylinder_complete(shift, 3);
  for (std::size_t i = 0; i < cyl.size(); ++i)
    CHECK(bumped.eval(cyl[i]) == doctest::Approx(table.eval(cyl[i]) + 0.75));
}

TEST_CASE("tabulated potential evaluates on its grid and errors off it") {
  System doubling = doubling_map();
  std::vector<Point> pts = {Point::torus({0.0}), Point::torus({0.5})};
  Potential tab = Potential::tabulated(pts, {1.0, -2.0});
  CHECK(tab.eval(Point::torus({0.5})) == -2.0);
  CHECK(tab.sup_norm() == doctest::Approx(2.0));
  CHECK_THROWS(tab.eval(Point::torus({0.25})));
}

TEST_CASE("sample sets validate their invariants") {
  System shift = full_shift();
  SampleSet cyl = SampleSet::cylinder_complete(shift, 3);
  CHECK(cyl.size() == 8);
  // exactly one representative per length-3 cylinder
  for (std::size_t i = 0; i < cyl.size(); ++i)
    for (std::size_t j = i + 1; j < cyl.size(); ++j) {
      bool same = true;
      for (std::size_t s = 0; s < 3; ++s)
        if (cyl[i].symbol_at(s) != cyl[j].symbol_at(s)) same = false;
      CHECK_FALSE(same);
    }

  System doubling = doubling_map();
  CHECK_THROWS_AS(SampleSet::cylinder_complete(doubling, 3), ConfigError);

  std::vector<Point> dup = {Point::torus({0.5}), Point::torus({0.5})};
  CHECK_THROWS_AS(
      SampleSet::from_points(doubling, dup, {SampleKind::Derived, 0, 0, 2}),
      ConfigError);

  SampleSet rand_sample = SampleSet::random_points(doubling, 100, 3);
  CHECK(rand_sample.size() == 100);
  // identical seeds reproduce the sample exactly
  SampleSet again = SampleSet::random_points(doubling, 100, 3);
  for (std::size_t i = 0; i < 100; ++i)
    CHECK(Point::identical(rand_sample[i], again[i]));
}
