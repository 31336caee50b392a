#include <cmath>

#include "doctest.h"
#include "presslab/error.hpp"
#include "presslab/oracles.hpp"
#include "presslab/packing.hpp"
#include "presslab/rng.hpp"
#include "test_helpers.hpp"

using namespace presslab;
using namespace presslab::testing;

namespace {

PackingParams shift_params(int n, double eps,
                           DisjointMode mode = DisjointMode::SharedSample) {
  PackingParams p;
  p.n = n;
  p.epsilon = eps;
  p.mode = mode;
  return p;
}

}  // namespace

TEST_CASE("disjoint_test basics") {
  System doubling = doubling_map();
  SampleSet Z = SampleSet::from_points(
      doubling, {Point::torus({0.0}), Point::torus({0.5})},
      {SampleKind::Derived, 0, 0, 2});
  Potential zero = Potential::constant(0.0);

  PackedBall a = make_packed_ball(doubling, Z, zero, 0, 1, 1.0);
  PackedBall same_center = make_packed_ball(doubling, Z, zero, 0, 3, 1.0);
  CHECK_FALSE(disjoint_test(doubling, Z, a, same_center, DisjointMode::Triangle));

  // centers 0 and 0.5: d_1 = 0.5 < 2 e^{-1} ~ 0.736 -> triangle says no
  PackedBall b = make_packed_ball(doubling, Z, zero, 1, 1, 1.0);
  CHECK_FALSE(disjoint_test(doubling, Z, a, b, DisjointMode::Triangle));
}

TEST_CASE("distinct cylinders are disjoint") {
  System shift = full_shift();
  int n = 3;
  double eps = 0.4;
  int forced = forced_cylinder_length(n, eps, 2, true);
  SampleSet Z = SampleSet::cylinder_complete(shift, forced);
  Potential zero = Potential::constant(0.0);
  // early disagreement: disjoint under both modes
  PackedBall first = make_packed_ball(shift, Z, zero, 0, n, eps);
  PackedBall far = make_packed_ball(shift, Z, zero,
                                    static_cast<std::uint32_t>(Z.size() - 1), n, eps);
  CHECK(disjoint_test(shift, Z, first, far, DisjointMode::Triangle));
  CHECK(disjoint_test(shift, Z, first, far, DisjointMode::SharedSample));
  // adjacent cylinders (disagreement at the last forced symbol) are genuinely
  // disjoint sets; the sample-witness mode sees that, the sound triangle
  // margin cannot certify it
  std::uint32_t adjacent = 1;  // differs from center 0 in the last symbol only
  bool found = false;
  for (std::uint32_t c = 1; c < Z.size(); ++c) {
    Disagreement d = first_disagreement(Z[0], 0, Z[c], 0);
    if (d.found && d.index == static_cast<std::size_t>(forced - 1)) {
      adjacent = c;
      found = true;
      break;
    }
  }
  REQUIRE(found);
  PackedBall near = make_packed_ball(shift, Z, zero, adjacent, n, eps);
  CHECK(disjoint_test(shift, Z, first, near, DisjointMode::SharedSample));
  CHECK_FALSE(disjoint_test(shift, Z, first, near, DisjointMode::Triangle));
}

TEST_CASE("greedy packing: singleton sample") {
  System doubling = doubling_map();
  SampleSet Z = SampleSet::from_points(doubling, {Point::torus({0.3})},
                                       {SampleKind::Derived, 0, 0, 1});
  Potential zero = Potential::constant(0.0);
  PackingParams p;
  p.n = 3;
  p.n_max = 6;
  p.epsilon = 0.5;
  p.mode = DisjointMode::Triangle;
  double alpha = 0.7;
  PackingCollection col = greedy_packing(doubling, Z, zero, alpha, p);
  REQUIRE(col.balls.size() == 1);
  CHECK(col.balls[0].depth == 3);  // max weight at the smallest depth
  CHECK(col.sum == doctest::Approx(std::exp(-alpha * 3.0)));
}

TEST_CASE("greedy packing: cylinder-complete pool admits everything") {
  System shift = full_shift();
  int n = 4;
  double eps = 0.3;
  int forced = forced_cylinder_length(n, eps, 2, true);
  SampleSet Z = SampleSet::cylinder_complete(shift, forced);
  Potential zero = Potential::constant(0.0);
  double alpha = 0.5;
  PackingCollection col =
      greedy_packing(shift, Z, zero, alpha, shift_params(n, eps));
  CHECK(col.balls.size() == Z.size());
  CHECK(col.sum == doctest::Approx(static_cast<double>(Z.size()) *
                                   std::exp(-alpha * static_cast<double>(n))));
  CHECK(verify_collection(shift, Z, col));
}

TEST_CASE("packed ball invariants recompute") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 5);
  Potential table = Potential::first_symbol({0.0, 0.5});
  PackedBall b = make_packed_ball(shift, Z, table, 3, 4, 0.25);
  CHECK(b.radius == doctest::Approx(std::exp(-4.0 * 0.25)));
  CHECK(b.g_level == doctest::Approx(4.0));
  CHECK(b.f_sum == doctest::Approx(potential_sum(shift, table, Z[3], 4)));
  double alpha = 0.9;
  CHECK(b.weight_exponent(alpha) == doctest::Approx(-alpha * 4.0 + b.f_sum));
}

TEST_CASE("exhaustive packing beats greedy on the chain pool") {
  System doubling = doubling_map();
  SampleSet Z = SampleSet::from_points(
      doubling,
      {Point::torus({0.0}), Point::torus({0.1}), Point::torus({0.2})},
      {SampleKind::Derived, 0, 0, 3});
  // depth-1 balls of radius e^{-2.5} ~ 0.082: A-B and B-C overlap, A-C do not
  double eps = 2.5;
  Potential weights = Potential::tabulated(
      {Point::torus({0.0}), Point::torus({0.1}), Point::torus({0.2})},
      {std::log(2.0), std::log(3.0), std::log(2.0)});
  std::vector<PackedBall> pool;
  for (std::uint32_t c = 0; c < 3; ++c)
    pool.push_back(make_packed_ball(doubling, Z, weights, c, 1, eps));
  double alpha = 0.0;
  PackingCollection greedy;
  {
    PackingParams p;
    p.n = 1;
    p.epsilon = eps;
    p.mode = DisjointMode::Triangle;
    greedy = greedy_packing(doubling, Z, weights, alpha, p);
  }
  CHECK(greedy.balls.size() == 1);
  CHECK(greedy.sum == doctest::Approx(3.0));
  PackingCollection exact =
      exhaustive_packing(doubling, Z, pool, alpha, DisjointMode::Triangle);
  CHECK(exact.balls.size() == 2);
  CHECK(exact.sum == doctest::Approx(4.0));

  // pairwise disjoint pool -> everything admitted; empty pool -> zero
  PackingCollection whole = exhaustive_packing(
      doubling, Z, {pool[0], pool[2]}, alpha, DisjointMode::Triangle);
  CHECK(whole.balls.size() == 2);
  PackingCollection empty =
      exhaustive_packing(doubling, Z, {}, alpha, DisjointMode::Triangle);
  CHECK(empty.balls.empty());
  CHECK(empty.sum == 0.0);
}

TEST_CASE("exhaustive dominates greedy on random pools") {
  System doubling = doubling_map();
  Rng rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t zn = 4 + rng.next_below(4);
    SampleSet Z = SampleSet::random_points(doubling, zn, 1000 + trial);
    Potential f = Potential::coordinate_affine({rng.next_unit()}, 0.0);
    PackingParams p;
    p.n = 1 + static_cast<int>(rng.next_below(3));
    p.n_max = p.n + static_cast<int>(rng.next_below(2));
    p.epsilon = 0.8 + rng.next_unit();
    p.mode = rng.next_below(2) ? DisjointMode::Triangle : DisjointMode::SharedSample;
    std::vector<PackedBall> pool = build_pool(doubling, Z, f, p);
    REQUIRE(pool.size() <= 18);
    double alpha = 0.3 * rng.next_unit();
    PackingCollection exact = exhaustive_packing(doubling, Z, pool, alpha, p.mode);
    PackingCollection greedy = greedy_packing(doubling, Z, f, alpha, p);
    CHECK(exact.sum >= greedy.sum - 1e-12 * std::max(1.0, greedy.sum));
    CHECK(verify_collection(doubling, Z, exact));
    CHECK(verify_collection(doubling, Z, greedy));
  }
}

TEST_CASE("premeasure decreases as n grows (exact strategy)") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 2);
  Potential zero = Potential::constant(0.0);
  double alpha = 0.4;
  double eps = 0.3;
  std::vector<double> values;
  for (int n = 2; n <= 5; ++n) {
    PackingParams p;
    p.n = n;
    p.n_max = 5;
    p.epsilon = eps;
    p.mode = DisjointMode::SharedSample;
    p.strategy = PackStrategy::Exact;
    p.exhaustive_cap = 31;
    double v = premeasure_estimate(shift, Z, zero, alpha, p);
    values.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    CHECK(values[i + 1] <= values[i] + 1e-12);
}

TEST_CASE("premeasure monotone in Z (exact strategy)") {
  System shift = full_shift();
  SampleSet big = SampleSet::cylinder_complete(shift, 3);
  std::vector<std::uint32_t> half = {0, 2, 4, 6};
  SampleSet small = big.subset(half);
  Potential table = Potential::first_symbol({0.1, 0.4});
  PackingParams p;
  p.n = 2;
  p.n_max = 3;
  p.epsilon = 0.4;
  p.mode = DisjointMode::SharedSample;
  p.strategy = PackStrategy::Exact;
  p.exhaustive_cap = 31;
  PackingParams p_small = p;
  double alpha = 0.6;
  CHECK(premeasure_estimate(shift, small, table, alpha, p_small) <=
        premeasure_estimate(shift, big, table, alpha, p) + 1e-12);
}

TEST_CASE("collection weight sum strictly decreases in alpha") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 4);
  Potential zero = Potential::constant(0.0);
  PackingCollection col = greedy_packing(shift, Z, zero, 0.2, shift_params(2, 0.3));
  REQUIRE(!col.balls.empty());
  CHECK(col.weight_sum(0.2) > col.weight_sum(0.5));
  CHECK(col.weight_sum(0.5) > col.weight_sum(0.9));
}

TEST_CASE("critical exponent: singleton root at zero") {
  System doubling = doubling_map();
  SampleSet Z = SampleSet::from_points(doubling, {Point::torus({0.25})},
                                       {SampleKind::Derived, 0, 0, 1});
  Potential zero = Potential::constant(0.0);
  PackingParams p;
  p.n = 4;
  p.epsilon = 0.6;
  p.mode = DisjointMode::Triangle;
  BisectionSpec bisect;
  bisect.alpha_lo = -1.0;
  bisect.alpha_hi = 2.0;
  bisect.tol = 1e-9;
  CriticalExponentResult r = critical_exponent(doubling, Z, zero, p, bisect);
  CHECK(std::fabs(r.alpha_hat) <= 1e-8);
  CHECK(r.pre_lo > 1.0);
  CHECK(r.pre_hi <= 1.0);
  CHECK(r.alpha_hi - r.alpha_lo <= bisect.tol);
  // bracket invariant held at every recorded evaluation used as an endpoint
  for (const auto& [a, v] : r.evals) {
    if (a <= r.alpha_lo) CHECK(v > 1.0);
    if (a >= r.alpha_hi) CHECK(v <= 1.0);
  }
}

TEST_CASE("critical exponent matches the shift oracle") {
  System shift = full_shift();
  Potential zero = Potential::constant(0.0);
  for (int n : {4, 6}) {
    for (double eps : {0.1, 0.25}) {
      int forced = forced_cylinder_length(n, eps, 2, true);
      SampleSet Z = SampleSet::cylinder_complete(shift, forced);
      BisectionSpec bisect;
      bisect.alpha_lo = 0.05;
      bisect.alpha_hi = 2.5;
      bisect.tol = 1e-7;
      CriticalExponentResult r =
          critical_exponent(shift, Z, zero, shift_params(n, eps), bisect);
      ShiftOracleSpec spec;
      spec.n = n;
      spec.epsilon = eps;
      CHECK(r.alpha_hat ==
            doctest::Approx(shift_oracle_alpha(spec).alpha_n).epsilon(1e-5));
    }
  }
}

TEST_CASE("constant shift moves the critical exponent exactly") {
  System shift = full_shift();
  int n = 5;
  double eps = 0.2;
  int forced = forced_cylinder_length(n, eps, 2, true);
  SampleSet Z = SampleSet::cylinder_complete(shift, forced);
  Potential table = Potential::first_symbol({0.0, 0.5});
  BisectionSpec bisect;
  bisect.alpha_lo = 0.0;
  bisect.alpha_hi = 3.0;
  bisect.tol = 1e-8;
  CriticalExponentResult base =
      critical_exponent(shift, Z, table, shift_params(n, eps), bisect);
  double c = 0.37;
  BisectionSpec shifted = bisect;
  shifted.alpha_lo += c;
  shifted.alpha_hi += c;
  CriticalExponentResult moved =
      critical_exponent(shift, Z, table.shifted(c), shift_params(n, eps), shifted);
  CHECK(moved.alpha_hat - base.alpha_hat == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("critical exponent widens brackets when needed") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 6);
  Potential zero = Potential::constant(0.0);
  BisectionSpec narrow;
  narrow.alpha_lo = 5.0;  // premeasure already < 1 here
  narrow.alpha_hi = 6.0;
  narrow.tol = 1e-6;
  CriticalExponentResult r =
      critical_exponent(shift, Z, zero, shift_params(4, 0.2), narrow);
  CHECK(r.pre_lo > 1.0);
  CHECK(r.pre_hi < 1.0);
}

TEST_CASE("outer estimate: trivial cover equals the premeasure") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 4);
  Potential zero = Potential::constant(0.0);
  PackingParams p = shift_params(3, 0.3);
  double alpha = 0.5;
  OuterEstimate out = outer_estimate(shift, Z, zero, alpha, p, {});
  CHECK(out.strategies.size() == 1);
  CHECK(out.value == doctest::Approx(premeasure_estimate(shift, Z, zero, alpha, p)));
}

TEST_CASE("outer estimate: cylinder partitions agree at complete depth") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 5);
  Potential zero = Potential::constant(0.0);
  PackingParams p = shift_params(3, 0.3);
  double alpha = 0.5;
  OuterEstimate out = outer_estimate(shift, Z, zero, alpha, p, {1, 2});
  double trivial = out.strategies[0].value;
  for (const auto& s : out.strategies)
    CHECK(s.value == doctest::Approx(trivial).epsilon(1e-10));
  CHECK(out.value <= trivial + 1e-12);
}

TEST_CASE("outer estimate subadditive over disjoint blocks") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 4);
  Potential table = Potential::first_symbol({0.0, 0.3});
  PackingParams p = shift_params(2, 0.35);
  double alpha = 0.8;
  // split by the first symbol
  std::vector<std::uint32_t> zeros, ones;
  for (std::uint32_t i = 0; i < Z.size(); ++i)
    (Z[i].symbol_at(0) == 0 ? zeros : ones).push_back(i);
  SampleSet Z0 = Z.subset(zeros);
  SampleSet Z1 = Z.subset(ones);
  OuterEstimate whole = outer_estimate(shift, Z, table, alpha, p, {1});
  double parts = premeasure_estimate(shift, Z0, table, alpha, p) +
                 premeasure_estimate(shift, Z1, table, alpha, p);
  CHECK(whole.value <= parts + 1e-12);
}

TEST_CASE("trim packing sum") {
  System doubling = doubling_map();
  SampleSet Z = SampleSet::from_points(
      doubling,
      {Point::torus({0.1}), Point::torus({0.4}), Point::torus({0.7})},
      {SampleKind::Derived, 0, 0, 3});
  auto ball_with_term = [&](std::uint32_t c, double term, double s) {
    PackedBall b;
    b.center = c;
    b.depth = 1;
    b.radius = 0.05;
    b.g_level = 1.0;
    b.f_sum = std::log(term) + s;  // e^{-s + f} = term
    return b;
  };
  double s = 0.3;
  PackingCollection col;
  col.mode = DisjointMode::Triangle;
  col.balls = {ball_with_term(0, 0.4, s), ball_with_term(1, 0.4, s),
               ball_with_term(2, 0.4, s)};
  col.alpha = s;
  col.sum = col.weight_sum(s);

  PackingCollection trimmed = trim_packing_sum(col, s, 0.5, 1.0);
  CHECK(trimmed.balls.size() == 2);
  CHECK(trimmed.sum == doctest::Approx(0.8));

  // already inside the interval: unchanged
  PackingCollection inside = trim_packing_sum(col, s, 1.1, 1.6);
  CHECK(inside.balls.size() == 3);

  // a term at or above b-a violates the hypothesis
  PackingCollection fat;
  fat.mode = DisjointMode::Triangle;
  fat.balls = {ball_with_term(0, 0.6, s)};
  CHECK_THROWS(trim_packing_sum(fat, s, 0.5, 1.0));
}

TEST_CASE("pressure report: fit recovers the oracle line") {
  System shift = full_shift();
  Potential zero = Potential::constant(0.0);
  int n = 8;
  // grid aligned with the cylinder-length lattice so the ceiling bias stays
  // on the oracle line alpha = ln 2 + eps
  const double step = std::log(2.0) / static_cast<double>(n);
  std::vector<double> eps_grid;
  for (int j = 4; j >= 1; --j) eps_grid.push_back(static_cast<double>(j) * step + 0.002);
  int deepest = forced_cylinder_length(n, eps_grid.front(), 2, true);
  SampleSet Z = SampleSet::cylinder_complete(shift, deepest);
  PackingParams p = shift_params(n, eps_grid.front());
  BisectionSpec bisect;
  bisect.alpha_lo = 0.05;
  bisect.alpha_hi = 3.0;
  bisect.tol = 1e-7;
  PressureScan scan = pressure_report(shift, Z, zero, {n}, eps_grid, p, bisect);
  CHECK(scan.fit.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(scan.fit.intercept == doctest::Approx(std::log(2.0)).epsilon(0.03));
  // epsilon-monotone within the row
  for (std::size_t i = 0; i + 1 < scan.cells.size(); ++i)
    CHECK(scan.cells[i + 1].result.alpha_hat <=
          scan.cells[i].result.alpha_hat + 2e-7);
}

TEST_CASE("pressure report validates the epsilon grid") {
  System shift = full_shift();
  SampleSet Z = SampleSet::cylinder_complete(shift, 4);
  Potential zero = Potential::constant(0.0);
  PackingParams p = shift_params(3, 0.3);
  BisectionSpec bisect;
  CHECK_THROWS_AS(pressure_report(shift, Z, zero, {3}, {0.1, 0.2}, p, bisect),
                  ConfigError);
}

TEST_CASE("sample-sup variant column stays close on locally constant potentials") {
  System shift = full_shift();
  Potential table = Potential::first_symbol({0.0, 0.4});
  int n = 4;
  double eps = 0.3;
  int forced = forced_cylinder_length(n, eps, 2, true);
  SampleSet Z = SampleSet::cylinder_complete(shift, forced);
  BisectionSpec bisect;
  bisect.alpha_lo = 0.1;
  bisect.alpha_hi = 3.0;
  bisect.tol = 1e-7;
  PressureScan scan = pressure_report(shift, Z, table, {n}, {eps}, shift_params(n, eps),
                                      bisect, true);
  REQUIRE(scan.cells.size() == 1);
  REQUIRE(scan.cells[0].sup_variant_alpha.has_value());
  // the forced prefix pins the first n symbols, so both pathways coincide
  CHECK(*scan.cells[0].sup_variant_alpha ==
        doctest::Approx(scan.cells[0].result.alpha_hat).epsilon(1e-6));
}
