#include <cmath>

#include "doctest.h"
#include "presslab/measures.hpp"
#include "presslab/oracles.hpp"
#include "presslab/packing.hpp"
#include "test_helpers.hpp"

using namespace presslab;
using namespace presslab::testing;

TEST_CASE("forced cylinder length") {
  // tiny eps: classical Bowen ball = length-n cylinder
  for (int n = 2; n <= 8; ++n)
    CHECK(forced_cylinder_length(n, 1e-9, 2, true) == n);

  // b=2, n=10, eps=ln 2, open: least s with 2^{-(s-9)} < 2^{-10} -> 20
  CHECK(forced_cylinder_length(10, std::log(2.0), 2, false) == 20);
  // closed differs exactly at the integer boundary
  CHECK(forced_cylinder_length(10, std::log(2.0), 2, true) == 19);

  // away from boundaries open and closed agree
  CHECK(forced_cylinder_length(6, 0.37, 2, true) ==
        forced_cylinder_length(6, 0.37, 2, false));
}

TEST_CASE("shift oracle alpha") {
  ShiftOracleSpec flat;
  flat.epsilon = 1e-12;
  flat.n = 10;
  CHECK(shift_oracle_alpha(flat).alpha_limit == doctest::Approx(std::log(2.0)));

  ShiftOracleSpec neutral;
  neutral.epsilon = 0.1;
  neutral.n = 12;
  ShiftOracleValue v = shift_oracle_alpha(neutral);
  CHECK(v.alpha_limit == doctest::Approx(std::log(2.0) + 0.1));
  CHECK(v.alpha_n == doctest::Approx(static_cast<double>(v.cylinder_length) *
                                     std::log(2.0) / 12.0));

  ShiftOracleSpec weighted;
  weighted.table = {0.0, 1.0};
  weighted.epsilon = 1e-12;
  weighted.n = 10;
  CHECK(shift_oracle_alpha(weighted).alpha_limit ==
        doctest::Approx(std::log(1.0 + std::exp(1.0))).epsilon(1e-9));
}

TEST_CASE("multi-generator identical shift alpha") {
  // k=2, m=2, eps=0.1, n=6: s_min(6) * ln 2 / 63
  int s6 = forced_cylinder_length(6, 0.1, 2, true);
  CHECK(multi_generator_identical_shift_alpha(2, 2, 0.1, 2, 6) ==
        doctest::Approx(static_cast<double>(s6) * std::log(2.0) / 63.0));

  // decreasing toward zero
  double prev = 1e9;
  for (int n = 4; n <= 9; ++n) {
    double a = multi_generator_identical_shift_alpha(2, 2, 0.1, 2, n);
    CHECK(a < prev);
    prev = a;
  }
  CHECK(prev < 0.03);

  // k=1 reduces to the single-shift oracle with f=0
  ShiftOracleSpec spec;
  spec.epsilon = 0.15;
  spec.n = 7;
  CHECK(multi_generator_identical_shift_alpha(2, 2, 0.15, 1, 7) ==
        doctest::Approx(shift_oracle_alpha(spec).alpha_n));
}

TEST_CASE("estimator and oracle agree across a small grid") {
  System shift = full_shift();
  Potential zero = Potential::constant(0.0);
  BisectionSpec bisect;
  bisect.alpha_lo = 0.05;
  bisect.alpha_hi = 2.5;
  bisect.tol = 1e-6;
  for (int n : {6, 8}) {
    for (double eps : {0.05, 0.2}) {
      int forced = forced_cylinder_length(n, eps, 2, true);
      SampleSet Z = SampleSet::cylinder_complete(shift, forced);
      PackingParams p;
      p.n = n;
      p.epsilon = eps;
      p.mode = DisjointMode::SharedSample;
      CriticalExponentResult r = critical_exponent(shift, Z, zero, p, bisect);
      ShiftOracleSpec spec;
      spec.n = n;
      spec.epsilon = eps;
      CHECK(r.alpha_hat ==
            doctest::Approx(shift_oracle_alpha(spec).alpha_n).epsilon(2e-6));
    }
  }
}

TEST_CASE("VP tightness identity at fixed scale") {
  // local-pressure proxy of the uniform cylinder measure equals the oracle
  // quantity s_min * ln m / n to full precision
  System shift = full_shift();
  Potential zero = Potential::constant(0.0);
  int n = 8;
  double eps = 0.1;
  int s_closed = forced_cylinder_length(n, eps, 2, true);
  int s_open = forced_cylinder_length(n, eps, 2, false);
  REQUIRE(s_closed == s_open);  // generic eps
  SampleSet Z = SampleSet::cylinder_complete(shift, s_closed);
  SampleMeasure mu = SampleMeasure::uniform_on(shift, Z);
  IntegratedPressure ip = integrated_pressure(shift, mu, Z, zero, eps, n, n, 1);
  double oracle = static_cast<double>(s_closed) * std::log(2.0) / n;
  CHECK(std::fabs(ip.value - oracle) <= 1e-10);

  PackingParams p;
  p.n = n;
  p.epsilon = eps;
  p.mode = DisjointMode::SharedSample;
  BisectionSpec bisect;
  bisect.alpha_lo = 0.3;
  bisect.alpha_hi = 1.5;
  bisect.tol = 1e-11;
  CriticalExponentResult r = critical_exponent(shift, Z, zero, p, bisect);
  CHECK(std::fabs(r.alpha_hat - ip.value) <= 1e-10);
}
