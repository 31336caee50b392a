#pragma once

#include <vector>

namespace presslab {

// Exact fixtures for full-shift systems, computed by integer/cylinder
// arithmetic only; ground truth independent of the packing estimator.

// Least cylinder length L such that two points agreeing on their first L
// symbols lie in the same neutralized ball: smallest s with
// base^{-(s-n+1)} < e^{-n eps} (open) or <= (closed).
int forced_cylinder_length(int n, double epsilon, int base, bool closed);

struct ShiftOracleSpec {
  int alphabet = 2;            // m
  int base = 2;                // metric base b
  std::vector<double> table;   // potential on the first symbol; empty = 0
  double epsilon = 0.1;
  int n = 8;
};

struct ShiftOracleValue {
  double alpha_n = 0.0;      // exact finite-n root over depth-n cylinder packings
  double alpha_limit = 0.0;  // n -> infinity value
  int cylinder_length = 0;   // forced length at (n, eps)
};

// Single shift generator (k = 1), potential locally constant on the first
// symbol. alpha(n) = [L ln m + n ln(sum_j e^{f(j)}) - n ln m] / n with the
// limit ln(sum_j e^{f(j)}) + (eps/ln b) ln m.
ShiftOracleValue shift_oracle_alpha(const ShiftOracleSpec& spec);

// k identical shift generators, f = 0: exact finite-n root
// alpha(n) = L(n) ln m / |G_n|, decreasing to 0 in n.
double multi_generator_identical_shift_alpha(int m, int base, double epsilon,
                                             int k, int n);

}  // namespace presslab
