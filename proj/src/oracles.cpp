#include "presslab/oracles.hpp"

#include <cmath>

#include "presslab/error.hpp"
#include "presslab/system.hpp"
#include "presslab/words.hpp"

namespace presslab {

int forced_cylinder_length(int n, double epsilon, int base, bool closed) {
  if (n < 1 || base < 2 || !(epsilon > 0.0))
    throw Error("forced cylinder length needs n >= 1, base >= 2, eps > 0");
  const double radius = std::exp(-static_cast<double>(n) * epsilon);
  // same power/compare arithmetic as the metric, so oracle and estimator
  // resolve boundary cases identically
  long long g = 0;
  while (true) {
    double d = symbolic_power(base, g);
    bool inside = closed ? d <= radius : d < radius;
    if (inside) break;
    ++g;
    if (g > (1 << 20)) throw Error("forced length search ran away");
  }
  return n - 1 + static_cast<int>(g);
}

ShiftOracleValue shift_oracle_alpha(const ShiftOracleSpec& spec) {
  if (spec.alphabet < 2) throw Error("shift oracle needs alphabet m >= 2");
  std::vector<double> table = spec.table;
  if (table.empty()) table.assign(static_cast<std::size_t>(spec.alphabet), 0.0);
  if (static_cast<int>(table.size()) != spec.alphabet)
    throw Error("shift oracle potential table must have m entries");
  double z = 0.0;  // sum_j e^{f(j)}
  for (double v : table) z += std::exp(v);
  const double ln_m = std::log(static_cast<double>(spec.alphabet));
  ShiftOracleValue out;
  out.alpha_limit = std::log(z) + (spec.epsilon / std::log(static_cast<double>(spec.base))) * ln_m;
  if (spec.epsilon > 0.0) {
    out.cylinder_length = forced_cylinder_length(spec.n, spec.epsilon, spec.base, true);
    const double n = static_cast<double>(spec.n);
    out.alpha_n = (static_cast<double>(out.cylinder_length) * ln_m +
                   n * std::log(z) - n * ln_m) /
                  n;
  } else {
    out.cylinder_length = spec.n;
    out.alpha_n = std::log(z);
  }
  return out;
}

double multi_generator_identical_shift_alpha(int m, int base, double epsilon,
                                             int k, int n) {
  if (k < 1) throw Error("multi-generator oracle needs k >= 1");
  int length = forced_cylinder_length(n, epsilon, base, true);
  double g = static_cast<double>(level_size(k, n));
  return static_cast<double>(length) * std::log(static_cast<double>(m)) / g;
}

}  // namespace presslab
