#pragma once

#include <cstdint>
#include <vector>

#include "presslab/point.hpp"
#include "presslab/potential.hpp"
#include "presslab/sample_set.hpp"
#include "presslab/system.hpp"
#include "presslab/words.hpp"

namespace presslab {

// Neutralized ball query: depth n, rate epsilon, radius e^{-n epsilon}.
struct BowenQuery {
  int n = 1;
  double epsilon = 0.0;
  bool closed = true;
  double radius = 1.0;
};

BowenQuery make_bowen_query(int n, double epsilon, bool closed);

struct BowenDistance {
  double value = 0.0;
  bool truncated = false;        // early exit above the threshold
  bool indistinguishable = false;
};

// d_n(p,q) = max over G_n of d(g p, g q). With a finite threshold the word
// walk aborts once the running max exceeds it and the result is flagged
// truncated; the returned value is then only a witness above the threshold.
BowenDistance bowen_distance_pruned(const System& sys, const Point& p,
                                    const Point& q, int n, double threshold);

double bowen_distance(const System& sys, const Point& p, const Point& q, int n);

bool ball_membership(const System& sys, const Point& center, const Point& y,
                     const BowenQuery& query);

// f_n(x): sum of f over all |G_n| formal word images (multiplicity counts).
double potential_sum(const System& sys, const Potential& f, const Point& x, int n);

// f_n over a range of depths in one orbit walk: out[i] = f_{lo+i}(x).
std::vector<double> potential_sum_range(const System& sys, const Potential& f,
                                        const Point& x, int n_lo, int n_hi);

// Sample estimate of the ball-sup sum: max of f_n over the sample points in
// the closed neutralized ball around x, and over x itself.
double ball_sup_sum(const System& sys, const Potential& f, const Point& x,
                    const BowenQuery& query, const SampleSet& sample);

// Sampled estimate of the continuity modulus
//   gamma_n(eps) = sup{ |f(x)-f(y)| : d(x,y) <= 2 e^{-n eps} };
// a lower estimate of the true sup.
double continuity_modulus(const System& sys, const Potential& f, int n,
                          double epsilon, const SampleSet& sample,
                          std::size_t pair_budget, std::uint64_t seed);

}  // namespace presslab
