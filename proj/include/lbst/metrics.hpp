#pragma once

#include "lbst/core.hpp"

namespace lbst {

struct BoundInputs {
  double entropy_bits = 0.0;
  double emd = 0.0;
};

/// Shannon entropy in bits; zero-mass positions contribute nothing.
double entropy(const ProbDist& p);

/// Earth mover's distance with ground distance |i - j| in positions,
/// via the one-dimensional closed form sum_k |cdf_p[k] - cdf_q[k]|.
double emd(const ProbDist& p, const ProbDist& q);

/// Independent EMD: builds the optimal monotone transport plan with a
/// two-pointer sweep and sums mass * distance. Quadratic-free but intended
/// for n up to ~1e4.
double emd_bruteforce(const ProbDist& p, const ProbDist& q);

/// 4 H + 8 max(log2(emd) + 2, 1) + 8; the max term is 1 when emd = 0.
double theorem1_bound(const BoundInputs& b);

}  // namespace lbst
