#include "lbst/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lbst/kernels.hpp"

namespace lbst {

double entropy(const ProbDist& p) {
  double h = 0.0;
  for (double m : p.masses()) {
    if (m > 0.0) h -= m * std::log2(m);
  }
  return std::max(h, 0.0);
}

double emd(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) throw ContractViolation("emd: distributions differ in length");
  const std::size_t n = p.size();
  if (n < 2) return 0.0;
  return kernels::l1_distance(p.cdf().first(n - 1), q.cdf().first(n - 1));
}

double emd_bruteforce(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) throw ContractViolation("emd: distributions differ in length");
  const std::size_t n = p.size();
  std::vector<double> supply(p.masses().begin(), p.masses().end());
  std::vector<double> demand(q.masses().begin(), q.masses().end());
  double cost = 0.0;
  std::size_t i = 0, j = 0;
  while (i < n && j < n) {
    if (supply[i] <= 0.0) {
      ++i;
      continue;
    }
    if (demand[j] <= 0.0) {
      ++j;
      continue;
    }
    const double moved = std::min(supply[i], demand[j]);
    cost += moved * static_cast<double>(i > j ? i - j : j - i);
    supply[i] -= moved;
    demand[j] -= moved;
    if (supply[i] <= 0.0) ++i;
    if (demand[j] <= 0.0) ++j;
  }
  // Whatever is left is rounding residue between the two totals.
  return cost;
}

double theorem1_bound(const BoundInputs& b) {
  if (!(b.entropy_bits >= 0.0) || !(b.emd >= 0.0) || !std::isfinite(b.entropy_bits) ||
      !std::isfinite(b.emd)) {
    throw ContractViolation("bound inputs must be finite and non-negative");
  }
  const double log_term = b.emd > 0.0 ? std::max(std::log2(b.emd) + 2.0, 1.0) : 1.0;
  return 4.0 * b.entropy_bits + 8.0 * log_term + 8.0;
}

}  // namespace lbst
