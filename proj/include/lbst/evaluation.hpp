#pragma once

// Exact expected-cost evaluation, the optimal binary search tree dynamic
// program, and audits of the learned search bounds.

#include <vector>

#include "lbst/core.hpp"
#include "lbst/strategies.hpp"

namespace lbst {

struct KeyCost {
  Position position;
  std::size_t probes;
  double probability;
};

struct CostReport {
  double expected_cost = 0.0;
  std::vector<KeyCost> per_key_costs;
  double entropy_bits = 0.0;
  std::vector<double> emd_to_each_prediction;
  double bound_value = 0.0;
  bool bound_satisfied = true;

  double ratio() const noexcept { return bound_value > 0.0 ? expected_cost / bound_value : 0.0; }
};

/// Runs the strategy once per position with positive true mass (a fresh
/// session each time) and returns sum p_i * probes_i. Fills entropy and the
/// per-prediction EMD; the bound fields are left for the audits.
CostReport expected_cost(const SearchFn& strategy, const Instance& instance);

/// Minimum over all comparison trees of sum p_i * depth_i (root depth 1).
/// Uses Knuth's root monotonicity above kKnuthThreshold positions.
double optimal_bst_cost(const ProbDist& p);
/// The plain cubic interval recurrence, for cross-checking.
double optimal_bst_cost_cubic(const ProbDist& p);

inline constexpr std::size_t kKnuthThreshold = 512;
inline constexpr double kAuditTolerance = 1e-6;

/// Learned search against 4 H + 8 max(log eta + 2, 1) + 8 on the first
/// prediction.
CostReport audit_theorem1(const Instance& instance, unsigned growth_factor = 1);

/// Portfolio search against ceil(log2(m + 2)) times the single-prediction
/// bound evaluated at the closest prediction.
CostReport audit_theorem4(const Instance& instance, unsigned growth_factor = 1);

}  // namespace lbst
