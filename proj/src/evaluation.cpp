#include "lbst/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "lbst/metrics.hpp"

namespace lbst {

CostReport expected_cost(const SearchFn& strategy, const Instance& instance) {
  CostReport report;
  const auto& p = instance.truth;
  for (Position i = 0; i < p.size(); ++i) {
    const double pi = p.mass(i);
    if (!(pi > 0.0)) continue;
    SearchSession session(instance.keys, i);
    const SearchStats stats = strategy(session);
    if (stats.found != i || stats.probes != session.probes()) {
      throw ContractViolation("strategy reported position " + std::to_string(stats.found) +
                              " for target " + std::to_string(i));
    }
    report.per_key_costs.push_back({i, stats.probes, pi});
    report.expected_cost += pi * static_cast<double>(stats.probes);
  }
  report.entropy_bits = entropy(p);
  for (const auto& q : instance.predictions) report.emd_to_each_prediction.push_back(emd(p, q));
  return report;
}

namespace {

// Triangular table over intervals [i, j], 0 <= i <= j < n, indexed by
// length then start.
template <typename T>
class IntervalTable {
 public:
  explicit IntervalTable(std::size_t n) : n_(n), data_(n * (n + 1) / 2) {}
  T& at(std::size_t i, std::size_t j) noexcept { return data_[offset(j - i) + i]; }

 private:
  std::size_t offset(std::size_t len_minus_one) const noexcept {
    // Rows of length 1..L have n, n-1, ..., n-L+1 entries.
    return len_minus_one * n_ - len_minus_one * (len_minus_one - 1) / 2;
  }
  std::size_t n_;
  std::vector<T> data_;
};

double bst_dp(const ProbDist& p, bool knuth) {
  const std::size_t n = p.size();
  IntervalTable<double> cost(n);
  IntervalTable<std::uint32_t> root(knuth ? n : 1);
  auto weight = [&](std::size_t i, std::size_t j) { return p.range_mass(i, j); };
  auto sub = [&](std::size_t i, std::size_t k, std::size_t j) {
    const double left = k > i ? cost.at(i, k - 1) : 0.0;
    const double right = k < j ? cost.at(k + 1, j) : 0.0;
    return left + right;
  };

  for (std::size_t i = 0; i < n; ++i) {
    cost.at(i, i) = p.mass(i);
    if (knuth) root.at(i, i) = static_cast<std::uint32_t>(i);
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      const std::size_t j = i + len - 1;
      std::size_t from = i, to = j;
      if (knuth) {
        from = root.at(i, j - 1);
        to = root.at(i + 1, j);
      }
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_root = from;
      for (std::size_t k = from; k <= to; ++k) {
        const double c = sub(i, k, j);
        if (c < best) {
          best = c;
          best_root = k;
        }
      }
      cost.at(i, j) = best + weight(i, j);
      if (knuth) root.at(i, j) = static_cast<std::uint32_t>(best_root);
    }
  }
  return cost.at(0, n - 1);
}

}  // namespace

double optimal_bst_cost(const ProbDist& p) { return bst_dp(p, p.size() > kKnuthThreshold); }

double optimal_bst_cost_cubic(const ProbDist& p) { return bst_dp(p, false); }

CostReport audit_theorem1(const Instance& instance, unsigned growth_factor) {
  StrategyConfig config{StrategyKind::Learned, LearnedParams{growth_factor}, {}};
  const std::span<const ProbDist> first(instance.predictions.data(), 1);
  CostReport report = expected_cost(bind_strategy(config, first), instance);
  report.emd_to_each_prediction.resize(1);
  report.bound_value = theorem1_bound({report.entropy_bits, report.emd_to_each_prediction.front()});
  report.bound_satisfied = report.expected_cost <= report.bound_value + kAuditTolerance;
  return report;
}

CostReport audit_theorem4(const Instance& instance, unsigned growth_factor) {
  StrategyConfig config{StrategyKind::Portfolio, LearnedParams{growth_factor}, {}};
  CostReport report = expected_cost(bind_strategy(config, instance.predictions), instance);
  const double best_emd = *std::min_element(report.emd_to_each_prediction.begin(),
                                            report.emd_to_each_prediction.end());
  const double m = static_cast<double>(instance.predictions.size());
  report.bound_value = std::ceil(std::log2(m + 2.0)) * theorem1_bound({report.entropy_bits, best_emd});
  report.bound_satisfied = report.expected_cost <= report.bound_value + kAuditTolerance;
  return report;
}

}  // namespace lbst
