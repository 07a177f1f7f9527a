#pragma once

// Search strategies. Every strategy starts from the full range [0, n-1],
// talks to the target only through SearchSession::probe, and throws
// NotFound when the outcomes prove the target absent.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbst/core.hpp"

namespace lbst {

struct LearnedParams {
  /// Endpoint reach in iteration i is d = min(2^(growth_factor * 2^i), r - l).
  unsigned growth_factor = 1;
};

struct ConvexParams {
  double lambda = 0.5;
};

/// Smallest k in [lo, hi] whose predicted mass strictly left and strictly
/// right of k are each at most half the range's mass. Falls back to the
/// midpoint when the range carries no predicted mass. O(log n).
Position weighted_median(const ProbDist& prediction, Position lo, Position hi);

/// Midpoint binary search on [lo, hi] (inclusive).
SearchStats classic_search(SearchSession& session);
SearchStats classic_search(SearchSession& session, Position lo, Position hi);

SearchStats bisection_search(SearchSession& session, const ProbDist& prediction);

/// lambda * prediction + (1 - lambda) * uniform.
ProbDist convex_mixture(const ProbDist& prediction, const ConvexParams& params);
SearchStats convex_combination_search(SearchSession& session, const ProbDist& prediction,
                                      const ConvexParams& params);

/// Probe the guess, gallop outward with offsets 1, 2, 4, ... on the
/// indicated side, then binary-search the bracket.
SearchStats doubling_point_search(SearchSession& session, Position guess);

/// Interleaves geometrically growing bisection phases on the prediction
/// with endpoint checks at doubly-exponentially growing distance.
SearchStats learned_search(SearchSession& session, const ProbDist& prediction,
                           const LearnedParams& params = {});

/// Learned search over several predictions: each bisection step
/// binary-searches the sorted set of per-prediction medians.
SearchStats portfolio_search(SearchSession& session, std::span<const ProbDist> predictions,
                             const LearnedParams& params = {});

// ---------------------------------------------------------------------------
// Uniform handle used by the evaluator and the experiment runner.

enum class StrategyKind { Classic, Bisection, Convex, Learned, Doubling, Portfolio };

std::string_view strategy_name(StrategyKind kind) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

struct StrategyConfig {
  StrategyKind kind = StrategyKind::Classic;
  LearnedParams learned{};
  ConvexParams convex{};
};

/// Short parameter tag for reports, e.g. "c=8" or "lambda=0.5".
std::string strategy_params(const StrategyConfig& config, std::size_t prediction_count);

using SearchFn = std::function<SearchStats(SearchSession&)>;

/// Binds a strategy to its predictions, precomputing anything that does not
/// depend on the target (the convex mixture, the doubling guess). The
/// returned callable owns copies of what it needs.
SearchFn bind_strategy(const StrategyConfig& config, std::span<const ProbDist> predictions);

}  // namespace lbst
