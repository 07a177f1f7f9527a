#include "lbst/strategies.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "lbst/kernels.hpp"

namespace lbst {
namespace {

// Relative slack on the half-mass comparisons so that exact ties (e.g. an
// even number of equal masses) resolve the same way regardless of rounding
// in the prefix sums.
constexpr double kMedianSlack = 1e-12;

[[noreturn]] void target_absent(const char* where) {
  throw NotFound(std::string(where) + ": probe outcomes exclude every position");
}

Position midpoint(Position lo, Position hi) noexcept { return lo + (hi - lo) / 2; }

// Narrows [lo, hi] after a non-Equal probe at k; false if the range empties.
bool narrow(Outcome outcome, Position k, Position& lo, Position& hi) noexcept {
  if (outcome == Outcome::Less) {
    if (k == lo) return false;
    hi = k - 1;
  } else {
    if (k == hi) return false;
    lo = k + 1;
  }
  return true;
}

SearchStats finish(const SearchSession& session, std::size_t start, Position found) {
  SearchStats stats;
  stats.found = found;
  stats.probes = session.probes() - start;
  return stats;
}

// Endpoint reach 2^(c * 2^iteration) capped at span, saturating before the
// exponent overflows a 64-bit word.
std::size_t endpoint_reach(unsigned growth, std::size_t iteration, std::size_t span) noexcept {
  if (iteration >= 63) return span;
  const std::uint64_t steps = std::uint64_t{1} << iteration;
  if (growth == 0 || steps >= 63 || growth >= 63 || growth * steps >= 63) return span;
  const std::uint64_t reach = std::uint64_t{1} << (growth * steps);
  return reach < span ? static_cast<std::size_t>(reach) : span;
}

std::uint64_t phase_budget(std::size_t iteration) noexcept {
  return iteration >= 63 ? std::numeric_limits<std::uint64_t>::max()
                         : std::uint64_t{1} << iteration;
}

struct EndpointResult {
  bool found = false;
  Position position = 0;
};

// Endpoint phase shared by the single- and multi-prediction searches.
// Either finds the target (possibly via a bracketed binary search) or
// shrinks [lo, hi] to [lo + d + 1, hi - d - 1].
EndpointResult endpoint_phase(SearchSession& session, Position& lo, Position& hi,
                              std::size_t reach, const char* where) {
  const Position left = lo + reach;
  const Outcome first = session.probe(left);
  if (first == Outcome::Equal) return {true, left};
  if (first == Outcome::Less) {
    if (left == lo) target_absent(where);
    return {true, classic_search(session, lo, left - 1).found};
  }
  const Position right = hi - reach;
  if (right <= left) {
    // [right, hi] already covers everything right of `left`.
    if (left == hi) target_absent(where);
    return {true, classic_search(session, left + 1, hi).found};
  }
  const Outcome second = session.probe(right);
  if (second == Outcome::Equal) return {true, right};
  if (second == Outcome::Greater) {
    if (right == hi) target_absent(where);
    return {true, classic_search(session, right + 1, hi).found};
  }
  if (right - left < 2) target_absent(where);
  lo = left + 1;
  hi = right - 1;
  return {};
}

}  // namespace

Position weighted_median(const ProbDist& prediction, Position lo, Position hi) {
  if (hi < lo || hi >= prediction.size()) {
    throw ContractViolation("weighted_median: invalid range");
  }
  const double total = prediction.range_mass(lo, hi);
  if (!(total > 0.0)) return midpoint(lo, hi);

  const double limit = 0.5 * total + kMedianSlack * total;
  const auto cdf = prediction.cdf();
  const double top = cdf[hi];
  const double base = prediction.prefix(lo);
  // Mass right of k is non-increasing in k: find the first k where it fits.
  Position a = lo, b = hi;
  while (a < b) {
    const Position mid = midpoint(a, b);
    if (top - cdf[mid] <= limit) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  // Left mass at the first such k is below half by construction; the scan
  // only guards against rounding.
  Position k = a;
  while (k < hi && prediction.prefix(k) - base > limit) ++k;
  return k;
}

SearchStats classic_search(SearchSession& session, Position lo, Position hi) {
  const std::size_t start = session.probes();
  if (hi < lo || hi >= session.size()) target_absent("classic_search");
  while (true) {
    const Position mid = midpoint(lo, hi);
    const Outcome outcome = session.probe(mid);
    if (outcome == Outcome::Equal) return finish(session, start, mid);
    if (!narrow(outcome, mid, lo, hi)) target_absent("classic_search");
  }
}

SearchStats classic_search(SearchSession& session) {
  return classic_search(session, 0, session.size() - 1);
}

SearchStats bisection_search(SearchSession& session, const ProbDist& prediction) {
  if (prediction.size() != session.size()) {
    throw ContractViolation("bisection_search: prediction length differs from key count");
  }
  const std::size_t start = session.probes();
  Position lo = 0, hi = session.size() - 1;
  while (true) {
    const Position k = weighted_median(prediction, lo, hi);
    const Outcome outcome = session.probe(k);
    if (outcome == Outcome::Equal) return finish(session, start, k);
    if (!narrow(outcome, k, lo, hi)) target_absent("bisection_search");
  }
}

ProbDist convex_mixture(const ProbDist& prediction, const ConvexParams& params) {
  if (!(params.lambda >= 0.0 && params.lambda <= 1.0)) {
    throw ContractViolation("convex combination: lambda must lie in [0, 1]");
  }
  std::vector<double> mixed(prediction.size());
  kernels::mix_uniform(prediction.masses(), params.lambda, mixed);
  return ProbDist(std::move(mixed));
}

SearchStats convex_combination_search(SearchSession& session, const ProbDist& prediction,
                                      const ConvexParams& params) {
  return bisection_search(session, convex_mixture(prediction, params));
}

SearchStats doubling_point_search(SearchSession& session, Position guess) {
  const std::size_t n = session.size();
  if (guess >= n) throw ContractViolation("doubling_point_search: guess out of range");
  const std::size_t start = session.probes();

  const Outcome first = session.probe(guess);
  if (first == Outcome::Equal) return finish(session, start, guess);

  Position found;
  if (first == Outcome::Greater) {
    Position known = guess;  // target > keys[known]
    for (std::size_t offset = 1;; offset *= 2) {
      if (known == n - 1) target_absent("doubling_point_search");
      const Position q = offset >= n - 1 - guess ? n - 1 : guess + offset;
      const Outcome outcome = session.probe(q);
      if (outcome == Outcome::Equal) return finish(session, start, q);
      if (outcome == Outcome::Less) {
        if (q == known + 1) target_absent("doubling_point_search");
        found = classic_search(session, known + 1, q - 1).found;
        break;
      }
      known = q;
    }
  } else {
    Position known = guess;  // target < keys[known]
    for (std::size_t offset = 1;; offset *= 2) {
      if (known == 0) target_absent("doubling_point_search");
      const Position q = offset >= guess ? 0 : guess - offset;
      const Outcome outcome = session.probe(q);
      if (outcome == Outcome::Equal) return finish(session, start, q);
      if (outcome == Outcome::Greater) {
        if (q + 1 == known) target_absent("doubling_point_search");
        found = classic_search(session, q + 1, known - 1).found;
        break;
      }
      known = q;
    }
  }
  return finish(session, start, found);
}

SearchStats learned_search(SearchSession& session, const ProbDist& prediction,
                           const LearnedParams& params) {
  if (prediction.size() != session.size()) {
    throw ContractViolation("learned_search: prediction length differs from key count");
  }
  if (params.growth_factor < 1) throw ContractViolation("learned_search: growth factor must be >= 1");
  const std::size_t start = session.probes();
  Position lo = 0, hi = session.size() - 1;
  std::size_t bisection_probes = 0;

  for (std::size_t iteration = 0;; ++iteration) {
    const std::uint64_t budget = phase_budget(iteration);
    for (std::uint64_t step = 0; step < budget; ++step) {
      const Position k = weighted_median(prediction, lo, hi);
      const Outcome outcome = session.probe(k);
      ++bisection_probes;
      if (outcome == Outcome::Equal) {
        SearchStats stats = finish(session, start, k);
        stats.iterations = iteration + 1;
        stats.phase_probes = {bisection_probes, stats.probes - bisection_probes};
        return stats;
      }
      if (!narrow(outcome, k, lo, hi)) target_absent("learned_search");
    }

    const std::size_t reach = endpoint_reach(params.growth_factor, iteration, hi - lo);
    const EndpointResult result = endpoint_phase(session, lo, hi, reach, "learned_search");
    if (result.found) {
      SearchStats stats = finish(session, start, result.position);
      stats.iterations = iteration + 1;
      stats.phase_probes = {bisection_probes, stats.probes - bisection_probes};
      return stats;
    }
  }
}

SearchStats portfolio_search(SearchSession& session, std::span<const ProbDist> predictions,
                             const LearnedParams& params) {
  if (predictions.empty()) throw ContractViolation("portfolio_search: needs at least one prediction");
  for (const auto& p : predictions) {
    if (p.size() != session.size()) {
      throw ContractViolation("portfolio_search: prediction length differs from key count");
    }
  }
  if (params.growth_factor < 1) throw ContractViolation("portfolio_search: growth factor must be >= 1");

  const std::size_t start = session.probes();
  Position lo = 0, hi = session.size() - 1;
  std::size_t bisection_probes = 0;
  std::vector<Position> points;
  points.reserve(predictions.size() + 2);

  auto done = [&](Position found, std::size_t iteration) {
    SearchStats stats = finish(session, start, found);
    stats.iterations = iteration + 1;
    stats.phase_probes = {bisection_probes, stats.probes - bisection_probes};
    return stats;
  };

  for (std::size_t iteration = 0;; ++iteration) {
    const std::uint64_t budget = phase_budget(iteration);
    for (std::uint64_t step = 0; step < budget; ++step) {
      points.assign({lo, hi});
      bool any_mass = false;
      for (const auto& p : predictions) {
        if (p.range_mass(lo, hi) > 0.0) {
          points.push_back(weighted_median(p, lo, hi));
          any_mass = true;
        }
      }
      if (!any_mass) points.push_back(midpoint(lo, hi));
      std::sort(points.begin(), points.end());
      points.erase(std::unique(points.begin(), points.end()), points.end());

      // Binary search over the probe points for the gap holding the target.
      std::ptrdiff_t a = 0, b = static_cast<std::ptrdiff_t>(points.size()) - 1;
      while (a <= b) {
        const std::ptrdiff_t mid = a + (b - a) / 2;
        const Position k = points[static_cast<std::size_t>(mid)];
        const Outcome outcome = session.probe(k);
        ++bisection_probes;
        if (outcome == Outcome::Equal) return done(k, iteration);
        if (outcome == Outcome::Less) {
          b = mid - 1;
        } else {
          a = mid + 1;
        }
      }
      if (b < 0 || a >= static_cast<std::ptrdiff_t>(points.size())) target_absent("portfolio_search");
      const Position gap_lo = points[static_cast<std::size_t>(b)] + 1;
      const Position gap_hi = points[static_cast<std::size_t>(a)];
      if (gap_hi <= gap_lo) target_absent("portfolio_search");
      lo = gap_lo;
      hi = gap_hi - 1;
    }

    const std::size_t reach = endpoint_reach(params.growth_factor, iteration, hi - lo);
    const EndpointResult result = endpoint_phase(session, lo, hi, reach, "portfolio_search");
    if (result.found) return done(result.position, iteration);
  }
}

std::string_view strategy_name(StrategyKind kind) noexcept {
  switch (kind) {
    case StrategyKind::Classic: return "classic";
    case StrategyKind::Bisection: return "bisection";
    case StrategyKind::Convex: return "convex";
    case StrategyKind::Learned: return "learned";
    case StrategyKind::Doubling: return "doubling";
    case StrategyKind::Portfolio: return "portfolio";
  }
  return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
  for (auto kind : {StrategyKind::Classic, StrategyKind::Bisection, StrategyKind::Convex,
                    StrategyKind::Learned, StrategyKind::Doubling, StrategyKind::Portfolio}) {
    if (strategy_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string strategy_params(const StrategyConfig& config, std::size_t prediction_count) {
  switch (config.kind) {
    case StrategyKind::Classic:
    case StrategyKind::Bisection: return "";
    case StrategyKind::Convex: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "lambda=%g", config.convex.lambda);
      return buf;
    }
    case StrategyKind::Learned: return "c=" + std::to_string(config.learned.growth_factor);
    case StrategyKind::Doubling: return "guess=median";
    case StrategyKind::Portfolio:
      return "c=" + std::to_string(config.learned.growth_factor) +
             ";m=" + std::to_string(prediction_count);
  }
  return "";
}

SearchFn bind_strategy(const StrategyConfig& config, std::span<const ProbDist> predictions) {
  if (config.kind != StrategyKind::Classic && predictions.empty()) {
    throw ContractViolation("bind_strategy: strategy needs a prediction");
  }
  switch (config.kind) {
    case StrategyKind::Classic:
      return [](SearchSession& s) { return classic_search(s); };
    case StrategyKind::Bisection: {
      auto pred = std::make_shared<const ProbDist>(predictions.front());
      return [pred](SearchSession& s) { return bisection_search(s, *pred); };
    }
    case StrategyKind::Convex: {
      auto mixed = std::make_shared<const ProbDist>(convex_mixture(predictions.front(), config.convex));
      return [mixed](SearchSession& s) { return bisection_search(s, *mixed); };
    }
    case StrategyKind::Learned: {
      auto pred = std::make_shared<const ProbDist>(predictions.front());
      const LearnedParams params = config.learned;
      return [pred, params](SearchSession& s) { return learned_search(s, *pred, params); };
    }
    case StrategyKind::Doubling: {
      const ProbDist& pred = predictions.front();
      const Position guess = weighted_median(pred, 0, pred.size() - 1);
      return [guess](SearchSession& s) { return doubling_point_search(s, guess); };
    }
    case StrategyKind::Portfolio: {
      auto preds = std::make_shared<const std::vector<ProbDist>>(predictions.begin(), predictions.end());
      const LearnedParams params = config.learned;
      return [preds, params](SearchSession& s) { return portfolio_search(s, *preds, params); };
    }
  }
  throw ContractViolation("bind_strategy: unknown strategy");
}

}  // namespace lbst
