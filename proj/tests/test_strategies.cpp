#include <doctest.h>

#include <cmath>
#include <vector>

#include "lbst/datagen.hpp"
#include "lbst/evaluation.hpp"
#include "lbst/metrics.hpp"
#include "lbst/strategies.hpp"
#include "oracles.hpp"

using namespace lbst;

namespace {

KeyArray positions(std::size_t n) { return KeyArray::integer_range(0, static_cast<std::int64_t>(n) - 1); }

std::vector<Position> logged_positions(const SearchSession& s) {
  std::vector<Position> out;
  for (const auto& r : s.log()) out.push_back(r.position);
  return out;
}

template <typename Fn>
std::vector<Position> trace(const KeyArray& keys, Position target, Fn&& fn) {
  SearchSession s(keys, target);
  const SearchStats stats = fn(s);
  REQUIRE(stats.found == target);
  REQUIRE(stats.probes == s.probes());
  return logged_positions(s);
}

double floor_log2(std::size_t n) { return std::floor(std::log2(static_cast<double>(n))); }

}  // namespace

TEST_CASE("classic search") {
  const auto one = positions(1);
  SearchSession s1(one, 0);
  CHECK(classic_search(s1).probes == 1);

  const auto seven = positions(7);
  SearchSession s3(seven, 3);
  CHECK(classic_search(s3).probes == 1);
  for (Position t = 0; t < 7; ++t) {
    SearchSession s(seven, t);
    CHECK(classic_search(s).probes <= 3);
  }

  const auto big = positions(1023);
  std::size_t worst = 0;
  for (Position t = 0; t < 1023; ++t) {
    SearchSession s(big, t);
    worst = std::max(worst, classic_search(s).probes);
  }
  CHECK(worst == 10);

  SearchSession outside(seven, 5);
  CHECK_THROWS_AS(classic_search(outside, 0, 3), NotFound);
}

TEST_CASE("weighted median examples") {
  CHECK(weighted_median(ProbDist::point_mass(10, 6), 2, 9) == 6);
  CHECK(weighted_median(ProbDist::uniform(4), 0, 3) == 1);
  CHECK(weighted_median(ProbDist::point_mass(10, 0), 2, 6) == 4);
  CHECK(weighted_median(ProbDist::uniform(6), 0, 5) == 2);
  CHECK(weighted_median(ProbDist::uniform(5), 3, 3) == 3);
  CHECK_THROWS_AS(weighted_median(ProbDist::uniform(5), 3, 2), ContractViolation);
  CHECK_THROWS_AS(weighted_median(ProbDist::uniform(5), 0, 5), ContractViolation);
}

TEST_CASE("weighted median agrees with direct enumeration") {
  CounterRng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 40);
    const auto p = random_distribution(rng, n);
    Position lo = static_cast<Position>(rng() % n), hi = static_cast<Position>(rng() % n);
    if (lo > hi) std::swap(lo, hi);
    const Position k = weighted_median(p, lo, hi);
    CAPTURE(n);
    CAPTURE(lo);
    CAPTURE(hi);
    // Smallest valid k, up to rounding at exact ties.
    CHECK(k >= oracle::weighted_median(p, lo, hi, 1e-9));
    CHECK(k <= std::min(hi, oracle::weighted_median(p, lo, hi, -1e-9)));
  }
}

TEST_CASE("bisection search") {
  const auto keys = positions(50);
  for (Position t : {0u, 17u, 49u}) {
    SearchSession s(keys, t);
    CHECK(bisection_search(s, ProbDist::point_mass(50, t)).probes == 1);
  }

  SUBCASE("uniform prediction is a weighted-median binary search") {
    for (std::size_t n = 1; n <= 64; ++n) {
      const auto k = positions(n);
      const auto u = ProbDist::uniform(n);
      for (Position t = 0; t < n; ++t) {
        const auto log = trace(k, t, [&](SearchSession& s) { return bisection_search(s, u); });
        // Replay with the enumeration oracle.
        std::vector<Position> expected;
        Position lo = 0, hi = n - 1;
        while (true) {
          const Position m = oracle::weighted_median(u, lo, hi, 1e-9);
          expected.push_back(m);
          if (m == t) break;
          if (t < m) hi = m - 1; else lo = m + 1;
        }
        CHECK(log == expected);
        CHECK(static_cast<double>(log.size()) <= floor_log2(n) + 2);
      }
    }
  }

  SUBCASE("exact expected cost on a dyadic distribution") {
    const ProbDist p({0.5, 0.25, 0.125, 0.125});
    const Instance inst(positions(4), p, {p});
    const auto report = expected_cost([&](SearchSession& s) { return bisection_search(s, p); }, inst);
    // Targets cost 1, 2, 3, 4 probes respectively.
    CHECK(report.expected_cost == doctest::Approx(1.875));
    CHECK(report.expected_cost <= entropy(p) + 2.0);
  }
}

TEST_CASE("bisection with exact prediction stays within H + 2") {
  CounterRng rng(123);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 300);
    const auto p = random_distribution(rng, n);
    const Instance inst(positions(n), p, {p});
    const auto report = expected_cost([&](SearchSession& s) { return bisection_search(s, p); }, inst);
    CHECK(report.expected_cost <= report.entropy_bits + 2.0 + 1e-9);
  }
}

TEST_CASE("convex combination") {
  const std::size_t n = 40;
  const auto keys = positions(n);
  CounterRng rng(8);
  const auto pred = random_distribution(rng, n, RandomFamily::Sparse);
  const auto uniform = ProbDist::uniform(n);
  for (Position t = 0; t < n; ++t) {
    const auto bis = trace(keys, t, [&](SearchSession& s) { return bisection_search(s, pred); });
    const auto one = trace(keys, t, [&](SearchSession& s) {
      return convex_combination_search(s, pred, ConvexParams{1.0});
    });
    CHECK(one == bis);
    const auto uni = trace(keys, t, [&](SearchSession& s) { return bisection_search(s, uniform); });
    const auto zero = trace(keys, t, [&](SearchSession& s) {
      return convex_combination_search(s, pred, ConvexParams{0.0});
    });
    CHECK(zero == uni);
  }

  const auto mixed = convex_mixture(ProbDist::point_mass(4, 0), ConvexParams{0.5});
  CHECK(mixed.mass(0) == doctest::Approx(0.625));
  CHECK(mixed.mass(3) == doctest::Approx(0.125));
  const auto small = positions(4);
  const auto log = trace(small, 2, [&](SearchSession& s) {
    return convex_combination_search(s, ProbDist::point_mass(4, 0), ConvexParams{0.5});
  });
  CHECK(log.front() == 0);
  CHECK_THROWS_AS(convex_mixture(pred, ConvexParams{1.5}), ContractViolation);
}

TEST_CASE("doubling search from a point") {
  const auto keys = positions(100);
  SearchSession exact(keys, 40);
  CHECK(doubling_point_search(exact, 40).probes == 1);
  SearchSession right(keys, 41);
  CHECK(doubling_point_search(right, 40).probes <= 3);
  SearchSession left(keys, 39);
  CHECK(doubling_point_search(left, 40).probes <= 3);
  SearchSession bad(keys, 3);
  CHECK_THROWS_AS(doubling_point_search(bad, 100), ContractViolation);
}

TEST_CASE("doubling search probe bound, exhaustive for n <= 256") {
  for (std::size_t n : {1u, 2u, 3u, 17u, 64u, 255u, 256u}) {
    const auto keys = positions(n);
    for (Position guess = 0; guess < n; ++guess) {
      for (Position t = 0; t < n; ++t) {
        SearchSession s(keys, t);
        const auto stats = doubling_point_search(s, guess);
        const double dist = std::max<double>(guess > t ? guess - t : t - guess, 2.0);
        REQUIRE(stats.found == t);
        REQUIRE(static_cast<double>(stats.probes) <= 2.0 * std::log2(dist) + 4.0);
        REQUIRE(oracle::probe_log_consistent(s.log(), keys, t));
      }
    }
  }
}

TEST_CASE("learned search traces") {
  const auto keys = positions(16);
  const auto pred = ProbDist::point_mass(16, 0);
  const LearnedParams c1{1};

  SearchSession hit(keys, 0);
  const auto first = learned_search(hit, pred, c1);
  CHECK(first.probes == 1);
  CHECK(first.iterations == 1);

  // Iteration 0: probe the median (0), then endpoints 1+2 and 15-2.
  CHECK(trace(keys, 15, [&](SearchSession& s) { return learned_search(s, pred, c1); }) ==
        std::vector<Position>{0, 3, 13, 14, 15});
  CHECK(trace(keys, 2, [&](SearchSession& s) { return learned_search(s, pred, c1); }) ==
        std::vector<Position>{0, 3, 1, 2});
  // Range [4, 12] has no predicted mass, so iteration 1 bisects at the midpoint.
  SearchSession mid(keys, 8);
  const auto stats = learned_search(mid, pred, c1);
  CHECK(logged_positions(mid) == std::vector<Position>{0, 3, 13, 8});
  CHECK(stats.iterations == 2);
  CHECK(stats.phase_probes == std::pair<std::size_t, std::size_t>{2, 2});

  SearchSession wrong(keys, 1);
  CHECK_THROWS_AS(learned_search(wrong, ProbDist::uniform(15), c1), ContractViolation);
  CHECK_THROWS_AS(learned_search(wrong, pred, LearnedParams{0}), ContractViolation);
}

TEST_CASE("learned search point-mass prediction costs one probe everywhere") {
  const auto keys = positions(300);
  for (Position t = 0; t < 300; t += 7) {
    SearchSession s(keys, t);
    CHECK(learned_search(s, ProbDist::point_mass(300, t)).probes == 1);
  }
}

TEST_CASE("learned search with huge growth factor saturates the reach") {
  const auto keys = positions(5000);
  const auto pred = ProbDist::point_mass(5000, 0);
  for (Position t : {1u, 2500u, 4999u}) {
    SearchSession s(keys, t);
    const auto stats = learned_search(s, pred, LearnedParams{60});
    CHECK(stats.found == t);
    CHECK(oracle::probe_log_consistent(s.log(), keys, t));
  }
}

TEST_CASE("learned search bound on the two-atom and lower-bound instances") {
  const auto two = two_atom_instance(1u << 16);
  const auto report = audit_theorem1(two, 1);
  CHECK(report.expected_cost <= 20.0);
  CHECK(report.bound_value == doctest::Approx(20.0));

  for (std::size_t eta : {1u, 2u, 5u, 16u, 100u, 256u}) {
    const std::size_t n = 512;
    // Truth at position eta (just past the predicted block), as in the
    // construction with 1-based labels.
    const Position at = std::min(eta, n - 1);
    const Instance inst(positions(n), ProbDist::point_mass(n, at), {ProbDist::uniform_over(n, 0, eta - 1)});
    const auto r = audit_theorem1(inst, 1);
    CAPTURE(eta);
    CHECK(r.bound_satisfied);
    CHECK(r.expected_cost <= theorem1_bound({0.0, static_cast<double>(eta)}));
  }
}

TEST_CASE("portfolio search") {
  const auto keys = positions(64);
  const auto target_mass = ProbDist::point_mass(64, 30);
  SearchSession s(keys, 30);
  const std::vector<ProbDist> one{target_mass};
  const auto stats = portfolio_search(s, one);
  CHECK(stats.probes <= 2);
  CHECK(stats.probes == 1);

  SUBCASE("identical predictions collapse to one median per step") {
    CounterRng rng(3);
    const auto p = random_distribution(rng, 64, RandomFamily::Dirichlet);
    const std::vector<ProbDist> same(4, p);
    for (Position t = 0; t < 64; ++t) {
      SearchSession ss(keys, t);
      const auto st = portfolio_search(ss, same);
      REQUIRE(st.found == t);
      // Every completed or partial step probes at most 2 of {lo, median, hi}.
      const std::size_t steps = (std::size_t{1} << st.iterations) - 1;
      CHECK(st.phase_probes.first <= 2 * steps);
      CHECK(st.probes == st.phase_probes.first + st.phase_probes.second);
    }
  }

  SUBCASE("one exact prediction among adversaries") {
    CounterRng rng(17);
    for (std::size_t m : {2u, 4u, 8u}) {
      const std::size_t n = 200;
      const auto p = random_distribution(rng, n);
      std::vector<ProbDist> preds;
      for (std::size_t k = 0; k + 1 < m; ++k) preds.push_back(ProbDist::point_mass(n, (k * 37) % n));
      preds.insert(preds.begin() + static_cast<std::ptrdiff_t>(m / 2), p);
      const Instance inst(positions(n), p, preds);
      const auto r = expected_cost([&](SearchSession& ss) { return portfolio_search(ss, preds); }, inst);
      const double bound = std::ceil(std::log2(m + 2.0)) * theorem1_bound({entropy(p), 0.0});
      CHECK(r.expected_cost <= bound);
    }
  }

  CHECK_THROWS_AS(portfolio_search(s, std::vector<ProbDist>{}), ContractViolation);
}

TEST_CASE("all strategies: range invariant, determinism, probe accounting") {
  CounterRng rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 150);
    const auto keys = positions(n);
    const auto truth = random_distribution(rng, n);
    const std::vector<ProbDist> preds{random_prediction(rng, truth), random_distribution(rng, n)};
    for (auto kind : {StrategyKind::Classic, StrategyKind::Bisection, StrategyKind::Convex,
                      StrategyKind::Learned, StrategyKind::Doubling, StrategyKind::Portfolio}) {
      for (unsigned c : {1u, 8u}) {
        const auto fn = bind_strategy({kind, LearnedParams{c}, ConvexParams{0.5}}, preds);
        for (Position t = 0; t < n; ++t) {
          SearchSession a(keys, t), b(keys, t);
          const auto sa = fn(a);
          const auto sb = fn(b);
          CAPTURE(strategy_name(kind));
          REQUIRE(sa.found == t);
          REQUIRE(sa.probes == a.probes());
          REQUIRE(sb.probes == sa.probes);
          REQUIRE(a.probes() == a.log().size());
          REQUIRE(std::equal(a.log().begin(), a.log().end(), b.log().begin(), b.log().end()));
          REQUIRE(oracle::probe_log_consistent(a.log(), keys, t));
          if (kind == StrategyKind::Learned || kind == StrategyKind::Portfolio) {
            REQUIRE(sa.probes == sa.phase_probes.first + sa.phase_probes.second);
          }
        }
      }
    }
  }
}

TEST_CASE("strategy names round-trip and params") {
  for (auto kind : {StrategyKind::Classic, StrategyKind::Bisection, StrategyKind::Convex,
                    StrategyKind::Learned, StrategyKind::Doubling, StrategyKind::Portfolio}) {
    CHECK(parse_strategy(strategy_name(kind)) == kind);
  }
  CHECK_FALSE(parse_strategy("median").has_value());
  CHECK(strategy_params({StrategyKind::Learned, LearnedParams{8}, {}}, 1) == "c=8");
  CHECK(strategy_params({StrategyKind::Convex, {}, ConvexParams{0.5}}, 1) == "lambda=0.5");
  CHECK(strategy_params({StrategyKind::Portfolio, LearnedParams{1}, {}}, 3) == "c=1;m=3");
  CHECK_THROWS_AS(bind_strategy({StrategyKind::Learned, {}, {}}, {}), ContractViolation);
}
