#include <doctest.h>

#include <cmath>

#include "lbst/datagen.hpp"
#include "lbst/metrics.hpp"

using namespace lbst;

TEST_CASE("entropy") {
  CHECK(entropy(ProbDist::uniform(4)) == doctest::Approx(2.0));
  CHECK(entropy(ProbDist::point_mass(9, 3)) == 0.0);
  CHECK(entropy(ProbDist({0.5, 0.0, 0.5, 0.0})) == doctest::Approx(1.0));
  CHECK(entropy(ProbDist({0.5, 0.25, 0.125, 0.125})) == doctest::Approx(1.75));
}

TEST_CASE("entropy stays within [0, log2 n]") {
  CounterRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + i % 97;
    const auto p = random_distribution(rng, n);
    const double h = entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= std::log2(static_cast<double>(n)) + 1e-9);
  }
}

TEST_CASE("emd examples") {
  const auto p = ProbDist::uniform(7);
  CHECK(emd(p, p) == 0.0);
  CHECK(emd(ProbDist::point_mass(12, 0), ProbDist::point_mass(12, 7)) == doctest::Approx(7.0));

  std::vector<double> base(10, 0.1);
  auto near = base;
  near[0] -= 0.1;
  near[1] += 0.1;
  auto far = base;
  far[0] -= 0.1;
  far[9] += 0.1;
  const ProbDist b(base), qn(near), qf(far);
  CHECK(emd(b, qn) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(emd(b, qf) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(emd_bruteforce(b, qn) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(emd_bruteforce(b, qf) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(emd_bruteforce(ProbDist::point_mass(6, 0), ProbDist::point_mass(6, 5)) == 5.0);
  CHECK(emd_bruteforce(p, p) == 0.0);

  CHECK_THROWS_AS(emd(ProbDist::uniform(3), ProbDist::uniform(4)), ContractViolation);
  CHECK_THROWS_AS(emd_bruteforce(ProbDist::uniform(3), ProbDist::uniform(4)), ContractViolation);
}

TEST_CASE("closed-form emd matches the transport sweep on random pairs") {
  CounterRng rng(2024);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 64);
    const auto p = random_distribution(rng, n);
    const auto q = random_distribution(rng, n);
    CHECK(std::fabs(emd(p, q) - emd_bruteforce(p, q)) <= 1e-9);
  }
}

TEST_CASE("emd metric axioms on random triples") {
  CounterRng rng(99);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 50);
    const auto p = random_distribution(rng, n);
    const auto q = random_distribution(rng, n);
    const auto r = random_distribution(rng, n);
    CHECK(emd(p, p) == 0.0);
    CHECK(emd(p, q) == emd(q, p));
    CHECK(emd(p, r) <= emd(p, q) + emd(q, r) + 1e-12);
    CHECK(emd(p, q) >= 0.0);
  }
}

TEST_CASE("bound formula") {
  CHECK(theorem1_bound({0.0, 0.0}) == 16.0);
  CHECK(theorem1_bound({1.0, 0.0}) == 20.0);
  CHECK(theorem1_bound({0.0, 4.0}) == 40.0);
  // log2(0.25) + 2 = 0 is clamped to 1.
  CHECK(theorem1_bound({0.0, 0.25}) == 16.0);
  CHECK_THROWS_AS(theorem1_bound({-1.0, 0.0}), ContractViolation);
  CHECK_THROWS_AS(theorem1_bound({0.0, INFINITY}), ContractViolation);
}

TEST_CASE("bound is monotone in both arguments") {
  double prev_h = 0.0;
  for (double h = 0.0; h <= 12.0; h += 0.25) {
    const double b = theorem1_bound({h, 3.0});
    CHECK(b >= prev_h);
    prev_h = b;
  }
  double prev_e = 0.0;
  for (double e = 0.0; e <= 5000.0; e = e * 1.7 + 0.01) {
    const double b = theorem1_bound({2.0, e});
    CHECK(b >= prev_e);
    prev_e = b;
  }
}
