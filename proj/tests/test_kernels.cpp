#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "lbst/kernels.hpp"

using namespace lbst;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen) * u(gen);
  return v;
}

}  // namespace

TEST_CASE("scalar reference kernels") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(kernels::scalar::sum(x.data(), x.size()) == 15.0);
  const std::vector<double> y{0.0, 4.0, 3.0, 1.0, 7.0};
  CHECK(kernels::scalar::l1_distance(x.data(), y.data(), x.size()) == 8.0);
  CHECK(kernels::scalar::min_value(y.data(), y.size()) == 0.0);
  CHECK(kernels::scalar::sum(x.data(), 0) == 0.0);

  std::vector<double> out(4);
  const std::vector<double> point{1.0, 0.0, 0.0, 0.0};
  kernels::scalar::mix_uniform(point.data(), 4, 0.5, 0.125, out.data());
  CHECK(out == std::vector<double>{0.625, 0.125, 0.125, 0.125});
}

TEST_CASE("dispatch level can be forced to scalar and restored") {
  const auto detected = kernels::detected_level();
  CHECK(kernels::set_level(kernels::SimdLevel::Scalar) == kernels::SimdLevel::Scalar);
  CHECK(kernels::active_level() == kernels::SimdLevel::Scalar);
  CHECK(kernels::set_level(kernels::SimdLevel::Avx2) == detected);
  CHECK(kernels::active_level() == detected);
  CHECK(kernels::level_name(kernels::SimdLevel::Avx2) == "avx2");
}

#ifdef LBST_HAVE_AVX2
TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (kernels::detected_level() != kernels::SimdLevel::Avx2) {
    MESSAGE("CPU lacks AVX2; skipping vector equivalence");
    return;
  }
  std::mt19937_64 gen(7);
  // Lengths straddle the 4-wide blocks and the tail handling.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 1000u, 200001u}) {
    CAPTURE(n);
    const auto a = random_vector(gen, n);
    const auto b = random_vector(gen, n);
    CHECK(same_bits(kernels::scalar::sum(a.data(), n), kernels::avx2::sum(a.data(), n)));
    CHECK(same_bits(kernels::scalar::l1_distance(a.data(), b.data(), n),
                    kernels::avx2::l1_distance(a.data(), b.data(), n)));
    CHECK(same_bits(kernels::scalar::min_value(a.data(), n), kernels::avx2::min_value(a.data(), n)));

    auto s1 = a, s2 = a;
    kernels::scalar::scale(s1.data(), n, 0.37);
    kernels::avx2::scale(s2.data(), n, 0.37);
    CHECK(std::memcmp(s1.data(), s2.data(), n * sizeof(double)) == 0);

    std::vector<double> m1(n), m2(n);
    const double offset = n ? 0.3 / static_cast<double>(n) : 0.0;
    kernels::scalar::mix_uniform(a.data(), n, 0.7, offset, m1.data());
    kernels::avx2::mix_uniform(a.data(), n, 0.7, offset, m2.data());
    CHECK(std::memcmp(m1.data(), m2.data(), n * sizeof(double)) == 0);
  }
}

TEST_CASE("avx2 handles negative differences and unaligned views") {
  if (kernels::detected_level() != kernels::SimdLevel::Avx2) return;
  std::vector<double> a{-1.0, 2.0, -3.0, 4.0, -5.0, 6.0, -7.0, 8.0, 9.0};
  std::vector<double> b(a.size(), 0.5);
  for (std::size_t off = 0; off < 3; ++off) {
    const std::size_t n = a.size() - off;
    CHECK(same_bits(kernels::scalar::l1_distance(a.data() + off, b.data(), n),
                    kernels::avx2::l1_distance(a.data() + off, b.data(), n)));
    CHECK(kernels::avx2::min_value(a.data() + off, n) == kernels::scalar::min_value(a.data() + off, n));
  }
}
#endif
