#include "lbst/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace lbst::kernels::avx2 {
namespace {

// (l0 + l1) + (l2 + l3)
inline double fold(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d pairs = _mm_hadd_pd(lo, hi);
  return _mm_cvtsd_f64(pairs) + _mm_cvtsd_f64(_mm_unpackhi_pd(pairs, pairs));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

double sum(const double* x, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = fold(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double l1_distance(const double* a, const double* b, std::size_t n) noexcept {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, abs_pd(d));
  }
  double total = fold(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

double min_value(const double* x, std::size_t n) noexcept {
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) best = _mm256_min_pd(best, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double result = lanes[0];
  for (int j = 1; j < 4; ++j) {
    if (lanes[j] < result) result = lanes[j];
  }
  for (; i < n; ++i) {
    if (x[i] < result) result = x[i];
  }
  return result;
}

void scale(double* x, std::size_t n, double factor) noexcept {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), f));
  for (; i < n; ++i) x[i] *= factor;
}

void mix_uniform(const double* a, std::size_t n, double lambda, double offset, double* out) noexcept {
  const __m256d l = _mm256_set1_pd(lambda);
  const __m256d o = _mm256_set1_pd(offset);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(l, _mm256_loadu_pd(a + i)), o));
  }
  for (; i < n; ++i) out[i] = lambda * a[i] + offset;
}

}  // namespace lbst::kernels::avx2
