#include "lbst/kernels.hpp"

#include <cmath>
#include <limits>

namespace lbst::kernels::scalar {

// Reductions keep four independent lane accumulators and fold them as
// (l0 + l1) + (l2 + l3) before the tail, matching the AVX2 code exactly.

double sum(const double* x, std::size_t n) noexcept {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) lane[j] += x[i + j];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += x[i];
  return total;
}

double l1_distance(const double* a, const double* b, std::size_t n) noexcept {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int j = 0; j < 4; ++j) lane[j] += std::fabs(a[i + j] - b[i + j]);
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

double min_value(const double* x, std::size_t n) noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < best) best = x[i];
  }
  return best;
}

void scale(double* x, std::size_t n, double factor) noexcept {
  for (std::size_t i = 0; i < n; ++i) x[i] *= factor;
}

void mix_uniform(const double* a, std::size_t n, double lambda, double offset, double* out) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = lambda * a[i] + offset;
}

}  // namespace lbst::kernels::scalar
