#include "lbst/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

namespace lbst::kernels {
namespace {

struct Table {
  double (*sum)(const double*, std::size_t) noexcept;
  double (*l1_distance)(const double*, const double*, std::size_t) noexcept;
  double (*min_value)(const double*, std::size_t) noexcept;
  void (*scale)(double*, std::size_t, double) noexcept;
  void (*mix_uniform)(const double*, std::size_t, double, double, double*) noexcept;
};

constexpr Table kScalar{scalar::sum, scalar::l1_distance, scalar::min_value, scalar::scale,
                        scalar::mix_uniform};
#ifdef LBST_HAVE_AVX2
constexpr Table kAvx2{avx2::sum, avx2::l1_distance, avx2::min_value, avx2::scale,
                      avx2::mix_uniform};
#endif

const Table& table_for(SimdLevel level) noexcept {
#ifdef LBST_HAVE_AVX2
  if (level == SimdLevel::Avx2) return kAvx2;
#endif
  (void)level;
  return kScalar;
}

SimdLevel probe_cpu() noexcept {
#if defined(LBST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return SimdLevel::Avx2;
#endif
  return SimdLevel::Scalar;
}

// LBST_SIMD=scalar forces the reference path for the whole process.
SimdLevel initial_level() noexcept {
  SimdLevel level = probe_cpu();
  if (const char* env = std::getenv("LBST_SIMD")) {
    if (std::string_view(env) == "scalar") level = SimdLevel::Scalar;
  }
  return level;
}

std::atomic<const Table*>& active_table() noexcept {
  static std::atomic<const Table*> table{&table_for(initial_level())};
  return table;
}

const Table& current() noexcept { return *active_table().load(std::memory_order_relaxed); }

}  // namespace

std::string_view level_name(SimdLevel level) noexcept {
  switch (level) {
    case SimdLevel::Scalar: return "scalar";
    case SimdLevel::Avx2: return "avx2";
  }
  return "unknown";
}

SimdLevel detected_level() noexcept {
  static const SimdLevel level = probe_cpu();
  return level;
}

SimdLevel active_level() noexcept {
#ifdef LBST_HAVE_AVX2
  if (&current() == &kAvx2) return SimdLevel::Avx2;
#endif
  return SimdLevel::Scalar;
}

SimdLevel set_level(SimdLevel level) noexcept {
  if (level == SimdLevel::Avx2 && detected_level() != SimdLevel::Avx2) level = SimdLevel::Scalar;
  active_table().store(&table_for(level), std::memory_order_relaxed);
  return level;
}

double sum(std::span<const double> x) noexcept { return current().sum(x.data(), x.size()); }

double l1_distance(std::span<const double> a, std::span<const double> b) noexcept {
  assert(a.size() == b.size());
  return current().l1_distance(a.data(), b.data(), a.size());
}

double min_value(std::span<const double> x) noexcept {
  return current().min_value(x.data(), x.size());
}

void scale(std::span<double> x, double factor) noexcept {
  current().scale(x.data(), x.size(), factor);
}

void mix_uniform(std::span<const double> a, double lambda, std::span<double> out) noexcept {
  assert(a.size() == out.size());
  const double offset = a.empty() ? 0.0 : (1.0 - lambda) / static_cast<double>(a.size());
  current().mix_uniform(a.data(), a.size(), lambda, offset, out.data());
}

}  // namespace lbst::kernels
