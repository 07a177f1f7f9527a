#pragma once

// Data-parallel inner loops used by the distribution and metric code.
//
// Every kernel has a scalar reference and, on x86-64, an AVX2 variant. The
// scalar reference reduces in the same four-lane order as the vector code,
// so both paths return bit-identical results and the active path can be
// switched at runtime without perturbing any downstream output.

#include <cstddef>
#include <span>
#include <string_view>

namespace lbst::kernels {

enum class SimdLevel { Scalar, Avx2 };

std::string_view level_name(SimdLevel level) noexcept;

/// Best level supported by this binary and the running CPU.
SimdLevel detected_level() noexcept;
/// Level currently used by the dispatching entry points below.
SimdLevel active_level() noexcept;
/// Selects a level; requests above detected_level() fall back to it.
/// Returns the level actually selected.
SimdLevel set_level(SimdLevel level) noexcept;

double sum(std::span<const double> x) noexcept;
/// Sum of |a[i] - b[i]|. Spans must have equal length.
double l1_distance(std::span<const double> a, std::span<const double> b) noexcept;
double min_value(std::span<const double> x) noexcept;
void scale(std::span<double> x, double factor) noexcept;
/// out[i] = lambda * a[i] + (1 - lambda) / n, the mixture with the uniform
/// distribution over n = a.size() positions.
void mix_uniform(std::span<const double> a, double lambda, std::span<double> out) noexcept;

namespace scalar {
double sum(const double* x, std::size_t n) noexcept;
double l1_distance(const double* a, const double* b, std::size_t n) noexcept;
double min_value(const double* x, std::size_t n) noexcept;
void scale(double* x, std::size_t n, double factor) noexcept;
void mix_uniform(const double* a, std::size_t n, double lambda, double offset, double* out) noexcept;
}  // namespace scalar

#ifdef LBST_HAVE_AVX2
namespace avx2 {
double sum(const double* x, std::size_t n) noexcept;
double l1_distance(const double* a, const double* b, std::size_t n) noexcept;
double min_value(const double* x, std::size_t n) noexcept;
void scale(double* x, std::size_t n, double factor) noexcept;
void mix_uniform(const double* a, std::size_t n, double lambda, double offset, double* out) noexcept;
}  // namespace avx2
#endif

}  // namespace lbst::kernels
