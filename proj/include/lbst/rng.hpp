#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace lbst {

/// Counter-based generator: the i-th output is a SplitMix64 finalizer
/// applied to key + i * golden-gamma. Streams are derived from a root seed
/// and a name/index path, so any stream can be regenerated in isolation and
/// in any order. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Child stream keyed by a name and an index.
  CounterRng substream(std::string_view name, std::uint64_t index = 0) const noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return at(counter_++); }
  /// Output at an absolute counter position; does not advance.
  result_type at(std::uint64_t counter) const noexcept;

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace lbst
