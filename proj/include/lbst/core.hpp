#pragma once

// Domain types shared by every search strategy: the sorted key array,
// probability vectors over key positions, and the probe-counting session
// through which all comparisons against the hidden target flow.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lbst {

using Position = std::size_t;

/// Absolute tolerance on the total mass of a distribution.
inline constexpr double kMassTolerance = 1e-9;

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The probe outcomes prove the target is not in the key array.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (edge lists, distribution files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyArray {
 public:
  explicit KeyArray(std::vector<std::int64_t> keys);

  /// Keys lo, lo+1, ..., hi.
  static KeyArray integer_range(std::int64_t lo, std::int64_t hi);

  std::size_t size() const noexcept { return keys_.size(); }
  std::int64_t operator[](Position i) const noexcept { return keys_[i]; }
  std::span<const std::int64_t> keys() const noexcept { return keys_; }

  /// Position of an exact key, if present.
  std::optional<Position> find(std::int64_t key) const noexcept;
  /// Position of the largest key <= value, if any.
  std::optional<Position> predecessor(std::int64_t value) const noexcept;

 private:
  std::vector<std::int64_t> keys_;
};

/// Probability vector over key positions with cached prefix sums.
class ProbDist {
 public:
  /// Accepts masses whose total is within kMassTolerance of 1 and
  /// renormalizes them; anything else is rejected.
  explicit ProbDist(std::vector<double> mass);

  /// Normalizes arbitrary non-negative weights with a positive total.
  static ProbDist from_weights(std::vector<double> weights);
  static ProbDist from_counts(std::span<const std::uint64_t> counts);
  static ProbDist uniform(std::size_t n);
  /// Uniform over positions [lo, hi], zero elsewhere.
  static ProbDist uniform_over(std::size_t n, Position lo, Position hi);
  static ProbDist point_mass(std::size_t n, Position at);

  std::size_t size() const noexcept { return mass_.size(); }
  double mass(Position i) const noexcept { return mass_[i]; }
  std::span<const double> masses() const noexcept { return mass_; }
  std::span<const double> cdf() const noexcept { return cdf_; }

  /// Sum of masses at positions strictly before i.
  double prefix(Position i) const noexcept { return i == 0 ? 0.0 : cdf_[i - 1]; }
  /// Total mass on [lo, hi]; zero for an empty range.
  double range_mass(Position lo, Position hi) const noexcept {
    return hi < lo ? 0.0 : cdf_[hi] - prefix(lo);
  }

  friend bool operator==(const ProbDist& a, const ProbDist& b) { return a.mass_ == b.mass_; }

 private:
  struct Normalized {};
  ProbDist(Normalized, std::vector<double> mass);

  std::vector<double> mass_;
  std::vector<double> cdf_;
};

enum class Outcome { Less, Equal, Greater };

struct ProbeRecord {
  Position position;
  Outcome outcome;

  friend bool operator==(const ProbeRecord&, const ProbeRecord&) = default;
};

/// Binds a hidden target to a key array. Every comparison a strategy makes
/// must go through probe(), which counts and logs it.
class SearchSession {
 public:
  SearchSession(const KeyArray& keys, Position target);

  /// Three-way comparison of the target against keys[i]:
  /// Less iff target < keys[i].
  Outcome probe(Position i);

  const KeyArray& keys() const noexcept { return *keys_; }
  std::size_t size() const noexcept { return keys_->size(); }
  std::size_t probes() const noexcept { return log_.size(); }
  std::span<const ProbeRecord> log() const noexcept { return log_; }

 private:
  const KeyArray* keys_;
  std::int64_t target_key_;
  std::vector<ProbeRecord> log_;
};

struct SearchStats {
  Position found = 0;
  std::size_t probes = 0;
  std::size_t iterations = 0;
  /// (bisection-phase probes, endpoint-phase probes); zero for
  /// single-phase strategies.
  std::pair<std::size_t, std::size_t> phase_probes{0, 0};
};

struct Instance {
  KeyArray keys;
  ProbDist truth;
  std::vector<ProbDist> predictions;
  /// Explicit target positions for trace-driven runs; empty otherwise.
  std::vector<Position> queries;

  Instance(KeyArray keys, ProbDist truth, std::vector<ProbDist> predictions,
           std::vector<Position> queries = {});

  std::size_t size() const noexcept { return keys.size(); }
  const ProbDist& prediction() const noexcept { return predictions.front(); }
};

}  // namespace lbst
