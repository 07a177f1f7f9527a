#include "lbst/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lbst/kernels.hpp"

namespace lbst {

KeyArray::KeyArray(std::vector<std::int64_t> keys) : keys_(std::move(keys)) {
  if (keys_.empty()) throw ContractViolation("key array must not be empty");
  for (std::size_t i = 1; i < keys_.size(); ++i) {
    if (!(keys_[i - 1] < keys_[i])) {
      throw ContractViolation("keys must be strictly increasing (violated at position " +
                              std::to_string(i) + ")");
    }
  }
}

KeyArray KeyArray::integer_range(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw ContractViolation("empty key range");
  std::vector<std::int64_t> keys(static_cast<std::size_t>(hi - lo) + 1);
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = lo + static_cast<std::int64_t>(i);
  return KeyArray(std::move(keys));
}

std::optional<Position> KeyArray::find(std::int64_t key) const noexcept {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return std::nullopt;
  return static_cast<Position>(it - keys_.begin());
}

std::optional<Position> KeyArray::predecessor(std::int64_t value) const noexcept {
  auto it = std::upper_bound(keys_.begin(), keys_.end(), value);
  if (it == keys_.begin()) return std::nullopt;
  return static_cast<Position>(it - keys_.begin()) - 1;
}

namespace {

void check_masses(std::span<const double> mass) {
  if (mass.empty()) throw ContractViolation("distribution must have at least one position");
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (!std::isfinite(mass[i]) || mass[i] < 0.0) {
      throw ContractViolation("distribution mass at position " + std::to_string(i) +
                              " is negative or not finite");
    }
  }
}

}  // namespace

ProbDist::ProbDist(std::vector<double> mass) {
  check_masses(mass);
  const double total = kernels::sum(mass);
  if (std::fabs(total - 1.0) > kMassTolerance) {
    throw ContractViolation("distribution total mass " + std::to_string(total) +
                            " is not 1 within tolerance");
  }
  if (total != 1.0) kernels::scale(mass, 1.0 / total);
  *this = ProbDist(Normalized{}, std::move(mass));
}

ProbDist::ProbDist(Normalized, std::vector<double> mass) : mass_(std::move(mass)) {
  cdf_.resize(mass_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    running += mass_[i];
    cdf_[i] = running;
  }
}

ProbDist ProbDist::from_weights(std::vector<double> weights) {
  check_masses(weights);
  const double total = kernels::sum(weights);
  if (!(total > 0.0)) throw ContractViolation("weights must have positive total");
  kernels::scale(weights, 1.0 / total);
  return ProbDist(Normalized{}, std::move(weights));
}

ProbDist ProbDist::from_counts(std::span<const std::uint64_t> counts) {
  std::vector<double> weights(counts.begin(), counts.end());
  return from_weights(std::move(weights));
}

ProbDist ProbDist::uniform(std::size_t n) {
  if (n == 0) throw ContractViolation("distribution must have at least one position");
  return from_weights(std::vector<double>(n, 1.0));
}

ProbDist ProbDist::uniform_over(std::size_t n, Position lo, Position hi) {
  if (hi < lo || hi >= n) throw ContractViolation("uniform_over: invalid range");
  std::vector<double> weights(n, 0.0);
  std::fill(weights.begin() + static_cast<std::ptrdiff_t>(lo),
            weights.begin() + static_cast<std::ptrdiff_t>(hi) + 1, 1.0);
  return from_weights(std::move(weights));
}

ProbDist ProbDist::point_mass(std::size_t n, Position at) {
  if (at >= n) throw ContractViolation("point_mass: position out of range");
  std::vector<double> mass(n, 0.0);
  mass[at] = 1.0;
  return ProbDist(Normalized{}, std::move(mass));
}

SearchSession::SearchSession(const KeyArray& keys, Position target)
    : keys_(&keys), target_key_(0) {
  if (target >= keys.size()) throw ContractViolation("target position out of range");
  target_key_ = keys[target];
}

Outcome SearchSession::probe(Position i) {
  if (i >= keys_->size()) {
    throw ContractViolation("probe position " + std::to_string(i) + " out of range");
  }
  const std::int64_t key = (*keys_)[i];
  const Outcome outcome =
      target_key_ < key ? Outcome::Less : (target_key_ == key ? Outcome::Equal : Outcome::Greater);
  log_.push_back({i, outcome});
  return outcome;
}

Instance::Instance(KeyArray keys_in, ProbDist truth_in, std::vector<ProbDist> predictions_in,
                   std::vector<Position> queries_in)
    : keys(std::move(keys_in)),
      truth(std::move(truth_in)),
      predictions(std::move(predictions_in)),
      queries(std::move(queries_in)) {
  const std::size_t n = keys.size();
  if (truth.size() != n) throw ContractViolation("true distribution length differs from key count");
  if (predictions.empty()) throw ContractViolation("instance needs at least one prediction");
  for (const auto& p : predictions) {
    if (p.size() != n) throw ContractViolation("prediction length differs from key count");
  }
  for (Position q : queries) {
    if (q >= n) throw ContractViolation("query position out of range");
  }
}

}  // namespace lbst
