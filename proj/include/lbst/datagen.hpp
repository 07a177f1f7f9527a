#pragma once

// Instance generators: the shifted-Gaussian synthetic workload, the
// adversarial families used by the bound checks, and ingestion of temporal
// edge lists ("u v t" per line, SNAP sx-*-a2q format).

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lbst/core.hpp"
#include "lbst/rng.hpp"

namespace lbst {

struct SyntheticConfig {
  std::int64_t lo = -100000;
  std::int64_t hi = 100000;
  std::size_t samples = 10000;
  double sigma = 10.0;
  double shift = 0.0;
  std::uint64_t seed = 0;
  /// Index of the repetition; each trial draws fresh train and test samples.
  std::uint64_t trial = 0;
  /// Draw train and test from the same sub-stream (test only differs by the
  /// shift). Used to isolate the effect of the shift from sampling noise.
  bool shared_stream = false;
};

/// Keys are every integer in [lo, hi]. The prediction is the histogram of
/// `samples` floor-rounded N(0, sigma^2) draws, the truth the histogram of
/// N(shift, sigma^2) draws, and the queries are those shifted draws.
Instance synthetic_instance(const SyntheticConfig& config);

/// Instance i (0-based) has the truth as a point mass at position i and the
/// prediction uniform over [0, eta - 1]; keys are 0..n-1.
std::vector<Instance> lowerbound_family(std::size_t eta, std::size_t n);

/// Truth = prediction = half mass at positions n/4 - 1 and 3n/4 - 1.
Instance two_atom_instance(std::size_t n);

struct TemporalEntry {
  std::uint64_t source;
  std::uint64_t target;
  std::uint64_t time;
};

/// Reads "u v t" lines, keeps the max_entries earliest by timestamp (ties in
/// file order) and returns them in that order. Blank lines and lines starting
/// with '#' are skipped; anything else malformed raises DataError naming the
/// line.
std::vector<TemporalEntry> load_temporal(const std::filesystem::path& path,
                                         std::size_t max_entries = 1000000);

struct IngestConfig {
  std::size_t max_entries = 1000000;
  double key_fraction = 0.10;
  double train_fraction = 0.50;
  std::filesystem::path source;
};

struct IngestResult {
  Instance instance;
  /// Elements after the key prefix that fell below the smallest key.
  std::size_t dropped = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

/// Builds keys from the first key_fraction of the source-user sequence,
/// maps every later element to its predecessor key (dropping those below
/// the smallest key), and splits the mapped remainder: the first
/// train_fraction gives the prediction, the rest the truth and queries.
IngestResult build_temporal_instance(const std::vector<TemporalEntry>& entries, double key_fraction,
                                     double train_fraction);

IngestResult ingest_temporal(const IngestConfig& config);

// Random distributions for the audits and property tests.

enum class RandomFamily { Dirichlet, PointMass, Sparse, Block };

ProbDist random_distribution(CounterRng& rng, std::size_t n, RandomFamily family);
/// Family drawn uniformly at random.
ProbDist random_distribution(CounterRng& rng, std::size_t n);

/// Moves every atom by `offset` positions, piling mass that would leave the
/// array onto the nearest end.
ProbDist shifted(const ProbDist& p, std::ptrdiff_t offset);

/// A prediction for `truth` drawn from a mix of error regimes: exact,
/// shifted, blended with noise, unrelated, or uniform.
ProbDist random_prediction(CounterRng& rng, const ProbDist& truth);

}  // namespace lbst
