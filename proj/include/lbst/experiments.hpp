#pragma once

// Experiment drivers behind the command-line tool: synthetic and
// trace-driven sweeps that emit CSV, and the bound audits.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lbst/core.hpp"
#include "lbst/evaluation.hpp"
#include "lbst/rng.hpp"
#include "lbst/strategies.hpp"

namespace lbst {

struct ResultRow {
  std::string dataset;
  std::string strategy;
  std::string params;
  /// Repetition index; -1 marks the across-trial aggregate row.
  std::int64_t trial = 0;
  double x_value = 0.0;
  std::size_t n = 0;
  double entropy_bits = 0.0;
  double emd = 0.0;
  double avg_cost = 0.0;
  double std_cost = 0.0;
  std::size_t dropped_queries = 0;
};

inline constexpr const char* kCsvHeader =
    "dataset,strategy,params,trial,x_value,n,entropy_bits,emd,avg_cost,std_cost,dropped_queries";

std::string format_row(const ResultRow& row);
/// Header plus rows, sorted by (dataset, strategy, x_value, trial).
std::string to_csv(std::vector<ResultRow> rows);

struct QueryCost {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Sample average and population deviation of probes over the instance's
/// query sequence.
QueryCost average_query_cost(const SearchFn& strategy, const Instance& instance);

std::vector<StrategyConfig> make_configs(const std::vector<StrategyKind>& kinds, unsigned growth_factor,
                                         double lambda);
/// Parses "classic,bisection,..." into kinds; throws ContractViolation on
/// an unknown name.
std::vector<StrategyKind> parse_strategy_list(const std::string& list);

struct SynthOptions {
  std::vector<double> shifts{0, 20, 40, 60, 80, 100};
  std::size_t trials = 5;
  std::vector<StrategyKind> strategies{StrategyKind::Classic, StrategyKind::Bisection,
                                       StrategyKind::Convex, StrategyKind::Learned};
  unsigned growth_factor = 8;
  double lambda = 0.5;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::size_t samples = 10000;
  double sigma = 10.0;
  std::int64_t lo = -100000;
  std::int64_t hi = 100000;
};

/// One row per (shift, trial, strategy) with the deviation over queries,
/// plus a trial = -1 row per (shift, strategy) with the mean over trials and
/// the deviation across trials.
std::vector<ResultRow> run_synth(const SynthOptions& options);

struct RealOptions {
  std::filesystem::path source;
  std::string dataset;  // defaults to the file stem
  std::vector<double> train_fractions{0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
  std::vector<StrategyKind> strategies{StrategyKind::Classic, StrategyKind::Bisection,
                                       StrategyKind::Convex, StrategyKind::Learned};
  unsigned growth_factor = 8;
  double lambda = 0.5;
  double key_fraction = 0.10;
  std::size_t max_entries = 1000000;
  std::size_t jobs = 1;
};

struct EmdPoint {
  double train_fraction;
  double emd;
  double log2_emd;
};

struct RealResult {
  std::vector<ResultRow> rows;
  std::vector<EmdPoint> emd_points;
};

RealResult run_real(const RealOptions& options);
std::string emd_points_csv(const std::vector<EmdPoint>& points);

// ---------------------------------------------------------------------------
// Bound audits.

struct AuditSection {
  std::string name;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  std::vector<std::string> notes;

  bool passed() const noexcept { return violations == 0; }
};

/// Learned search (growth c) on `count` random (truth, prediction) pairs
/// with n drawn from [n_min, n_max].
AuditSection audit_random_pairs(std::size_t count, std::size_t n_min, std::size_t n_max,
                                std::uint64_t seed, unsigned growth_factor = 1);

/// Every member of the lower-bound family for each eta in etas, on keys
/// 0..n-1; also records family averages against the optimal tree on the
/// uniform distribution over eta.
AuditSection audit_lowerbound_family(const std::vector<std::size_t>& etas, std::size_t n,
                                     unsigned growth_factor = 1);

AuditSection audit_two_atom(std::size_t n, unsigned growth_factor = 1);

/// Portfolio search on `count` instances with m cycling through {2, 4, 8}:
/// one prediction within EMD 1 of the truth, the rest adversarial.
AuditSection audit_portfolio(std::size_t count, std::size_t n_min, std::size_t n_max,
                             std::uint64_t seed, unsigned growth_factor = 1);

/// Portfolio instance with one prediction within EMD 1 of the truth.
Instance random_portfolio_instance(CounterRng& rng, std::size_t n, std::size_t m);

struct AuditOptions {
  std::size_t count = 1000;
  std::size_t n_min = 2;
  std::size_t n_max = 4096;
  std::uint64_t seed = 1;
  unsigned growth_factor = 1;
  std::size_t portfolio_count = 200;
  std::size_t family_max_eta = 256;
  std::size_t family_n = 1024;
};

/// Runs all sections, writes the line-oriented report, and returns true iff
/// every section passed. The last line is "PASS" or "FAIL".
bool run_bound_audit(const AuditOptions& options, std::ostream& report);

// ---------------------------------------------------------------------------

/// One non-negative real per line; the total must be 1 within tolerance.
ProbDist read_distribution_file(const std::filesystem::path& path);

/// %.12g
std::string format_metric(double value);

}  // namespace lbst
