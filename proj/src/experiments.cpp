#include "lbst/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "lbst/datagen.hpp"
#include "lbst/metrics.hpp"

namespace lbst {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Runs work(i) for i in [0, count) on up to `jobs` threads. Each index is
// handled exactly once; results go to caller-owned slots, so the outcome is
// independent of scheduling. The first exception is rethrown.
template <typename Work>
void parallel_for(std::size_t count, std::size_t jobs, Work work) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ResultRow measure(const StrategyConfig& config, const Instance& instance, const std::string& dataset,
                  std::int64_t trial, double x_value, double entropy_bits, double emd_value,
                  std::size_t dropped) {
  ResultRow row{dataset, std::string(strategy_name(config.kind)),
                strategy_params(config, instance.predictions.size()),
                trial, x_value, instance.size(), entropy_bits, emd_value, 0.0, 0.0, dropped};
  try {
    const QueryCost cost = average_query_cost(bind_strategy(config, instance.predictions), instance);
    row.avg_cost = cost.mean;
    row.std_cost = cost.stddev;
  } catch (const NotFound&) {
    row.params += row.params.empty() ? "error" : ";error";
    row.avg_cost = std::nan("");
    row.std_cost = std::nan("");
  }
  return row;
}

}  // namespace

std::string format_row(const ResultRow& r) {
  std::string line;
  line += r.dataset + ',' + r.strategy + ',' + r.params + ',' + std::to_string(r.trial) + ',';
  line += general(r.x_value) + ',' + std::to_string(r.n) + ',';
  line += fixed(r.entropy_bits, 6) + ',' + fixed(r.emd, 6) + ',';
  line += fixed(r.avg_cost, 6) + ',' + fixed(r.std_cost, 6) + ',' + std::to_string(r.dropped_queries);
  return line;
}

std::string to_csv(std::vector<ResultRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.dataset, a.strategy, a.x_value, a.trial) <
           std::tie(b.dataset, b.strategy, b.x_value, b.trial);
  });
  std::string out = std::string(kCsvHeader) + '\n';
  for (const auto& r : rows) out += format_row(r) + '\n';
  return out;
}

QueryCost average_query_cost(const SearchFn& strategy, const Instance& instance) {
  if (instance.queries.empty()) throw ContractViolation("instance has no query sequence");
  double sum = 0.0, sum_sq = 0.0;
  for (Position q : instance.queries) {
    SearchSession session(instance.keys, q);
    const SearchStats stats = strategy(session);
    if (stats.found != q) throw ContractViolation("strategy returned the wrong position");
    const auto probes = static_cast<double>(stats.probes);
    sum += probes;
    sum_sq += probes * probes;
  }
  const auto count = static_cast<double>(instance.queries.size());
  const double mean = sum / count;
  return {mean, std::sqrt(std::max(sum_sq / count - mean * mean, 0.0))};
}

std::vector<StrategyConfig> make_configs(const std::vector<StrategyKind>& kinds, unsigned growth_factor,
                                         double lambda) {
  std::vector<StrategyConfig> configs;
  for (auto kind : kinds) configs.push_back({kind, LearnedParams{growth_factor}, ConvexParams{lambda}});
  return configs;
}

std::vector<StrategyKind> parse_strategy_list(const std::string& list) {
  std::vector<StrategyKind> kinds;
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (name.empty()) continue;
    auto kind = parse_strategy(name);
    if (!kind) throw ContractViolation("unknown strategy '" + name + "'");
    kinds.push_back(*kind);
  }
  if (kinds.empty()) throw ContractViolation("no strategies selected");
  return kinds;
}

std::vector<ResultRow> run_synth(const SynthOptions& options) {
  if (options.trials == 0) throw ContractViolation("trials must be positive");
  const auto configs = make_configs(options.strategies, options.growth_factor, options.lambda);
  const std::size_t cells = options.shifts.size() * options.trials;
  std::vector<std::vector<ResultRow>> per_cell(cells);

  parallel_for(cells, options.jobs, [&](std::size_t cell) {
    const std::size_t shift_index = cell / options.trials;
    const std::size_t trial = cell % options.trials;
    SyntheticConfig sc;
    sc.lo = options.lo;
    sc.hi = options.hi;
    sc.samples = options.samples;
    sc.sigma = options.sigma;
    sc.shift = options.shifts[shift_index];
    sc.seed = options.seed;
    sc.trial = trial;
    const Instance instance = synthetic_instance(sc);
    const double h = entropy(instance.truth);
    const double eta = emd(instance.truth, instance.prediction());
    for (const auto& config : configs) {
      per_cell[cell].push_back(measure(config, instance, "synthetic", static_cast<std::int64_t>(trial),
                                       sc.shift, h, eta, 0));
    }
  });

  std::vector<ResultRow> rows;
  for (std::size_t s = 0; s < options.shifts.size(); ++s) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      ResultRow agg;
      double sum_sq = 0.0;
      for (std::size_t t = 0; t < options.trials; ++t) {
        const ResultRow& r = per_cell[s * options.trials + t][c];
        rows.push_back(r);
        if (t == 0) {
          agg = r;
          agg.trial = -1;
          agg.entropy_bits = agg.emd = agg.avg_cost = 0.0;
        }
        agg.entropy_bits += r.entropy_bits;
        agg.emd += r.emd;
        agg.avg_cost += r.avg_cost;
        sum_sq += r.avg_cost * r.avg_cost;
      }
      const auto k = static_cast<double>(options.trials);
      agg.entropy_bits /= k;
      agg.emd /= k;
      agg.avg_cost /= k;
      agg.std_cost = std::sqrt(std::max(sum_sq / k - agg.avg_cost * agg.avg_cost, 0.0));
      rows.push_back(agg);
    }
  }
  return rows;
}

RealResult run_real(const RealOptions& options) {
  const auto entries = load_temporal(options.source, options.max_entries);
  const std::string dataset = options.dataset.empty() ? options.source.stem().string() : options.dataset;
  const auto configs = make_configs(options.strategies, options.growth_factor, options.lambda);
  const std::size_t cells = options.train_fractions.size();
  std::vector<std::vector<ResultRow>> per_cell(cells);
  std::vector<EmdPoint> points(cells);

  parallel_for(cells, options.jobs, [&](std::size_t cell) {
    const double fraction = options.train_fractions[cell];
    const IngestResult ingest = build_temporal_instance(entries, options.key_fraction, fraction);
    const Instance& instance = ingest.instance;
    const double h = entropy(instance.truth);
    const double eta = emd(instance.truth, instance.prediction());
    points[cell] = {fraction, eta, eta > 0.0 ? std::log2(eta) : -std::numeric_limits<double>::infinity()};
    for (const auto& config : configs) {
      per_cell[cell].push_back(measure(config, instance, dataset, 0, fraction, h, eta, ingest.dropped));
    }
  });

  RealResult result;
  for (auto& cell : per_cell) result.rows.insert(result.rows.end(), cell.begin(), cell.end());
  result.emd_points = std::move(points);
  return result;
}

std::string emd_points_csv(const std::vector<EmdPoint>& points) {
  std::string out = "train_fraction,emd,log2_emd\n";
  for (const auto& p : points) {
    out += general(p.train_fraction) + ',' + fixed(p.emd, 6) + ',' +
           (std::isfinite(p.log2_emd) ? fixed(p.log2_emd, 6) : std::string("-inf")) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void record(AuditSection& section, const CostReport& report) {
  ++section.instances;
  section.max_ratio = std::max(section.max_ratio, report.ratio());
  if (!report.bound_satisfied) ++section.violations;
}

std::string describe(const char* label, const CostReport& r) {
  return std::string(label) + " expected=" + format_metric(r.expected_cost) +
         " bound=" + format_metric(r.bound_value) + " H=" + format_metric(r.entropy_bits);
}

}  // namespace

AuditSection audit_random_pairs(std::size_t count, std::size_t n_min, std::size_t n_max, std::uint64_t seed,
                                unsigned growth_factor) {
  if (n_min < 1 || n_max < n_min) throw ContractViolation("audit: invalid n range");
  AuditSection section;
  section.name = "theorem1-random-pairs";
  const CounterRng root(seed);
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng = root.substream("pair", i);
    const auto n = static_cast<std::size_t>(
        std::uniform_int_distribution<std::uint64_t>(n_min, n_max)(rng));
    ProbDist truth = random_distribution(rng, n);
    ProbDist predicted = random_prediction(rng, truth);
    const Instance instance(KeyArray::integer_range(0, static_cast<std::int64_t>(n) - 1), std::move(truth),
                            {std::move(predicted)});
    const CostReport report = audit_theorem1(instance, growth_factor);
    record(section, report);
    if (!report.bound_satisfied) section.notes.push_back("pair " + std::to_string(i) + describe(":", report));
  }
  return section;
}

AuditSection audit_lowerbound_family(const std::vector<std::size_t>& etas, std::size_t n,
                                     unsigned growth_factor) {
  AuditSection section;
  section.name = "theorem1-lowerbound-family";
  for (std::size_t eta : etas) {
    double family_sum = 0.0;
    const auto family = lowerbound_family(eta, n);
    for (const auto& instance : family) {
      const CostReport report = audit_theorem1(instance, growth_factor);
      record(section, report);
      family_sum += report.expected_cost;
      if (!report.bound_satisfied) {
        section.notes.push_back("eta=" + std::to_string(eta) + describe(":", report));
      }
    }
    // Power-of-two etas get a note on the averaged cost and the lower bound.
    if ((eta & (eta - 1)) == 0 && eta >= 4) {
      const double average = family_sum / static_cast<double>(eta);
      const double optimal = optimal_bst_cost(ProbDist::uniform(eta));
      const double floor_bound = std::log2(static_cast<double>(eta)) / 3.0;
      section.notes.push_back("eta=" + std::to_string(eta) + " family-average=" + format_metric(average) +
                              " optimal-uniform=" + format_metric(optimal) +
                              " log2(eta)/3=" + format_metric(floor_bound) +
                              " 8(log2(eta)+2)+8=" + format_metric(8.0 * (std::log2(double(eta)) + 2.0) + 8.0));
      if (optimal + 1e-9 < floor_bound || average + 1e-9 < optimal) ++section.violations;
    }
  }
  return section;
}

AuditSection audit_two_atom(std::size_t n, unsigned growth_factor) {
  AuditSection section;
  section.name = "theorem1-two-atom";
  const CostReport report = audit_theorem1(two_atom_instance(n), growth_factor);
  record(section, report);
  section.notes.push_back("n=" + std::to_string(n) + describe("", report));
  return section;
}

Instance random_portfolio_instance(CounterRng& rng, std::size_t n, std::size_t m) {
  ProbDist truth = random_distribution(rng, n);
  // Close prediction: a random fraction of every atom slides one position.
  const double moved = rng.uniform();
  std::vector<double> near(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t to = n == 1 ? 0 : (i + 1 < n ? i + 1 : i - 1);
    near[i] += (1.0 - moved) * truth.mass(i);
    near[to] += moved * truth.mass(i);
  }
  const std::size_t good = static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(0, m - 1)(rng));
  std::vector<ProbDist> predictions;
  for (std::size_t k = 0; k < m; ++k) {
    if (k == good) {
      predictions.push_back(ProbDist::from_weights(near));
      continue;
    }
    switch (k % 4) {
      case 0: predictions.push_back(ProbDist::uniform(n)); break;
      case 1: predictions.push_back(ProbDist::point_mass(n, std::uniform_int_distribution<std::size_t>(0, n - 1)(rng))); break;
      case 2: {
        std::vector<double> reversed(truth.masses().rbegin(), truth.masses().rend());
        predictions.push_back(ProbDist::from_weights(std::move(reversed)));
        break;
      }
      default: predictions.push_back(random_distribution(rng, n)); break;
    }
  }
  return Instance(KeyArray::integer_range(0, static_cast<std::int64_t>(n) - 1), std::move(truth),
                  std::move(predictions));
}

AuditSection audit_portfolio(std::size_t count, std::size_t n_min, std::size_t n_max, std::uint64_t seed,
                             unsigned growth_factor) {
  if (n_min < 1 || n_max < n_min) throw ContractViolation("audit: invalid n range");
  static constexpr std::size_t kSizes[] = {2, 4, 8};
  AuditSection section;
  section.name = "theorem4-portfolio";
  const CounterRng root(seed);
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng = root.substream("portfolio", i);
    const auto n = static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(n_min, n_max)(rng));
    const Instance instance = random_portfolio_instance(rng, n, kSizes[i % 3]);
    const CostReport report = audit_theorem4(instance, growth_factor);
    record(section, report);
    if (!report.bound_satisfied) {
      section.notes.push_back("instance " + std::to_string(i) + describe(":", report));
    }
  }
  return section;
}

bool run_bound_audit(const AuditOptions& o, std::ostream& out) {
  std::vector<std::size_t> etas;
  for (std::size_t eta = 1; eta <= o.family_max_eta; ++eta) etas.push_back(eta);
  const std::size_t family_n = std::max(o.family_n, o.family_max_eta);

  std::vector<AuditSection> sections;
  sections.push_back(audit_random_pairs(o.count, o.n_min, o.n_max, o.seed, o.growth_factor));
  sections.push_back(audit_lowerbound_family(etas, family_n, o.growth_factor));
  sections.push_back(audit_two_atom(1u << 16, o.growth_factor));
  sections.push_back(audit_portfolio(o.portfolio_count, o.n_min, o.n_max, o.seed, o.growth_factor));

  bool all = true;
  for (const auto& s : sections) {
    out << s.name << ": instances=" << s.instances << " violations=" << s.violations
        << " max_ratio=" << format_metric(s.max_ratio) << (s.passed() ? " ok" : " VIOLATED") << '\n';
    for (const auto& note : s.notes) out << "  " << note << '\n';
    all = all && s.passed();
  }
  out << (all ? "PASS" : "FAIL") << '\n';
  return all;
}

ProbDist read_distribution_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open distribution file " + path.string());
  std::vector<double> mass;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(value) || value < 0.0) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected a non-negative real");
    }
    mass.push_back(value);
  }
  if (mass.empty()) throw DataError(path.string() + ": no values");
  try {
    return ProbDist(std::move(mass));
  } catch (const ContractViolation& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_metric(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace lbst
