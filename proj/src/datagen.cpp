#include "lbst/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <string_view>
#include <tuple>

#include "lbst/rng.hpp"

namespace lbst {

namespace {

std::vector<Position> gaussian_positions(CounterRng rng, const SyntheticConfig& c, double mean) {
  std::normal_distribution<double> normal(mean, c.sigma);
  std::vector<Position> out(c.samples);
  for (auto& pos : out) {
    double v = std::floor(normal(rng));
    v = std::clamp(v, static_cast<double>(c.lo), static_cast<double>(c.hi));
    pos = static_cast<Position>(static_cast<std::int64_t>(v) - c.lo);
  }
  return out;
}

ProbDist histogram(std::span<const Position> positions, std::size_t n) {
  std::vector<std::uint64_t> counts(n, 0);
  for (Position p : positions) ++counts[p];
  return ProbDist::from_counts(counts);
}

// floor(fraction * total), robust to fractions like 0.1 not being exact.
std::size_t fraction_of(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total) + 1e-9));
}

}  // namespace

Instance synthetic_instance(const SyntheticConfig& config) {
  if (!(config.lo < config.hi) || config.samples < 1 || !(config.sigma > 0.0) ||
      !(config.shift >= 0.0)) {
    throw ContractViolation("synthetic_instance: invalid configuration");
  }
  KeyArray keys = KeyArray::integer_range(config.lo, config.hi);
  const CounterRng root(config.seed);
  const CounterRng train_rng = root.substream("train", config.trial);
  const CounterRng test_rng = config.shared_stream ? train_rng : root.substream("test", config.trial);

  const auto train = gaussian_positions(train_rng, config, 0.0);
  auto test = gaussian_positions(test_rng, config, config.shift);
  const std::size_t n = keys.size();
  ProbDist predicted = histogram(train, n);
  ProbDist truth = histogram(test, n);
  return Instance(std::move(keys), std::move(truth), {std::move(predicted)}, std::move(test));
}

std::vector<Instance> lowerbound_family(std::size_t eta, std::size_t n) {
  if (eta < 1 || eta > n) throw ContractViolation("lowerbound_family: need 1 <= eta <= n");
  const KeyArray keys = KeyArray::integer_range(0, static_cast<std::int64_t>(n) - 1);
  const ProbDist predicted = ProbDist::uniform_over(n, 0, eta - 1);
  std::vector<Instance> family;
  family.reserve(eta);
  for (Position i = 0; i < eta; ++i) {
    family.emplace_back(keys, ProbDist::point_mass(n, i), std::vector<ProbDist>{predicted});
  }
  return family;
}

Instance two_atom_instance(std::size_t n) {
  if (n < 4 || n % 4 != 0) throw ContractViolation("two_atom_instance: n must be a positive multiple of 4");
  std::vector<double> mass(n, 0.0);
  mass[n / 4 - 1] = 0.5;
  mass[3 * n / 4 - 1] = 0.5;
  ProbDist p(std::move(mass));
  return Instance(KeyArray::integer_range(0, static_cast<std::int64_t>(n) - 1), p, {p});
}

std::vector<TemporalEntry> load_temporal(const std::filesystem::path& path, std::size_t max_entries) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list " + path.string());
  if (max_entries == 0) throw ContractViolation("load_temporal: max_entries must be positive");

  // Max-heap on (time, line order): keeps the max_entries earliest entries
  // without holding the whole file.
  using Ranked = std::tuple<std::uint64_t, std::size_t, TemporalEntry>;
  auto later = [](const Ranked& a, const Ranked& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  };
  std::priority_queue<Ranked, std::vector<Ranked>, decltype(later)> kept(later);

  std::string line;
  std::size_t line_no = 0, order = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    auto skip_space = [&] {
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t' || rest.front() == '\r')) {
        rest.remove_prefix(1);
      }
    };
    skip_space();
    if (rest.empty() || rest.front() == '#') continue;

    std::uint64_t fields[3];
    for (int f = 0; f < 3; ++f) {
      skip_space();
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), fields[f]);
      const bool separated = ptr == rest.data() + rest.size() || *ptr == ' ' || *ptr == '\t' || *ptr == '\r';
      if (ec != std::errc() || !separated) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": expected three non-negative integers \"u v t\"");
      }
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    }
    skip_space();
    if (!rest.empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": trailing data after \"u v t\"");
    }

    Ranked item{fields[2], order++, TemporalEntry{fields[0], fields[1], fields[2]}};
    if (kept.size() < max_entries) {
      kept.push(item);
    } else if (later(item, kept.top())) {
      kept.pop();
      kept.push(item);
    }
  }

  std::vector<Ranked> ranked;
  ranked.reserve(kept.size());
  while (!kept.empty()) {
    ranked.push_back(kept.top());
    kept.pop();
  }
  std::reverse(ranked.begin(), ranked.end());
  std::vector<TemporalEntry> entries;
  entries.reserve(ranked.size());
  for (const auto& r : ranked) entries.push_back(std::get<2>(r));
  return entries;
}

IngestResult build_temporal_instance(const std::vector<TemporalEntry>& entries, double key_fraction,
                                     double train_fraction) {
  if (!(key_fraction > 0.0 && key_fraction < 1.0) || !(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ContractViolation("ingest: fractions must lie strictly between 0 and 1");
  }
  if (entries.empty()) throw DataError("ingest: edge list is empty");

  const std::size_t key_count = std::clamp<std::size_t>(fraction_of(key_fraction, entries.size()), 1,
                                                        entries.size());
  std::vector<std::int64_t> raw_keys;
  raw_keys.reserve(key_count);
  for (std::size_t i = 0; i < key_count; ++i) raw_keys.push_back(static_cast<std::int64_t>(entries[i].source));
  std::sort(raw_keys.begin(), raw_keys.end());
  raw_keys.erase(std::unique(raw_keys.begin(), raw_keys.end()), raw_keys.end());
  KeyArray keys(std::move(raw_keys));

  std::vector<Position> mapped;
  mapped.reserve(entries.size() - key_count);
  std::size_t dropped = 0;
  for (std::size_t i = key_count; i < entries.size(); ++i) {
    if (auto pos = keys.predecessor(static_cast<std::int64_t>(entries[i].source))) {
      mapped.push_back(*pos);
    } else {
      ++dropped;
    }
  }
  if (mapped.size() < 2) throw DataError("ingest: fewer than two usable elements after the key prefix");

  const std::size_t train_size = std::clamp<std::size_t>(fraction_of(train_fraction, mapped.size()), 1,
                                                         mapped.size() - 1);
  const std::size_t n = keys.size();
  std::vector<std::uint64_t> train_counts(n, 0), test_counts(n, 0);
  for (std::size_t i = 0; i < train_size; ++i) ++train_counts[mapped[i]];
  for (std::size_t i = train_size; i < mapped.size(); ++i) ++test_counts[mapped[i]];
  std::vector<Position> queries(mapped.begin() + static_cast<std::ptrdiff_t>(train_size), mapped.end());

  IngestResult result{
      Instance(std::move(keys), ProbDist::from_counts(test_counts),
               {ProbDist::from_counts(train_counts)}, std::move(queries)),
      dropped, train_size, mapped.size() - train_size};
  return result;
}

IngestResult ingest_temporal(const IngestConfig& config) {
  return build_temporal_instance(load_temporal(config.source, config.max_entries), config.key_fraction,
                                 config.train_fraction);
}

}  // namespace lbst

namespace lbst {

namespace {

std::size_t below(CounterRng& rng, std::size_t bound) {
  return static_cast<std::size_t>(std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng));
}

}  // namespace

ProbDist random_distribution(CounterRng& rng, std::size_t n, RandomFamily family) {
  if (n == 0) throw ContractViolation("random_distribution: n must be positive");
  std::vector<double> w(n, 0.0);
  switch (family) {
    case RandomFamily::Dirichlet: {
      static constexpr double kAlphas[] = {0.05, 0.3, 1.0};
      std::gamma_distribution<double> gamma(kAlphas[below(rng, 3)], 1.0);
      for (auto& x : w) x = gamma(rng);
      break;
    }
    case RandomFamily::PointMass:
      w[below(rng, n)] = 1.0;
      break;
    case RandomFamily::Sparse: {
      const std::size_t atoms = 1 + below(rng, std::min<std::size_t>(8, n));
      for (std::size_t a = 0; a < atoms; ++a) w[below(rng, n)] += 0.05 + rng.uniform();
      break;
    }
    case RandomFamily::Block: {
      std::size_t a = below(rng, n), b = below(rng, n);
      if (a > b) std::swap(a, b);
      std::fill(w.begin() + static_cast<std::ptrdiff_t>(a), w.begin() + static_cast<std::ptrdiff_t>(b) + 1, 1.0);
      break;
    }
  }
  // Tiny Dirichlet shapes can underflow every draw.
  if (std::all_of(w.begin(), w.end(), [](double x) { return !(x > 0.0); })) w[below(rng, n)] = 1.0;
  return ProbDist::from_weights(std::move(w));
}

ProbDist random_distribution(CounterRng& rng, std::size_t n) {
  static constexpr RandomFamily kFamilies[] = {RandomFamily::Dirichlet, RandomFamily::PointMass,
                                               RandomFamily::Sparse, RandomFamily::Block};
  return random_distribution(rng, n, kFamilies[below(rng, 4)]);
}

ProbDist shifted(const ProbDist& p, std::ptrdiff_t offset) {
  const auto n = static_cast<std::ptrdiff_t>(p.size());
  std::vector<double> w(p.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i + offset, 0, n - 1))] +=
        p.mass(static_cast<std::size_t>(i));
  }
  return ProbDist::from_weights(std::move(w));
}

ProbDist random_prediction(CounterRng& rng, const ProbDist& truth) {
  const std::size_t n = truth.size();
  switch (below(rng, 5)) {
    case 0:
      return truth;
    case 1: {
      const auto span = static_cast<std::ptrdiff_t>(n);
      const auto offset = static_cast<std::ptrdiff_t>(below(rng, 2 * n)) - span;
      return shifted(truth, offset);
    }
    case 2: {
      const ProbDist noise = random_distribution(rng, n);
      const double keep = rng.uniform();
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = keep * truth.mass(i) + (1.0 - keep) * noise.mass(i);
      return ProbDist::from_weights(std::move(w));
    }
    case 3:
      return random_distribution(rng, n);
    default:
      return ProbDist::uniform(n);
  }
}

}  // namespace lbst
