// Command-line driver: experiment sweeps that write CSV, bound audits, and
// the distribution metrics.
//
// Exit codes: 0 success, 1 usage error, 2 audit failure, 3 data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lbst/experiments.hpp"
#include "lbst/kernels.hpp"
#include "lbst/metrics.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kAuditFailed = 2, kDataError = 3 };

namespace fs = std::filesystem;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lbst::DataError("cannot write " + path);
  out << text;
  if (!out) throw lbst::DataError("write failed for " + path);
}

// Resolves a dataset name through the download manifest to a local file.
fs::path resolve_download(const std::string& name, const fs::path& manifest_path, const fs::path& data_dir) {
  std::ifstream in(manifest_path);
  if (!in) throw lbst::DataError("cannot open manifest " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw lbst::DataError("malformed manifest " + manifest_path.string() + ": " + e.what());
  }
  for (const auto& entry : manifest.at("datasets")) {
    if (entry.at("name").get<std::string>() != name) continue;
    const fs::path local = data_dir / entry.at("file").get<std::string>();
    if (!fs::exists(local)) {
      throw lbst::DataError("dataset '" + name + "' not found at " + local.string() +
                            "; fetch it with tools/fetch_snap.sh " + name);
    }
    return local;
  }
  throw lbst::DataError("dataset '" + name + "' is not listed in " + manifest_path.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search with distributional predictions: experiments and audits"};
  app.require_subcommand(1);

  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel path: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // synth
  lbst::SynthOptions synth;
  std::string synth_strategies = "classic,bisection,convex,learned";
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Shifted-Gaussian synthetic sweep (CSV)");
  synth_cmd->add_option("--shifts", synth.shifts, "Comma-separated mean shifts")->delimiter(',');
  synth_cmd->add_option("--trials", synth.trials, "Repetitions per shift")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--strategies", synth_strategies,
                        "Comma list of classic,bisection,convex,learned,doubling,portfolio");
  synth_cmd->add_option("--growth-factor", synth.growth_factor, "Endpoint growth factor c")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--lambda", synth.lambda, "Convex combination weight")->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--seed", synth.seed, "Root seed");
  synth_cmd->add_option("--jobs", synth.jobs, "Parallel cells")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--samples", synth.samples, "Samples per distribution")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth_out, "Output CSV path (default stdout)");

  // real
  lbst::RealOptions real;
  std::string real_strategies = "classic,bisection,convex,learned";
  std::string real_out, emd_out, fixture, download;
  std::string manifest = "data/snap_manifest.json";
  std::string data_dir = "data/snap";
  auto* real_cmd = app.add_subcommand("real", "Temporal edge-list sweep over training fractions (CSV)");
  auto* fixture_opt = real_cmd->add_option("--fixture", fixture, "Local edge list (u v t per line)");
  auto* download_opt = real_cmd->add_option("--download", download,
                                            "Dataset name from the manifest (askubuntu, superuser, stackoverflow)");
  fixture_opt->excludes(download_opt);
  real_cmd->add_option("--manifest", manifest, "Download manifest");
  real_cmd->add_option("--data-dir", data_dir, "Directory holding downloaded datasets");
  real_cmd->add_option("--dataset", real.dataset, "Dataset label (default: file stem)");
  real_cmd->add_option("--train-fracs", real.train_fractions, "Comma-separated training fractions")
      ->delimiter(',');
  real_cmd->add_option("--strategies", real_strategies, "Comma list of strategies");
  real_cmd->add_option("--growth-factor", real.growth_factor, "Endpoint growth factor c")
      ->check(CLI::PositiveNumber);
  real_cmd->add_option("--lambda", real.lambda, "Convex combination weight")->check(CLI::Range(0.0, 1.0));
  real_cmd->add_option("--key-fraction", real.key_fraction, "Prefix fraction that defines the keys");
  real_cmd->add_option("--max-entries", real.max_entries, "Earliest entries kept")->check(CLI::PositiveNumber);
  real_cmd->add_option("--jobs", real.jobs, "Parallel cells")->check(CLI::PositiveNumber);
  real_cmd->add_option("--out", real_out, "Output CSV path (default stdout)");
  real_cmd->add_option("--emd-out", emd_out, "Optional CSV of train fraction vs EMD and log2 EMD");

  // audit
  lbst::AuditOptions audit;
  std::string audit_out;
  auto* audit_cmd = app.add_subcommand("audit", "Exact bound audits for the learned and portfolio searches");
  audit_cmd->add_option("--count", audit.count, "Random (truth, prediction) pairs");
  audit_cmd->add_option("--n-min", audit.n_min, "Smallest n")->check(CLI::PositiveNumber);
  audit_cmd->add_option("--n-max", audit.n_max, "Largest n")->check(CLI::PositiveNumber);
  audit_cmd->add_option("--seed", audit.seed, "Root seed");
  audit_cmd->add_option("--growth-factor", audit.growth_factor, "Endpoint growth factor c")
      ->check(CLI::PositiveNumber);
  audit_cmd->add_option("--portfolio-count", audit.portfolio_count, "Portfolio instances");
  audit_cmd->add_option("--family-max-eta", audit.family_max_eta, "Largest eta in the lower-bound family")
      ->check(CLI::PositiveNumber);
  audit_cmd->add_option("--out", audit_out, "Report path (default stdout)");

  // metrics
  std::string emd_a, emd_b, entropy_file;
  auto* emd_cmd = app.add_subcommand("emd", "Earth mover's distance between two distribution files");
  emd_cmd->add_option("first", emd_a, "Distribution file (one real per line)")->required();
  emd_cmd->add_option("second", emd_b, "Distribution file (one real per line)")->required();
  auto* entropy_cmd = app.add_subcommand("entropy", "Entropy in bits of a distribution file");
  entropy_cmd->add_option("file", entropy_file, "Distribution file (one real per line)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (simd == "scalar") {
    lbst::kernels::set_level(lbst::kernels::SimdLevel::Scalar);
  } else if (simd == "avx2") {
    if (lbst::kernels::set_level(lbst::kernels::SimdLevel::Avx2) != lbst::kernels::SimdLevel::Avx2) {
      std::cerr << "avx2 kernels are not available on this machine\n";
      return kUsage;
    }
  }

  try {
    if (*synth_cmd) {
      synth.strategies = lbst::parse_strategy_list(synth_strategies);
      write_output(synth_out, lbst::to_csv(lbst::run_synth(synth)));
      return kOk;
    }
    if (*real_cmd) {
      if (fixture.empty() && download.empty()) {
        std::cerr << "real: one of --fixture or --download is required\n";
        return kUsage;
      }
      real.strategies = lbst::parse_strategy_list(real_strategies);
      real.source = fixture.empty() ? resolve_download(download, manifest, data_dir) : fs::path(fixture);
      if (real.dataset.empty() && !download.empty()) real.dataset = download;
      const lbst::RealResult result = lbst::run_real(real);
      write_output(real_out, lbst::to_csv(result.rows));
      if (!emd_out.empty()) write_output(emd_out, lbst::emd_points_csv(result.emd_points));
      return kOk;
    }
    if (*audit_cmd) {
      std::ostringstream report;
      const bool passed = lbst::run_bound_audit(audit, report);
      write_output(audit_out, report.str());
      return passed ? kOk : kAuditFailed;
    }
    if (*emd_cmd) {
      const auto p = lbst::read_distribution_file(emd_a);
      const auto q = lbst::read_distribution_file(emd_b);
      if (p.size() != q.size()) throw lbst::DataError("distribution files differ in length");
      std::cout << lbst::format_metric(lbst::emd(p, q)) << '\n';
      return kOk;
    }
    if (*entropy_cmd) {
      std::cout << lbst::format_metric(lbst::entropy(lbst::read_distribution_file(entropy_file))) << '\n';
      return kOk;
    }
  } catch (const lbst::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const lbst::NotFound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const lbst::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
