// Command line front end: asymptotic rate-distance scans, finite-key
// evaluation of simulated or recorded counts, and the state-identity
// verification suite.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "tfqkd/config.hpp"
#include "tfqkd/counts_io.hpp"
#include "tfqkd/scan.hpp"
#include "tfqkd/verify.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<double> distance;
  std::optional<double> mu;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sampler;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "run configuration file");
  cmd->add_option("--distance", f.distance, "override the distance / scan point (km)");
  cmd->add_option("--mu", f.mu, "override the Code-mode intensity mu1");
  cmd->add_option("--output", f.output, "output path (default stdout)");
  cmd->add_option("--seed", f.seed, "simulation seed");
  cmd->add_option("--sampler", f.sampler, "per-round | batched")
      ->check(CLI::IsMember({"per-round", "batched"}));
  cmd->add_option("--format", f.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

tfqkd::cli::RunConfig make_config(const CommonFlags& f) {
  tfqkd::cli::RunConfig cfg;
  if (!f.config_path.empty()) {
    cfg = tfqkd::cli::load_config_file(f.config_path);
  }
  if (f.distance) {
    cfg.params.distance_km = *f.distance;
    cfg.l_min_km = cfg.l_max_km = *f.distance;
    cfg.l_step_km = 1.0;
  }
  if (f.mu) cfg.params.mu[0] = *f.mu;
  if (f.output) cfg.output_path = *f.output;
  if (f.seed) cfg.seed = *f.seed;
  if (f.sampler) {
    cfg.sampler = *f.sampler == "per-round" ? tfqkd::sim::Sampler::PerRound
                                            : tfqkd::sim::Sampler::Batched;
  }
  if (f.format) {
    cfg.format = *f.format == "json" ? tfqkd::cli::OutputFormat::Json
                                     : tfqkd::cli::OutputFormat::Csv;
  }
  return cfg;
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
  if (path.empty()) return nullptr;  // caller falls back to stdout
  auto out = std::make_unique<std::ofstream>(path);
  if (!*out) {
    throw std::runtime_error("cannot open output file " + path);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TF-QKD rate simulation and finite-key analysis"};
  app.require_subcommand(1);

  CommonFlags scan_flags, finite_flags, verify_flags;
  std::string counts_path;
  bool init_config = false;

  CLI::App* scan = app.add_subcommand("scan", "asymptotic rate-distance scan");
  add_common(scan, scan_flags);
  scan->add_flag("--init-config", init_config,
                 "print an annotated configuration template and exit");

  CLI::App* finite = app.add_subcommand("finite", "finite-key evaluation");
  add_common(finite, finite_flags);
  finite->add_option("--counts", counts_path,
                     "counts JSON file (tfqkd-counts/1); omit to simulate");

  CLI::App* verify = app.add_subcommand("verify", "state identity suite");
  add_common(verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      if (init_config) {
        std::cout << tfqkd::cli::default_config_text();
        return 0;
      }
      const auto cfg = make_config(scan_flags);
      const auto rows = tfqkd::cli::rate_scan(cfg);
      auto file = open_output(cfg.output_path);
      std::ostream& out = file ? *file : std::cout;
      if (cfg.format == tfqkd::cli::OutputFormat::Csv) {
        tfqkd::cli::write_scan_csv(out, rows);
      } else {
        tfqkd::cli::write_scan_json(out, rows, cfg);
      }
      return 0;
    }

    if (finite->parsed()) {
      auto cfg = make_config(finite_flags);
      tfqkd::sim::ObservedCounts counts;
      if (!counts_path.empty()) {
        std::ifstream in(counts_path);
        if (!in) {
          std::cerr << "error: cannot open counts file " << counts_path << "\n";
          return 1;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        auto loaded = tfqkd::sim::counts_from_json(buf.str());
        counts = std::move(loaded.counts);
        cfg.params = loaded.params;  // evaluate under the recorded parameters
        cfg.rounds = counts.n_rounds;
      } else {
        counts = tfqkd::sim::simulate(cfg.params, cfg.rounds, cfg.seed,
                                      cfg.sampler, cfg.workers);
      }
      const auto res = tfqkd::cli::finite_eval(counts, cfg);
      auto file = open_output(cfg.output_path);
      std::ostream& out = file ? *file : std::cout;
      tfqkd::cli::write_finite_json(out, res, cfg);
      return 0;
    }

    if (verify->parsed()) {
      const auto cfg = make_config(verify_flags);
      const auto report = tfqkd::cli::run_verification(cfg);
      auto file = open_output(cfg.output_path);
      std::ostream& out = file ? *file : std::cout;
      tfqkd::cli::write_report(out, report);
      return report.all_pass() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
