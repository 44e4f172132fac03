#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tfqkd/channel.hpp"
#include "tfqkd/keyrate.hpp"
#include "tfqkd/protosim.hpp"

namespace tfqkd::cli {

enum class OutputFormat { Csv, Json };

// Full run description: physical/protocol parameters, epsilon budget, scan
// grid and execution knobs. Parsed from a key=value config file with
// [section] headers; command-line flags override single fields.
struct RunConfig {
  channel::PhysicalParams params;
  keyrate::EpsilonBudget budget = keyrate::EpsilonBudget::uniform();
  double eps_estimation_total = 1e-10;
  double eps_pa = 1e-10;

  // [scan]
  double l_min_km = 100.0;
  double l_max_km = 700.0;
  double l_step_km = 10.0;
  bool sum_t_e = true;  // total rate adds the t_E = 1 and t_E = 2 keys

  // [run]
  double rounds = 1e9;
  std::uint64_t seed = 1;
  sim::Sampler sampler = sim::Sampler::Batched;
  int workers = 4;
  int grid_points() const;
  std::string output_path;  // empty = stdout
  OutputFormat format = OutputFormat::Csv;

  void validate() const;
};

// Parses the key=value config format:
//   # comment
//   [channel]
//   alpha_db_per_km = 0.2
// Unknown keys are an error; all keys are optional.
RunConfig parse_config(std::istream& in);
RunConfig load_config_file(const std::string& path);

std::string default_config_text();  // annotated template for --init

}  // namespace tfqkd::cli
