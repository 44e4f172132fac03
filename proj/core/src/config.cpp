#include "tfqkd/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tfqkd::cli {

int RunConfig::grid_points() const {
  if (l_step_km <= 0.0 || l_max_km < l_min_km) return 0;
  return static_cast<int>(std::floor((l_max_km - l_min_km) / l_step_km + 1e-9)) + 1;
}

void RunConfig::validate() const {
  params.validate();
  if (grid_points() < 1) {
    throw std::invalid_argument("RunConfig: empty scan grid");
  }
  if (rounds < 1.0) {
    throw std::invalid_argument("RunConfig: rounds must be >= 1");
  }
  if (workers < 1) {
    throw std::invalid_argument("RunConfig: workers must be >= 1");
  }
}

namespace {

double parse_double(const std::string& v, const std::string& key) {
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  while (used < v.size() && std::isspace(static_cast<unsigned char>(v[used]))) ++used;
  if (used != v.size()) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
  return x;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  using Setter = std::function<void(RunConfig&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"channel.alpha_db_per_km",
       [](RunConfig& c, const std::string& v) {
         c.params.alpha_db_per_km = parse_double(v, "alpha_db_per_km");
       }},
      {"channel.distance_km",
       [](RunConfig& c, const std::string& v) {
         c.params.distance_km = parse_double(v, "distance_km");
       }},
      {"channel.eta_det",
       [](RunConfig& c, const std::string& v) {
         c.params.eta_det = parse_double(v, "eta_det");
       }},
      {"channel.p_dark",
       [](RunConfig& c, const std::string& v) {
         c.params.p_dark = parse_double(v, "p_dark");
       }},
      {"channel.slice_width_rad",
       [](RunConfig& c, const std::string& v) {
         c.params.slice_width_rad = parse_double(v, "slice_width_rad");
       }},
      {"channel.f_ec",
       [](RunConfig& c, const std::string& v) {
         c.params.f_ec = parse_double(v, "f_ec");
       }},
      {"channel.misalignment",
       [](RunConfig& c, const std::string& v) {
         c.params.misalignment = parse_double(v, "misalignment");
       }},
      {"protocol.mu1",
       [](RunConfig& c, const std::string& v) {
         c.params.mu[0] = parse_double(v, "mu1");
       }},
      {"protocol.mu2",
       [](RunConfig& c, const std::string& v) {
         c.params.mu[1] = parse_double(v, "mu2");
       }},
      {"protocol.mu3",
       [](RunConfig& c, const std::string& v) {
         c.params.mu[2] = parse_double(v, "mu3");
       }},
      {"protocol.p_mu1",
       [](RunConfig& c, const std::string& v) {
         c.params.p_mu[0] = parse_double(v, "p_mu1");
       }},
      {"protocol.p_mu2",
       [](RunConfig& c, const std::string& v) {
         c.params.p_mu[1] = parse_double(v, "p_mu2");
       }},
      {"protocol.p_mu3",
       [](RunConfig& c, const std::string& v) {
         c.params.p_mu[2] = parse_double(v, "p_mu3");
       }},
      {"protocol.p_test",
       [](RunConfig& c, const std::string& v) {
         c.params.p_test = parse_double(v, "p_test");
       }},
      {"protocol.p_zc",
       [](RunConfig& c, const std::string& v) {
         c.params.p_zc = parse_double(v, "p_zc");
       }},
      {"protocol.p_z_basis",
       [](RunConfig& c, const std::string& v) {
         c.params.p_z_basis = parse_double(v, "p_z_basis");
       }},
      {"protocol.cutoff",
       [](RunConfig& c, const std::string& v) {
         c.params.cutoff = static_cast<int>(parse_double(v, "cutoff"));
       }},
      {"epsilon.eps_estimation_total",
       [](RunConfig& c, const std::string& v) {
         c.eps_estimation_total = parse_double(v, "eps_estimation_total");
       }},
      {"epsilon.eps_pa",
       [](RunConfig& c, const std::string& v) {
         c.eps_pa = parse_double(v, "eps_pa");
       }},
      {"scan.l_min_km",
       [](RunConfig& c, const std::string& v) {
         c.l_min_km = parse_double(v, "l_min_km");
       }},
      {"scan.l_max_km",
       [](RunConfig& c, const std::string& v) {
         c.l_max_km = parse_double(v, "l_max_km");
       }},
      {"scan.l_step_km",
       [](RunConfig& c, const std::string& v) {
         c.l_step_km = parse_double(v, "l_step_km");
       }},
      {"scan.sum_t_e",
       [](RunConfig& c, const std::string& v) { c.sum_t_e = parse_bool(v, "sum_t_e"); }},
      {"run.rounds",
       [](RunConfig& c, const std::string& v) {
         c.rounds = parse_double(v, "rounds");
       }},
      {"run.seed",
       [](RunConfig& c, const std::string& v) {
         c.seed = static_cast<std::uint64_t>(parse_double(v, "seed"));
       }},
      {"run.workers",
       [](RunConfig& c, const std::string& v) {
         c.workers = static_cast<int>(parse_double(v, "workers"));
       }},
      {"run.sampler",
       [](RunConfig& c, const std::string& v) {
         if (v == "batched") {
           c.sampler = sim::Sampler::Batched;
         } else if (v == "per-round") {
           c.sampler = sim::Sampler::PerRound;
         } else {
           throw std::invalid_argument("config: run.sampler must be batched or per-round");
         }
       }},
      {"run.output",
       [](RunConfig& c, const std::string& v) { c.output_path = v; }},
      {"run.format",
       [](RunConfig& c, const std::string& v) {
         if (v == "csv") {
           c.format = OutputFormat::Csv;
         } else if (v == "json") {
           c.format = OutputFormat::Json;
         } else {
           throw std::invalid_argument("config: run.format must be csv or json");
         }
       }},
  };

  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config: bad section header at line " +
                                    std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key=value at line " +
                                  std::to_string(lineno));
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "' at line " +
                                  std::to_string(lineno));
    }
    it->second(cfg, value);
  }
  cfg.budget = keyrate::EpsilonBudget::uniform(cfg.eps_estimation_total, cfg.eps_pa);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path);
  }
  return parse_config(in);
}

std::string default_config_text() {
  return R"(# tfqkd run configuration
[channel]
alpha_db_per_km = 0.2
eta_det = 0.8
p_dark = 1e-11
slice_width_rad = 0.7853981633974483   # 2*pi/8
f_ec = 1.1
misalignment = 0

[protocol]
mu1 = 0.0012
mu2 = 0.01
mu3 = 0.05
p_mu1 = 0.3333333333333333
p_mu2 = 0.3333333333333333
p_mu3 = 0.3333333333333334
p_test = 0.1
p_zc = 1.0            # set below 1 for finite-key runs
p_z_basis = 0.5
cutoff = 8

[epsilon]
eps_estimation_total = 1e-10
eps_pa = 1e-10

[scan]
l_min_km = 100
l_max_km = 700
l_step_km = 10
sum_t_e = true

[run]
rounds = 1e9
seed = 1
workers = 4
sampler = batched
format = csv
)";
}

}  // namespace tfqkd::cli
