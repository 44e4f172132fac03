#include "tfqkd/scan.hpp"

#include <json.hpp>

#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

namespace tfqkd::cli {

namespace {

using nlohmann::json;

json key_result_json(const keyrate::KeyRateResult& k) {
  json j;
  j["mu"] = k.mu;
  j["t_e"] = k.t_e;
  j["n_sif"] = k.n_sif;
  j["phase_error_bound"] = k.phase_error_bound;
  j["e_ph"] = k.e_ph;
  j["e_z"] = k.e_z;
  j["e_y"] = k.e_y;
  j["delta_bias"] = k.delta_bias;
  j["lambda_ec"] = k.lambda_ec;
  j["key_length"] = k.key_length;
  j["rate"] = k.rate;
  j["eps_s"] = k.eps_s;
  j["zero_rate"] = k.zero_rate;
  j["chain"]["n_code_lower"] = k.chain.n_code_lower;
  j["chain"]["n_code_upper"] = k.chain.n_code_upper;
  j["chain"]["delta_c_lower"] = k.chain.delta_c_lower;
  j["chain"]["delta_c_upper"] = k.chain.delta_c_upper;
  j["chain"]["delta_xc1"] = k.chain.delta_xc1;
  j["chain"]["delta_ya_perp"] = k.chain.delta_ya_perp;
  j["chain"]["delta_za_perp"] = k.chain.delta_za_perp;
  j["chain"]["delta_ya_par"] = k.chain.delta_ya_par;
  j["chain"]["delta_za_par"] = k.chain.delta_za_par;
  j["chain"]["lhs"] = k.chain.lhs;
  j["chain"]["vacuous"] = k.chain.vacuous;
  j["chain"]["bias"]["delta_bias"] = k.chain.bias.delta_bias;
  j["chain"]["bias"]["xc1_code_upper"] = k.chain.bias.xc1_code_upper;
  j["chain"]["bias"]["low_photon_lower"] = k.chain.bias.low_photon_lower;
  j["chain"]["bias"]["multiphoton_upper"] = k.chain.bias.multiphoton_upper;
  j["chain"]["bias"]["s_xc"] = k.chain.bias.s_xc;
  j["chain"]["bias"]["transfer"] = k.chain.bias.transfer;
  j["chain"]["bias"]["delta_tc"] = k.chain.bias.delta_tc;
  return j;
}

std::string log10_or_empty(double x) {
  if (x <= 0.0) return "";
  std::ostringstream os;
  os.precision(10);
  os << std::log10(x);
  return os.str();
}

}  // namespace

std::vector<ScanRow> rate_scan(const RunConfig& cfg) {
  cfg.validate();
  const int n = cfg.grid_points();

  auto eval_point = [&cfg](double l_km) {
    channel::PhysicalParams p = cfg.params;
    p.distance_km = l_km;
    ScanRow row;
    row.l_km = l_km;
    const auto pair = keyrate::asymptotic_key_rate_pair(0, p);
    row.t1 = pair[0];
    row.t2 = pair[1];
    row.rate_total = row.t1.rate + (cfg.sum_t_e ? row.t2.rate : 0.0);
    row.plob = channel::plob_bound(l_km, p.alpha_db_per_km);
    if (row.t1.zero_rate && row.t2.zero_rate) row.flags = "zero";
    if (row.rate_total > row.plob) {
      row.flags += row.flags.empty() ? "above_plob" : ",above_plob";
    }
    return row;
  };

  std::vector<std::future<ScanRow>> jobs;
  jobs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double l = cfg.l_min_km + i * cfg.l_step_km;
    jobs.push_back(std::async(std::launch::async, eval_point, l));
  }
  std::vector<ScanRow> rows;
  rows.reserve(n);
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "L_km,rate_total,rate_mu_t1,rate_mu_t2,plob,eZ,eY,delta_bias,flags\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line.precision(10);
    line << r.l_km << "," << log10_or_empty(r.rate_total) << ","
         << log10_or_empty(r.t1.rate) << "," << log10_or_empty(r.t2.rate) << ","
         << log10_or_empty(r.plob) << "," << r.t1.e_z << "," << r.t1.e_y << ","
         << r.t1.delta_bias << "," << r.flags << "\n";
    out << line.str();
  }
}

void write_scan_json(std::ostream& out, const std::vector<ScanRow>& rows,
                     const RunConfig& cfg) {
  json j;
  j["alpha_db_per_km"] = cfg.params.alpha_db_per_km;
  j["mu"] = cfg.params.mu[0];
  json arr = json::array();
  for (const auto& r : rows) {
    json row;
    row["L_km"] = r.l_km;
    row["rate_total"] = r.rate_total;
    row["plob"] = r.plob;
    row["flags"] = r.flags;
    row["t1"] = key_result_json(r.t1);
    row["t2"] = key_result_json(r.t2);
    arr.push_back(row);
  }
  j["rows"] = arr;
  out << j.dump(2) << "\n";
}

FiniteEvalResult finite_eval(const sim::ObservedCounts& counts,
                             const RunConfig& cfg) {
  cfg.params.validate();
  FiniteEvalResult res;
  res.eps_s = cfg.budget.eps_s();

  const decoy::IntensityModel model{cfg.params.mu, cfg.params.p_mu,
                                    cfg.params.p_test};
  for (int te = 1; te <= 2; ++te) {
    const decoy::PairCounts pairs = counts.pair_counts(te);
    const decoy::FockCountEstimate est = decoy::estimate_fock_counts_finite(
        pairs, model, cfg.budget.decoy_eps());
    for (int i = 0; i < 3; ++i) {
      const keyrate::CodeCounts cc = counts.code_counts(te, i);
      res.keys.push_back(keyrate::finite_key_length(
          cc, est, cfg.budget, cfg.params, i, te, counts.n_rounds));
      res.total_key_length += res.keys.back().key_length;
    }
  }
  return res;
}

void write_finite_json(std::ostream& out, const FiniteEvalResult& res,
                       const RunConfig& cfg) {
  json j;
  j["eps_s"] = res.eps_s;
  j["total_key_length"] = res.total_key_length;
  j["rounds"] = cfg.rounds;
  json arr = json::array();
  for (const auto& k : res.keys) arr.push_back(key_result_json(k));
  j["keys"] = arr;
  out << j.dump(2) << "\n";
}

}  // namespace tfqkd::cli
