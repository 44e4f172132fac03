#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tfqkd/config.hpp"
#include "tfqkd/keyrate.hpp"

namespace tfqkd::cli {

// One rate-vs-distance row of the asymptotic scan, for the Code-mode
// intensity mu1.
struct ScanRow {
  double l_km = 0.0;
  double rate_total = 0.0;  // t_E = 1 (+ t_E = 2 when sum_t_e) per pulse pair
  double plob = 0.0;
  keyrate::KeyRateResult t1;
  keyrate::KeyRateResult t2;
  std::string flags;
};

// Evaluates the asymptotic key rate across the distance grid; grid points
// run concurrently, rows come back in grid order.
std::vector<ScanRow> rate_scan(const RunConfig& cfg);

// CSV with exactly the columns
//   L_km,rate_total,rate_mu_t1,rate_mu_t2,plob,eZ,eY,delta_bias,flags
// Rate and plob columns carry log10 values; zero rates leave the field
// empty rather than printing -inf.
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);
void write_scan_json(std::ostream& out, const std::vector<ScanRow>& rows,
                     const RunConfig& cfg);

struct FiniteEvalResult {
  std::vector<keyrate::KeyRateResult> keys;  // per (mu index, t_E)
  double total_key_length = 0.0;
  double eps_s = 0.0;
};

// Finite-key evaluation of observed counts: runs the decoy estimation once
// per t_E and the key-length chain for every (mu, t_E) pair.
FiniteEvalResult finite_eval(const sim::ObservedCounts& counts,
                             const RunConfig& cfg);

void write_finite_json(std::ostream& out, const FiniteEvalResult& res,
                       const RunConfig& cfg);

}  // namespace tfqkd::cli
