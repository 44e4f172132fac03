#pragma once

#include <vector>

namespace tfqkd::detail {

// Minimal dense two-phase primal simplex for
//   min c.x  s.t.  A x <= b,  x >= 0
// with b allowed negative (phase 1 handles it). Sized for the decoy-state
// programs: tens of variables, tens of rows.
struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

LpResult solve_lp(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c);

}  // namespace tfqkd::detail
