#include "simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tfqkd::detail {

namespace {

constexpr double kEps = 1e-9;

// Tableau with slack (and phase-1 artificial) columns appended. Bland's rule
// keeps the iteration finite.
struct Tableau {
  int rows, cols;                    // constraint rows, total columns (incl. rhs)
  std::vector<std::vector<double>> t;
  std::vector<int> basis;

  double& at(int r, int c) { return t[r][c]; }

  void pivot(int pr, int pc) {
    const double pv = t[pr][pc];
    for (int c = 0; c < cols; ++c) t[pr][c] /= pv;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = t[r][pc];
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) t[r][c] -= f * t[pr][c];
    }
    basis[pr] = pc;
  }

  // Returns false when the objective row has no negative reduced cost.
  bool iterate() {
    int pc = -1;
    for (int c = 0; c < cols - 1; ++c) {
      if (t[rows][c] < -kEps) {
        pc = c;
        break;  // Bland: smallest index
      }
    }
    if (pc < 0) return false;
    int pr = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      if (t[r][pc] > kEps) {
        const double ratio = t[r][cols - 1] / t[r][pc];
        if (ratio < best - kEps ||
            (ratio < best + kEps && (pr < 0 || basis[r] < basis[pr]))) {
          best = ratio;
          pr = r;
        }
      }
    }
    if (pr < 0) throw std::runtime_error("lp: unbounded direction");
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<double>>& a,
                  const std::vector<double>& b, const std::vector<double>& c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());

  // Columns: n structural + m slack + m artificial + rhs.
  Tableau tb;
  tb.rows = m;
  tb.cols = n + 2 * m + 1;
  tb.t.assign(m + 1, std::vector<double>(tb.cols, 0.0));
  tb.basis.assign(m, 0);

  for (int r = 0; r < m; ++r) {
    double rhs = b[r];
    double sgn = 1.0;
    if (rhs < 0.0) {  // flip so rhs >= 0; slack coefficient flips with it
      sgn = -1.0;
      rhs = -rhs;
    }
    for (int j = 0; j < n; ++j) tb.t[r][j] = sgn * a[r][j];
    tb.t[r][n + r] = sgn;  // slack
    tb.t[r][tb.cols - 1] = rhs;
    if (sgn > 0.0) {
      tb.basis[r] = n + r;  // slack feasible as-is
    } else {
      tb.t[r][n + m + r] = 1.0;  // artificial
      tb.basis[r] = n + m + r;
    }
  }

  // Phase 1: minimize the artificial sum.
  bool need_phase1 = false;
  for (int r = 0; r < m; ++r) need_phase1 = need_phase1 || (tb.basis[r] >= n + m);
  if (need_phase1) {
    for (int j = n + m; j < n + 2 * m; ++j) tb.t[m][j] = 1.0;
    // Zero the reduced costs of the basic artificial variables.
    for (int r = 0; r < m; ++r) {
      if (tb.basis[r] >= n + m) {
        for (int cidx = 0; cidx < tb.cols; ++cidx) {
          tb.t[m][cidx] -= tb.t[r][cidx];
        }
      }
    }
    try {
      while (tb.iterate()) {
      }
    } catch (const std::runtime_error&) {
      return {LpResult::Status::Infeasible, 0.0, {}};
    }
    if (tb.t[m][tb.cols - 1] < -1e-7) {
      return {LpResult::Status::Infeasible, 0.0, {}};
    }
    // Drive any artificial variable still basic out of the basis.
    for (int r = 0; r < m; ++r) {
      if (tb.basis[r] >= n + m) {
        int pc = -1;
        for (int j = 0; j < n + m; ++j) {
          if (std::abs(tb.t[r][j]) > kEps) {
            pc = j;
            break;
          }
        }
        if (pc >= 0) tb.pivot(r, pc);
      }
    }
  }

  // Disable artificial columns and install the phase-2 objective.
  for (int r = 0; r <= m; ++r) {
    for (int j = n + m; j < n + 2 * m; ++j) tb.t[r][j] = 0.0;
  }
  for (int cidx = 0; cidx < tb.cols; ++cidx) tb.t[m][cidx] = 0.0;
  for (int j = 0; j < n; ++j) tb.t[m][j] = c[j];
  for (int r = 0; r < m; ++r) {
    const int bj = tb.basis[r];
    const double f = tb.t[m][bj];
    if (f != 0.0) {
      for (int cidx = 0; cidx < tb.cols; ++cidx) {
        tb.t[m][cidx] -= f * tb.t[r][cidx];
      }
    }
  }

  LpResult res;
  try {
    while (tb.iterate()) {
    }
  } catch (const std::runtime_error&) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }

  res.status = LpResult::Status::Optimal;
  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (tb.basis[r] < n) res.x[tb.basis[r]] = tb.t[r][tb.cols - 1];
  }
  res.objective = -tb.t[m][tb.cols - 1];
  return res;
}

}  // namespace tfqkd::detail
