#include "tfqkd/decoy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simplex.hpp"
#include "tfqkd/bounds.hpp"

namespace tfqkd::decoy {

namespace {

constexpr std::array<std::pair<int, int>, 4> kLowSet{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};

// Per-pair supremum of q_{pair | n_a, n_b} over the tail region
// {max(n_a, n_b) > grid_max}. The factorials cancel inside the posterior, so
// it is monotone toward the largest intensity in each coordinate: extrema sit
// on the shell boundary or in the large-n limit, both covered below (the
// sentinel exponent reduces sub-dominant terms to exactly zero).
std::array<double, 9> tail_coefficient_sup(const IntensityModel& m, int grid_max) {
  std::array<double, 9> sup{};
  auto post = [&](int ia, int ib, double na, double nb) {
    double den = 0.0;
    std::array<double, 9> w{};
    double wmax = -1e300;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double qp = q_intensity_joint(a, b, m);
        if (qp <= 0.0 || m.mu[a] <= 0.0 || m.mu[b] <= 0.0) {
          w[a * 3 + b] = -1e300;
          continue;
        }
        w[a * 3 + b] = std::log(qp) - 2.0 * (m.mu[a] + m.mu[b]) +
                       na * std::log(2.0 * m.mu[a]) + nb * std::log(2.0 * m.mu[b]);
        wmax = std::max(wmax, w[a * 3 + b]);
      }
    }
    for (double lw : w) den += lw > -1e299 ? std::exp(lw - wmax) : 0.0;
    const double lw = w[ia * 3 + ib];
    return lw > -1e299 ? std::exp(lw - wmax) / den : 0.0;
  };
  const int shell = 60;
  const double sentinel = 1000.0;
  std::vector<std::pair<double, double>> probes;
  for (int x = 0; x <= shell; ++x) {
    for (int y = 0; y <= shell; ++y) {
      if (std::max(x, y) > grid_max) probes.emplace_back(x, y);
    }
  }
  for (int v = 0; v <= shell; ++v) {
    probes.emplace_back(sentinel, v);
    probes.emplace_back(v, sentinel);
  }
  probes.emplace_back(sentinel, sentinel);
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      double s = 0.0;
      for (const auto& [x, y] : probes) s = std::max(s, post(ia, ib, x, y));
      sup[ia * 3 + ib] = s;
    }
  }
  return sup;
}

// Design matrix A[pair][cell] = q_{mu pair | n cell} on the (grid+1)^2 grid.
Eigen::MatrixXd posterior_matrix(const IntensityModel& m, int grid_max) {
  const int side = grid_max + 1;
  Eigen::MatrixXd a(9, side * side);
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      for (int na = 0; na < side; ++na) {
        for (int nb = 0; nb < side; ++nb) {
          a(ia * 3 + ib, na * side + nb) = q_intensity_given_fock(ia, ib, na, nb, m);
        }
      }
    }
  }
  return a;
}

// Lawson-Hanson non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * a.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff();

  for (int outer = 0; outer < 4 * n; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (y - a * x);
    int best = -1;
    double bw = tol;
    for (int i = 0; i < n; ++i) {
      if (!passive[i] && w(i) > bw) {
        bw = w(i);
        best = i;
      }
    }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < 4 * n; ++inner) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i) {
        if (passive[i]) idx.push_back(i);
      }
      Eigen::MatrixXd ap(a.rows(), idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) ap.col(k) = a.col(idx[k]);
      const Eigen::VectorXd z = ap.colPivHouseholderQr().solve(y);

      bool ok = true;
      for (std::size_t k = 0; k < idx.size(); ++k) ok = ok && z(k) > 0.0;
      if (ok) {
        x.setZero();
        for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(k);
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (z(k) <= 0.0) {
          const double xi = x(idx[k]);
          alpha = std::min(alpha, xi / (xi - z(k)));
        }
      }
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const double nv = x(idx[k]) + alpha * (z(k) - x(idx[k]));
        x(idx[k]) = nv;
        if (nv <= 1e-14 * y.cwiseAbs().maxCoeff()) {
          x(idx[k]) = 0.0;
          passive[idx[k]] = false;
        }
      }
    }
  }
  return x;
}

}  // namespace

void IntensityModel::validate() const {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (mu[i] < 0.0) throw std::invalid_argument("IntensityModel: negative intensity");
    if (p_mu[i] < 0.0 || p_mu[i] > 1.0) {
      throw std::invalid_argument("IntensityModel: p_mu outside [0,1]");
    }
    sum += p_mu[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("IntensityModel: p_mu must sum to 1");
  }
  if (mu[0] == mu[1] || mu[1] == mu[2] || mu[0] == mu[2]) {
    throw std::invalid_argument("IntensityModel: intensities must be distinct");
  }
  if (p_test < 0.0 || p_test > 1.0) {
    throw std::invalid_argument("IntensityModel: p_test outside [0,1]");
  }
}

double q_fock_given_intensity(int n_a, int n_b, double mu_a, double mu_b) {
  if (n_a < 0 || n_b < 0 || mu_a < 0.0 || mu_b < 0.0) {
    throw std::invalid_argument("q_fock_given_intensity: invalid arguments");
  }
  const double la = 2.0 * mu_a, lb = 2.0 * mu_b;
  double lw = -la - lb;
  if (n_a > 0) lw += n_a * std::log(la) - std::lgamma(n_a + 1.0);
  if (n_b > 0) lw += n_b * std::log(lb) - std::lgamma(n_b + 1.0);
  if ((n_a > 0 && la == 0.0) || (n_b > 0 && lb == 0.0)) return 0.0;
  return std::exp(lw);
}

double q_intensity_joint(int index_a, int index_b, const IntensityModel& m) {
  if (index_a < 0 || index_a > 2 || index_b < 0 || index_b > 2) {
    throw std::invalid_argument("q_intensity_joint: index outside {0,1,2}");
  }
  const double denom = m.p_unequal() + m.p_equal() * m.p_test;
  const double joint = m.p_mu[index_a] * m.p_mu[index_b];
  return (index_a == index_b ? joint * m.p_test : joint) / denom;
}

double q_intensity_given_fock(int index_a, int index_b, int n_a, int n_b,
                              const IntensityModel& m) {
  double qn = 0.0;
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      qn += q_fock_given_intensity(n_a, n_b, m.mu[ia], m.mu[ib]) *
            q_intensity_joint(ia, ib, m);
    }
  }
  if (qn <= 0.0) {
    throw std::domain_error("q_intensity_given_fock: zero marginal");
  }
  return q_fock_given_intensity(n_a, n_b, m.mu[index_a], m.mu[index_b]) *
         q_intensity_joint(index_a, index_b, m) / qn;
}

FockCountEstimate estimate_fock_counts_infinite(const PairCounts& counts,
                                                const IntensityModel& m,
                                                int grid_max) {
  m.validate();
  FockCountEstimate est;
  est.grid_max = grid_max;
  const int side = grid_max + 1;
  est.lower.assign(side * side, 0.0);
  est.upper.assign(side * side, 0.0);
  est.point.assign(side * side, 0.0);

  double total = 0.0;
  Eigen::VectorXd y(9);
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      if (counts[ia][ib] < 0.0) {
        throw std::invalid_argument("estimate_fock_counts_infinite: negative count");
      }
      y(ia * 3 + ib) = counts[ia][ib];
      total += counts[ia][ib];
    }
  }
  if (total == 0.0) {
    return est;  // all-zero data inverts to all-zero counts
  }

  const Eigen::MatrixXd a = posterior_matrix(m, grid_max);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const double cond = svd.singularValues()(0) /
                      std::max(svd.singularValues()(svd.singularValues().size() - 1),
                               1e-300);
  est.flagged = cond > 1e12;

  const Eigen::VectorXd ys = y / total;
  const Eigen::VectorXd x = nnls(a, ys);
  for (int i = 0; i < side * side; ++i) {
    est.point[i] = x(i) * total;
  }
  est.residual = (a * x - ys).norm() * total;
  est.lower = est.point;
  est.upper = est.point;
  return est;
}

FockCountEstimate estimate_fock_counts_finite(const PairCounts& counts,
                                              const IntensityModel& m,
                                              const DecoyEpsilons& eps,
                                              int grid_max) {
  m.validate();
  const int side = grid_max + 1;
  const int cells = side * side;
  // Variables: cells, tail count, 9 per-pair tail contributions.
  const int nv = cells + 1 + 9;
  const int tail_var = cells;

  FockCountEstimate est;
  est.grid_max = grid_max;
  est.lower.assign(cells, 0.0);
  est.upper.assign(cells, 0.0);
  est.point.assign(cells, 0.0);

  double total = 0.0;
  for (const auto& row : counts) {
    for (double c : row) {
      if (c < 0.0) {
        throw std::invalid_argument("estimate_fock_counts_finite: negative count");
      }
      total += c;
    }
  }

  const Eigen::MatrixXd a = posterior_matrix(m, grid_max);
  {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    est.flagged = svd.singularValues()(0) / std::max(smin, 1e-300) > 1e12;
  }

  const double scale = std::max(total, 1.0);
  const std::array<double, 9> tail_sup = tail_coefficient_sup(m, grid_max);
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  double interval_hi_sum = 0.0, interval_lo_sum = 0.0;
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      const int pr = ia * 3 + ib;
      const double nobs = counts[ia][ib];
      const double width =
          nobs >= 1.0
              ? nobs * bounds::hoeffding_delta(static_cast<std::int64_t>(nobs),
                                               eps.eps_pair)
              : 0.0;
      const double hi = (nobs + width) / scale;
      const double lo = std::max(0.0, nobs - width) / scale;
      interval_hi_sum += hi;
      interval_lo_sum += lo;

      std::vector<double> up(nv, 0.0), dn(nv, 0.0);
      for (int c = 0; c < cells; ++c) {
        up[c] = a(pr, c);
        dn[c] = -a(pr, c);
      }
      up[cells + 1 + pr] = 1.0;  // tail contribution t_pair
      dn[cells + 1 + pr] = -1.0;
      rows.push_back(std::move(up));
      rhs.push_back(hi);
      rows.push_back(std::move(dn));
      rhs.push_back(-lo);
      // t_pair <= sup_tail(q_{pair|n}) * tail count
      std::vector<double> cap(nv, 0.0);
      cap[cells + 1 + pr] = 1.0;
      cap[tail_var] = -tail_sup[pr];
      rows.push_back(std::move(cap));
      rhs.push_back(0.0);
    }
  }
  // The posteriors sum to one over pairs: tail contributions add up to the
  // tail count, and the grand total obeys the summed intervals.
  {
    std::vector<double> up(nv, 0.0), dn(nv, 0.0);
    for (int pr = 0; pr < 9; ++pr) {
      up[cells + 1 + pr] = 1.0;
      dn[cells + 1 + pr] = -1.0;
    }
    up[tail_var] = -1.0;
    dn[tail_var] = 1.0;
    rows.push_back(std::move(up));
    rhs.push_back(0.0);
    rows.push_back(std::move(dn));
    rhs.push_back(0.0);
  }
  {
    std::vector<double> up(nv, 0.0), dn(nv, 0.0);
    for (int c = 0; c < cells; ++c) {
      up[c] = 1.0;
      dn[c] = -1.0;
    }
    up[tail_var] = 1.0;
    dn[tail_var] = -1.0;
    rows.push_back(std::move(up));
    rhs.push_back(interval_hi_sum);
    rows.push_back(std::move(dn));
    rhs.push_back(-interval_lo_sum);
  }

  bool infeasible = false;
  std::vector<double> cvec(nv, 0.0);
  for (int c = 0; c < cells && !infeasible; ++c) {
    cvec.assign(nv, 0.0);
    cvec[c] = 1.0;
    const auto lo = detail::solve_lp(rows, rhs, cvec);
    cvec[c] = -1.0;
    const auto hi = detail::solve_lp(rows, rhs, cvec);
    if (lo.status != detail::LpResult::Status::Optimal ||
        hi.status != detail::LpResult::Status::Optimal) {
      infeasible = true;
      break;
    }
    est.lower[c] = std::max(0.0, lo.objective * scale);
    est.upper[c] = -hi.objective * scale;
    est.point[c] = 0.5 * (est.lower[c] + est.upper[c]);
  }
  if (infeasible) {
    const double cap = interval_hi_sum * scale;
    for (int c = 0; c < cells; ++c) {
      est.lower[c] = 0.0;
      est.upper[c] = cap;
      est.point[c] = 0.0;
    }
    est.flagged = true;
    est.tail_upper = cap;
    return est;
  }
  {
    cvec.assign(nv, 0.0);
    cvec[tail_var] = -1.0;
    const auto hi = detail::solve_lp(rows, rhs, cvec);
    est.tail_upper = hi.status == detail::LpResult::Status::Optimal
                         ? -hi.objective * scale
                         : interval_hi_sum * scale;
  }
  return est;
}

DeltaBiasResult delta_bias(const FockCountEstimate& est, const CodeTestCounts& counts,
                           int mu_index, double p_zc, const IntensityModel& m,
                           const DecoyEpsilons* eps) {
  if (mu_index < 0 || mu_index > 2) {
    throw std::invalid_argument("delta_bias: mu index outside {0,1,2}");
  }
  if (m.p_test <= 0.0 || m.p_test >= 1.0) {
    throw std::invalid_argument("delta_bias: Test->Code transfer needs p_test in (0,1)");
  }
  const double p_xc = 1.0 - p_zc;
  const double p_code = 1.0 - m.p_test;

  DeltaBiasResult r;
  r.s_xc = m.p_test / (m.p_test + p_code * p_xc);

  // Lower-bound the low-photon content of the observed pool at (mu, mu).
  double low_lower = 0.0, low_lower_raw = 0.0, low_upper = 0.0;
  for (const auto& [na, nb] : kLowSet) {
    if (na <= est.grid_max && nb <= est.grid_max) {
      const double q = q_intensity_given_fock(mu_index, mu_index, na, nb, m);
      low_lower += est.get(est.lower, na, nb) * q;
      low_lower_raw += est.get(est.lower, na, nb);
      low_upper += est.get(est.upper, na, nb);
    }
  }
  if (eps != nullptr) {
    if (low_lower_raw >= 1.0) {
      low_lower -= low_upper * bounds::hoeffding_delta(
                                   static_cast<std::int64_t>(low_lower_raw),
                                   eps->eps_low_sum);
    } else {
      low_lower = 0.0;
    }
  }
  r.low_photon_lower = std::max(0.0, low_lower);
  r.multiphoton_upper = std::max(0.0, counts.n_xc_test - r.low_photon_lower);

  double factor;  // (p_zc / p_xc) * transfer, kept composed so p_zc = 1 works
  if (eps == nullptr) {
    r.transfer = p_xc > 0.0 ? (1.0 - r.s_xc) / r.s_xc : 0.0;
    factor = p_zc * p_code / m.p_test;
  } else {
    if (p_xc <= 0.0) {
      throw std::invalid_argument("delta_bias: finite transfer requires p_zc < 1");
    }
    const auto tc = bounds::chernoff_delta(
        1.0 - r.s_xc,
        std::max<std::int64_t>(1, static_cast<std::int64_t>(r.multiphoton_upper)),
        eps->eps_tc, bounds::TailSide::Upper);
    r.delta_tc = tc.delta;
    const double denom = r.s_xc - r.delta_tc;
    if (denom <= 0.0) {
      r.transfer = std::numeric_limits<double>::infinity();
    } else {
      r.transfer = (1.0 - r.s_xc + r.delta_tc) / denom;
    }
    factor = (p_zc / p_xc) * r.transfer;
  }
  r.xc1_code_upper = r.transfer * r.multiphoton_upper;

  if (counts.n_zc_code_slice <= 0.0) {
    r.undefined = true;
    r.delta_bias = 0.5;
    return r;
  }
  const double raw = factor * r.multiphoton_upper / counts.n_zc_code_slice;
  r.delta_bias = std::clamp(raw, 0.0, 0.5);
  return r;
}

double delta_bias_from_rates(double multiphoton_rate, double code_gain_slice,
                             double slice_fraction) {
  if (code_gain_slice <= 0.0 || slice_fraction <= 0.0) {
    throw std::invalid_argument("delta_bias_from_rates: empty post-selected set");
  }
  return std::clamp(multiphoton_rate / (slice_fraction * code_gain_slice), 0.0, 0.5);
}

}  // namespace tfqkd::decoy
