#include "tfqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tfqkd/bounds.hpp"

namespace tfqkd::keyrate {

namespace {

double coin_p_z_ab(const channel::PhysicalParams& p) {
  const double zz = p.p_z_basis * p.p_z_basis;
  const double yy = p.p_y_basis() * p.p_y_basis();
  return zz / (zz + yy);
}

double azuma_or_zero(double n, double eps) {
  if (eps >= 1.0) return 0.0;
  return bounds::azuma_delta(std::max<std::int64_t>(1, static_cast<std::int64_t>(n)),
                             eps);
}

// Multiphoton detection rates sum_{(na,nb) not low} q_{na,nb|mu,mu} Y(t_e)
// for both announcements, with all Poisson mass outside the computed cells
// bounded by yield 1.
std::pair<double, double> multiphoton_rates(double mu,
                                            const channel::PhysicalParams& p) {
  const int grid = std::min(6, p.cutoff);
  const channel::YieldTable yields(p, grid);
  double known_mass = 0.0;
  double r1 = 0.0, r2 = 0.0;
  for (int na = 0; na <= grid; ++na) {
    for (int nb = 0; nb <= grid; ++nb) {
      const double q = decoy::q_fock_given_intensity(na, nb, mu, mu);
      known_mass += q;
      if (channel::is_low_photon(na, nb)) continue;
      const auto& y = yields.at(na, nb);
      r1 += q * y.y_t1;
      r2 += q * y.y_t2;
    }
  }
  const double tail = std::max(0.0, 1.0 - known_mass);  // bounded by unit yield
  return {r1 + tail, r2 + tail};
}

}  // namespace

EpsilonBudget EpsilonBudget::uniform(double eps_estimation_total, double eps_pa) {
  if (eps_estimation_total <= 0.0 || eps_estimation_total > 1.0 || eps_pa <= 0.0) {
    throw std::invalid_argument("EpsilonBudget: totals must be in (0,1]");
  }
  EpsilonBudget b;
  const double e = eps_estimation_total / 27.0;  // 5 + 2 + 1 + 2*9 + 1 slots
  b.eps_pa = eps_pa;
  b.eps_xc1 = b.eps_ya_perp = b.eps_za_perp = b.eps_ya_par = b.eps_za_par = e;
  b.eps_c_lower = b.eps_c_upper = e;
  b.eps_tc = e;
  for (auto& row : b.eps_pair) row.fill(e);
  b.eps_low_sum = e;
  return b;
}

double EpsilonBudget::eps_decoy_fock() const {
  double s = 0.0;
  for (const auto& row : eps_pair) {
    for (double e : row) s += 2.0 * e;
  }
  return s;
}

double EpsilonBudget::eps_xc1_est() const {
  return eps_tc + eps_decoy_fock() + eps_low_sum;
}

double EpsilonBudget::eps_pe() const {
  return eps_xc1 + eps_ya_perp + eps_za_perp + eps_ya_par + eps_za_par +
         eps_c_lower + eps_c_upper + eps_xc1_est();
}

double EpsilonBudget::eps_s() const { return std::sqrt(2.0) * std::sqrt(eps_pa + eps_pe()); }

double phase_error_rate(double e_y, double delta_bias) {
  if (e_y < 0.0 || e_y > 1.0 || delta_bias < 0.0 || delta_bias > 0.5) {
    throw std::invalid_argument("phase_error_rate: arguments outside domain");
  }
  const double d = delta_bias;
  const double e = e_y + 4.0 * d * (1.0 - d) * (1.0 - 2.0 * e_y) +
                   4.0 * (1.0 - 2.0 * d) *
                       std::sqrt(d * (1.0 - d) * e_y * (1.0 - e_y));
  return std::clamp(e, 0.0, 1.0);
}

double generalized_bloch_rhs(double p_zc1, double p_z_ab) {
  if (p_zc1 < 0.0 || p_zc1 > 1.0 || p_z_ab < 0.0 || p_z_ab > 1.0) {
    throw std::invalid_argument("generalized_bloch_rhs: arguments outside [0,1]");
  }
  const double p_y_ab = 1.0 - p_z_ab;
  return (p_z_ab - p_y_ab) * (1.0 - 2.0 * p_zc1) +
         4.0 * std::sqrt(p_z_ab * p_y_ab) * std::sqrt(p_zc1 * (1.0 - p_zc1));
}

std::array<KeyRateResult, 2> asymptotic_key_rate_pair(
    int mu_index, const channel::PhysicalParams& p) {
  if (mu_index < 0 || mu_index > 2) {
    throw std::invalid_argument("asymptotic_key_rate: mu index outside {0,1,2}");
  }
  p.validate();
  const double mu = p.mu[mu_index];
  const auto [multi_t1, multi_t2] = multiphoton_rates(mu, p);

  std::array<KeyRateResult, 2> out;
  for (int t_e = 1; t_e <= 2; ++t_e) {
    KeyRateResult& r = out[t_e - 1];
    r.mu = mu;
    r.t_e = t_e;

    const auto rates = channel::code_mode_rates(mu, t_e, p);
    r.e_z = rates.e_z;
    r.e_y = rates.e_y;

    r.delta_bias = decoy::delta_bias_from_rates(t_e == 1 ? multi_t1 : multi_t2,
                                                rates.gain, p.slice_fraction());
    r.e_ph = phase_error_rate(r.e_y, r.delta_bias);

    const double p_both_z = p.p_z_basis * p.p_z_basis;
    const double sift = p.p_mu[mu_index] * p.p_mu[mu_index] * p.p_code() * p.p_zc *
                        p_both_z * p.slice_fraction();
    r.n_sif = sift * rates.gain;  // per emitted pulse pair
    r.phase_error_bound = r.e_ph * r.n_sif;
    r.lambda_ec = p.f_ec * bounds::binary_entropy(r.e_z) * r.n_sif;

    if (r.e_ph >= 0.5 || r.n_sif <= 0.0) {
      r.zero_rate = true;
      continue;
    }
    const double l = r.n_sif * (1.0 - bounds::binary_entropy(r.e_ph)) - r.lambda_ec;
    r.rate = std::max(0.0, l);
    r.zero_rate = r.rate == 0.0;
  }
  return out;
}

KeyRateResult asymptotic_key_rate(int mu_index, int t_e,
                                  const channel::PhysicalParams& p) {
  if (t_e != 1 && t_e != 2) {
    throw std::invalid_argument("asymptotic_key_rate: t_e must be 1 or 2");
  }
  return asymptotic_key_rate_pair(mu_index, p)[t_e - 1];
}

KeyRateResult asymptotic_key_rate(double mu, int t_e, const channel::PhysicalParams& p) {
  channel::PhysicalParams q = p;
  q.mu[0] = mu;
  if (q.mu[1] == mu || q.mu[2] == mu) {
    throw std::invalid_argument("asymptotic_key_rate: mu collides with decoy levels");
  }
  return asymptotic_key_rate(0, t_e, q);
}

double phase_error_upper_bound_finite(const CodeCounts& counts, double bias_bound,
                                      const EpsilonBudget& budget,
                                      const channel::PhysicalParams& p, int t_e,
                                      BoundChain* chain_out) {
  if (t_e != 1 && t_e != 2) {
    throw std::invalid_argument("phase_error_upper_bound_finite: t_e must be 1 or 2");
  }
  BoundChain chain;
  const double cap = counts.n_za_zc;
  auto finish = [&](double value, bool vacuous) {
    chain.vacuous = vacuous;
    if (chain_out != nullptr) *chain_out = chain;
    return value;
  };

  const double t_total = counts.n_zc();
  if (t_total < 1.0 || cap <= 0.0) {
    return finish(cap, true);
  }
  const double p_zc = p.p_zc;
  const double p_xc = p.p_xc();

  // Slice Code totals (Z_C and X_C choices together) from the observed Z_C
  // count via Chernoff on the basis-choice Bernoulli trials.
  double n_xc_lower = 0.0, n_xc_upper = 0.0;
  if (p_xc > 0.0) {
    const auto n_trials = static_cast<std::int64_t>(t_total);
    if (budget.eps_c_lower < 1.0) {
      chain.delta_c_lower =
          bounds::chernoff_delta(p_zc, n_trials, budget.eps_c_lower,
                                 bounds::TailSide::Upper)
              .delta;
    }
    if (budget.eps_c_upper < 1.0) {
      chain.delta_c_upper =
          bounds::chernoff_delta(p_xc, n_trials, budget.eps_c_upper,
                                 bounds::TailSide::Lower)
              .delta;
    }
    n_xc_lower = std::max(0.0, (1.0 - p_zc - chain.delta_c_lower) /
                                   (p_zc + chain.delta_c_lower) * t_total);
    const double denom = p_zc - chain.delta_c_upper;
    if (denom <= 0.0) {
      return finish(cap, true);
    }
    n_xc_upper = (1.0 - p_zc + chain.delta_c_upper) / denom * t_total;
  }
  chain.n_code_lower = t_total + n_xc_lower;
  chain.n_code_upper = t_total + n_xc_upper;

  chain.delta_xc1 = azuma_or_zero(chain.n_code_lower, budget.eps_xc1);
  chain.delta_ya_perp = azuma_or_zero(chain.n_code_lower, budget.eps_ya_perp);
  chain.delta_za_perp = azuma_or_zero(chain.n_code_lower, budget.eps_za_perp);
  chain.delta_ya_par = azuma_or_zero(chain.n_code_lower, budget.eps_ya_par);
  chain.delta_za_par = azuma_or_zero(chain.n_code_lower, budget.eps_za_par);

  if (p_xc <= 0.0 && (bias_bound > 0.0 || chain.delta_xc1 > 0.0)) {
    // No X_C sampling: the bias term cannot be normalized.
    return finish(cap, true);
  }
  const double bias_term =
      p_xc > 0.0
          ? 2.0 * (p_zc / p_xc) * (bias_bound + chain.n_code_upper * chain.delta_xc1)
          : 0.0;
  chain.lhs = p_zc * chain.n_code_lower - bias_term;

  const double pz_ab = coin_p_z_ab(p);
  const double py_ab = 1.0 - pz_ab;
  const double mid_coeff = 2.0 * (pz_ab - py_ab);
  // Pessimistic substitutions for the quantities that are only bounded.
  const double n_tilde = (pz_ab <= py_ab) ? chain.n_code_upper : chain.n_code_lower;
  const double n_code_mid = (mid_coeff >= 0.0) ? chain.n_code_upper : chain.n_code_lower;
  const double mid = mid_coeff * (p_zc * n_code_mid -
                                  (counts.n_ya_zc + n_tilde * chain.delta_ya_perp));

  const double sq = 4.0 * std::sqrt(pz_ab * py_ab);
  const double b_perp = counts.n_y_err + chain.n_code_upper * chain.delta_ya_perp;
  const double b_par = counts.n_y_coin + chain.n_code_upper * chain.delta_ya_par;
  const double c_perp = chain.n_code_upper * chain.delta_za_perp;
  const double c_par = chain.n_code_upper * chain.delta_za_par;

  // t_E = 1: the unknown is the Y-disagreement count among Z_A events;
  // t_E = 2: the Y-coincidence count. The complement shares N_{Z_A, Z_C}.
  auto rhs = [&](double x) {
    const double other = cap - x;
    const double term_unknown =
        (t_e == 1) ? sq * std::sqrt(b_perp * (x + c_perp))
                   : sq * std::sqrt(b_par * (x + c_par));
    const double term_other =
        (t_e == 1) ? sq * std::sqrt(b_par * (other + c_par))
                   : sq * std::sqrt(b_perp * (other + c_perp));
    return mid + term_unknown + term_other;
  };
  auto g = [&](double x) { return rhs(x) - chain.lhs; };

  if (g(cap) >= 0.0) {
    return finish(cap, true);
  }
  // rhs is concave in x: locate its maximum, then bisect the descending
  // branch for the largest admissible count.
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g(m1) < g(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double xm = 0.5 * (lo + hi);
  if (g(xm) < 0.0) {
    return finish(cap, true);  // no count satisfies the inequality
  }
  lo = xm;
  hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, cap); ++it) {
    const double mid_x = 0.5 * (lo + hi);
    if (g(mid_x) >= 0.0) {
      lo = mid_x;
    } else {
      hi = mid_x;
    }
  }
  return finish(lo, false);
}

KeyRateResult finite_key_length(const CodeCounts& counts,
                                const decoy::FockCountEstimate& est,
                                const EpsilonBudget& budget,
                                const channel::PhysicalParams& p, int mu_index,
                                int t_e, double n_rounds) {
  p.validate();
  if (n_rounds <= 0.0) {
    throw std::invalid_argument("finite_key_length: need n_rounds > 0");
  }
  KeyRateResult r;
  r.mu = p.mu[mu_index];
  r.t_e = t_e;
  r.n_sif = counts.n_za_zc;
  r.eps_s = budget.eps_s();

  if (r.n_sif <= 0.0) {
    r.zero_rate = true;
    return r;
  }
  r.e_z = counts.n_z_err / counts.n_za_zc;
  r.e_y = counts.n_ya_zc > 0.0
              ? (t_e == 1 ? counts.n_y_err : counts.n_y_coin) / counts.n_ya_zc
              : 0.0;

  const decoy::IntensityModel model{p.mu, p.p_mu, p.p_test};
  const decoy::DecoyEpsilons deps = budget.decoy_eps();
  const decoy::CodeTestCounts ct{counts.n_xc_test, counts.n_zc()};
  r.chain.bias = decoy::delta_bias(est, ct, mu_index, p.p_zc, model, &deps);
  r.delta_bias = r.chain.bias.delta_bias;

  BoundChain chain;
  const double bound = phase_error_upper_bound_finite(
      counts, r.chain.bias.xc1_code_upper, budget, p, t_e, &chain);
  chain.bias = r.chain.bias;
  r.chain = chain;
  r.phase_error_bound = bound;

  const double e_ph_hat = bound / r.n_sif;
  r.e_ph = e_ph_hat;
  r.lambda_ec = p.f_ec * bounds::binary_entropy(r.e_z) * r.n_sif;
  if (e_ph_hat >= 0.5) {
    r.zero_rate = true;
    return r;
  }
  const double l = r.n_sif * (1.0 - bounds::binary_entropy(e_ph_hat)) -
                   std::log2(2.0 / budget.eps_pa) - r.lambda_ec;
  r.key_length = std::max(0.0, l);
  r.rate = r.key_length / n_rounds;
  r.zero_rate = r.key_length == 0.0;
  return r;
}

}  // namespace tfqkd::keyrate
