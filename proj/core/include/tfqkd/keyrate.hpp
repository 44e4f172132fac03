#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "tfqkd/channel.hpp"
#include "tfqkd/decoy.hpp"

namespace tfqkd::keyrate {

// Named failure probabilities of the finite-key estimation chain, per
// (mu, t_E) key. eps_pe() composes them; the key is eps_s()-secret.
struct EpsilonBudget {
  double eps_pa = 1e-10;
  double eps_xc1 = 1e-10 / 27;
  double eps_ya_perp = 1e-10 / 27;
  double eps_za_perp = 1e-10 / 27;
  double eps_ya_par = 1e-10 / 27;
  double eps_za_par = 1e-10 / 27;
  double eps_c_lower = 1e-10 / 27;
  double eps_c_upper = 1e-10 / 27;
  double eps_tc = 1e-10 / 27;
  std::array<std::array<double, 3>, 3> eps_pair{};  // 9 decoy intervals, two-sided
  double eps_low_sum = 1e-10 / 27;

  // Uniform split of a total estimation failure probability over the 27
  // slots (the 9 interval epsilons count twice).
  static EpsilonBudget uniform(double eps_estimation_total = 1e-10,
                               double eps_pa = 1e-10);

  double eps_decoy_fock() const;
  double eps_xc1_est() const;  // eps_tc + eps_decoy_fock + eps_low_sum
  double eps_pe() const;
  double eps_s() const;  // sqrt(2) * sqrt(eps_pa + eps_pe)
  decoy::DecoyEpsilons decoy_eps() const {
    return {eps_pair[0][0], eps_low_sum, eps_tc};
  }
};

// Observed (or expected) tallies entering one (mu, t_E) key computation.
// All counts are restricted to matched bases (C' = 0) and, except for
// n_xc_test, to the kept phase slice.
struct CodeCounts {
  double n_za_zc = 0.0;    // Z-basis sifted key length N_sif
  double n_ya_zc = 0.0;    // Y-basis announced, Z_C chosen
  double n_y_err = 0.0;    // Y disagreement within n_ya_zc
  double n_y_coin = 0.0;   // Y coincidence within n_ya_zc
  double n_z_err = 0.0;    // Z bit errors within n_za_zc (after the t_E=2 flip)
  double n_xc_test = 0.0;  // photon-measured pool detections at (mu, mu), all phases

  double n_zc() const { return n_za_zc + n_ya_zc; }
};

// Every intermediate of the finite bound chain, for auditability.
struct BoundChain {
  double delta_c_lower = 0.0, delta_c_upper = 0.0;
  double n_code_lower = 0.0, n_code_upper = 0.0;  // slice Code totals via Chernoff
  double delta_xc1 = 0.0, delta_ya_perp = 0.0, delta_za_perp = 0.0;
  double delta_ya_par = 0.0, delta_za_par = 0.0;
  decoy::DeltaBiasResult bias;
  double lhs = 0.0;
  bool vacuous = false;  // statistics admit no bound better than N_sif
};

struct KeyRateResult {
  double mu = 0.0;
  int t_e = 1;
  double n_sif = 0.0;
  double phase_error_bound = 0.0;  // count (finite) or rate*n_sif (asymptotic)
  double e_ph = 0.0;
  double e_z = 0.0;
  double e_y = 0.0;
  double delta_bias = 0.0;
  double lambda_ec = 0.0;
  double key_length = 0.0;  // l, clamped at 0
  double rate = 0.0;        // bits per emitted pulse pair
  double eps_s = 0.0;       // 0 for the asymptotic path
  bool zero_rate = false;
  BoundChain chain;
};

// Phase error rate of the simplified bound:
//   e_ph = e_y + 4 d (1-d) (1-2 e_y) + 4 (1-2d) sqrt(d (1-d) e_y (1-e_y)),
// clamped to [0, 1].
double phase_error_rate(double e_y, double delta_bias);

// Right side of the generalized Bloch-sphere bound on 1 - 2 p_{X_C=1}:
//   (p_z - p_y)(1 - 2 p_{Z_C=1}) + 4 sqrt(p_z p_y) sqrt(p_{Z_C=1}(1 - p_{Z_C=1})).
double generalized_bloch_rhs(double p_zc1, double p_z_ab);

// Asymptotic (infinite-decoy, infinite-key) secret key rate for one
// (mu, t_E), normalized per emitted pulse pair. Composes the channel model,
// the analytic multiphoton bias and the simplified phase-error bound.
KeyRateResult asymptotic_key_rate(double mu, int t_e, const channel::PhysicalParams& p);
KeyRateResult asymptotic_key_rate(int mu_index, int t_e, const channel::PhysicalParams& p);

// Both announcements in one evaluation, sharing the Fock-yield table.
std::array<KeyRateResult, 2> asymptotic_key_rate_pair(
    int mu_index, const channel::PhysicalParams& p);

// Largest phase-error count consistent with the Azuma-corrected Bloch
// inequality, given the observed slice counts and the Code-mode X_C = 1
// count bound. `bias_bound` is the xc1_code_upper of the decoy chain.
// Setting all budget entries to 1 reproduces the asymptotic inequality.
double phase_error_upper_bound_finite(const CodeCounts& counts, double bias_bound,
                                      const EpsilonBudget& budget,
                                      const channel::PhysicalParams& p, int t_e,
                                      BoundChain* chain = nullptr);

// Finite key length for one (mu, t_E):
//   l = N_sif [1 - h(bound/N_sif)] - log2(2/eps_pa) - f_EC h(e_z) N_sif.
// `est` carries the finite-decoy Fock-count bounds for the bias chain and
// `n_rounds` normalizes the rate.
KeyRateResult finite_key_length(const CodeCounts& counts,
                                const decoy::FockCountEstimate& est,
                                const EpsilonBudget& budget,
                                const channel::PhysicalParams& p, int mu_index,
                                int t_e, double n_rounds);

}  // namespace tfqkd::keyrate
