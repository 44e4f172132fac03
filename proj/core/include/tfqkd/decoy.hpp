#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace tfqkd::decoy {

// Three-intensity configuration plus the Test-mode probability that gates
// which rounds enter the photon-number-measured pool (unequal-intensity
// rounds always do; equal-intensity rounds only in the Test mode).
struct IntensityModel {
  std::array<double, 3> mu{0.0012, 0.01, 0.05};
  std::array<double, 3> p_mu{1.0 / 3, 1.0 / 3, 1.0 / 3};
  double p_test = 0.1;

  double p_equal() const {
    return p_mu[0] * p_mu[0] + p_mu[1] * p_mu[1] + p_mu[2] * p_mu[2];
  }
  double p_unequal() const { return 1.0 - p_equal(); }
  void validate() const;
};

// Poisson photon-pair weights of a double pulse: the per-side mean is 2*mu
// because ref and sg each carry mu.
double q_fock_given_intensity(int n_a, int n_b, double mu_a, double mu_b);

// Probability that a photon-number-measured round carries the intensity
// pair (index_a, index_b).
double q_intensity_joint(int index_a, int index_b, const IntensityModel& m);

// Bayes posterior q_{mu_a, mu_b | n_a, n_b}.
double q_intensity_given_fock(int index_a, int index_b, int n_a, int n_b,
                              const IntensityModel& m);

// Per-(n_a, n_b) count estimates over a truncated grid, with a tail bucket
// for everything beyond it.
struct FockCountEstimate {
  int grid_max = 2;  // grid covers n_a, n_b in [0, grid_max]
  std::vector<double> lower, upper, point;  // (grid_max+1)^2, row-major
  double tail_upper = 0.0;  // bound on the count mass beyond the grid
  bool flagged = false;     // ill-conditioned / infeasible; bounds trivial
  double residual = 0.0;    // least-squares residual of the point solve

  int side() const { return grid_max + 1; }
  double& at(std::vector<double>& v, int na, int nb) { return v[na * side() + nb]; }
  double get(const std::vector<double>& v, int na, int nb) const {
    return v[na * side() + nb];
  }
};

// Observed photon-measured detection counts per intensity pair (9 entries,
// C'=0 and a fixed t_E throughout).
using PairCounts = std::array<std::array<double, 3>, 3>;

// Infinite-decoy point inversion: solves the square linear system
// Ex_{pair} = sum_n N_n q_{pair|n} on the (grid_max+1)^2 grid by
// non-negative least squares. Bounds equal the point estimate.
FockCountEstimate estimate_fock_counts_infinite(const PairCounts& counts,
                                                const IntensityModel& m,
                                                int grid_max = 2);

// Failure probabilities consumed by the finite-decoy chain.
struct DecoyEpsilons {
  double eps_pair = 1e-10 / 27;    // each of the 9 Hoeffding intervals (two-sided)
  double eps_low_sum = 1e-10 / 27; // second Hoeffding correction on the low-photon sum
  double eps_tc = 1e-10 / 27;      // Chernoff Test->Code transfer
};

// Three-intensity finite-size estimation: Hoeffding intervals around the 9
// expected counts, then per-cell linear programs over the truncated grid
// (variables n_a, n_b <= grid_max plus a tail bucket with coefficients in
// [0,1]) extract lower/upper count bounds.
FockCountEstimate estimate_fock_counts_finite(const PairCounts& counts,
                                              const IntensityModel& m,
                                              const DecoyEpsilons& eps,
                                              int grid_max = 6);

// Inputs of the Test -> Code bias transfer for one (mu, t_E).
struct CodeTestCounts {
  double n_xc_test = 0.0;        // photon-measured detections at (mu, mu)
  double n_zc_code_slice = 0.0;  // Z_C-basis Code detections in the kept slice
};

struct DeltaBiasResult {
  double delta_bias = 0.0;        // in [0, 1/2]
  double xc1_code_upper = 0.0;    // count bound among X_C-selected Code events
  double low_photon_lower = 0.0;  // lower bound on the low-photon part of n_xc_test
  double multiphoton_upper = 0.0; // n_xc_test minus the low-photon floor
  double s_xc = 0.0;
  double transfer = 0.0;          // (1-s)/s, with Chernoff widening if finite
  double delta_tc = 0.0;
  bool undefined = false;         // zero post-selected Code count
};

// Composes the bias chain: bound the Test-mode X_C=1 count by the
// multiphoton remainder, transfer it to the Code mode through the fair
// sampling factor, and normalize by the post-selected Code count (the
// numerator is not slice-restricted, which is exactly the 2pi/Delta
// post-selection enhancement). Pass eps == nullptr for the asymptotic
// transfer with no concentration widening.
DeltaBiasResult delta_bias(const FockCountEstimate& est, const CodeTestCounts& counts,
                           int mu_index, double p_zc, const IntensityModel& m,
                           const DecoyEpsilons* eps);

// Asymptotic shortcut used by the analytic rate path: multiphoton detection
// rate over the slice-restricted Code gain.
double delta_bias_from_rates(double multiphoton_rate, double code_gain_slice,
                             double slice_fraction);

}  // namespace tfqkd::decoy
