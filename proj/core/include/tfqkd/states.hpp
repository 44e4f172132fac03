#pragma once

#include <optional>

#include "tfqkd/fock.hpp"

namespace tfqkd::states {

using fock::cplx;
using fock::FockVector;

// Encoding basis for one party. Bit j maps to the signal-pulse phase offset
// j*pi in Z and 3*pi/2 - j*pi in Y.
enum class SideBasis { Z, Y };

// Quantum-coin basis weights derived from the parties' basis-choice
// probabilities: p_z_ab = pZA*pZB / (pZA*pZB + pYA*pYB).
struct CoinDecomposition {
  double p_z_ab = 0.5;
  double p_y_ab = 0.5;

  static CoinDecomposition from_basis_probs(double p_za, double p_zb);
};

// Qubit basis vectors in the computational (X) basis used for the A/B
// registers: |0Z> = (|0X>+|1X>)/sqrt2, |0Y> = (|0X>+i|1X>)/sqrt2, etc.
FockVector qubit_z(int bit);
FockVector qubit_y(int bit);

// One party's entangled qubit (x) double-pulse state at global phase theta:
//   Z: (|0Z>|a>_ref|a>_sg + |1Z>|a>_ref|-a>_sg)/sqrt2,        a = e^{i theta} sqrt(mu)
//   Y: (|1Y>|a>_ref|ia>_sg + |0Y>|a>_ref|-ia>_sg)/sqrt2
// Factor order: [qubit, ref, sg].
FockVector encoded_pair_state(SideBasis basis, double theta, double mu, int cutoff);

// The joint coin state on [C, A, refA, sgA, B, refB, sgB] for coinciding
// basis choices:
//   sqrt(p_z_ab)|0Z>_C |Psi_Z(thetaA)> |Psi_Z(thetaB)>
// + sqrt(p_y_ab)|1Z>_C |Psi_Y(thetaA)> |Psi_Y(thetaB)>.
FockVector coin_state(double theta_a, double theta_b, double mu,
                      const CoinDecomposition& probs, int cutoff);

// Indices of the coin-state factors.
struct CoinStateFactors {
  static constexpr int coin = 0;
  static constexpr int qubit_a = 1;
  static constexpr int ref_a = 2;
  static constexpr int sg_a = 3;
  static constexpr int qubit_b = 4;
  static constexpr int ref_b = 5;
  static constexpr int sg_b = 6;
};

// Probability of the coin measuring X_C = 1 conditioned on n_a photons in
// (refA, sgA) and n_b photons in (refB, sgB). Returns nullopt when the
// conditioning probability is below 1e-15.
std::optional<double> prob_xc1_given_photons(int n_a, int n_b, double theta_a,
                                             double theta_b, double mu,
                                             const CoinDecomposition& probs,
                                             int cutoff);

// Phase-grid discretization check of the purification identity
//   int dtheta/sqrt(2pi) |theta>|e^{i theta} sqrt(mu)>
//     = sum_n e^{-mu/2} mu^{n/2}/sqrt(n!) |n>|n>.
// Compares both sides in the number (x) number basis on an m_points grid and
// returns the maximum amplitude deviation. Exact (up to roundoff) whenever
// m_points > cutoff; for m_points <= cutoff the deviation is the aliased
// Poisson amplitude.
double purification_identity_check(double mu, int cutoff, int m_points = 64);

}  // namespace tfqkd::states
