#include "tfqkd/states.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfqkd::states {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

CoinDecomposition CoinDecomposition::from_basis_probs(double p_za, double p_zb) {
  if (p_za < 0.0 || p_za > 1.0 || p_zb < 0.0 || p_zb > 1.0) {
    throw std::invalid_argument("CoinDecomposition: basis probabilities outside [0,1]");
  }
  const double zz = p_za * p_zb;
  const double yy = (1.0 - p_za) * (1.0 - p_zb);
  if (zz + yy <= 0.0) {
    throw std::invalid_argument("CoinDecomposition: degenerate basis probabilities");
  }
  return {zz / (zz + yy), yy / (zz + yy)};
}

FockVector qubit_z(int bit) {
  return fock::qubit_state(kInvSqrt2, bit == 0 ? cplx{kInvSqrt2} : cplx{-kInvSqrt2});
}

FockVector qubit_y(int bit) {
  return fock::qubit_state(kInvSqrt2, (bit == 0 ? kI : -kI) * kInvSqrt2);
}

FockVector encoded_pair_state(SideBasis basis, double theta, double mu, int cutoff) {
  if (mu < 0.0) {
    throw std::invalid_argument("encoded_pair_state: mu must be >= 0");
  }
  const cplx amp = std::sqrt(mu) * std::exp(kI * theta);
  const FockVector ref = fock::coherent(amp, cutoff);

  auto branch = [&](const FockVector& qubit, double delta) {
    const FockVector sg = fock::coherent(amp * std::exp(kI * delta), cutoff);
    return fock::tensor({&qubit, &ref, &sg});
  };

  FockVector out =
      (basis == SideBasis::Z)
          ? branch(qubit_z(0), 0.0) + branch(qubit_z(1), kPi)
          : branch(qubit_y(1), kPi / 2.0) + branch(qubit_y(0), 3.0 * kPi / 2.0);
  out *= kInvSqrt2;
  return out;
}

FockVector coin_state(double theta_a, double theta_b, double mu,
                      const CoinDecomposition& probs, int cutoff) {
  const FockVector za = encoded_pair_state(SideBasis::Z, theta_a, mu, cutoff);
  const FockVector zb = encoded_pair_state(SideBasis::Z, theta_b, mu, cutoff);
  const FockVector ya = encoded_pair_state(SideBasis::Y, theta_a, mu, cutoff);
  const FockVector yb = encoded_pair_state(SideBasis::Y, theta_b, mu, cutoff);

  const FockVector coin0 = fock::qubit_state(1.0, 0.0);  // |0Z>_C
  const FockVector coin1 = fock::qubit_state(0.0, 1.0);  // |1Z>_C

  FockVector z_part = fock::tensor({&coin0, &za, &zb});
  FockVector y_part = fock::tensor({&coin1, &ya, &yb});
  z_part *= std::sqrt(probs.p_z_ab);
  y_part *= std::sqrt(probs.p_y_ab);
  return z_part + y_part;
}

std::optional<double> prob_xc1_given_photons(int n_a, int n_b, double theta_a,
                                             double theta_b, double mu,
                                             const CoinDecomposition& probs,
                                             int cutoff) {
  if (n_a < 0 || n_a > 2 * cutoff || n_b < 0 || n_b > 2 * cutoff) {
    throw std::invalid_argument("prob_xc1_given_photons: photon number beyond cutoff");
  }
  FockVector psi = coin_state(theta_a, theta_b, mu, probs, cutoff);

  const std::array<int, 2> e1{CoinStateFactors::ref_a, CoinStateFactors::sg_a};
  const std::array<int, 2> e2{CoinStateFactors::ref_b, CoinStateFactors::sg_b};
  psi = fock::number_projector(psi, e1, n_a);
  psi = fock::number_projector(psi, e2, n_b);

  const double denom = psi.norm_sq();
  if (denom < 1e-15) {
    return std::nullopt;
  }
  // <1X|_C = sqrt(p_y)<0Z| - sqrt(p_z)<1Z|
  FockVector proj = fock::contract_qubit(psi, CoinStateFactors::coin,
                                         std::sqrt(probs.p_y_ab),
                                         -std::sqrt(probs.p_z_ab));
  return proj.norm_sq() / denom;
}

double purification_identity_check(double mu, int cutoff, int m_points) {
  if (cutoff < 0 || m_points < 1 || mu < 0.0) {
    throw std::invalid_argument("purification_identity_check: invalid arguments");
  }
  // Coherent amplitudes c_m at alpha = sqrt(mu).
  std::vector<double> c(static_cast<std::size_t>(cutoff) + 1, 0.0);
  c[0] = std::exp(-0.5 * mu);
  for (int m = 1; m <= cutoff; ++m) {
    c[static_cast<std::size_t>(m)] =
        c[static_cast<std::size_t>(m - 1)] * std::sqrt(mu / m);
  }

  // Left side in the (grid number state n, Fock m) basis:
  //   <n|_P LHS = (1/M) sum_k e^{i(m-n) theta_k} c_m
  // Right side: c_n delta_{nm}.
  double max_dev = 0.0;
  for (int n = 0; n < m_points; ++n) {
    for (int m = 0; m <= cutoff; ++m) {
      cplx lhs{};
      for (int k = 0; k < m_points; ++k) {
        const double phase = 2.0 * kPi * k * (m - n) / m_points;
        lhs += std::exp(kI * phase);
      }
      lhs *= c[static_cast<std::size_t>(m)] / static_cast<double>(m_points);
      const cplx rhs = (n == m && n <= cutoff) ? cplx{c[static_cast<std::size_t>(n)]}
                                               : cplx{};
      max_dev = std::max(max_dev, std::abs(lhs - rhs));
    }
  }
  return max_dev;
}

}  // namespace tfqkd::states
