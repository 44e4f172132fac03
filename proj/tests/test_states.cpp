#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "tfqkd/fock.hpp"
#include "tfqkd/states.hpp"

using namespace tfqkd;
using fock::cplx;
using fock::FockVector;

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

// ---- independent dense oracle ---------------------------------------------
// Rebuilds the coin state and its photon-number projections from the raw
// formulas with plain loops; shares no code with the implementation.

std::vector<cplx> coh_amps(cplx alpha, int cutoff) {
  std::vector<cplx> c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= cutoff; ++n) {
    c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  }
  return c;
}

struct OracleParty {
  std::vector<cplx> amp;  // [q][nr][ns]
  int d = 0;
  cplx& at(int q, int nr, int ns) { return amp[(q * d + nr) * d + ns]; }
  cplx get(int q, int nr, int ns) const { return amp[(q * d + nr) * d + ns]; }
};

OracleParty oracle_party(bool z_basis, double theta, double mu, int cutoff) {
  const int d = cutoff + 1;
  OracleParty p{std::vector<cplx>(2 * d * d, cplx{}), d};
  const cplx m = std::sqrt(mu) * std::exp(kI * theta);
  const double r = 1.0 / std::sqrt(2.0);
  // First/second branch qubit amplitudes in the computational (X) basis:
  // Z: |0_Z>, |1_Z>; Y: |1_Y>, |0_Y>.
  const cplx b0[2] = {cplx{r}, z_basis ? cplx{r} : -kI * r};
  const cplx b1[2] = {cplx{r}, z_basis ? cplx{-r} : kI * r};
  const cplx sg0 = z_basis ? m : kI * m;
  const cplx sg1 = z_basis ? -m : -kI * m;
  const auto ref = coh_amps(m, cutoff);
  const auto s0 = coh_amps(sg0, cutoff);
  const auto s1 = coh_amps(sg1, cutoff);
  for (int q = 0; q < 2; ++q) {
    for (int nr = 0; nr <= cutoff; ++nr) {
      for (int ns = 0; ns <= cutoff; ++ns) {
        p.at(q, nr, ns) = r * (b0[q] * ref[nr] * s0[ns] + b1[q] * ref[nr] * s1[ns]);
      }
    }
  }
  return p;
}

double oracle_prob_xc1(int n_a, int n_b, double theta_a, double theta_b, double mu,
                       double p_z, int cutoff) {
  const double p_y = 1.0 - p_z;
  const OracleParty za = oracle_party(true, theta_a, mu, cutoff);
  const OracleParty zb = oracle_party(true, theta_b, mu, cutoff);
  const OracleParty ya = oracle_party(false, theta_a, mu, cutoff);
  const OracleParty yb = oracle_party(false, theta_b, mu, cutoff);

  const int d = cutoff + 1;
  double denom = 0.0, num = 0.0;
  for (int qa = 0; qa < 2; ++qa) {
    for (int qb = 0; qb < 2; ++qb) {
      for (int nra = 0; nra < d; ++nra) {
        for (int nsa = 0; nsa < d; ++nsa) {
          if (nra + nsa != n_a) continue;
          for (int nrb = 0; nrb < d; ++nrb) {
            for (int nsb = 0; nsb < d; ++nsb) {
              if (nrb + nsb != n_b) continue;
              const cplx zz = za.get(qa, nra, nsa) * zb.get(qb, nrb, nsb);
              const cplx yy = ya.get(qa, nra, nsa) * yb.get(qb, nrb, nsb);
              denom += p_z * std::norm(zz) + p_y * std::norm(yy);
              // <1_X| = sqrt(p_y) <0_Z| - sqrt(p_z) <1_Z| on the coin.
              num += std::norm(std::sqrt(p_y * p_z) * zz -
                               std::sqrt(p_z * p_y) * yy);
            }
          }
        }
      }
    }
  }
  if (denom < 1e-15) return -1.0;
  return num / denom;
}

}  // namespace

TEST_CASE("encoded pair state normalization and mu = 0 collapse") {
  const FockVector z0 = states::encoded_pair_state(states::SideBasis::Z, 0.3, 0.0, 4);
  // (|0_Z> + |1_Z>)/sqrt2 = |0_X>, both pulses vacuum.
  const FockVector q0 = fock::qubit_state(1.0, 0.0);
  const FockVector vac = fock::number_state(0, 4);
  FockVector expect = fock::tensor({&q0, &vac, &vac});
  CHECK(std::abs(fock::inner(expect, z0) - cplx{1.0}) < 1e-12);

  for (const auto basis : {states::SideBasis::Z, states::SideBasis::Y}) {
    const FockVector psi = states::encoded_pair_state(basis, 1.234, 0.0024, 8);
    CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("single-photon projection has the entangled Bell form") {
  const double mu = 0.0024;
  const double theta = 0.65;
  const FockVector psi = states::encoded_pair_state(states::SideBasis::Z, theta, mu, 6);
  const std::array<int, 2> pulse{1, 2};
  const FockVector p1 = fock::number_projector(psi, pulse, 1);

  // Expected: e^{i theta} sqrt(mu) e^{-mu} (|0_X>|ref=1,sg=0> + |1_X>|ref=0,sg=1>),
  // the Bell-type pair the proof relies on.
  const cplx m = std::sqrt(mu) * std::exp(kI * theta) * std::exp(-mu);
  const FockVector q0 = fock::qubit_state(1.0, 0.0);
  const FockVector q1 = fock::qubit_state(0.0, 1.0);
  const FockVector n0 = fock::number_state(0, 6);
  const FockVector n1 = fock::number_state(1, 6);
  FockVector e0 = fock::tensor({&q0, &n1, &n0});
  FockVector e1 = fock::tensor({&q1, &n0, &n1});
  FockVector expect = e0 + e1;
  expect *= m;

  FockVector diff = p1;
  FockVector neg = expect;
  neg *= -1.0;
  diff += neg;
  CHECK(std::sqrt(diff.norm_sq()) < 1e-12);
}

TEST_CASE("low-photon projections are basis independent") {
  const std::array<int, 2> pulse{1, 2};
  for (double theta : {0.0, kPi / 4, kPi / 2, 1.9}) {
    for (double mu : {0.0012, 0.01, 0.05}) {
      const FockVector z = states::encoded_pair_state(states::SideBasis::Z, theta, mu, 8);
      FockVector y = states::encoded_pair_state(states::SideBasis::Y, theta, mu, 8);
      y *= -1.0;
      const FockVector diff = z + y;
      for (int n = 0; n <= 1; ++n) {
        CHECK(std::sqrt(fock::number_projector(diff, pulse, n).norm_sq()) < 1e-12);
      }
      // Two-photon projections differ: the bias lives there.
      CHECK(std::sqrt(fock::number_projector(diff, pulse, 2).norm_sq()) > 1e-9 * mu);
    }
  }
}

TEST_CASE("coin state weights and X_C overlap structure") {
  const auto coin = states::CoinDecomposition::from_basis_probs(0.5, 0.5);
  CHECK(coin.p_z_ab == doctest::Approx(0.5));
  CHECK(coin.p_z_ab + coin.p_y_ab == doctest::Approx(1.0).epsilon(1e-15));

  const auto skew = states::CoinDecomposition::from_basis_probs(0.8, 0.8);
  CHECK(skew.p_z_ab ==
        doctest::Approx(0.64 / (0.64 + 0.04)).epsilon(1e-14));

  const double mu = 0.0024;
  const FockVector psi = states::coin_state(0.4, 1.1, mu, skew, 6);
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));

  // p_y_ab = 0: no |1_Z>_C component.
  const FockVector psi_z = states::coin_state(0.4, 1.1, mu, {1.0, 0.0}, 6);
  CHECK(fock::contract_qubit(psi_z, 0, 0.0, 1.0).norm_sq() < 1e-20);

  // <1_X|_C psi = sqrt(p_z p_y) (Psi_Z Psi_Z - Psi_Y Psi_Y).
  const FockVector proj = fock::contract_qubit(
      psi, 0, std::sqrt(skew.p_y_ab), -std::sqrt(skew.p_z_ab));
  const FockVector za = states::encoded_pair_state(states::SideBasis::Z, 0.4, mu, 6);
  const FockVector zb = states::encoded_pair_state(states::SideBasis::Z, 1.1, mu, 6);
  const FockVector ya = states::encoded_pair_state(states::SideBasis::Y, 0.4, mu, 6);
  const FockVector yb = states::encoded_pair_state(states::SideBasis::Y, 1.1, mu, 6);
  FockVector zz = fock::tensor(za, zb);
  FockVector yy = fock::tensor(ya, yb);
  yy *= -1.0;
  FockVector expect = zz + yy;
  expect *= std::sqrt(skew.p_z_ab * skew.p_y_ab);
  FockVector neg = expect;
  neg *= -1.0;
  const FockVector diff = proj + neg;
  CHECK(std::sqrt(diff.norm_sq()) < 1e-12);
}

TEST_CASE("coin bias vanishes on the low photon set") {
  const std::array<std::pair<int, int>, 4> low{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
  for (double pz : {0.25, 0.5, 0.75}) {
    const states::CoinDecomposition coin{pz, 1.0 - pz};
    for (double mu : {0.0012, 0.01, 0.05}) {
      for (int t = 0; t < 4; ++t) {
        const double ta = t * kPi / 2.0, tb = (3 - t) * kPi / 2.0;
        for (const auto& [na, nb] : low) {
          const auto v = states::prob_xc1_given_photons(na, nb, ta, tb, mu, coin, 6);
          REQUIRE(v.has_value());
          CHECK(*v <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("multiphoton coin bias is positive and matches the dense oracle") {
  const states::CoinDecomposition coin{0.5, 0.5};
  const double mu = 0.0024;
  const auto v = states::prob_xc1_given_photons(2, 0, 0.3, 0.3, mu, coin, 6);
  REQUIRE(v.has_value());
  CHECK(*v > 1e-6);

  const double oracle = oracle_prob_xc1(2, 0, 0.3, 0.3, mu, 0.5, 6);
  CHECK(*v == doctest::Approx(oracle).epsilon(1e-10));

  // A few more grid points against the oracle, including skewed weights.
  for (const auto& [na, nb] : std::array<std::pair<int, int>, 3>{{{2, 1}, {0, 2}, {2, 2}}}) {
    const auto got = states::prob_xc1_given_photons(na, nb, 1.0, 2.2, 0.01, {0.25, 0.75}, 6);
    const double want = oracle_prob_xc1(na, nb, 1.0, 2.2, 0.01, 0.25, 6);
    REQUIRE(got.has_value());
    REQUIRE(want >= 0.0);
    CHECK(*got == doctest::Approx(want).epsilon(1e-10));
  }

  // Conditioning probability below threshold reports undefined.
  const auto none = states::prob_xc1_given_photons(6, 6, 0.1, 0.2, 1e-8, coin, 6);
  CHECK(!none.has_value());
}

TEST_CASE("purification identity on the phase grid") {
  CHECK(states::purification_identity_check(0.0, 8, 64) < 1e-12);
  CHECK(states::purification_identity_check(0.0024, 8, 64) < 1e-10);

  // M below cutoff+1 aliases: deviation equals the first wrapped Poisson
  // amplitude c_{M} (largest aliased coefficient, reached at n = 0).
  const double mu = 0.0024;
  std::vector<double> c(9);
  c[0] = std::exp(-0.5 * mu);
  for (int n = 1; n <= 8; ++n) c[n] = c[n - 1] * std::sqrt(mu / n);
  const double dev = states::purification_identity_check(mu, 8, 4);
  CHECK(dev == doctest::Approx(c[4]).epsilon(1e-9));
}

TEST_CASE("reference pulse is invisible to the transmitted signal") {
  // Reduced state of sg alone matches a construction that never prepares
  // the reference pulse.
  const double mu = 0.0024;
  const double theta = 0.7;
  const FockVector with_ref =
      states::encoded_pair_state(states::SideBasis::Z, theta, mu, 8);
  const cplx amp = std::sqrt(mu) * std::exp(kI * theta);
  FockVector b0 = fock::tensor(states::qubit_z(0), fock::coherent(amp, 8));
  FockVector b1 = fock::tensor(states::qubit_z(1), fock::coherent(-amp, 8));
  FockVector no_ref = b0 + b1;
  no_ref *= 1.0 / std::sqrt(2.0);

  const std::array<int, 1> sg_with{2};
  const std::array<int, 1> sg_without{1};
  const auto ra = fock::reduced_density(with_ref, sg_with);
  const auto rb = fock::reduced_density(no_ref, sg_without);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(std::abs(ra[i] - rb[i]) < 1e-10);
  }
}
