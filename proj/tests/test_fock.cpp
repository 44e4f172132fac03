#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "tfqkd/fock.hpp"

using namespace tfqkd;
using fock::cplx;
using fock::FockVector;

namespace {

// Poisson tail beyond the cutoff, summed directly.
double poisson_tail(double mu, int cutoff) {
  double term = std::exp(-mu);
  double kept = term;
  for (int n = 1; n <= cutoff; ++n) {
    term *= mu / n;
    kept += term;
  }
  return 1.0 - kept;
}

double fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(fock::inner(a, b)) / (a.norm_sq() * b.norm_sq());
}

}  // namespace

TEST_CASE("coherent state amplitudes and truncation accounting") {
  const FockVector vac = fock::coherent(0.0, 10);
  CHECK(vac.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(vac.at(0) - cplx{1.0}) < 1e-15);

  const double mu = 0.0024;
  const FockVector c = fock::coherent(std::sqrt(mu), 8);
  const double deficit = 1.0 - c.norm_sq();
  CHECK(deficit == doctest::Approx(poisson_tail(mu, 8)).epsilon(1e-6));
  CHECK(deficit < 1e-20);
  CHECK(c.leakage() == doctest::Approx(deficit).epsilon(1e-6));

  // c_1 = e^{-mu/2} sqrt(mu), evaluated directly.
  const double c1 = std::exp(-mu / 2.0) * std::sqrt(mu);
  CHECK(std::abs(c.at(1) - cplx{c1}) < 1e-15);
  CHECK(c1 == doctest::Approx(0.048930).epsilon(1e-4));
}

TEST_CASE("beam splitter maps coherent pairs per the 50:50 relation") {
  const double mu = 0.01;
  const cplx a = std::sqrt(mu);

  const FockVector in = fock::tensor(fock::coherent(a, 8), fock::coherent(a, 8));
  const FockVector out = fock::beam_splitter(in, 0, 1);
  const FockVector target =
      fock::tensor(fock::coherent(std::sqrt(2.0) * a, 8), fock::coherent(0.0, 8));
  CHECK(fidelity(out, target) >= 1.0 - 1e-10);

  const FockVector in2 = fock::tensor(fock::coherent(a, 8), fock::coherent(-a, 8));
  const FockVector out2 = fock::beam_splitter(in2, 0, 1);
  const FockVector target2 =
      fock::tensor(fock::coherent(0.0, 8), fock::coherent(std::sqrt(2.0) * a, 8));
  CHECK(fidelity(out2, target2) >= 1.0 - 1e-10);

  const FockVector vv = fock::tensor(fock::coherent(0.0, 4), fock::coherent(0.0, 4));
  const FockVector vout = fock::beam_splitter(vv, 0, 1);
  CHECK(fidelity(vout, vv) == doctest::Approx(1.0).epsilon(1e-15));

  const FockVector bad = fock::tensor(fock::coherent(a, 4), fock::coherent(a, 5));
  CHECK_THROWS_AS(fock::beam_splitter(bad, 0, 1), std::invalid_argument);
}

TEST_CASE("beam splitter coherent covariance on random amplitudes") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mag(0.0, 0.05);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int i = 0; i < 40; ++i) {
    const cplx a = std::polar(std::sqrt(mag(rng)), ang(rng));
    const cplx b = std::polar(std::sqrt(mag(rng)), ang(rng));
    const FockVector in = fock::tensor(fock::coherent(a, 8), fock::coherent(b, 8));
    const FockVector out = fock::beam_splitter(in, 0, 1);
    const FockVector target =
        fock::tensor(fock::coherent((a + b) / std::sqrt(2.0), 8),
                     fock::coherent((a - b) / std::sqrt(2.0), 8));
    const double tail = out.leakage() + target.leakage();
    CHECK(1.0 - fidelity(out, target) <= 10.0 * tail + 1e-12);
  }
}

TEST_CASE("beam splitter preserves norm away from the cutoff boundary") {
  const FockVector in = fock::tensor(fock::coherent(cplx{0.05, 0.02}, 8),
                                     fock::coherent(cplx{-0.03, 0.04}, 8));
  REQUIRE(in.leakage() < 1e-12);
  const FockVector out = fock::beam_splitter(in, 0, 1);
  CHECK(std::abs(out.norm_sq() - in.norm_sq()) < 1e-10);
}

TEST_CASE("loss channel routes photons to the ancilla") {
  const FockVector one = fock::number_state(1, 4);

  const FockVector kept = fock::loss_channel(one, 0, 1.0);
  CHECK(fock::occupation_distribution(kept, 0)[1] == doctest::Approx(1.0).epsilon(1e-12));

  const FockVector lost = fock::loss_channel(one, 0, 0.0);
  CHECK(fock::occupation_distribution(lost, 0)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fock::occupation_distribution(lost, 1)[1] == doctest::Approx(1.0).epsilon(1e-12));

  const FockVector part = fock::loss_channel(one, 0, 0.25);
  CHECK(fock::occupation_distribution(part, 0)[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("loss channels compose multiplicatively") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FockVector psi(fock::ModeLayout{{fock::Factor::mode(4)}});
  for (int n = 0; n <= 3; ++n) psi.at(n) = cplx{u(rng), u(rng)};
  psi *= 1.0 / std::sqrt(psi.norm_sq());

  const double e1 = 0.7, e2 = 0.45;
  FockVector twice = fock::loss_channel(fock::loss_channel(psi, 0, e1), 0, e2);
  FockVector once = fock::loss_channel(psi, 0, e1 * e2);
  const auto pa = fock::occupation_distribution(twice, 0);
  const auto pb = fock::occupation_distribution(once, 0);
  for (std::size_t n = 0; n < pa.size(); ++n) {
    CHECK(pa[n] == doctest::Approx(pb[n]).epsilon(1e-10));
  }
}

TEST_CASE("number projector probabilities and completeness") {
  const std::array<int, 1> m0{0};
  const FockVector vac = fock::coherent(0.0, 6);
  CHECK(fock::number_projector(vac, m0, 0).norm_sq() ==
        doctest::Approx(1.0).epsilon(1e-14));

  const double mu = 0.0024;
  const FockVector c = fock::coherent(std::sqrt(mu), 8);
  const double p1 = fock::number_projector(c, m0, 1).norm_sq();
  CHECK(p1 == doctest::Approx(mu * std::exp(-mu)).epsilon(1e-12));
  CHECK(p1 == doctest::Approx(0.0023942).epsilon(1e-4));

  const FockVector two =
      fock::beam_splitter(fock::tensor(fock::coherent(cplx{0.1, 0.05}, 8),
                                       fock::coherent(cplx{0.02, -0.07}, 8)),
                          0, 1);
  const std::array<int, 2> both{0, 1};
  double sum = 0.0;
  for (int n = 0; n <= 16; ++n) {
    sum += fock::number_projector(two, both, n).norm_sq();
  }
  CHECK(sum == doctest::Approx(two.norm_sq()).epsilon(1e-10));
  CHECK_THROWS_AS(fock::number_projector(two, both, 17), std::invalid_argument);
}

TEST_CASE("inner products match the coherent closed form") {
  const FockVector v = fock::coherent(cplx{0.1, 0.2}, 10);
  CHECK(std::abs(fock::inner(v, v).imag()) < 1e-15);
  CHECK(fock::inner(v, v).real() == doctest::Approx(v.norm_sq()).epsilon(1e-14));

  const cplx alpha{0.12, -0.05};
  const cplx beta{-0.03, 0.08};
  const cplx overlap =
      fock::inner(fock::coherent(alpha, 12), fock::coherent(beta, 12));
  const cplx closed = std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)) +
                               std::conj(alpha) * beta);
  CHECK(std::abs(overlap - closed) < 1e-12);

  CHECK(std::abs(fock::inner(fock::number_state(0, 4), fock::number_state(1, 4))) ==
        0.0);
  CHECK_THROWS_AS(fock::inner(fock::number_state(0, 4), fock::number_state(0, 5)),
                  std::invalid_argument);
}

TEST_CASE("qubit contraction and reduced density bookkeeping") {
  // (|0>|vac> + |1>|one>)/sqrt2: contracting <1| leaves |one>.
  FockVector a = fock::tensor(fock::qubit_state(1.0, 0.0), fock::number_state(0, 3));
  FockVector b = fock::tensor(fock::qubit_state(0.0, 1.0), fock::number_state(1, 3));
  FockVector bell = a + b;
  bell *= 1.0 / std::sqrt(2.0);

  const FockVector got = fock::contract_qubit(bell, 0, 0.0, 1.0);
  CHECK(got.norm_sq() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(got.at(1) - cplx{1.0 / std::sqrt(2.0)}) < 1e-14);

  const std::array<int, 1> keep{1};
  const auto rho = fock::reduced_density(bell, keep);
  CHECK(rho[0 * 4 + 0].real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rho[1 * 4 + 1].real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(rho[0 * 4 + 1]) < 1e-14);  // entangled: no coherence survives
}
