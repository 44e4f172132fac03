#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>

#include "tfqkd/channel.hpp"
#include "tfqkd/decoy.hpp"
#include "tfqkd/fock.hpp"

using namespace tfqkd;
using fock::cplx;
using fock::FockVector;

namespace {

constexpr double kPi = 3.14159265358979323846;

channel::PhysicalParams paper_params(double l_km) {
  channel::PhysicalParams p;
  p.distance_km = l_km;
  return p;
}

// Fock-module oracle for the coherent click probabilities: coherent pair ->
// loss to ancilla -> beam splitter -> threshold POVM with dark counts.
std::pair<double, double> fock_click_oracle(double phi, double mu_a, double mu_b,
                                            const channel::PhysicalParams& p,
                                            int cutoff) {
  const double eta = channel::arm_transmissivity(p);
  FockVector st = fock::tensor(
      fock::coherent(std::sqrt(mu_a) * std::exp(cplx{0.0, phi}), cutoff),
      fock::coherent(std::sqrt(mu_b), cutoff));
  st = fock::loss_channel(st, 0, eta);
  st = fock::loss_channel(st, 1, eta);
  st = fock::beam_splitter(st, 0, 1);

  const auto& layout = st.layout();
  const auto amps = st.amplitudes();
  std::vector<int> idx(layout.factors.size(), 0);
  double t1 = 0.0, t2 = 0.0;
  for (std::size_t flat = 0; flat < layout.dim(); ++flat) {
    const double w = std::norm(amps[flat]);
    if (w > 0.0) {
      const double c1 = idx[0] >= 1 ? 1.0 : p.p_dark;
      const double c2 = idx[1] >= 1 ? 1.0 : p.p_dark;
      t1 += w * (c1 - 0.5 * c1 * c2);
      t2 += w * (c2 - 0.5 * c1 * c2);
    }
    for (int f = layout.factor_count() - 1; f >= 0; --f) {
      if (++idx[f] < layout.factors[f].dim()) break;
      idx[f] = 0;
    }
  }
  return {t1, t2};
}

}  // namespace

TEST_CASE("arm transmissivity") {
  channel::PhysicalParams p = paper_params(0.0);
  p.eta_det = 1.0;
  CHECK(channel::arm_transmissivity(p) == doctest::Approx(1.0).epsilon(1e-15));

  p = paper_params(500.0);
  const double oracle = 0.8 * std::exp(-5.0);
  CHECK(channel::arm_transmissivity(p) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(channel::arm_transmissivity(p) == doctest::Approx(0.0053904).epsilon(1e-4));

  const double eta = channel::arm_transmissivity(p);
  CHECK(eta * eta / (p.eta_det * p.eta_det) ==
        doctest::Approx(std::exp(-p.alpha_db_per_km * p.distance_km / 10.0))
            .epsilon(1e-12));
}

TEST_CASE("click statistics at symmetric phases") {
  channel::PhysicalParams p = paper_params(200.0);
  p.p_dark = 0.0;

  const auto s0 = channel::click_stats(0.0, 0.001, 0.001, p);
  CHECK(s0.p_t2 == 0.0);
  CHECK(s0.p_t1 > 0.0);

  const auto spi = channel::click_stats(kPi, 0.001, 0.001, p);
  CHECK(spi.p_t1 == 0.0);

  p.p_dark = 1e-11;
  const auto s = channel::click_stats(0.7, 0.0012, 0.002, p);
  CHECK(s.p_t1 + s.p_t2 + s.p_none == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("click statistics agree with the fock-module oracle") {
  channel::PhysicalParams p = paper_params(500.0);
  for (double phi : {0.0, 0.4, kPi / 2, kPi}) {
    const auto s = channel::click_stats(phi, 0.0012, 0.0012, p);
    const auto [t1, t2] = fock_click_oracle(phi, 0.0012, 0.0012, p, 8);
    CHECK(s.p_t1 == doctest::Approx(t1).epsilon(1e-10));
    CHECK(s.p_t2 == doctest::Approx(t2).epsilon(1e-10));
  }
  // Spec example: phi = 0 gives p_t1 = 1 - e^{-2 mu eta} up to dark terms.
  const auto s = channel::click_stats(0.0, 0.0012, 0.0012, p);
  const double eta = channel::arm_transmissivity(p);
  CHECK(s.p_t1 ==
        doctest::Approx(1.0 - (1.0 - p.p_dark) * std::exp(-2.0 * 0.0012 * eta))
            .epsilon(1e-10));
}

TEST_CASE("click symmetries") {
  channel::PhysicalParams p = paper_params(320.0);
  const auto a = channel::click_stats(0.43, 0.0012, 0.01, p);
  const auto b = channel::click_stats(-0.43, 0.01, 0.0012, p);
  CHECK(a.p_t1 == doctest::Approx(b.p_t1).epsilon(1e-13));
  CHECK(a.p_t2 == doctest::Approx(b.p_t2).epsilon(1e-13));

  const auto c = channel::click_stats(0.43 + kPi, 0.0012, 0.0012, p);
  const auto d = channel::click_stats(0.43, 0.0012, 0.0012, p);
  CHECK(c.p_t1 == doctest::Approx(d.p_t2).epsilon(1e-13));
}

TEST_CASE("code mode rates: limits and quadrature oracle") {
  // Tiny slice, no dark counts: no interference error survives.
  channel::PhysicalParams p = paper_params(300.0);
  p.p_dark = 0.0;
  p.slice_width_rad = 1e-9;
  auto r = channel::code_mode_rates(0.0012, 1, p);
  CHECK(r.e_z < 1e-12);

  // Dark counts dominate as mu -> 0: errors are coin flips.
  p = paper_params(300.0);
  p.p_dark = 1e-6;
  r = channel::code_mode_rates(1e-15, 1, p);
  CHECK(r.e_z == doctest::Approx(0.5).epsilon(1e-6));
  r = channel::code_mode_rates(1e-15, 2, p);
  CHECK(r.e_z == doctest::Approx(0.5).epsilon(1e-6));

  // Independent quadrature oracle at 10x resolution.
  p = paper_params(500.0);
  const double mu = 0.0012;
  const double half = 0.5 * p.slice_width_rad;
  auto avg10 = [&](double off, int t_e) {
    const int n = 1290;  // 10x the implementation's interval count
    const double h = 2.0 * half / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const auto s = channel::click_stats(-half + i * h + off, mu, mu, p);
      const double v = (t_e == 1) ? s.p_t1 : s.p_t2;
      acc += (i == 0 || i == n) ? v : v * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    return acc * h / 3.0 / (2.0 * half);
  };
  for (int t_e : {1, 2}) {
    const double g_same = avg10(0.0, t_e);
    const double g_diff = avg10(kPi, t_e);
    const auto rr = channel::code_mode_rates(mu, t_e, p);
    CHECK(std::abs(rr.gain - 0.5 * (g_same + g_diff)) < 1e-8);
    const double err = (t_e == 1) ? g_diff : g_same;
    CHECK(std::abs(rr.e_z - err / (g_same + g_diff)) < 1e-8);
  }

  // Symmetric honest model: e_Y coincides with e_Z.
  const auto r1 = channel::code_mode_rates(mu, 1, p);
  CHECK(r1.e_y == doctest::Approx(r1.e_z).epsilon(1e-10));
  const auto r2 = channel::code_mode_rates(mu, 2, p);
  CHECK(r2.e_y == doctest::Approx(r2.e_z).epsilon(1e-10));
}

TEST_CASE("fock yields: closed forms at the edges") {
  channel::PhysicalParams p = paper_params(400.0);
  const double eta = channel::arm_transmissivity(p);

  // Vacuum input: dark counts only.
  const auto y00 = channel::fock_yield_and_bias(0, 0, p);
  const double pd = p.p_dark;
  CHECK(y00.total() == doctest::Approx(2.0 * pd - pd * pd).epsilon(1e-9));
  CHECK(y00.y_t1 == doctest::Approx(pd * (1.0 - pd) + 0.5 * pd * pd).epsilon(1e-9));

  channel::PhysicalParams p0 = p;
  p0.p_dark = 0.0;
  CHECK(channel::fock_yield_and_bias(0, 0, p0).total() == 0.0);

  // One double-pulse photon sits in the signal half with probability 1/2:
  // detection probability eta/2, split evenly between the announcements.
  const auto y10 = channel::fock_yield_and_bias(1, 0, p0);
  CHECK(y10.total() == doctest::Approx(eta / 2.0).epsilon(1e-12));
  CHECK(y10.y_t1 == doctest::Approx(eta / 4.0).epsilon(1e-12));
  CHECK(channel::fock_yield_and_bias(0, 1, p0).total() ==
        doctest::Approx(eta / 2.0).epsilon(1e-12));
}

TEST_CASE("coherent and fock detection statistics are consistent") {
  // Phase-averaged coherent click probability equals the Poisson-weighted
  // sum of the double-pulse Fock yields.
  for (double l : {100.0, 300.0}) {
    channel::PhysicalParams p = paper_params(l);
    for (double mu : {0.0012, 0.005}) {
      const channel::YieldTable yields(p, 8);
      double sum1 = 0.0, sum2 = 0.0, mass = 0.0;
      for (int na = 0; na <= 8; ++na) {
        for (int nb = 0; nb <= 8; ++nb) {
          const double q = decoy::q_fock_given_intensity(na, nb, mu, mu);
          mass += q;
          sum1 += q * yields.at(na, nb).y_t1;
          sum2 += q * yields.at(na, nb).y_t2;
        }
      }
      const double tail = 1.0 - mass;
      const double g1 = channel::phase_averaged_gain(mu, mu, 1, p);
      const double g2 = channel::phase_averaged_gain(mu, mu, 2, p);
      CHECK(std::abs(g1 - sum1) <= 1e-8 + tail);
      CHECK(std::abs(g2 - sum2) <= 1e-8 + tail);
    }
  }
}

TEST_CASE("plob bound values and slope") {
  // Exact evaluation oracle; the quoted constants carry ~1e-4 rounding.
  CHECK(channel::plob_bound(50.0, 0.2) ==
        doctest::Approx(-std::log2(1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(channel::plob_bound(100.0, 0.2) ==
        doctest::Approx(-std::log2(1.0 - std::exp(-2.0))).epsilon(1e-14));
  CHECK(channel::plob_bound(50.0, 0.2) == doctest::Approx(0.6617).epsilon(1e-4));
  CHECK(channel::plob_bound(100.0, 0.2) == doctest::Approx(0.2098).epsilon(1e-3));
  CHECK_THROWS_AS(channel::plob_bound(0.0, 0.2), std::invalid_argument);

  // Fitted log10 slope over [400, 600] km.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double l = 400.0; l <= 600.0; l += 10.0, ++n) {
    const double y = std::log10(channel::plob_bound(l, 0.2));
    sx += l;
    sy += y;
    sxx += l * l;
    sxy += l * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope > -0.0090);
  CHECK(slope < -0.0085);
}

TEST_CASE("parameter validation") {
  channel::PhysicalParams p;
  CHECK_NOTHROW(p.validate());
  p.p_mu = {0.5, 0.2, 0.2};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = channel::PhysicalParams{};
  p.mu = {0.01, 0.01, 0.05};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = channel::PhysicalParams{};
  p.f_ec = 0.9;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
