#include "tfqkd/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tfqkd/fock.hpp"

namespace tfqkd::channel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 129-point composite Simpson average of f over [lo, hi].
template <typename F>
double simpson_avg(F&& f, double lo, double hi, int points = 129) {
  const int n = points - 1;  // even interval count
  const double h = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) {
    acc += f(lo + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return acc * h / 3.0 / (hi - lo);
}

// Periodic trapezoid average over the full circle.
template <typename F>
double circle_avg(F&& f, int points = 512) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) {
    acc += f(kTwoPi * i / points);
  }
  return acc / points;
}

double binom_half(int n, int k) {
  // C(n,k) / 2^n
  double lw = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lw - n * std::log(2.0));
}

}  // namespace

double PhysicalParams::slice_fraction() const { return slice_width_rad / kTwoPi; }

void PhysicalParams::validate() const {
  auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (alpha_db_per_km < 0.0 || distance_km < 0.0) {
    throw std::invalid_argument("PhysicalParams: negative attenuation or distance");
  }
  if (!in01(eta_det) || !in01(p_dark) || !in01(p_test) || !in01(p_zc) ||
      !in01(p_z_basis) || !in01(misalignment)) {
    throw std::invalid_argument("PhysicalParams: probability outside [0,1]");
  }
  if (slice_width_rad <= 0.0 || slice_width_rad > kTwoPi) {
    throw std::invalid_argument("PhysicalParams: slice width outside (0, 2pi]");
  }
  if (f_ec < 1.0) {
    throw std::invalid_argument("PhysicalParams: f_ec must be >= 1");
  }
  double psum = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (mu[i] < 0.0) throw std::invalid_argument("PhysicalParams: negative intensity");
    if (!in01(p_mu[i])) throw std::invalid_argument("PhysicalParams: p_mu outside [0,1]");
    psum += p_mu[i];
  }
  if (std::abs(psum - 1.0) > 1e-9) {
    throw std::invalid_argument("PhysicalParams: intensity probabilities must sum to 1");
  }
  if (mu[0] == mu[1] || mu[1] == mu[2] || mu[0] == mu[2]) {
    throw std::invalid_argument("PhysicalParams: intensities must be distinct");
  }
  if (cutoff < 0) {
    throw std::invalid_argument("PhysicalParams: negative cutoff");
  }
}

double arm_transmissivity(const PhysicalParams& p) {
  return p.eta_det * std::exp(-p.alpha_db_per_km * (p.distance_km / 2.0) / 10.0);
}

ClickStats click_stats(double phi, double mu_a, double mu_b, const PhysicalParams& p) {
  if (mu_a < 0.0 || mu_b < 0.0) {
    throw std::invalid_argument("click_stats: negative intensity");
  }
  const double eta = arm_transmissivity(p);
  const double vis = 1.0 - 2.0 * p.misalignment;
  const double cross = 2.0 * std::sqrt(mu_a * mu_b) * vis * std::cos(phi);
  ClickStats s;
  s.n1 = 0.5 * eta * (mu_a + mu_b + cross);
  s.n2 = 0.5 * eta * (mu_a + mu_b - cross);
  const double q1 = 1.0 - (1.0 - p.p_dark) * std::exp(-s.n1);
  const double q2 = 1.0 - (1.0 - p.p_dark) * std::exp(-s.n2);
  s.p_t1 = q1 - 0.5 * q1 * q2;
  s.p_t2 = q2 - 0.5 * q1 * q2;
  s.p_none = (1.0 - q1) * (1.0 - q2);
  return s;
}

CodeModeRates code_mode_rates(double mu, int t_e, const PhysicalParams& p) {
  if (t_e != 1 && t_e != 2) {
    throw std::invalid_argument("code_mode_rates: t_e must be 1 or 2");
  }
  const double half = 0.5 * p.slice_width_rad;
  // Slice average of p_tE at encoding offset `off` added to the random
  // phase difference.
  auto g = [&](double off) {
    return simpson_avg(
        [&](double phi) {
          const ClickStats s = click_stats(phi + off, mu, mu, p);
          return (t_e == 1) ? s.p_t1 : s.p_t2;
        },
        -half, half);
  };
  // Equal bits leave the relative phase unchanged; opposite bits shift it by
  // pi, in both the Z and the Y encodings.
  const double g_same = g(0.0);
  const double g_diff = g(kPi);

  CodeModeRates r;
  r.gain = 0.5 * (g_same + g_diff);
  if (r.gain <= 0.0) {
    r.e_z = 0.5;
    r.e_y = 0.5;
    return r;
  }
  // t_E = 1 pairs bits straight, t_E = 2 pairs them flipped; the Y-basis
  // rate entering the phase-error bound is disagreement for t_E = 1 and
  // coincidence for t_E = 2, which lands on the same interference branch.
  if (t_e == 1) {
    r.e_z = g_diff / (g_same + g_diff);
    r.e_y = g_diff / (g_same + g_diff);
  } else {
    r.e_z = g_same / (g_same + g_diff);
    r.e_y = g_same / (g_same + g_diff);
  }
  return r;
}

namespace {

// Signal-mode Fock inputs |ja>, |jb> -> loss to ancilla -> 50:50 splitter
// -> threshold POVM. Factors after the two losses: [sgA, sgB, ancA, ancB].
std::pair<double, double> signal_yield(int ja, int jb, const PhysicalParams& p) {
  const double eta = arm_transmissivity(p);
  const int span = ja + jb;  // room for bunching at the splitter
  fock::FockVector st =
      fock::tensor(fock::number_state(ja, span), fock::number_state(jb, span));
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

// Photons of a double pulse sit in the signal half with probability 1/2
// each; tracing the retained reference makes the split an incoherent
// binomial mixture over the signal-mode yields.
FockYield mix_double_pulse(int n_a, int n_b,
                           const std::vector<std::pair<double, double>>& sig,
                           int stride) {
  FockYield y;
  for (int ja = 0; ja <= n_a; ++ja) {
    for (int jb = 0; jb <= n_b; ++jb) {
      const double w = binom_half(n_a, ja) * binom_half(n_b, jb);
      const auto& [t1, t2] = sig[ja * stride + jb];
      y.y_t1 += w * t1;
      y.y_t2 += w * t2;
    }
  }
  return y;
}

}  // namespace

FockYield fock_yield_and_bias(int n_a, int n_b, const PhysicalParams& p) {
  if (n_a < 0 || n_b < 0 || n_a > p.cutoff || n_b > p.cutoff) {
    throw std::invalid_argument("fock_yield_and_bias: photon number beyond cutoff");
  }
  const int stride = std::max(n_a, n_b) + 1;
  std::vector<std::pair<double, double>> sig(stride * stride, {0.0, 0.0});
  for (int ja = 0; ja <= n_a; ++ja) {
    for (int jb = 0; jb <= n_b; ++jb) {
      sig[ja * stride + jb] = signal_yield(ja, jb, p);
    }
  }
  return mix_double_pulse(n_a, n_b, sig, stride);
}

YieldTable::YieldTable(const PhysicalParams& p, int max_n) : max_n_(max_n) {
  if (max_n < 0 || max_n > p.cutoff) {
    throw std::invalid_argument("YieldTable: grid beyond cutoff");
  }
  const int stride = max_n + 1;
  std::vector<std::pair<double, double>> sig(stride * stride);
  for (int ja = 0; ja <= max_n; ++ja) {
    for (int jb = 0; jb <= max_n; ++jb) {
      sig[ja * stride + jb] = signal_yield(ja, jb, p);
    }
  }
  table_.resize(stride * stride);
  for (int na = 0; na <= max_n; ++na) {
    for (int nb = 0; nb <= max_n; ++nb) {
      table_[na * stride + nb] = mix_double_pulse(na, nb, sig, stride);
    }
  }
}

double plob_bound(double distance_km, double alpha_db_per_km) {
  if (distance_km <= 0.0) {
    throw std::invalid_argument("plob_bound: bound diverges for L <= 0");
  }
  const double eta = std::exp(-alpha_db_per_km * distance_km / 10.0);
  return -std::log2(1.0 - eta);
}

double phase_averaged_gain(double mu_a, double mu_b, int t_e, const PhysicalParams& p) {
  return circle_avg([&](double phi) {
    const ClickStats s = click_stats(phi, mu_a, mu_b, p);
    return (t_e == 1) ? s.p_t1 : s.p_t2;
  });
}

}  // namespace tfqkd::channel
