#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace tfqkd::channel {

// Channel, detector and protocol constants. Basis probabilities are
// symmetric between the parties (p_za == p_zb).
struct PhysicalParams {
  double alpha_db_per_km = 0.2;   // fiber attenuation; transmission e^{-alpha L/10}
  double distance_km = 500.0;     // Alice-Bob distance, relay at the midpoint
  double eta_det = 0.8;           // detector efficiency
  double p_dark = 1e-11;          // dark count probability per pulse per detector
  double slice_width_rad = 0.7853981633974483;  // Delta = 2*pi/8
  std::array<double, 3> mu{0.0012, 0.01, 0.05};  // intensities mu1 < mu2 < mu3
  std::array<double, 3> p_mu{1.0 / 3, 1.0 / 3, 1.0 / 3};
  double p_test = 0.1;            // Test-mode probability (p_code = 1 - p_test)
  double p_zc = 1.0;              // Code-mode Z_C basis probability
  double p_z_basis = 0.5;         // p_za = p_zb; p_y = 1 - p_z
  double f_ec = 1.1;              // error-correction efficiency
  double misalignment = 0.0;      // optical misalignment error hook (off)
  int cutoff = 8;                 // Fock truncation used for yields

  double p_code() const { return 1.0 - p_test; }
  double p_xc() const { return 1.0 - p_zc; }
  double p_y_basis() const { return 1.0 - p_z_basis; }
  // Probability that both parties chose the same basis (C' = 0).
  double p_basis_match() const {
    return p_z_basis * p_z_basis + p_y_basis() * p_y_basis();
  }
  double slice_fraction() const;  // Delta / (2 pi)

  void validate() const;  // throws std::invalid_argument on bad values
};

// One relay announcement per pulse pair at a fixed relative phase.
struct ClickStats {
  double p_t1 = 0.0;    // Charlie announces t_E = 1
  double p_t2 = 0.0;    // t_E = 2
  double p_none = 0.0;  // discarded round
  double n1 = 0.0;      // mean photon number at detector D1
  double n2 = 0.0;      // mean photon number at detector D2
};

// eta_arm = eta_det * e^{-alpha (L/2) / 10}: one party's end-to-end arm
// transmissivity including detector efficiency.
double arm_transmissivity(const PhysicalParams& p);

// Detection statistics for coherent pulses of intensities mu_a, mu_b with
// relative phase phi (encoding offsets folded into phi). Means at the
// detectors are n1,2 = (eta/2)|sqrt(mu_a) +- sqrt(mu_b) e^{-i phi}|^2; each
// threshold detector clicks with 1 - (1 - p_dark) e^{-n}; double clicks are
// split evenly between t_E = 1 and 2.
ClickStats click_stats(double phi, double mu_a, double mu_b, const PhysicalParams& p);

struct CodeModeRates {
  double gain = 0.0;  // P(t_E fires | matched-basis Code round, phase in slice)
  double e_z = 0.0;   // Z-basis bit error rate (after the t_E = 2 bit flip)
  double e_y = 0.0;   // Y-basis rate entering the phase-error bound:
                      // disagreement for t_E = 1, coincidence for t_E = 2
};

// Slice-averaged Code-mode observables for mu_a = mu_b = mu and the given
// announcement t_e (1 or 2). Uses 129-point Simpson over the kept slice.
CodeModeRates code_mode_rates(double mu, int t_e, const PhysicalParams& p);

struct FockYield {
  double y_t1 = 0.0;     // P(t_E = 1 | n_a, n_b photons emitted)
  double y_t2 = 0.0;     // P(t_E = 2 | ...)
  double total() const { return y_t1 + y_t2; }
};

// Detection probabilities for Fock inputs: n_a (n_b) photons across one
// party's double pulse, of which only the signal half travels. Computed via
// the fock module: binomial ref/sg split -> loss to ancilla -> beam splitter
// -> threshold-click POVM with dark counts.
FockYield fock_yield_and_bias(int n_a, int n_b, const PhysicalParams& p);

// Whether (n_a, n_b) is in the zero-coin-bias set {00, 10, 01, 11}.
constexpr bool is_low_photon(int n_a, int n_b) { return n_a <= 1 && n_b <= 1; }

// Precomputed Fock yields on a (max_n+1)^2 grid, sharing the underlying
// signal-mode computations across cells. Use for sweeps; the one-shot
// fock_yield_and_bias is equivalent cell by cell.
class YieldTable {
 public:
  YieldTable(const PhysicalParams& p, int max_n);
  const FockYield& at(int n_a, int n_b) const {
    return table_[n_a * (max_n_ + 1) + n_b];
  }
  int max_n() const { return max_n_; }

 private:
  int max_n_;
  std::vector<FockYield> table_;
};

// Repeaterless secret key capacity bound -log2(1 - e^{-alpha L/10}) in bits
// per channel use. Diverges as L -> 0; requires L > 0.
double plob_bound(double distance_km, double alpha_db_per_km);

// Full-circle phase average of p_tE for coherent inputs; the quantity the
// Poisson-weighted Fock yields must reproduce.
double phase_averaged_gain(double mu_a, double mu_b, int t_e, const PhysicalParams& p);

}  // namespace tfqkd::channel
