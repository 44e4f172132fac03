#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace tfqkd::fock {

using cplx = std::complex<double>;

// A tensor factor: either a qubit (dim 2) or a bosonic mode truncated at
// `cutoff` photons (dim cutoff+1).
struct Factor {
  enum class Kind { Qubit, Mode };
  Kind kind = Kind::Mode;
  int cutoff = 0;  // meaningful for modes; qubits have dim 2

  int dim() const { return kind == Kind::Qubit ? 2 : cutoff + 1; }
  static Factor qubit() { return {Kind::Qubit, 0}; }
  static Factor mode(int cutoff) { return {Kind::Mode, cutoff}; }
  bool operator==(const Factor&) const = default;
};

// Ordered list of tensor factors. Factor indices used by all operations
// refer to positions in this list.
struct ModeLayout {
  std::vector<Factor> factors;

  std::size_t dim() const;
  int factor_count() const { return static_cast<int>(factors.size()); }
  // Row-major strides, first factor slowest.
  std::vector<std::size_t> strides() const;
  bool operator==(const ModeLayout&) const = default;
};

// Complex amplitude vector over the joint basis of a ModeLayout. Vectors may
// be sub-normalized (after projections); `leakage` accumulates probability
// mass discarded at truncation boundaries so it is never silently lost.
class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(ModeLayout layout);

  const ModeLayout& layout() const { return layout_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  cplx& at(std::size_t joint_index) { return amps_[joint_index]; }
  const cplx& at(std::size_t joint_index) const { return amps_[joint_index]; }

  double norm_sq() const;
  double leakage() const { return leakage_; }
  void add_leakage(double w) { leakage_ += w; }

  FockVector& operator+=(const FockVector& other);
  FockVector& operator*=(cplx s);

 private:
  ModeLayout layout_;
  std::vector<cplx> amps_;
  double leakage_ = 0.0;
};

FockVector operator+(FockVector a, const FockVector& b);
FockVector operator*(cplx s, FockVector v);

// --- constructors ---------------------------------------------------------

// Single-mode coherent state |alpha> truncated at `cutoff`:
// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!). The Poisson tail beyond the
// cutoff is recorded as leakage.
FockVector coherent(cplx alpha, int cutoff);

// Single-mode number state |n>.
FockVector number_state(int n, int cutoff);

// Single-qubit state c0|0> + c1|1>.
FockVector qubit_state(cplx c0, cplx c1);

// Tensor product; factor lists concatenate in argument order.
FockVector tensor(const FockVector& a, const FockVector& b);
FockVector tensor(std::initializer_list<const FockVector*> parts);

// --- operations -----------------------------------------------------------

// 50:50 beam splitter on two mode factors, with the coherent-state
// convention |a>|b> -> |(a+b)/sqrt(2)> |(a-b)/sqrt(2)>. Amplitude pushed
// past a cutoff is dropped and accounted as leakage.
FockVector beam_splitter(const FockVector& state, int mode_a, int mode_b);

// Pure-loss channel of given transmissivity on one mode, implemented as a
// beam splitter coupling to a fresh vacuum ancilla appended as the last
// factor. The ancilla is retained; trace it by summing number_projector
// outcomes on it.
FockVector loss_channel(const FockVector& state, int mode, double transmissivity);

// General two-mode mixer defined by its action on creation operators:
//   a+ -> u00 a+ + u10 b+,   b+ -> u01 a+ + u11 b+.
// The 2x2 matrix must be unitary for norm preservation.
FockVector two_mode_mix(const FockVector& state, int mode_a, int mode_b,
                        const cplx u[2][2]);

// Projects onto total occupation == n over the given mode factors. The
// result is sub-normalized; its norm^2 is the outcome probability.
FockVector number_projector(const FockVector& state, std::span<const int> modes, int n);

// Inner product <a|b> (conjugate-linear in the first argument).
cplx inner(const FockVector& a, const FockVector& b);

// Contracts one qubit factor with the bra (conj(b0) <0| + conj(b1) <1|),
// removing the factor from the layout.
FockVector contract_qubit(const FockVector& state, int qubit_factor, cplx b0, cplx b1);

// Dense reduced density matrix over the kept factors (row-major, dimension
// = product of kept dims), tracing out everything else.
std::vector<cplx> reduced_density(const FockVector& state, std::span<const int> keep);

// Occupation distribution of a single mode factor after tracing all else.
std::vector<double> occupation_distribution(const FockVector& state, int mode);

}  // namespace tfqkd::fock
