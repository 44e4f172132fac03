#include "tfqkd/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tfqkd::fock {

namespace {

double lfact(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// std::pow(complex, 0) can produce NaN via 0*log(0); integer powers by loop.
cplx ipow(cplx base, int e) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void check_mode_factor(const ModeLayout& layout, int idx, const char* who) {
  if (idx < 0 || idx >= layout.factor_count()) {
    throw std::invalid_argument(std::string(who) + ": factor index out of range");
  }
  if (layout.factors[idx].kind != Factor::Kind::Mode) {
    throw std::invalid_argument(std::string(who) + ": factor is not a bosonic mode");
  }
}

}  // namespace

std::size_t ModeLayout::dim() const {
  std::size_t d = 1;
  for (const auto& f : factors) {
    d *= static_cast<std::size_t>(f.dim());
  }
  return d;
}

std::vector<std::size_t> ModeLayout::strides() const {
  std::vector<std::size_t> s(factors.size(), 1);
  for (int i = factor_count() - 2; i >= 0; --i) {
    s[i] = s[i + 1] * static_cast<std::size_t>(factors[i + 1].dim());
  }
  return s;
}

FockVector::FockVector(ModeLayout layout)
    : layout_(std::move(layout)), amps_(layout_.dim(), cplx{0.0, 0.0}) {}

double FockVector::norm_sq() const {
  double n = 0.0;
  for (const auto& a : amps_) {
    n += std::norm(a);
  }
  return n;
}

FockVector& FockVector::operator+=(const FockVector& other) {
  if (!(layout_ == other.layout_)) {
    throw std::invalid_argument("FockVector::operator+=: layout mismatch");
  }
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    amps_[i] += other.amps_[i];
  }
  leakage_ += other.leakage_;
  return *this;
}

FockVector& FockVector::operator*=(cplx s) {
  for (auto& a : amps_) {
    a *= s;
  }
  leakage_ *= std::norm(s);
  return *this;
}

FockVector operator+(FockVector a, const FockVector& b) {
  a += b;
  return a;
}

FockVector operator*(cplx s, FockVector v) {
  v *= s;
  return v;
}

FockVector coherent(cplx alpha, int cutoff) {
  if (cutoff < 0) {
    throw std::invalid_argument("coherent: cutoff must be >= 0");
  }
  FockVector v(ModeLayout{{Factor::mode(cutoff)}});
  const double mu = std::norm(alpha);
  cplx term = std::exp(-0.5 * mu);  // c_0
  v.at(0) = term;
  for (int n = 1; n <= cutoff; ++n) {
    term *= alpha / std::sqrt(static_cast<double>(n));
    v.at(static_cast<std::size_t>(n)) = term;
  }
  v.add_leakage(std::max(0.0, 1.0 - v.norm_sq()));
  return v;
}

FockVector number_state(int n, int cutoff) {
  if (n < 0 || n > cutoff) {
    throw std::invalid_argument("number_state: need 0 <= n <= cutoff");
  }
  FockVector v(ModeLayout{{Factor::mode(cutoff)}});
  v.at(static_cast<std::size_t>(n)) = 1.0;
  return v;
}

FockVector qubit_state(cplx c0, cplx c1) {
  FockVector v(ModeLayout{{Factor::qubit()}});
  v.at(0) = c0;
  v.at(1) = c1;
  return v;
}

FockVector tensor(const FockVector& a, const FockVector& b) {
  ModeLayout layout;
  layout.factors = a.layout().factors;
  layout.factors.insert(layout.factors.end(), b.layout().factors.begin(),
                        b.layout().factors.end());
  FockVector out(std::move(layout));
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  auto ov = out.amplitudes();
  for (std::size_t i = 0; i < av.size(); ++i) {
    if (av[i] == cplx{}) continue;
    const std::size_t base = i * bv.size();
    for (std::size_t j = 0; j < bv.size(); ++j) {
      ov[base + j] = av[i] * bv[j];
    }
  }
  out.add_leakage(a.leakage() + b.leakage());
  return out;
}

FockVector tensor(std::initializer_list<const FockVector*> parts) {
  if (parts.size() == 0) {
    throw std::invalid_argument("tensor: empty factor list");
  }
  auto it = parts.begin();
  FockVector acc = **it;
  for (++it; it != parts.end(); ++it) {
    acc = tensor(acc, **it);
  }
  return acc;
}

FockVector two_mode_mix(const FockVector& state, int mode_a, int mode_b,
                        const cplx u[2][2]) {
  const auto& layout = state.layout();
  check_mode_factor(layout, mode_a, "two_mode_mix");
  check_mode_factor(layout, mode_b, "two_mode_mix");
  if (mode_a == mode_b) {
    throw std::invalid_argument("two_mode_mix: modes must be distinct");
  }

  const int da = layout.factors[mode_a].dim();
  const int db = layout.factors[mode_b].dim();
  const int ca = da - 1, cb = db - 1;

  // Dense pair matrix U[(p,q) <- (m,n)], nonzero only when p+q = m+n:
  // U|m,n> = sum_p sqrt(p! q! / (m! n!)) [sum_j C(m,j) u00^j u10^(m-j)
  //          C(n,p-j) u01^(p-j) u11^(n-p+j)] |p, q=m+n-p>.
  std::vector<cplx> pair((std::size_t)(da * db) * (std::size_t)(da * db), cplx{});
  auto lc = [&](int n, int k) { return lfact(n) - lfact(k) - lfact(n - k); };
  for (int m = 0; m <= ca; ++m) {
    for (int n = 0; n <= cb; ++n) {
      const int s = m + n;
      for (int p = std::max(0, s - cb); p <= std::min(s, ca); ++p) {
        const int q = s - p;
        cplx sum{};
        const int jlo = std::max(0, p - n);
        const int jhi = std::min(m, p);
        for (int j = jlo; j <= jhi; ++j) {
          const double lw = lc(m, j) + lc(n, p - j);
          cplx term = std::exp(lw);
          term *= ipow(u[0][0], j) * ipow(u[1][0], m - j);
          term *= ipow(u[0][1], p - j) * ipow(u[1][1], n - (p - j));
          sum += term;
        }
        const double scale =
            std::exp(0.5 * (lfact(p) + lfact(q) - lfact(m) - lfact(n)));
        pair[(std::size_t)(p * db + q) * (std::size_t)(da * db) +
             (std::size_t)(m * db + n)] = scale * sum;
      }
    }
  }

  const auto strides = layout.strides();
  const std::size_t sa = strides[mode_a];
  const std::size_t sb = strides[mode_b];

  FockVector out(layout);
  const auto in = state.amplitudes();
  auto ov = out.amplitudes();

  // Iterate over all joint indices with the two target factors at zero, then
  // apply the pair matrix on the (da x db) block.
  std::vector<std::size_t> outer;
  const std::size_t dim = layout.dim();
  outer.reserve(dim / (std::size_t)(da * db));
  {
    std::vector<int> idx(layout.factors.size(), 0);
    for (std::size_t flat = 0; flat < dim; ++flat) {
      if (idx[mode_a] == 0 && idx[mode_b] == 0) {
        outer.push_back(flat);
      }
      for (int f = layout.factor_count() - 1; f >= 0; --f) {
        if (++idx[f] < layout.factors[f].dim()) break;
        idx[f] = 0;
      }
    }
  }

  std::vector<cplx> block_in((std::size_t)(da * db));
  double lost = 0.0;
  for (const std::size_t base : outer) {
    bool any = false;
    for (int m = 0; m < da; ++m) {
      for (int n = 0; n < db; ++n) {
        const cplx a = in[base + (std::size_t)m * sa + (std::size_t)n * sb];
        block_in[(std::size_t)(m * db + n)] = a;
        any = any || (a != cplx{});
      }
    }
    if (!any) continue;
    double in_nrm = 0.0, out_nrm = 0.0;
    for (int p = 0; p < da; ++p) {
      for (int q = 0; q < db; ++q) {
        cplx acc{};
        const cplx* row = &pair[(std::size_t)(p * db + q) * (std::size_t)(da * db)];
        for (int mn = 0; mn < da * db; ++mn) {
          if (block_in[(std::size_t)mn] != cplx{}) {
            acc += row[mn] * block_in[(std::size_t)mn];
          }
        }
        ov[base + (std::size_t)p * sa + (std::size_t)q * sb] = acc;
        out_nrm += std::norm(acc);
      }
    }
    for (const auto& a : block_in) in_nrm += std::norm(a);
    lost += std::max(0.0, in_nrm - out_nrm);
  }
  out.add_leakage(state.leakage() + lost);
  return out;
}

FockVector beam_splitter(const FockVector& state, int mode_a, int mode_b) {
  const auto& fs = state.layout().factors;
  check_mode_factor(state.layout(), mode_a, "beam_splitter");
  check_mode_factor(state.layout(), mode_b, "beam_splitter");
  if (fs[mode_a].cutoff != fs[mode_b].cutoff) {
    throw std::invalid_argument("beam_splitter: mismatched cutoffs");
  }
  const double r = 1.0 / std::sqrt(2.0);
  const cplx u[2][2] = {{r, r}, {r, -r}};
  return two_mode_mix(state, mode_a, mode_b, u);
}

FockVector loss_channel(const FockVector& state, int mode, double transmissivity) {
  check_mode_factor(state.layout(), mode, "loss_channel");
  if (transmissivity < 0.0 || transmissivity > 1.0) {
    throw std::invalid_argument("loss_channel: transmissivity outside [0,1]");
  }
  const int cutoff = state.layout().factors[mode].cutoff;
  // Append the vacuum ancilla as the last factor.
  FockVector ext = tensor(state, number_state(0, cutoff));
  const double t = std::sqrt(transmissivity);
  const double rr = std::sqrt(1.0 - transmissivity);
  const cplx u[2][2] = {{t, rr}, {rr, -t}};
  return two_mode_mix(ext, mode, ext.layout().factor_count() - 1, u);
}

FockVector number_projector(const FockVector& state, std::span<const int> modes, int n) {
  const auto& layout = state.layout();
  int cap = 0;
  for (int m : modes) {
    check_mode_factor(layout, m, "number_projector");
    cap += layout.factors[m].cutoff;
  }
  if (n < 0 || n > cap) {
    throw std::invalid_argument("number_projector: n exceeds the joint cutoff");
  }

  FockVector out(layout);
  const auto in = state.amplitudes();
  auto ov = out.amplitudes();
  std::vector<int> idx(layout.factors.size(), 0);
  const std::size_t dim = layout.dim();
  for (std::size_t flat = 0; flat < dim; ++flat) {
    int total = 0;
    for (int m : modes) total += idx[m];
    if (total == n) ov[flat] = in[flat];
    for (int f = layout.factor_count() - 1; f >= 0; --f) {
      if (++idx[f] < layout.factors[f].dim()) break;
      idx[f] = 0;
    }
  }
  out.add_leakage(state.leakage());
  return out;
}

cplx inner(const FockVector& a, const FockVector& b) {
  if (!(a.layout() == b.layout())) {
    throw std::invalid_argument("inner: layout mismatch");
  }
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  cplx acc{};
  for (std::size_t i = 0; i < av.size(); ++i) {
    acc += std::conj(av[i]) * bv[i];
  }
  return acc;
}

FockVector contract_qubit(const FockVector& state, int qubit_factor, cplx b0, cplx b1) {
  const auto& layout = state.layout();
  if (qubit_factor < 0 || qubit_factor >= layout.factor_count() ||
      layout.factors[qubit_factor].kind != Factor::Kind::Qubit) {
    throw std::invalid_argument("contract_qubit: not a qubit factor");
  }
  ModeLayout reduced;
  for (int f = 0; f < layout.factor_count(); ++f) {
    if (f != qubit_factor) reduced.factors.push_back(layout.factors[f]);
  }
  FockVector out(std::move(reduced));
  const auto strides = layout.strides();
  const std::size_t sq = strides[qubit_factor];
  const auto in = state.amplitudes();
  auto ov = out.amplitudes();
  const cplx w0 = std::conj(b0);
  const cplx w1 = std::conj(b1);

  std::vector<int> idx(layout.factors.size(), 0);
  const std::size_t dim = layout.dim();
  std::size_t rflat = 0;
  for (std::size_t flat = 0; flat < dim; ++flat) {
    if (idx[qubit_factor] == 0) {
      ov[rflat++] = w0 * in[flat] + w1 * in[flat + sq];
    }
    for (int f = layout.factor_count() - 1; f >= 0; --f) {
      if (++idx[f] < layout.factors[f].dim()) break;
      idx[f] = 0;
    }
  }
  return out;
}

std::vector<cplx> reduced_density(const FockVector& state, std::span<const int> keep) {
  const auto& layout = state.layout();
  std::size_t kdim = 1;
  for (int f : keep) {
    if (f < 0 || f >= layout.factor_count()) {
      throw std::invalid_argument("reduced_density: factor index out of range");
    }
    kdim *= static_cast<std::size_t>(layout.factors[f].dim());
  }
  // Group amplitudes by the traced-out multi-index.
  const std::size_t dim = layout.dim();
  const auto in = state.amplitudes();
  std::vector<int> idx(layout.factors.size(), 0);
  std::vector<std::size_t> kindex(dim), tindex(dim);
  std::size_t tdim = dim / kdim;
  for (std::size_t flat = 0; flat < dim; ++flat) {
    std::size_t ki = 0;
    for (int f : keep) ki = ki * layout.factors[f].dim() + idx[f];
    std::size_t ti = 0;
    for (int f = 0; f < layout.factor_count(); ++f) {
      bool kept = false;
      for (int g : keep) kept = kept || (g == f);
      if (!kept) ti = ti * layout.factors[f].dim() + idx[f];
    }
    kindex[flat] = ki;
    tindex[flat] = ti;
    for (int f = layout.factor_count() - 1; f >= 0; --f) {
      if (++idx[f] < layout.factors[f].dim()) break;
      idx[f] = 0;
    }
  }
  // rho[i][j] = sum_t psi(i,t) conj(psi(j,t))
  std::vector<std::vector<cplx>> grouped(tdim);
  for (auto& g : grouped) g.assign(kdim, cplx{});
  for (std::size_t flat = 0; flat < dim; ++flat) {
    grouped[tindex[flat]][kindex[flat]] = in[flat];
  }
  std::vector<cplx> rho(kdim * kdim, cplx{});
  for (const auto& g : grouped) {
    for (std::size_t i = 0; i < kdim; ++i) {
      if (g[i] == cplx{}) continue;
      for (std::size_t j = 0; j < kdim; ++j) {
        rho[i * kdim + j] += g[i] * std::conj(g[j]);
      }
    }
  }
  return rho;
}

std::vector<double> occupation_distribution(const FockVector& state, int mode) {
  const auto& layout = state.layout();
  check_mode_factor(layout, mode, "occupation_distribution");
  std::vector<double> p(static_cast<std::size_t>(layout.factors[mode].dim()), 0.0);
  const auto in = state.amplitudes();
  std::vector<int> idx(layout.factors.size(), 0);
  const std::size_t dim = layout.dim();
  for (std::size_t flat = 0; flat < dim; ++flat) {
    p[static_cast<std::size_t>(idx[mode])] += std::norm(in[flat]);
    for (int f = layout.factor_count() - 1; f >= 0; --f) {
      if (++idx[f] < layout.factors[f].dim()) break;
      idx[f] = 0;
    }
  }
  return p;
}

}  // namespace tfqkd::fock
