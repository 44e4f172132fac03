#pragma once

#include <cstdint>

namespace tfqkd::bounds {

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

/// Kullback-Leibler divergence D(x||y) in nats for Bernoulli distributions.
/// Requires y in (0,1) unless x == y.
double kl_divergence(double x, double y);

/// Azuma deviation term f_Az(n, eps) = sqrt((2/n) ln(1/eps)).
double azuma_delta(std::int64_t n, double eps);

/// Hoeffding deviation term f_Hoe(n, eps) = sqrt(ln(1/eps) / (2n)).
double hoeffding_delta(std::int64_t n, double eps);

enum class TailSide { Upper, Lower };

struct ChernoffDelta {
  double delta = 0.0;
  // True when no delta in [0, 1-p] (resp. [0, p]) reaches the requested
  // failure probability; delta is then the boundary value and the implied
  // coverage is weaker than eps.
  bool saturated = false;
};

/// Solves exp(-D(p + delta || p) * n) = eps (upper side; lower side uses
/// p - delta) for delta by bisection. D is strictly increasing in delta so
/// the root is unique when it exists.
ChernoffDelta chernoff_delta(double p, std::int64_t n, double eps, TailSide side);

}  // namespace tfqkd::bounds
