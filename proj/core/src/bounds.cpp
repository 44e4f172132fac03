#include "tfqkd/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace tfqkd::bounds {

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("binary_entropy: argument outside [0,1]");
  }
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double kl_divergence(double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
    throw std::domain_error("kl_divergence: arguments outside [0,1]");
  }
  if (x == y) {
    return 0.0;
  }
  if (y == 0.0 || y == 1.0) {
    // D diverges whenever x puts mass where y has none.
    throw std::domain_error("kl_divergence: y in {0,1} with x != y");
  }
  double d = 0.0;
  if (x > 0.0) {
    d += x * std::log(x / y);
  }
  if (x < 1.0) {
    d += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
  }
  return d;
}

double azuma_delta(std::int64_t n, double eps) {
  if (n < 1 || eps <= 0.0 || eps > 1.0) {
    throw std::domain_error("azuma_delta: need n >= 1 and eps in (0,1]");
  }
  return std::sqrt((2.0 / static_cast<double>(n)) * std::log(1.0 / eps));
}

double hoeffding_delta(std::int64_t n, double eps) {
  if (n < 1 || eps <= 0.0 || eps > 1.0) {
    throw std::domain_error("hoeffding_delta: need n >= 1 and eps in (0,1]");
  }
  return std::sqrt(std::log(1.0 / eps) / (2.0 * static_cast<double>(n)));
}

ChernoffDelta chernoff_delta(double p, std::int64_t n, double eps, TailSide side) {
  if (p <= 0.0 || p >= 1.0 || n < 1 || eps <= 0.0 || eps > 1.0) {
    throw std::domain_error("chernoff_delta: need p in (0,1), n >= 1, eps in (0,1]");
  }
  const double target = std::log(1.0 / eps) / static_cast<double>(n);  // D(p+-delta || p) = target
  const double delta_max = (side == TailSide::Upper) ? 1.0 - p : p;
  auto dev = [&](double delta) {
    const double q = (side == TailSide::Upper) ? p + delta : p - delta;
    return kl_divergence(q, p);
  };

  ChernoffDelta out;
  if (target == 0.0) {
    return out;  // eps = 1: zero deviation
  }
  if (dev(delta_max) < target) {
    out.delta = delta_max;
    out.saturated = true;
    return out;
  }
  double lo = 0.0;
  double hi = delta_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dev(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * std::max(hi, 1e-300)) {
      break;
    }
  }
  out.delta = hi;  // upper end of the bracket: coverage at least eps
  return out;
}

}  // namespace tfqkd::bounds
