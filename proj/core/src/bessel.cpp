#include "spartan/bessel.hpp"

#include <cmath>
#include <numbers>

namespace spartan {

namespace {

double j0_miller(double x) {
  const int start = 2 * static_cast<int>(0.5 * (x + 40.0 + 10.0 * std::sqrt(x)));
  double next = 0.0;  // J_{k+1}
  double cur = 1.0;   // J_k, arbitrary normalization
  double norm = 2.0 * cur;  // start is even
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
    }
    const int order = k - 1;
    if (order > 0 && order % 2 == 0) norm += 2.0 * cur;
  }
  norm += cur;
  return cur / norm;
}

double j0_hankel(double x) {
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;  // a_k / x^k
  double last = std::abs(a);
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= -(odd * odd) / (8.0 * k * x);
      const double mag = std::abs(a);
      if (mag > last) break;  // asymptotic series started to diverge
      last = mag;
    }
    // (-1)^{floor(k/2)} sign pattern of the P and Q series.
    const double term = ((k / 2) % 2 == 0) ? a : -a;
    if (k % 2 == 0) {
      p += term;
    } else {
      q += term;
    }
    if (last < 1e-17) break;
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  // cos(x - pi/4) and sin(x - pi/4) without reducing the shifted argument.
  const double cos_chi = (c + s) * std::numbers::sqrt2 / 2.0;
  const double sin_chi = (s - c) * std::numbers::sqrt2 / 2.0;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

double bessel_j0(double x) noexcept {
  x = std::abs(x);
  if (!std::isfinite(x)) return std::isinf(x) ? 0.0 : x;
  if (x < 1e-4) {
    const double t = 0.25 * x * x;
    return 1.0 - t + 0.25 * t * t;
  }
  if (x < 25.0) return j0_miller(x);
  return j0_hankel(x);
}

double sinc(double x) noexcept {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinhc(double x) noexcept {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

}  // namespace spartan
