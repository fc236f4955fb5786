#include "spartan/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spartan/errors.hpp"
#include "spartan/spectral.hpp"

namespace spartan {

namespace {

constexpr int report_orders = 4;

void require_order(int n) {
  if (n < 0 || n > max_reported_order) {
    throw InvalidArgument("derivative order must be in [0, " +
                          std::to_string(max_reported_order) + "]");
  }
}

}  // namespace

double moment_integral(const ModelParams& params, Dim d, int n, const QuadratureSpec& spec) {
  require_permissible(params);
  require_order(n);
  return radial_integral(params.eta1, params.xc(), d, 2 * n, 0.0, spec).value;
}

double derivative_moment(const ModelParams& params, Dim d, int n, const QuadratureSpec& spec) {
  return params.eta0 * std::pow(params.xi, -2.0 * n) * moment_integral(params, d, n, spec);
}

SmoothnessReport max_ms_derivative_order(const ModelParams& params, Dim d,
                                         const QuadratureSpec& spec) {
  require_permissible(params);
  SmoothnessReport report;
  report.dimension = d;
  report.band = params.xc();
  if (params.kc.is_finite()) {
    for (int n = 0; n <= report_orders; ++n) {
      report.moment_values[n] = moment_integral(params, d, n, spec);
    }
    return report;
  }
  int highest = -1;
  for (int n = 0; n <= report_orders; ++n) {
    const int exponent = to_int(d) + 2 * n - 4;
    if (exponent < 0) {
      report.moment_values[n] = moment_integral(params, d, n, spec);
      highest = n;
    } else {
      report.divergence_exponents[n] = exponent;
    }
  }
  report.max_ms_order = highest;
  return report;
}

int ratio_test_threshold(double kc_r, Dim d) {
  if (!std::isfinite(kc_r) || !(kc_r > 0.0)) {
    throw InvalidArgument("kc*r must be finite and positive");
  }
  const double target = kc_r * kc_r;
  const double half_d = to_int(d) / 2.0;
  auto passes = [&](double n) { return (n + 1.0) * (n + 1.0 + half_d) >= target; };
  // Positive root of (n+1)(n+1+d/2) = target as a starting guess.
  const double guess =
      std::floor((-half_d + std::sqrt(half_d * half_d + 4.0 * target)) / 2.0 - 1.0);
  double n = std::max(0.0, guess);
  while (n > 0.0 && passes(n - 1.0)) n -= 1.0;
  while (!passes(n)) n += 1.0;
  return static_cast<int>(n);
}

double zeta_partial_sum(const ModelParams& params, Dim d, double r, int n_terms,
                        const QuadratureSpec& spec) {
  require_permissible(params);
  if (params.kc.is_infinite()) {
    throw InvalidArgument("zeta series requires a finite band");
  }
  if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("lag must be finite and >= 0");
  if (r == 0.0) return 0.0;
  const int needed = ratio_test_threshold(params.kc.value() * r, d) + zeta_term_margin;
  if (n_terms < needed) {
    throw InsufficientTermsError(
        "zeta series needs at least " + std::to_string(needed) + " terms", needed);
  }

  const double h = r / params.xi;
  const double xc = params.xc().value();
  const double eta1 = params.eta1;
  const int dd = to_int(d);
  const double half_d = dd / 2.0;
  QuadratureSpec term_spec = spec;
  term_spec.rel_tol = std::min(spec.rel_tol, 1e-13);
  term_spec.abs_tol = std::min(spec.abs_tol, 1e-15);

  CompensatedSum sum;
  for (int n = 1; n <= n_terms; ++n) {
    const double log_norm = std::lgamma(n + 1.0) + std::lgamma(n + half_d);
    auto integrand = [=](double x) {
      const double z = 0.5 * h * x;
      if (z <= 0.0) return 0.0;
      const double radial = std::pow(x, dd + 1) / char_polynomial(x, eta1);
      return radial * std::exp(2.0 * n * std::log(z) - log_norm);
    };
    const double term = integrate(integrand, 0.0, xc, term_spec).value;
    sum.add((n % 2 == 0) ? term : -term);
  }
  const double prefactor = params.eta0 / (params.xi * params.xi) *
                           std::pow(2.0, 1.0 - half_d) /
                           std::pow(2.0 * std::numbers::pi, half_d);
  return -prefactor * sum.value();
}

}  // namespace spartan
