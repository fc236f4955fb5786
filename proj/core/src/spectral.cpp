#include "spartan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "spartan/bessel.hpp"
#include "spartan/errors.hpp"
#include "spartan/smoothness.hpp"

namespace spartan {

namespace {

using std::numbers::pi;

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void require_lag(double r) {
  if (!std::isfinite(r) || r < 0.0) throw InvalidArgument("lag must be finite and nonnegative");
}

std::vector<double> interior_breakpoints(double eta1, double upper, double h,
                                         const QuadratureSpec& spec) {
  std::vector<double> points;
  if (spec.oscillation_split && h > 0.0) {
    points = periodic_breakpoints(0.0, upper, pi / h, std::max(1, spec.max_subdivisions / 2));
  }
  // Spectral peak of 1/Pi for negative eta1.
  if (eta1 < 0.0) {
    const double peak = std::sqrt(-eta1 / 2.0);
    if (peak < upper) points.push_back(peak);
  }
  return points;
}

// Analytic bound on |int_X^inf integrand| for the truncated infinite band.
double tail_bound(double eta1, Dim d, int extra_power, double h, double x) {
  const double pi_x = char_polynomial(x, eta1);
  switch (d) {
    case Dim::one:
      // Second mean value theorem: |int_X^inf g cos(h x)| <= 2 g(X) / h, g decreasing.
      return 2.0 * ipow(x, extra_power) / (pi_x * h);
    case Dim::three:
      // x^{2+p} sinc(h x) / Pi = [x^{1+p} / (h Pi)] sin(h x).
      return 2.0 * ipow(x, 1 + extra_power) / (pi_x * h * h);
    case Dim::two: {
      // |J0(z)| <= sqrt(2 / (pi z)) envelope (1% slack), Pi(x) >= cmin x^4.
      const double cmin = 1.0 + std::min(0.0, eta1) / (x * x);
      const double power = 2.5 - extra_power;
      return 1.01 * std::sqrt(2.0 / (pi * h)) * std::pow(x, -power) / (power * cmin);
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::closed_form_exact: return "closed_form_exact";
    case Method::closed_form_asymptotic: return "closed_form_asymptotic";
    case Method::series: return "series";
  }
  return "unknown";
}

std::optional<Method> method_from_string(std::string_view name) noexcept {
  for (Method m : {Method::quadrature, Method::closed_form_exact, Method::closed_form_asymptotic,
                   Method::series}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

void CovarianceProfile::validate() const {
  if (lags.size() != values.size()) throw InvalidArgument("profile lags/values size mismatch");
  for (std::size_t i = 0; i < lags.size(); ++i) {
    require_lag(lags[i]);
    if (i > 0 && !(lags[i] > lags[i - 1])) {
      throw InvalidArgument("profile lags must be strictly increasing");
    }
  }
}

SpectralDensityValue spectral_density(const ModelParams& params, Dim d, double k) {
  require_permissible(params);
  if (!std::isfinite(k) || k < 0.0) throw InvalidArgument("wavenumber must be finite and >= 0");
  SpectralDensityValue out{k, 0.0};
  if (params.kc.is_finite() && k > params.kc.value()) return out;
  out.value = params.eta0 * ipow(params.xi, to_int(d)) / char_polynomial(k * params.xi, params.eta1);
  return out;
}

double radial_prefactor(Dim d) noexcept {
  switch (d) {
    case Dim::one: return 1.0 / pi;
    case Dim::two: return 1.0 / (2.0 * pi);
    case Dim::three: return 1.0 / (2.0 * pi * pi);
  }
  return 0.0;
}

double radial_kernel(Dim d, double z) noexcept {
  switch (d) {
    case Dim::one: return std::cos(z);
    case Dim::two: return bessel_j0(z);
    case Dim::three: return sinc(z);
  }
  return 0.0;
}

QuadratureResult radial_integral(double eta1, Band xc, Dim d, int extra_power, double h,
                                 const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(eta1)) throw InvalidArgument("eta1 must be finite");
  if (!std::isfinite(h) || h < 0.0) throw InvalidArgument("normalized lag must be >= 0");
  if (extra_power < 0) throw InvalidArgument("extra_power must be >= 0");

  const int power = to_int(d) - 1 + extra_power;
  auto integrand = [=](double x) {
    return ipow(x, power) * radial_kernel(d, h * x) / char_polynomial(x, eta1);
  };

  if (eta1 <= -2.0) {
    const double bound = std::sqrt(2.0 / (std::abs(eta1) + derive_constants(eta1).delta));
    if (xc.is_infinite() || xc.value() >= bound) {
      throw PermissibilityError("band reaches a root of Pi(x); spectral integral is singular");
    }
  }

  if (xc.is_finite()) {
    const double upper = xc.value();
    const auto points = interior_breakpoints(eta1, upper, h, spec);
    return integrate(integrand, 0.0, upper, spec, points);
  }

  const int growth = to_int(d) + extra_power - 4;
  if (h == 0.0) {
    if (growth >= 0) {
      std::ostringstream os;
      os << "infinite-band radial integral of x^" << power
         << "/Pi(x) diverges; truncated value grows like xc^" << growth;
      throw DivergenceError(os.str(), growth);
    }
    const double split = std::max(2.0, 2.0 * std::sqrt(std::abs(eta1)));
    QuadratureSpec part = spec;
    part.abs_tol = spec.abs_tol / 2.0;
    const auto points = interior_breakpoints(eta1, split, 0.0, spec);
    const QuadratureResult head = integrate(integrand, 0.0, split, part, points);
    // x = 1/t maps [split, inf) onto (0, 1/split]; the image integrand is smooth.
    auto mapped = [=](double t) {
      return ipow(t, 2 - power) / (1.0 + eta1 * t * t + t * t * t * t);
    };
    const QuadratureResult tail = integrate(mapped, 0.0, 1.0 / split, part);
    return {head.value + tail.value, head.abs_error + tail.abs_error,
            head.intervals + tail.intervals};
  }

  const bool bounded = (d == Dim::one && extra_power < 4) ||
                       (d == Dim::three && extra_power < 3) ||
                       (d == Dim::two && extra_power < 2);
  if (!bounded) {
    throw DivergenceError("infinite-band oscillatory integral is not absolutely bounded",
                          growth);
  }
  double upper = std::max(10.0, std::sqrt(std::abs(eta1) + 4.0) + 10.0);
  const double target = 0.5 * spec.abs_tol;
  while (tail_bound(eta1, d, extra_power, h, upper) > target) {
    upper *= 2.0;
    if (upper > 1e9) {
      throw AccuracyError("infinite-band truncation point exceeds 1e9", tail_bound(eta1, d, extra_power, h, upper), target);
    }
  }
  QuadratureSpec part = spec;
  part.abs_tol = spec.abs_tol / 2.0;
  const auto points = interior_breakpoints(eta1, upper, h, spec);
  QuadratureResult result = integrate(integrand, 0.0, upper, part, points);
  result.abs_error += tail_bound(eta1, d, extra_power, h, upper);
  return result;
}

double covariance_quadrature(const ModelParams& params, Dim d, double r,
                             const QuadratureSpec& spec) {
  require_permissible(params);
  require_lag(r);
  const double h = r / params.xi;
  return params.eta0 * radial_prefactor(d) *
         radial_integral(params.eta1, params.xc(), d, 0, h, spec).value;
}

double variance_quadrature(const ModelParams& params, Dim d, const QuadratureSpec& spec) {
  require_permissible(params);
  return params.eta0 * radial_prefactor(d) *
         radial_integral(params.eta1, params.xc(), d, 0, 0.0, spec).value;
}

double covariance_series_small_r(const ModelParams& params, Dim d, double r, int n_terms,
                                 const QuadratureSpec& spec) {
  require_permissible(params);
  require_lag(r);
  if (params.kc.is_infinite()) {
    throw InvalidArgument("Bessel series of the covariance requires a finite band");
  }
  if (n_terms < 1) throw InvalidArgument("n_terms must be >= 1");
  const double kc_r = params.kc.value() * r;
  if (kc_r > 0.0) {
    const int needed = ratio_test_threshold(kc_r, d);
    if (needed > n_terms) {
      throw InsufficientTermsError("series needs at least the ratio-test threshold n0 = " +
                                       std::to_string(needed) + " terms",
                                   needed);
    }
  }

  const double h = r / params.xi;
  const double xc = params.xc().value();
  const double eta1 = params.eta1;
  const double half_d = to_int(d) / 2.0;
  const int power = to_int(d) - 1;
  // Individual terms may exceed the sum; integrate each one tightly.
  QuadratureSpec term_spec = spec;
  term_spec.rel_tol = std::min(spec.rel_tol, 1e-13);
  term_spec.abs_tol = std::min(spec.abs_tol, 1e-15);

  CompensatedSum sum;
  const int terms = (h == 0.0) ? 1 : n_terms;
  for (int n = 0; n < terms; ++n) {
    const double log_norm = std::lgamma(n + 1.0) + std::lgamma(n + half_d);
    auto integrand = [=](double x) {
      const double radial = ipow(x, power) / char_polynomial(x, eta1);
      if (n == 0) return radial * std::exp(-log_norm);
      const double z = 0.5 * h * x;
      if (z <= 0.0) return 0.0;
      return radial * std::exp(2.0 * n * std::log(z) - log_norm);
    };
    std::vector<double> points;
    if (eta1 < 0.0 && std::sqrt(-eta1 / 2.0) < xc) points.push_back(std::sqrt(-eta1 / 2.0));
    const double term = integrate(integrand, 0.0, xc, term_spec, points).value;
    sum.add((n % 2 == 0) ? term : -term);
  }
  const double prefactor =
      params.eta0 / (std::pow(2.0 * pi, half_d) * std::pow(2.0, half_d - 1.0));
  return prefactor * sum.value();
}

double integral_scale(const ModelParams& params, Dim d, const QuadratureSpec& spec) {
  const double variance = variance_quadrature(params, d, spec);
  if (!(variance > 0.0)) throw AccuracyError("variance is not positive", variance, 0.0);
  return params.xi * std::pow(params.eta0 / variance, 1.0 / to_int(d));
}

CovarianceProfile covariance_profile_quadrature(const ModelParams& params, Dim d,
                                                std::span<const double> lags,
                                                const QuadratureSpec& spec) {
  require_permissible(params);
  CovarianceProfile profile;
  profile.dimension = d;
  profile.method = Method::quadrature;
  profile.lags.assign(lags.begin(), lags.end());
  profile.values.assign(lags.size(), 0.0);
  profile.validate();
  detail::parallel_for(lags.size(), [&](std::size_t i) {
    profile.values[i] = covariance_quadrature(params, d, lags[i], spec);
  });
  return profile;
}

}  // namespace spartan
