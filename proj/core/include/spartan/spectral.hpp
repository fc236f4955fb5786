#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spartan/model.hpp"
#include "spartan/quadrature.hpp"

namespace spartan {

struct SpectralDensityValue {
  double k = 0.0;
  double value = 0.0;
};

/// Provenance of tabulated covariance values.
enum class Method { quadrature, closed_form_exact, closed_form_asymptotic, series };

std::string_view to_string(Method m) noexcept;
std::optional<Method> method_from_string(std::string_view name) noexcept;

struct CovarianceProfile {
  Dim dimension = Dim::one;
  std::vector<double> lags;
  std::vector<double> values;
  Method method = Method::quadrature;

  /// Lags nonnegative and strictly increasing, one value per lag.
  void validate() const;
};

/// Band-limited (boxcar) spectral density eta0 xi^d / Pi(k xi), zero above kc.
/// Throws PermissibilityError for non-permissible parameters.
SpectralDensityValue spectral_density(const ModelParams& params, Dim d, double k);

/// Normalization c_d of the radial spectral integral:
/// G(r) = eta0 c_d int_0^{xc} x^{d-1} K_d(h x) / Pi(x) dx with K_d(0) = 1.
/// c_1 = 1/pi, c_2 = 1/(2 pi), c_3 = 1/(2 pi^2).
double radial_prefactor(Dim d) noexcept;

/// Normalized radial kernel K_d(z): cos z, J0(z), sin(z)/z.
double radial_kernel(Dim d, double z) noexcept;

/// int_0^{xc} x^{d-1+extra_power} K_d(h x) / Pi(x) dx, the dimensionless
/// building block shared by the covariance, variance, moment and Laplacian
/// integrals. Infinite bands at h = 0 use an exact x -> 1/x map of the tail;
/// at h > 0 the band is truncated where an analytic tail bound falls below
/// abs_tol and the bound is added to the reported error. Throws
/// DivergenceError (exponent d + extra_power - 4) for a divergent infinite
/// band integral.
QuadratureResult radial_integral(double eta1, Band xc, Dim d, int extra_power, double h,
                                 const QuadratureSpec& spec);

/// Covariance G(r) by quadrature of the spectral representation.
double covariance_quadrature(const ModelParams& params, Dim d, double r,
                             const QuadratureSpec& spec = {});

/// Partial sum (terms n = 0 .. n_terms-1) of the Bessel series of the
/// spectral representation. Finite bands only. Throws InsufficientTermsError
/// carrying the ratio-test threshold when it exceeds n_terms.
double covariance_series_small_r(const ModelParams& params, Dim d, double r, int n_terms,
                                 const QuadratureSpec& spec = {});

/// Variance G(0) by quadrature.
double variance_quadrature(const ModelParams& params, Dim d, const QuadratureSpec& spec = {});

/// Integral scale xi (eta0 / G(0))^{1/d}.
double integral_scale(const ModelParams& params, Dim d, const QuadratureSpec& spec = {});

/// Quadrature profile over a lag grid. Lags are evaluated concurrently;
/// the result does not depend on scheduling.
CovarianceProfile covariance_profile_quadrature(const ModelParams& params, Dim d,
                                                std::span<const double> lags,
                                                const QuadratureSpec& spec = {});

}  // namespace spartan
