#pragma once

#include <map>
#include <optional>

#include "spartan/model.hpp"
#include "spartan/quadrature.hpp"

namespace spartan {

/// Largest derivative order listed in smoothness reports.
inline constexpr int max_reported_order = 10;

/// Mean-square differentiability summary for one (params, d).
struct SmoothnessReport {
  Dim dimension = Dim::one;
  Band band = Band::infinite();  ///< dimensionless bandwidth kc xi
  std::optional<int> max_ms_order;  ///< std::nullopt means every order exists
  std::map<int, double> moment_values;      ///< order n -> radial moment integral
  std::map<int, int> divergence_exponents;  ///< order n -> growth exponent in kc xi
};

/// Radial factor int_0^{xc} x^{d+2n-1} / Pi(x) dx of the 2n-th covariance
/// derivative at the origin (angular factor excluded). Throws DivergenceError
/// with exponent d + 2n - 4 for an infinite band with d + 2n >= 4.
double moment_integral(const ModelParams& params, Dim d, int n, const QuadratureSpec& spec = {});

/// eta0 xi^{-2n} moment_integral: the 2n-th derivative moment up to the
/// angular factor.
double derivative_moment(const ModelParams& params, Dim d, int n, const QuadratureSpec& spec = {});

/// Finite band: every order exists. Infinite band: orders with d + 2n < 4.
/// Lists moments (or divergence exponents) for n = 0 .. 4.
SmoothnessReport max_ms_derivative_order(const ModelParams& params, Dim d,
                                         const QuadratureSpec& spec = {});

/// Smallest n >= 0 with 1/((n+1)(n+1+d/2)) <= (kc r)^-2.
int ratio_test_threshold(double kc_r, Dim d);

/// Extra terms beyond the ratio-test threshold demanded by zeta_partial_sum.
inline constexpr int zeta_term_margin = 2;

/// Partial sum over n = 1 .. n_terms of the series for
/// zeta(r) = -[Laplacian G(0) - Laplacian G(r)]. Finite bands only. Throws
/// InsufficientTermsError when n_terms < threshold + zeta_term_margin.
double zeta_partial_sum(const ModelParams& params, Dim d, double r, int n_terms,
                        const QuadratureSpec& spec = {});

}  // namespace spartan
