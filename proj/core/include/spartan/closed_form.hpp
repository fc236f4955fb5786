#pragma once

#include <string_view>

#include "spartan/model.hpp"

namespace spartan {

/// Dimensionless lag h = |r| / xi.
class NormalizedLag {
 public:
  /// Throws InvalidArgument for negative or non-finite h.
  explicit NormalizedLag(double h);
  static NormalizedLag from_distance(double r, double xi);

  double value() const noexcept { return h_; }

 private:
  double h_;
};

/// Which analytic branch produced a closed-form value.
struct BranchFormula {
  Regime regime;
  std::string_view expression;
};

enum class ClosedForm { v1, v3, w1, w3, rho1, rho3, iscale1, iscale3 };

/// The branch used by `which` at this eta1. Throws InvalidArgument where the
/// closed form is undefined (eta1 <= -2 for the infinite-band forms).
BranchFormula branch_formula(ClosedForm which, double eta1);

// Variance functions: sigma^2 = eta0 V1 / (2 pi) in d = 1 and
// sigma^2 = eta0 V3 / (4 pi^2) in d = 3. Exact for every permissible
// bandwidth x = kc xi, including eta1 <= -2 below the permissibility bound.
// Throw PermissibilityError for a non-permissible (eta1, x).
double v1(double eta1, Band x);
double v3(double eta1, Band x);

// Infinite-band covariance: G = eta0 W1(h) in d = 1, G = (eta0 / 2 pi) W3(h)
// in d = 3. Throw InvalidArgument for eta1 <= -2.
double w1(NormalizedLag h, double eta1);
double w3(NormalizedLag h, double eta1);

// Infinite-band autocorrelations, rho(0) = 1.
double rho1(NormalizedLag h, double eta1);
double rho3(NormalizedLag h, double eta1);

// Infinite-band integral scales, linear in xi.
double iscale1_asymptotic(double eta1, double xi);
double iscale3_asymptotic(double eta1, double xi);

/// Closed-form variance for d = 1 or 3 (InvalidArgument for d = 2).
double variance_closed_form(const ModelParams& params, Dim d);

/// Infinite-band covariance G(r) for d = 1 or 3.
double covariance_asymptotic(const ModelParams& params, Dim d, double r);

/// Infinite-band autocorrelation for d = 1 or 3.
double autocorrelation_asymptotic(const ModelParams& params, Dim d, double r);

}  // namespace spartan
