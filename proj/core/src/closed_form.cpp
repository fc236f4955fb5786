#include "spartan/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "spartan/bessel.hpp"
#include "spartan/errors.hpp"

namespace spartan {

namespace {

using std::numbers::pi;

// atanh(u)/u, well defined at u = 0.
double atanh_ratio(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 + u2 / 3.0 + u2 * u2 / 5.0;
  }
  return std::atanh(u) / u;
}

bool near_minus_two(double eta1) { return std::abs(eta1 + 2.0) <= critical_tolerance; }

void require_infinite_band_shape(double eta1) {
  if (!std::isfinite(eta1)) throw InvalidArgument("eta1 must be finite");
  if (eta1 <= -2.0) {
    throw InvalidArgument("infinite-band closed forms require eta1 > -2");
  }
}

void require_permissible_band(double eta1, Band x) {
  if (!std::isfinite(eta1)) throw InvalidArgument("eta1 must be finite");
  if (eta1 > -2.0) return;
  const double bound = std::sqrt(2.0 / (std::abs(eta1) + derive_constants(eta1).delta));
  if (x.is_infinite() || x.value() >= bound) {
    throw PermissibilityError("bandwidth is not permissible for eta1 <= -2");
  }
}

// Midpoint and half-gap of (omega1, omega2) for eta1 > 2, computed without
// subtracting nearly equal roots.
struct RootPair {
  double mid;
  double half_gap;
};

RootPair monotone_roots(const DerivedConstants& c) {
  const double mid = 0.5 * (c.omega1 + c.omega2);
  // omega2^2 - omega1^2 = Delta.
  return {mid, c.delta / (4.0 * mid)};
}

// Normalizing factor 2 pi / V(eta1, inf), shared by d = 1 and d = 3 since
// int dx/Pi = int x^2 dx/Pi over the half line.
double infinite_band_factor(double eta1) {
  const DerivedConstants c = derive_constants(eta1);
  switch (classify_regime(eta1)) {
    case Regime::Oscillatory: return 4.0 * c.beta2;
    case Regime::CriticalTwo: return 4.0;
    case Regime::Monotone: return 4.0 * monotone_roots(c).mid;
    case Regime::BandRestricted: break;
  }
  throw InvalidArgument("infinite-band closed forms require eta1 > -2");
}

double v_infinite(double eta1) { return 2.0 * pi / infinite_band_factor(eta1); }

}  // namespace

NormalizedLag::NormalizedLag(double h) : h_(h) {
  if (!std::isfinite(h) || h < 0.0) throw InvalidArgument("normalized lag must be >= 0");
}

NormalizedLag NormalizedLag::from_distance(double r, double xi) {
  if (!std::isfinite(xi) || !(xi > 0.0)) throw InvalidArgument("xi must be positive");
  if (!std::isfinite(r)) throw InvalidArgument("distance must be finite");
  return NormalizedLag(std::abs(r) / xi);
}

BranchFormula branch_formula(ClosedForm which, double eta1) {
  const Regime regime = classify_regime(eta1);
  const bool variance = which == ClosedForm::v1 || which == ClosedForm::v3;
  if (!variance && regime == Regime::BandRestricted) {
    throw InvalidArgument("infinite-band closed forms require eta1 > -2");
  }
  const bool one = which == ClosedForm::v1 || which == ClosedForm::w1 ||
                   which == ClosedForm::rho1 || which == ClosedForm::iscale1;
  switch (regime) {
    case Regime::Oscillatory:
      switch (which) {
        case ClosedForm::v1: return {regime, "log ratio / (4 beta1) + sum atan((x +- beta1)/beta2) / (2 beta2)"};
        case ClosedForm::v3: return {regime, "-log ratio / (4 beta1) + sum atan((x +- beta1)/beta2) / (2 beta2)"};
        case ClosedForm::w1: return {regime, "exp(-h beta2) [cos(h beta1)/(4 beta2) + sin(h beta1)/(4 beta1)]"};
        case ClosedForm::w3: return {regime, "exp(-h beta2) sin(h beta1) / (Delta h)"};
        case ClosedForm::rho1: return {regime, "exp(-h beta2) [cos(h beta1) + (beta2/beta1) sin(h beta1)]"};
        case ClosedForm::rho3: return {regime, "exp(-h beta2) sin(h beta1) / (h beta1)"};
        default: return {regime, one ? "4 xi beta2" : "2 xi (pi beta2)^(1/3)"};
      }
    case Regime::CriticalTwo:
      switch (which) {
        case ClosedForm::v1: return {regime, "atan(x) + x/(1 + x^2)"};
        case ClosedForm::v3: return {regime, "atan(x) - x/(1 + x^2)"};
        case ClosedForm::w1: return {regime, "(1 + h) exp(-h) / 4"};
        case ClosedForm::w3: return {regime, "exp(-h) / 4"};
        case ClosedForm::rho1: return {regime, "(1 + h) exp(-h)"};
        case ClosedForm::rho3: return {regime, "exp(-h)"};
        default: return {regime, one ? "4 xi" : "2 xi pi^(1/3)"};
      }
    case Regime::Monotone:
      switch (which) {
        case ClosedForm::v1: return {regime, "(2/Delta) [atan(x/omega1)/omega1 - atan(x/omega2)/omega2]"};
        case ClosedForm::v3: return {regime, "(2/Delta) [omega2 atan(x/omega2) - omega1 atan(x/omega1)]"};
        case ClosedForm::w1: return {regime, "[exp(-h omega1)/(2 omega1) - exp(-h omega2)/(2 omega2)] / Delta"};
        case ClosedForm::w3: return {regime, "[exp(-h omega1) - exp(-h omega2)] / (2 Delta h)"};
        case ClosedForm::rho1: return {regime, "[omega2 exp(-h omega1) - omega1 exp(-h omega2)] / (omega2 - omega1)"};
        case ClosedForm::rho3: return {regime, "[exp(-h omega1) - exp(-h omega2)] / (h (omega2 - omega1))"};
        default: return {regime, one ? "2 xi (omega1 + omega2)" : "2 xi [pi (omega1 + omega2)/2]^(1/3)"};
      }
    case Regime::BandRestricted:
      if (near_minus_two(eta1)) {
        return {regime, which == ClosedForm::v1 ? "x/(1 - x^2) + atanh(x)" : "x/(1 - x^2) - atanh(x)"};
      }
      return {regime, which == ClosedForm::v1
                          ? "(2/Delta) [atanh(x/omega2)/omega2 - atanh(x/omega1)/omega1]"
                          : "(2/Delta) [omega2 atanh(x/omega2) - omega1 atanh(x/omega1)]"};
  }
  return {regime, ""};
}

double v1(double eta1, Band x) {
  require_permissible_band(eta1, x);
  const DerivedConstants c = derive_constants(eta1);
  const Regime regime = classify_regime(eta1);
  if (x.is_infinite()) return v_infinite(eta1);
  const double t = x.value();
  switch (regime) {
    case Regime::Oscillatory: {
      // ln((x^2 + 2 b1 x + 1)/(x^2 - 2 b1 x + 1)) / (4 b1) = x/(1+x^2) * atanh(u)/u.
      const double u = 2.0 * c.beta1 * t / (1.0 + t * t);
      const double log_term = t / (1.0 + t * t) * atanh_ratio(u);
      const double atan_sum =
          std::atan((t + c.beta1) / c.beta2) + std::atan((t - c.beta1) / c.beta2);
      return log_term + atan_sum / (2.0 * c.beta2);
    }
    case Regime::CriticalTwo:
      return std::atan(t) + t / (1.0 + t * t);
    case Regime::Monotone:
      return 2.0 / c.delta *
             (std::atan(t / c.omega1) / c.omega1 - std::atan(t / c.omega2) / c.omega2);
    case Regime::BandRestricted: {
      if (near_minus_two(eta1)) return t / (1.0 - t * t) + std::atanh(t);
      // Real roots a = omega2 < b = omega1 of Pi(sqrt y) = 0.
      const double a = c.omega2;
      const double b = c.omega1;
      return 2.0 / c.delta * (std::atanh(t / a) / a - std::atanh(t / b) / b);
    }
  }
  return 0.0;
}

double v3(double eta1, Band x) {
  require_permissible_band(eta1, x);
  const DerivedConstants c = derive_constants(eta1);
  const Regime regime = classify_regime(eta1);
  // The x -> 1/x symmetry of dx/Pi(x) gives the same infinite-band limit as V1;
  // for eta1 > 2 it reads (pi/Delta)(omega2 - omega1) = pi/(omega1 + omega2).
  if (x.is_infinite()) return v_infinite(eta1);
  const double t = x.value();
  switch (regime) {
    case Regime::Oscillatory: {
      const double u = 2.0 * c.beta1 * t / (1.0 + t * t);
      const double log_term = t / (1.0 + t * t) * atanh_ratio(u);
      const double atan_sum =
          std::atan((t + c.beta1) / c.beta2) + std::atan((t - c.beta1) / c.beta2);
      return -log_term + atan_sum / (2.0 * c.beta2);
    }
    case Regime::CriticalTwo:
      return std::atan(t) - t / (1.0 + t * t);
    case Regime::Monotone:
      return 2.0 / c.delta *
             (c.omega2 * std::atan(t / c.omega2) - c.omega1 * std::atan(t / c.omega1));
    case Regime::BandRestricted: {
      if (near_minus_two(eta1)) return t / (1.0 - t * t) - std::atanh(t);
      const double a = c.omega2;
      const double b = c.omega1;
      return 2.0 / c.delta * (a * std::atanh(t / a) - b * std::atanh(t / b));
    }
  }
  return 0.0;
}

double rho1(NormalizedLag lag, double eta1) {
  require_infinite_band_shape(eta1);
  const double h = lag.value();
  const DerivedConstants c = derive_constants(eta1);
  switch (classify_regime(eta1)) {
    case Regime::Oscillatory:
      // (beta2/beta1) sin(h beta1) = beta2 h sinc(h beta1), finite as beta1 -> 0.
      return std::exp(-h * c.beta2) *
             (std::cos(h * c.beta1) + c.beta2 * h * sinc(h * c.beta1));
    case Regime::CriticalTwo:
      return (1.0 + h) * std::exp(-h);
    case Regime::Monotone: {
      // omega_{1,2} = m -+ g: the quotient becomes exp(-h m) [m h sinhc(h g) + cosh(h g)].
      const RootPair p = monotone_roots(c);
      return std::exp(-h * p.mid) *
             (p.mid * h * sinhc(h * p.half_gap) + std::cosh(h * p.half_gap));
    }
    case Regime::BandRestricted: break;
  }
  return 0.0;
}

double rho3(NormalizedLag lag, double eta1) {
  require_infinite_band_shape(eta1);
  const double h = lag.value();
  const DerivedConstants c = derive_constants(eta1);
  switch (classify_regime(eta1)) {
    case Regime::Oscillatory:
      return std::exp(-h * c.beta2) * sinc(h * c.beta1);
    case Regime::CriticalTwo:
      return std::exp(-h);
    case Regime::Monotone: {
      const RootPair p = monotone_roots(c);
      return std::exp(-h * p.mid) * sinhc(h * p.half_gap);
    }
    case Regime::BandRestricted: break;
  }
  return 0.0;
}

// W = rho / (2 pi / V(inf)); algebraically identical to the residue forms
// listed by branch_formula, but free of 0/0 at h = 0 and at eta1 -> 2.
double w1(NormalizedLag h, double eta1) { return rho1(h, eta1) / infinite_band_factor(eta1); }

double w3(NormalizedLag h, double eta1) { return rho3(h, eta1) / infinite_band_factor(eta1); }

double iscale1_asymptotic(double eta1, double xi) {
  require_infinite_band_shape(eta1);
  if (!std::isfinite(xi) || !(xi > 0.0)) throw InvalidArgument("xi must be positive");
  const DerivedConstants c = derive_constants(eta1);
  switch (classify_regime(eta1)) {
    case Regime::Oscillatory: return 4.0 * xi * c.beta2;
    case Regime::CriticalTwo: return 4.0 * xi;
    case Regime::Monotone: return 2.0 * xi * (c.omega1 + c.omega2);
    case Regime::BandRestricted: break;
  }
  return 0.0;
}

double iscale3_asymptotic(double eta1, double xi) {
  require_infinite_band_shape(eta1);
  if (!std::isfinite(xi) || !(xi > 0.0)) throw InvalidArgument("xi must be positive");
  const DerivedConstants c = derive_constants(eta1);
  switch (classify_regime(eta1)) {
    case Regime::Oscillatory: return 2.0 * xi * std::cbrt(pi * c.beta2);
    case Regime::CriticalTwo: return 2.0 * xi * std::cbrt(pi);
    case Regime::Monotone: return 2.0 * xi * std::cbrt(pi * (c.omega1 + c.omega2) / 2.0);
    case Regime::BandRestricted: break;
  }
  return 0.0;
}

double variance_closed_form(const ModelParams& params, Dim d) {
  params.validate();
  switch (d) {
    case Dim::one: return params.eta0 * v1(params.eta1, params.xc()) / (2.0 * pi);
    case Dim::three: return params.eta0 * v3(params.eta1, params.xc()) / (4.0 * pi * pi);
    case Dim::two: break;
  }
  throw InvalidArgument("no closed-form variance in d = 2");
}

double covariance_asymptotic(const ModelParams& params, Dim d, double r) {
  params.validate();
  const NormalizedLag h = NormalizedLag::from_distance(r, params.xi);
  switch (d) {
    case Dim::one: return params.eta0 * w1(h, params.eta1);
    case Dim::three: return params.eta0 / (2.0 * pi) * w3(h, params.eta1);
    case Dim::two: break;
  }
  throw InvalidArgument("no closed-form covariance in d = 2");
}

double autocorrelation_asymptotic(const ModelParams& params, Dim d, double r) {
  params.validate();
  const NormalizedLag h = NormalizedLag::from_distance(r, params.xi);
  switch (d) {
    case Dim::one: return rho1(h, params.eta1);
    case Dim::three: return rho3(h, params.eta1);
    case Dim::two: break;
  }
  throw InvalidArgument("no closed-form autocorrelation in d = 2");
}

}  // namespace spartan
