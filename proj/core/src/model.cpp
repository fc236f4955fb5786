#include "spartan/model.hpp"

#include <cmath>
#include <sstream>

#include "spartan/errors.hpp"

namespace spartan {

Dim dim_from_int(int d) {
  if (d < 1 || d > 3) {
    throw InvalidArgument("dimension must be 1, 2 or 3, got " + std::to_string(d));
  }
  return static_cast<Dim>(d);
}

Band Band::finite(double value) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw InvalidArgument("band edge must be finite and positive");
  }
  return Band{value};
}

double Band::value() const {
  if (!value_) throw InvalidArgument("infinite band has no finite edge");
  return *value_;
}

Band Band::scaled(double factor) const {
  if (!value_) return *this;
  return Band::finite(*value_ * factor);
}

void ModelParams::validate() const {
  if (!std::isfinite(eta0) || !(eta0 > 0.0)) {
    throw InvalidArgument("eta0 must be finite and positive");
  }
  if (!std::isfinite(eta1)) throw InvalidArgument("eta1 must be finite");
  if (!std::isfinite(xi) || !(xi > 0.0)) {
    throw InvalidArgument("xi must be finite and positive");
  }
  if (kc.is_finite()) {
    const double k = kc.value();
    if (!std::isfinite(k) || !(k > 0.0) || !std::isfinite(k * xi)) {
      throw InvalidArgument("kc must be finite and positive");
    }
  }
}

ModelParams params_from_xc(double eta0, double eta1, double xi, Band xc) {
  ModelParams p;
  p.eta0 = eta0;
  p.eta1 = eta1;
  p.xi = xi;
  if (!std::isfinite(xi) || !(xi > 0.0)) {
    throw InvalidArgument("xi must be finite and positive");
  }
  p.kc = xc.scaled(1.0 / xi);
  p.validate();
  return p;
}

DerivedConstants derive_constants(double eta1) {
  if (!std::isfinite(eta1)) throw InvalidArgument("eta1 must be finite");
  DerivedConstants c;
  const double a = std::abs(2.0 - eta1);
  const double b = std::abs(2.0 + eta1);
  c.beta1 = std::sqrt(a) / 2.0;
  c.beta2 = std::sqrt(b) / 2.0;
  // |eta1^2 - 4| factored to avoid cancellation near |eta1| = 2.
  c.delta = std::sqrt(a * b);
  if (eta1 >= 2.0) {
    // omega1 * omega2 = 1; take the larger root directly.
    c.omega2 = std::sqrt((eta1 + c.delta) / 2.0);
    c.omega1 = 1.0 / c.omega2;
  } else if (eta1 <= -2.0) {
    c.omega1 = std::sqrt((c.delta - eta1) / 2.0);
    c.omega2 = 1.0 / c.omega1;
  } else {
    c.omega1 = std::sqrt(std::abs(eta1 - c.delta) / 2.0);
    c.omega2 = std::sqrt(std::abs(eta1 + c.delta) / 2.0);
  }
  return c;
}

Regime classify_regime(double eta1) {
  if (!std::isfinite(eta1)) throw InvalidArgument("eta1 must be finite");
  if (std::abs(eta1 - 2.0) <= critical_tolerance) return Regime::CriticalTwo;
  if (eta1 > 2.0) return Regime::Monotone;
  if (eta1 <= -2.0) return Regime::BandRestricted;
  return Regime::Oscillatory;
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Oscillatory: return "oscillatory";
    case Regime::CriticalTwo: return "critical_two";
    case Regime::Monotone: return "monotone";
    case Regime::BandRestricted: return "band_restricted";
  }
  return "unknown";
}

PermissibilityReport check_permissibility(const ModelParams& params) {
  params.validate();
  PermissibilityReport report;
  report.regime = classify_regime(params.eta1);
  if (report.regime != Regime::BandRestricted) {
    report.permissible = true;
    report.reason = "eta1 > -2: Pi(x) > 0 for every x, any band is permissible";
    return report;
  }

  // Smaller positive root of Pi(sqrt y): y = (|eta1| - Delta)/2 = 2/(|eta1| + Delta).
  const DerivedConstants c = derive_constants(params.eta1);
  const double bound = std::sqrt(2.0 / (std::abs(params.eta1) + c.delta));
  report.max_allowed_xc = bound;

  std::ostringstream os;
  os.precision(9);
  if (params.kc.is_infinite()) {
    report.permissible = false;
    os << "eta1 <= -2 with an infinite band: Pi(x) has a root at x = " << bound;
  } else {
    const double xc = params.xc().value();
    report.permissible = xc < bound;
    if (report.permissible) {
      os << "eta1 <= -2: kc*xi = " << xc << " lies below the first root " << bound;
    } else {
      os << "eta1 <= -2: kc*xi = " << xc << " reaches the first root " << bound
         << " of Pi (bands above the upper root act as high-pass filters and are rejected)";
    }
  }
  report.reason = os.str();
  return report;
}

void require_permissible(const ModelParams& params) {
  const PermissibilityReport r = check_permissibility(params);
  if (!r.permissible) throw PermissibilityError(r.reason);
}

}  // namespace spartan
