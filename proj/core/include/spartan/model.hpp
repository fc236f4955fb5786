#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace spartan {

/// Spatial dimension of the field. Only 1, 2 and 3 are supported.
enum class Dim : int { one = 1, two = 2, three = 3 };

constexpr int to_int(Dim d) noexcept { return static_cast<int>(d); }

/// Throws InvalidArgument unless d is 1, 2 or 3.
Dim dim_from_int(int d);

/// Upper edge of a spectral band: either a finite positive value or the
/// infinite-band limit. The infinite band is a distinct state, never a large
/// number, so asymptotic code paths are selected structurally.
class Band {
 public:
  static Band finite(double value);
  static Band infinite() noexcept { return Band{}; }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  bool is_finite() const noexcept { return value_.has_value(); }

  /// Throws InvalidArgument for the infinite band.
  double value() const;

  /// Multiplies a finite edge by a positive factor; infinite stays infinite.
  Band scaled(double factor) const;

  friend bool operator==(const Band&, const Band&) = default;

 private:
  Band() = default;
  explicit Band(double v) : value_(v) {}

  std::optional<double> value_;
};

/// FGC Spartan parameter set (eta0, eta1, xi, kc).
struct ModelParams {
  double eta0 = 1.0;  ///< scale coefficient, > 0
  double eta1 = 0.0;  ///< shape coefficient, any finite real
  double xi = 1.0;    ///< characteristic length, > 0
  Band kc = Band::infinite();  ///< wavenumber cutoff

  /// Dimensionless bandwidth kc*xi.
  Band xc() const { return kc.scaled(xi); }

  /// Throws InvalidArgument on any structural violation.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Builds and validates a parameter set from a dimensionless bandwidth.
ModelParams params_from_xc(double eta0, double eta1, double xi, Band xc);

/// Dimensionless constants induced by the shape coefficient.
struct DerivedConstants {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double delta = 0.0;
};

DerivedConstants derive_constants(double eta1);

enum class Regime {
  Oscillatory,     ///< |eta1| < 2
  CriticalTwo,     ///< eta1 == 2 (within critical_tolerance)
  Monotone,        ///< eta1 > 2
  BandRestricted,  ///< eta1 <= -2
};

/// Half-width of the window around eta1 = 2 that is classified CriticalTwo.
inline constexpr double critical_tolerance = 1e-9;

Regime classify_regime(double eta1);

std::string_view to_string(Regime r) noexcept;

struct PermissibilityReport {
  bool permissible = false;
  Regime regime = Regime::Oscillatory;
  /// Strict upper bound on kc*xi; std::nullopt when any band is allowed.
  std::optional<double> max_allowed_xc;
  std::string reason;
};

PermissibilityReport check_permissibility(const ModelParams& params);

/// Throws PermissibilityError when check_permissibility says no.
void require_permissible(const ModelParams& params);

/// Pi(x) = 1 + eta1 x^2 + x^4.
constexpr double char_polynomial(double x, double eta1) noexcept {
  const double x2 = x * x;
  return 1.0 + eta1 * x2 + x2 * x2;
}

}  // namespace spartan
