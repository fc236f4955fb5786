#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spartan {

/// Tolerances and budget for the adaptive quadrature engine.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 20000;  ///< total interval budget, including initial splits
  bool oscillation_split = true;  ///< pre-split oscillatory kernels at half periods

  /// Throws InvalidArgument on nonpositive tolerances or budget.
  void validate() const;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration of f over [a, b].
/// Interior breakpoints (any order, out-of-range values ignored) seed the
/// initial partition. Throws AccuracyError if max(abs_tol, rel_tol*|I|) is
/// not reached within spec.max_subdivisions intervals.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec,
                           std::span<const double> breakpoints = {});

/// Multiples of `spacing` strictly inside (a, b). When more than max_count
/// would be produced the spacing is widened by an integer factor.
std::vector<double> periodic_breakpoints(double a, double b, double spacing, int max_count);

}  // namespace spartan
