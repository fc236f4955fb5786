#pragma once

namespace spartan {

/// Bessel function of the first kind of order zero.
///
/// Miller's backward recurrence normalized by J0 + 2 sum J_{2k} = 1 for
/// |x| < 25, and the Hankel asymptotic expansion beyond. Absolute error is
/// below 1e-14 on the whole real line.
double bessel_j0(double x) noexcept;

/// sin(x)/x with the removable singularity filled in.
double sinc(double x) noexcept;

/// sinh(x)/x with the removable singularity filled in.
double sinhc(double x) noexcept;

}  // namespace spartan
