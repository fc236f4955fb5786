#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "spartan/closed_form.hpp"
#include "spartan/errors.hpp"
#include "spartan/spectral.hpp"
#include "support/oracle.hpp"

using namespace spartan;
using std::numbers::pi;

namespace {

ModelParams finite(double eta1, double xc, double eta0 = 1.0, double xi = 1.0) {
  return params_from_xc(eta0, eta1, xi, Band::finite(xc));
}

ModelParams infinite(double eta1, double eta0 = 1.0, double xi = 1.0) {
  return params_from_xc(eta0, eta1, xi, Band::infinite());
}

}  // namespace

TEST(SpectralDensity, Values) {
  const ModelParams p = finite(2.0, 5.0, 1.5, 2.0);
  EXPECT_DOUBLE_EQ(spectral_density(p, Dim::one, 0.0).value, 1.5 * 2.0);
  EXPECT_DOUBLE_EQ(spectral_density(p, Dim::three, 0.0).value, 1.5 * 8.0);
  EXPECT_EQ(spectral_density(p, Dim::one, 2.6).value, 0.0);
  EXPECT_DOUBLE_EQ(spectral_density(finite(2.0, 5.0), Dim::one, 1.0).value, 0.25);
  EXPECT_THROW(spectral_density(finite(-2.5, 1.0), Dim::one, 0.1), PermissibilityError);
}

TEST(SpectralDensity, NonnegativeInBand) {
  for (double eta1 : {-3.0, -2.0, -1.9, 0.0, 2.0, 6.0}) {
    const double xc = eta1 <= -2.0 ? 0.6 : 30.0;
    const ModelParams p = finite(eta1, xc, 1.0, 0.7);
    for (int i = 0; i < 10000; ++i) {
      const double k = p.kc.value() * i / 9999.0;
      for (Dim d : {Dim::one, Dim::two, Dim::three}) {
        EXPECT_GE(spectral_density(p, d, k).value, 0.0);
      }
    }
  }
}

TEST(RadialKernel, Values) {
  EXPECT_EQ(radial_kernel(Dim::one, 0.0), 1.0);
  EXPECT_EQ(radial_kernel(Dim::two, 0.0), 1.0);
  EXPECT_EQ(radial_kernel(Dim::three, 0.0), 1.0);
  EXPECT_NEAR(radial_kernel(Dim::three, pi), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(radial_prefactor(Dim::three), 1.0 / (2 * pi * pi));
}

TEST(Covariance, CriticalShapeOneDimension) {
  EXPECT_NEAR(covariance_quadrature(finite(2.0, 50.0), Dim::one, 1.0), 0.18394, 1e-3);
}

TEST(Covariance, CriticalShapeThreeDimensions) {
  EXPECT_NEAR(covariance_quadrature(finite(2.0, 50.0), Dim::three, 1.0), 0.014638, 1e-4);
}

TEST(Covariance, MatchesSimpsonOracle) {
  for (int d : {1, 2, 3}) {
    for (double eta1 : {-1.9, 0.0, 2.0, 5.0}) {
      for (double h : {0.0, 0.3, 1.0, 4.0}) {
        const double expect = oracle::covariance(d, eta1, 10.0, h);
        const double got = covariance_quadrature(finite(eta1, 10.0), dim_from_int(d), h);
        EXPECT_NEAR(got, expect, 1e-9 * std::abs(expect) + 1e-12) << d << " " << eta1 << " " << h;
      }
    }
  }
}

TEST(Covariance, BandRestrictedMatchesOracle) {
  const double got = covariance_quadrature(finite(-3.0, 0.6), Dim::one, 2.0);
  EXPECT_NEAR(got, oracle::covariance(1, -3.0, 0.6, 2.0), 1e-10);
  EXPECT_THROW(covariance_quadrature(finite(-3.0, 0.7), Dim::one, 2.0), PermissibilityError);
}

TEST(Covariance, ScalesWithParameters) {
  // G scales linearly in eta0 and depends on r only through r / xi.
  const double base = covariance_quadrature(finite(0.5, 8.0), Dim::three, 1.3);
  const double scaled = covariance_quadrature(finite(0.5, 8.0, 3.0, 2.0), Dim::three, 2.6);
  EXPECT_NEAR(scaled, 3.0 * base, 1e-10);
}

TEST(Covariance, ZeroLagEqualsVarianceAcrossSweep) {
  for (int d : {1, 2, 3}) {
    for (double eta1 : {-1.9, -1.0, 0.0, 1.0, 2.0, 3.0, 5.0}) {
      for (double xc : {0.5, 2.0, 10.0}) {
        const ModelParams p = finite(eta1, xc);
        const double v = variance_quadrature(p, dim_from_int(d));
        EXPECT_NEAR(covariance_quadrature(p, dim_from_int(d), 0.0), v, 1e-9 * v);
      }
    }
  }
}

TEST(Covariance, BoundedByVariance) {
  for (int d : {1, 2, 3}) {
    for (double eta1 : {-1.9, 0.0, 3.0}) {
      const ModelParams p = finite(eta1, 20.0);
      const double v = variance_quadrature(p, dim_from_int(d));
      for (int i = 1; i <= 60; ++i) {
        EXPECT_LE(std::abs(covariance_quadrature(p, dim_from_int(d), 0.1 * i)), v * (1 + 1e-12));
      }
    }
  }
}

TEST(Covariance, InfiniteBandMatchesClosedForm) {
  for (double eta1 : {-1.9, 0.0, 2.0, 5.0}) {
    for (double h : {0.0, 0.5, 2.0, 6.0}) {
      EXPECT_NEAR(covariance_quadrature(infinite(eta1), Dim::one, h),
                  covariance_asymptotic(infinite(eta1), Dim::one, h), 1e-9)
          << eta1 << " " << h;
      EXPECT_NEAR(covariance_quadrature(infinite(eta1), Dim::three, h),
                  covariance_asymptotic(infinite(eta1), Dim::three, h), 1e-9)
          << eta1 << " " << h;
    }
  }
}

TEST(Covariance, InfiniteBandTwoDimensions) {
  // Compare with a long finite band plus the analytic tail x^{-3} J0 bound.
  const double inf = covariance_quadrature(infinite(0.0), Dim::two, 1.0);
  const double fin = covariance_quadrature(finite(0.0, 400.0), Dim::two, 1.0);
  EXPECT_NEAR(inf, fin, 1e-7);
}

TEST(Covariance, PositiveSemidefiniteMatrixTwoDimensions) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const ModelParams p = finite(-1.0, 5.0);
  const int n = 30;
  std::vector<std::array<double, 2>> pts(n);
  for (auto& pt : pts) pt = {u(gen), u(gen)};
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double r = std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
      c(i, j) = c(j, i) = covariance_quadrature(p, Dim::two, r);
    }
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues().minCoeff();
  EXPECT_GE(min_eig, -1e-8 * c.trace());
}

TEST(Variance, ClosedFormExamples) {
  EXPECT_NEAR(variance_quadrature(finite(2.0, 1.0), Dim::one), (pi / 4 + 0.5) / (2 * pi), 1e-12);
  EXPECT_NEAR(variance_quadrature(finite(2.0, 1.0), Dim::one), 0.20457747, 1e-8);
  EXPECT_NEAR(variance_quadrature(infinite(2.0, 3.0), Dim::one), 0.75, 1e-12);
  EXPECT_NEAR(variance_quadrature(infinite(2.0), Dim::three), 1.0 / (8 * pi), 1e-12);
}

TEST(Variance, TwoDimensionsMatchesOracle) {
  for (double eta1 : {-1.9, 0.0, 4.0}) {
    const double v = variance_quadrature(finite(eta1, 7.0), Dim::two);
    EXPECT_NEAR(v, oracle::variance(2, eta1, 7.0), 1e-10 * v);
  }
}

TEST(Variance, InfiniteBandTwoDimensionsIsAnalytic) {
  // int_0^inf x / (1 + x^4) dx = pi / 4 at eta1 = 0.
  EXPECT_NEAR(variance_quadrature(infinite(0.0), Dim::two), (pi / 4) / (2 * pi), 1e-12);
}

TEST(IntegralScale, Examples) {
  EXPECT_NEAR(integral_scale(infinite(0.0), Dim::one), 2.8284271, 1e-7);
  EXPECT_NEAR(integral_scale(infinite(2.0, 1.0, 1.5), Dim::one), 6.0, 1e-10);
  EXPECT_NEAR(integral_scale(infinite(2.0), Dim::three), 2.0 * std::cbrt(pi), 1e-10);
  EXPECT_NEAR(integral_scale(infinite(2.0), Dim::three), 2.92918378, 1e-8);
}

TEST(RadialIntegral, Divergence) {
  try {
    radial_integral(0.0, Band::infinite(), Dim::three, 2, 0.0, {});
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.exponent(), 1);
  }
  EXPECT_THROW(radial_integral(-2.0, Band::infinite(), Dim::one, 0, 0.0, {}), PermissibilityError);
}

TEST(Series, ZeroLagIsVariance) {
  const ModelParams p = finite(1.0, 6.0);
  for (Dim d : {Dim::one, Dim::two, Dim::three}) {
    EXPECT_NEAR(covariance_series_small_r(p, d, 0.0, 1), variance_quadrature(p, d), 1e-13);
  }
}

TEST(Series, AgreesWithQuadrature) {
  const ModelParams p = finite(2.0, 50.0);
  EXPECT_NEAR(covariance_series_small_r(p, Dim::one, 0.01, 30),
              covariance_quadrature(p, Dim::one, 0.01), 1e-8);
  for (Dim d : {Dim::one, Dim::two, Dim::three}) {
    for (double eta1 : {-1.0, 2.0, 4.0}) {
      const ModelParams q = finite(eta1, 10.0);
      for (double kr : {0.5, 2.0, 4.9}) {
        const double r = kr / 10.0;
        const double quad = covariance_quadrature(q, d, r);
        EXPECT_NEAR(covariance_series_small_r(q, d, r, 40), quad, 1e-8 * std::abs(quad))
            << to_int(d) << " " << eta1 << " " << kr;
      }
    }
  }
}

TEST(Series, RefusesTooFewTerms) {
  const ModelParams p = finite(0.0, 10.0);
  try {
    covariance_series_small_r(p, Dim::one, 1.0, 5);
    FAIL();
  } catch (const InsufficientTermsError& e) {
    EXPECT_EQ(e.required(), 9);
  }
  EXPECT_THROW(covariance_series_small_r(infinite(0.0), Dim::one, 0.1, 30), InvalidArgument);
}

TEST(Profile, ParallelMatchesPointwise) {
  const ModelParams p = finite(-1.0, 15.0);
  std::vector<double> lags;
  for (int i = 0; i < 40; ++i) lags.push_back(0.25 * i);
  const CovarianceProfile prof = covariance_profile_quadrature(p, Dim::two, lags);
  ASSERT_EQ(prof.values.size(), lags.size());
  EXPECT_EQ(prof.method, Method::quadrature);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    EXPECT_EQ(prof.values[i], covariance_quadrature(p, Dim::two, lags[i]));
  }
  EXPECT_EQ(prof.values[0], variance_quadrature(p, Dim::two));
}

TEST(Profile, Validation) {
  CovarianceProfile p;
  p.lags = {0.0, 1.0, 1.0};
  p.values = {1.0, 0.5, 0.2};
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.lags = {-1.0, 1.0, 2.0};
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.lags = {0.0, 1.0};
  EXPECT_THROW(p.validate(), InvalidArgument);
  std::vector<double> bad{1.0, 0.5};
  EXPECT_THROW(covariance_profile_quadrature(finite(0.0, 1.0), Dim::one, bad), InvalidArgument);
}

TEST(Method, NamesRoundTrip) {
  for (Method m : {Method::quadrature, Method::closed_form_exact, Method::closed_form_asymptotic,
                   Method::series}) {
    EXPECT_EQ(method_from_string(to_string(m)), m);
  }
  EXPECT_FALSE(method_from_string("bogus").has_value());
}
