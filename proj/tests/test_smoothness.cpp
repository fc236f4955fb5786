#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spartan/errors.hpp"
#include "spartan/smoothness.hpp"
#include "spartan/spectral.hpp"
#include "support/oracle.hpp"

using namespace spartan;
using std::numbers::pi;

namespace {

ModelParams finite(double eta1, double xc, double xi = 1.0) {
  return params_from_xc(1.0, eta1, xi, Band::finite(xc));
}

ModelParams infinite(double eta1) { return params_from_xc(1.0, eta1, 1.0, Band::infinite()); }

}  // namespace

TEST(MomentIntegral, Examples) {
  EXPECT_NEAR(moment_integral(finite(2.0, 1.0), Dim::one, 0), (pi / 4 + 0.5) / 2, 1e-12);
  EXPECT_NEAR(moment_integral(finite(2.0, 1.0), Dim::one, 0), 0.6426991, 1e-7);
  EXPECT_NEAR(moment_integral(infinite(2.0), Dim::one, 1), pi / 4, 1e-10);
  try {
    moment_integral(infinite(2.0), Dim::three, 1);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.exponent(), 1);
  }
}

TEST(MomentIntegral, FiniteBandAllOrders) {
  for (Dim d : {Dim::one, Dim::two, Dim::three}) {
    for (int n = 0; n <= max_reported_order; ++n) {
      const double m = moment_integral(finite(-1.0, 3.0), d, n);
      EXPECT_TRUE(std::isfinite(m));
      EXPECT_GT(m, 0.0);
    }
  }
  EXPECT_THROW(moment_integral(finite(0.0, 1.0), Dim::one, max_reported_order + 1), InvalidArgument);
  EXPECT_THROW(moment_integral(finite(0.0, 1.0), Dim::one, -1), InvalidArgument);
}

TEST(MomentIntegral, MatchesOracle) {
  for (int d : {1, 2, 3}) {
    for (int n : {0, 2, 5}) {
      auto f = [=](double x) { return std::pow(x, d + 2 * n - 1) / oracle::pi_poly(x, 0.7); };
      const double expect = oracle::simpson(f, 0.0, 4.0, 400000);
      EXPECT_NEAR(moment_integral(finite(0.7, 4.0), dim_from_int(d), n), expect, 1e-10 * expect);
    }
  }
}

TEST(MomentIntegral, InfiniteBandTable) {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n <= 2; ++n) {
      const bool converges = d + 2 * n < 4;
      if (converges) {
        EXPECT_NO_THROW(moment_integral(infinite(0.0), dim_from_int(d), n)) << d << n;
      } else {
        try {
          moment_integral(infinite(0.0), dim_from_int(d), n);
          ADD_FAILURE() << d << " " << n;
        } catch (const DivergenceError& e) {
          EXPECT_EQ(e.exponent(), d + 2 * n - 4);
        }
      }
    }
  }
}

TEST(DerivativeMoment, XiScaling) {
  for (int n = 0; n <= 4; ++n) {
    const double a = derivative_moment(finite(1.0, 5.0, 1.0), Dim::three, n);
    const double b = derivative_moment(finite(1.0, 5.0, 2.0), Dim::three, n);
    EXPECT_NEAR(b, a * std::pow(2.0, -2.0 * n), 1e-12 * a);
  }
}

TEST(Smoothness, FiniteBandUnbounded) {
  for (Dim d : {Dim::one, Dim::two, Dim::three}) {
    const SmoothnessReport r = max_ms_derivative_order(finite(0.0, 5.0), d);
    EXPECT_FALSE(r.max_ms_order.has_value());
    EXPECT_TRUE(r.divergence_exponents.empty());
    EXPECT_EQ(r.moment_values.size(), 5u);
    EXPECT_EQ(r.band, Band::finite(5.0));
  }
}

TEST(Smoothness, InfiniteBandOrders) {
  EXPECT_EQ(max_ms_derivative_order(infinite(0.0), Dim::one).max_ms_order, 1);
  EXPECT_EQ(max_ms_derivative_order(infinite(0.0), Dim::two).max_ms_order, 0);
  const SmoothnessReport r = max_ms_derivative_order(infinite(3.0), Dim::three);
  EXPECT_EQ(r.max_ms_order, 0);
  EXPECT_EQ(r.divergence_exponents.at(1), 1);
  EXPECT_EQ(r.divergence_exponents.at(4), 7);
  EXPECT_EQ(r.moment_values.count(0), 1u);
  EXPECT_THROW(max_ms_derivative_order(infinite(-2.0), Dim::one), PermissibilityError);
}

TEST(RatioTest, Examples) {
  EXPECT_EQ(ratio_test_threshold(1.0, Dim::one), 0);
  EXPECT_EQ(ratio_test_threshold(10.0, Dim::one), 9);
  EXPECT_EQ(ratio_test_threshold(10.0, Dim::three), 9);
  EXPECT_THROW(ratio_test_threshold(0.0, Dim::one), InvalidArgument);
}

TEST(RatioTest, SmallestSatisfyingOrder) {
  for (Dim d : {Dim::one, Dim::two, Dim::three}) {
    int prev = 0;
    for (int i = 1; i <= 3000; ++i) {
      const double kr = 0.01 * i;
      const int n = ratio_test_threshold(kr, d);
      const double hd = to_int(d) / 2.0;
      EXPECT_GE((n + 1.0) * (n + 1.0 + hd), kr * kr);
      if (n > 0) EXPECT_LT(n * (n + hd), kr * kr);
      EXPECT_GE(n, prev);
      prev = n;
    }
  }
}

TEST(Zeta, ZeroLag) { EXPECT_EQ(zeta_partial_sum(finite(2.0, 2.0), Dim::one, 0.0, 1), 0.0); }

TEST(Zeta, MatchesLaplacianOracle) {
  const double expect = oracle::zeta(1, 2.0, 2.0, 0.1);
  EXPECT_NEAR(zeta_partial_sum(finite(2.0, 2.0), Dim::one, 0.1, 12), expect, 1e-6);
  for (int d : {1, 2, 3}) {
    for (double h : {0.05, 0.5, 2.0}) {
      const double o = oracle::zeta(d, -1.0, 3.0, h);
      EXPECT_NEAR(zeta_partial_sum(finite(-1.0, 3.0), dim_from_int(d), h, 40), o, 1e-9 * o + 1e-13)
          << d << " " << h;
    }
  }
}

TEST(Zeta, NonnegativeAndLogBounded) {
  const ModelParams p = finite(0.0, 4.0);
  double bound = 0.0;
  for (int i = 1; i < 100; ++i) {
    const double r = 0.01 * i;
    const double z = zeta_partial_sum(p, Dim::one, r, 40);
    EXPECT_GE(z, 0.0);
    bound = std::max(bound, z * std::pow(std::log(r), 2));
  }
  EXPECT_LT(bound, 10.0);
}

TEST(Zeta, PartialSumsContract) {
  const ModelParams p = finite(1.0, 5.0);
  const double r = 1.0;
  const int n0 = ratio_test_threshold(5.0, Dim::one) + zeta_term_margin;
  double prev_sum = zeta_partial_sum(p, Dim::one, r, n0);
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int n = n0 + 1; n < n0 + 8; ++n) {
    const double s = zeta_partial_sum(p, Dim::one, r, n);
    const double gap = std::abs(s - prev_sum);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
    prev_sum = s;
  }
}

TEST(Zeta, RefusesTooFewTerms) {
  try {
    zeta_partial_sum(finite(0.0, 10.0), Dim::one, 1.0, 3);
    FAIL();
  } catch (const InsufficientTermsError& e) {
    EXPECT_EQ(e.required(), 9 + zeta_term_margin);
  }
  EXPECT_THROW(zeta_partial_sum(infinite(0.0), Dim::one, 1.0, 30), InvalidArgument);
}
