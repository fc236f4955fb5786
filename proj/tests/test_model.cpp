#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "spartan/errors.hpp"
#include "spartan/model.hpp"

using namespace spartan;

namespace {

ModelParams with_xc(double eta1, double xc) {
  return params_from_xc(1.0, eta1, 1.0, Band::finite(xc));
}

}  // namespace

TEST(DerivedConstants, CriticalValue) {
  const DerivedConstants c = derive_constants(2.0);
  EXPECT_EQ(c.beta1, 0.0);
  EXPECT_DOUBLE_EQ(c.beta2, 1.0);
  EXPECT_EQ(c.delta, 0.0);
}

TEST(DerivedConstants, ZeroShape) {
  const DerivedConstants c = derive_constants(0.0);
  EXPECT_NEAR(c.beta1, 0.7071068, 1e-7);
  EXPECT_NEAR(c.beta2, 0.7071068, 1e-7);
  EXPECT_DOUBLE_EQ(c.delta, 2.0);
}

TEST(DerivedConstants, GoldenRatioPair) {
  const DerivedConstants c = derive_constants(3.0);
  EXPECT_NEAR(c.delta, 2.2360680, 1e-7);
  EXPECT_NEAR(c.omega1, 0.6180340, 1e-7);
  EXPECT_NEAR(c.omega2, 1.6180340, 1e-7);
  EXPECT_NEAR(c.omega1 * c.omega2, 1.0, 1e-15);
}

TEST(DerivedConstants, OscillatoryIdentitiesOnDenseGrid) {
  for (int i = 1; i < 4000; ++i) {
    const double eta1 = -2.0 + i * 0.001;
    const DerivedConstants c = derive_constants(eta1);
    EXPECT_NEAR(c.beta1 * c.beta1 + c.beta2 * c.beta2, 1.0, 1e-12) << eta1;
    EXPECT_NEAR(c.delta, 4.0 * c.beta1 * c.beta2, 1e-12) << eta1;
  }
}

TEST(DerivedConstants, MonotoneIdentitiesOnDenseGrid) {
  for (int i = 1; i <= 4000; ++i) {
    const double eta1 = 2.0 + i * 0.005;
    const DerivedConstants c = derive_constants(eta1);
    EXPECT_NEAR(c.omega1 * c.omega2, 1.0, 1e-12) << eta1;
    EXPECT_NEAR(c.omega2 * c.omega2 - c.omega1 * c.omega1, c.delta, 1e-12 * std::max(1.0, c.delta))
        << eta1;
  }
}

TEST(DerivedConstants, RejectsNonFinite) {
  EXPECT_THROW(derive_constants(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
  EXPECT_THROW(derive_constants(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(-1.0), Regime::Oscillatory);
  EXPECT_EQ(classify_regime(2.0), Regime::CriticalTwo);
  EXPECT_EQ(classify_regime(2.0 + 0.5e-9), Regime::CriticalTwo);
  EXPECT_EQ(classify_regime(2.0 + 2e-9), Regime::Monotone);
  EXPECT_EQ(classify_regime(-2.5), Regime::BandRestricted);
  EXPECT_EQ(classify_regime(-2.0), Regime::BandRestricted);
  EXPECT_THROW(classify_regime(std::nan("")), InvalidArgument);
}

TEST(Permissibility, OscillatoryAnyBand) {
  const PermissibilityReport r = check_permissibility(with_xc(-1.0, 100.0));
  EXPECT_TRUE(r.permissible);
  EXPECT_FALSE(r.max_allowed_xc.has_value());
}

TEST(Permissibility, BandRestrictedBelowBound) {
  const PermissibilityReport r = check_permissibility(with_xc(-3.0, 0.5));
  EXPECT_TRUE(r.permissible);
  ASSERT_TRUE(r.max_allowed_xc.has_value());
  EXPECT_NEAR(*r.max_allowed_xc, 0.6180340, 1e-7);
}

TEST(Permissibility, BandRestrictedAboveBound) {
  const PermissibilityReport r = check_permissibility(with_xc(-2.5, 1.0));
  EXPECT_FALSE(r.permissible);
  ASSERT_TRUE(r.max_allowed_xc.has_value());
  EXPECT_NEAR(*r.max_allowed_xc, 0.7071068, 1e-7);
  EXPECT_THROW(require_permissible(with_xc(-2.5, 1.0)), PermissibilityError);
}

TEST(Permissibility, MarginalShapeUsesLimitBound) {
  const PermissibilityReport r = check_permissibility(with_xc(-2.0, 0.99));
  EXPECT_TRUE(r.permissible);
  EXPECT_DOUBLE_EQ(*r.max_allowed_xc, 1.0);
  EXPECT_FALSE(check_permissibility(with_xc(-2.0, 1.0)).permissible);
}

TEST(Permissibility, InfiniteBandNeedsShapeAboveMinusTwo) {
  ModelParams p;
  p.eta1 = -2.0;
  EXPECT_FALSE(check_permissibility(p).permissible);
  p.eta1 = -1.999;
  EXPECT_TRUE(check_permissibility(p).permissible);
}

TEST(Permissibility, HighPassWindowRejected) {
  // Above the upper root Pi is positive again, but the band still covers
  // the negative stretch.
  EXPECT_FALSE(check_permissibility(with_xc(-3.0, 5.0)).permissible);
}

TEST(Permissibility, MonotoneInBandwidth) {
  for (double eta1 : {-4.0, -3.0, -2.5, -2.1, -2.0}) {
    bool seen_impermissible = false;
    for (int i = 1; i <= 200; ++i) {
      const bool ok = check_permissibility(with_xc(eta1, 0.01 * i)).permissible;
      if (seen_impermissible) EXPECT_FALSE(ok) << eta1 << " " << 0.01 * i;
      if (!ok) seen_impermissible = true;
    }
    EXPECT_TRUE(seen_impermissible);
  }
}

TEST(Permissibility, PolynomialPositiveInsidePermissibleBand) {
  for (double eta1 : {-5.0, -3.0, -2.2, -2.0, -1.9, 0.0, 2.0, 7.0}) {
    const double bound = eta1 <= -2.0 ? *check_permissibility(with_xc(eta1, 0.1)).max_allowed_xc : 50.0;
    const double xc = 0.999 * bound;
    ASSERT_TRUE(check_permissibility(with_xc(eta1, xc)).permissible);
    for (int i = 0; i <= 10000; ++i) {
      EXPECT_GT(char_polynomial(xc * i / 10000.0, eta1), 0.0);
    }
  }
}

TEST(CharPolynomial, Values) {
  EXPECT_EQ(char_polynomial(0.0, -7.3), 1.0);
  EXPECT_EQ(char_polynomial(1.0, -2.0), 0.0);
  EXPECT_EQ(char_polynomial(1.0, 3.0), 5.0);
}

TEST(ModelParams, Validation) {
  ModelParams p;
  EXPECT_NO_THROW(p.validate());
  p.eta0 = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.eta0 = 1.0;
  p.xi = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.xi = 1.0;
  p.eta1 = std::numeric_limits<double>::infinity();
  EXPECT_THROW(p.validate(), InvalidArgument);
  EXPECT_THROW(Band::finite(0.0), InvalidArgument);
  EXPECT_THROW(Band::finite(std::numeric_limits<double>::infinity()), InvalidArgument);
  EXPECT_THROW(Band::infinite().value(), InvalidArgument);
}

TEST(ModelParams, BandwidthFromDimensionless) {
  const ModelParams p = params_from_xc(2.0, 1.0, 0.5, Band::finite(3.0));
  EXPECT_DOUBLE_EQ(p.kc.value(), 6.0);
  EXPECT_DOUBLE_EQ(p.xc().value(), 3.0);
  EXPECT_TRUE(params_from_xc(1.0, 0.0, 2.0, Band::infinite()).xc().is_infinite());
}

TEST(Dimension, FromInt) {
  EXPECT_EQ(dim_from_int(2), Dim::two);
  EXPECT_THROW(dim_from_int(0), InvalidArgument);
  EXPECT_THROW(dim_from_int(4), InvalidArgument);
}
