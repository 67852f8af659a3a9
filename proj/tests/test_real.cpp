#include <gtest/gtest.h>

#include "airysum/real.hpp"

using airysum::Real;

TEST(Real, RejectsPrecisionBelow64Bits) {
  EXPECT_THROW(Real(1, 63), std::invalid_argument);
  EXPECT_NO_THROW(Real(1, 64));
}

TEST(Real, BinaryOpsTakeTheLargerPrecision) {
  Real a(1, 64), b(3, 300);
  EXPECT_EQ((a + b).precision(), 300);
  EXPECT_EQ((b * a).precision(), 300);
  EXPECT_EQ((a / b).precision(), 300);
  EXPECT_EQ((a * 7L).precision(), 64);
}

TEST(Real, OneThirdIsCorrectToPrecision) {
  Real third = Real(1, 256) / Real(3, 256);
  Real back = third * 3L - 1L;
  EXPECT_LT(airysum::abs(back), airysum::pow2(-250, 256));
}

TEST(Real, ParsesDecimalStringsAndRejectsGarbage) {
  Real x("2.338107410459767038489197252446735440638", 256);
  EXPECT_NEAR(x.to_double(), 2.338107410459767, 1e-15);
  EXPECT_THROW(Real("2.3x", 256), std::invalid_argument);
}

TEST(Real, StringRoundTripIsExact) {
  Real x = airysum::sqrt(Real(2, 200));
  Real y(x.str(), 200);
  EXPECT_EQ(x, y);
}

TEST(Real, RationalOperandsAreExactBeforeRounding) {
  Real x(0, 128);
  x += mpq_class(1, 3);
  x *= mpq_class(3, 1);
  EXPECT_LT(airysum::abs(x - 1L), airysum::pow2(-126, 128));
}

template <class T, class U>
concept Multipliable = requires(T t, U u) { t * u; };

TEST(Real, DoubleArithmeticIsRejectedAtCompileTime) {
  static_assert(!Multipliable<Real, double>);
  static_assert(!Multipliable<double, Real>);
  static_assert(Multipliable<Real, long>);
  static_assert(Multipliable<Real, int>);
  static_assert(Multipliable<Real, Real>);
}

TEST(Real, ComparisonWithDouble) {
  Real x(0.5, 64);
  EXPECT_TRUE(x < 0.75);
  EXPECT_TRUE(x > 0.25);
  EXPECT_EQ(x.sign(), 1);
  EXPECT_EQ((-x).sign(), -1);
  EXPECT_TRUE(Real(64).is_zero());
}
