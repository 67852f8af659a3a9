#include <gtest/gtest.h>

#include "airysum/matrix_elements.hpp"
#include "airysum/quadrature.hpp"

using namespace airysum;

namespace {

ZetaPoly m(int e, long a, long b) { return ZetaPoly::monomial(e, make_rational(a, b)); }

const ZeroTable& table() {
  static const ZeroTable t = build_zero_table(12, 192);
  return t;
}

const QuadratureBatch& batch() {
  static const QuadratureBatch b = quadrature_batch(5, 5, table(), 1e-20, 128);
  return b;
}

}  // namespace

TEST(Diagonal, ClosedFormsThroughFifthPower) {
  const auto d = diagonal_table(5);
  EXPECT_EQ(d[0], ZetaPoly(1));
  EXPECT_EQ(d[1], m(1, 2, 3));
  EXPECT_EQ(d[2], m(2, 8, 15));
  EXPECT_EQ(d[3], m(3, 16, 35) + m(0, 3, 7));
  EXPECT_EQ(d[4], m(4, 128, 315) + m(1, 80, 63));
  EXPECT_EQ(d[5], m(5, 256, 693) + m(2, 1808, 693));
  EXPECT_EQ(diagonal(5).value, d[5]);
  EXPECT_THROW(diagonal_table(-1), std::invalid_argument);
}

TEST(Diagonal, QuadratureConfirmsFifthPowerAndRejectsMisprint) {
  for (long n = 1; n <= 3; ++n) {
    const Real zn = table().zeta(n);
    const Real got = batch().values[5][n - 1][n - 1].value;
    EXPECT_LT(abs(got - diagonal(5).value.eval(zn).with_precision(128)), 1e-12);
    const ZetaPoly misprint = m(5, 256, 693) + m(2, 1808, 3003);
    EXPECT_GT(abs(got - misprint.eval(zn).with_precision(128)), 1.0);
  }
}

TEST(OffDiagonal, ClosedFormsThroughFourthPower) {
  const auto l = off_diagonal_table(4);
  EXPECT_TRUE(l[0].is_zero());
  EXPECT_EQ(l[1], DeltaLaurent(ZetaPoly(2), -2, true));
  EXPECT_EQ(l[4].coefficient(-8), ZetaPoly(40320));
  long fact = 1;
  for (int q = 1; q <= 4; ++q) {
    fact *= (2 * q - 1) * (2 * q);
    EXPECT_TRUE(l[q].sigma());
    EXPECT_EQ(l[q].min_power(), -2 * q) << q;
    // leading term (2q)! sigma / Delta^(2q)
    EXPECT_EQ(l[q].coefficient(-2 * q), ZetaPoly(fact)) << q;
  }
  EXPECT_EQ(off_diagonal(4).value, l[4]);
}

TEST(OffDiagonal, FullFormsThroughFourthPower) {
  const auto l = off_diagonal_table(4);
  auto term = [](long c, int e, int zpow = 0) { return DeltaLaurent(ZetaPoly::monomial(zpow, Rational(c)), e, true); };
  EXPECT_EQ(l[2], term(24, -4));
  EXPECT_EQ(l[3], term(720, -6) + term(-48, -4, 1) + term(-24, -3));
  EXPECT_EQ(l[4], term(40320, -8) + term(-3840, -6, 1) + term(-1920, -5));
}

TEST(OffDiagonal, AgreesWithQuadrature) {
  const auto l = off_diagonal_table(5);
  for (int q = 0; q <= 5; ++q) {
    for (long n = 1; n <= 5; ++n) {
      for (long k = 1; k <= 5; ++k) {
        if (k == n) continue;
        const Real zn = table().zeta(n).with_precision(128), zk = table().zeta(k).with_precision(128);
        const int sigma = ((n - k + 1) % 2 == 0) ? 1 : -1;
        const Real want = q == 0 ? Real(128) : l[q].eval(zn, zk - zn, sigma);
        const Real got = batch().values[q][n - 1][k - 1].value;
        EXPECT_LT(abs(got - want), 1e-8) << "q=" << q << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(OffDiagonal, HermiticityUnderEndpointSwap) {
  // <n|z^q|k> = <k|z^q|n>: evaluating at (n,k) and at (k,n) agrees
  const auto l = off_diagonal_table(6);
  for (int q = 1; q <= 6; ++q) {
    const DeltaLaurent s = swap_endpoints(l[q]);
    for (long n = 1; n <= 4; ++n) {
      for (long k = n + 1; k <= 5; ++k) {
        const Real zn = table().zeta(n), zk = table().zeta(k);
        const int sigma = ((n - k + 1) % 2 == 0) ? 1 : -1;
        const Real a = l[q].eval(zn, zk - zn, sigma);
        const Real b = s.eval(zn, zk - zn, sigma);
        const Real c = l[q].eval(zk, zn - zk, sigma);
        const Real tol = abs(a) * Real("1e-40", 256);
        EXPECT_LT(abs(a - b), tol);
        EXPECT_LT(abs(a - c), tol);
      }
    }
  }
}

TEST(Quadrature, Orthonormality) {
  for (long n = 1; n <= 5; ++n) {
    for (long k = 1; k <= 5; ++k) {
      const Real v = batch().values[0][n - 1][k - 1].value;
      EXPECT_NEAR(v.to_double(), n == k ? 1.0 : 0.0, 1e-15) << n << "," << k;
    }
  }
}

TEST(Quadrature, SingleElementAndBadInput) {
  const QuadratureResult r = quadrature_element(1, 2, 1, table());
  const Real d = table().zeta(2) - table().zeta(1);
  // <1|z|2> = 2 sigma / Delta^2 with sigma = (-1)^(1-2+1) = +1
  EXPECT_LT(abs(r.value - 2L / (d * d)), 1e-15);
  EXPECT_THROW(quadrature_element(0, 1, 1, table()), std::invalid_argument);
  EXPECT_THROW(quadrature_batch(13, 1, table()), std::invalid_argument);
  EXPECT_THROW(quadrature_batch(3, 40, table(), 1e-40), ConvergenceError);
}

TEST(Momentum, ElementsAndSquare) {
  const auto [p_nk, p_kn] = momentum_off_diagonal();
  EXPECT_EQ(p_nk.phase, 3);
  EXPECT_EQ(p_kn.phase, 1);
  EXPECT_EQ(p_nk.value, DeltaLaurent(ZetaPoly(1), -1, true));
  EXPECT_EQ(p_nk.value, p_kn.value);
  EXPECT_TRUE(momentum_diagonal().is_zero());
  // <p^2> = zeta_n - <z>
  EXPECT_EQ(momentum_diagonal_powers().first, m(1, 1, 3));
  EXPECT_EQ(momentum_diagonal_powers().second, m(2, 1, 5));
  // p^2 = zeta_n - z on an eigenstate, so off the diagonal it is -<n|z|k>
  EXPECT_EQ(momentum_squared_off_diagonal(), DeltaLaurent(ZetaPoly(-2), -2, true));
}

TEST(Closure, PartialSumsSaturateMonotonically) {
  // sum_{k <= K} <n|z|k>^2 rises toward <n|z^2|n> as K grows.
  const ZeroTable big = build_zero_table(400, 128);
  const auto l = off_diagonal_table(1);
  const auto d = diagonal_table(2);
  for (long n = 1; n <= 3; ++n) {
    const Real zn = big.zeta(n);
    Real partial = d[1].eval(zn) * d[1].eval(zn);
    Real prev = partial;
    for (long k = 1; k <= big.size(); ++k) {
      if (k == n) continue;
      const Real x = l[1].eval(zn, big.zeta(k) - zn, 1);
      partial += x * x;
      EXPECT_GE(partial, prev);
      prev = partial;
    }
    const Real full = d[2].eval(zn);
    EXPECT_LT(partial, full);
    EXPECT_LT((full - partial) / full, 1e-5);
  }
}
