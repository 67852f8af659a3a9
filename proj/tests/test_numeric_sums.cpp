#include <gtest/gtest.h>

#include "airysum/numeric_sums.hpp"
#include "airysum/sum_derivation.hpp"

using namespace airysum;

namespace {

const ZeroTable& table() {
  static const ZeroTable t = build_zero_table(2000, 256);
  return t;
}

ZetaPoly m(int e, long a, long b) { return ZetaPoly::monomial(e, make_rational(a, b)); }

Real rel_dev(const Real& a, const Real& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST(TailModel, ParseAndPrint) {
  EXPECT_EQ(parse_tail_model("euler_maclaurin"), TailModel::euler_maclaurin);
  EXPECT_EQ(to_string(parse_tail_model("integral")), "integral");
  EXPECT_EQ(parse_tail_model("none"), TailModel::none);
  EXPECT_THROW(parse_tail_model("richardson"), std::invalid_argument);
}

TEST(SingleSums, SecondPowerWithEulerMaclaurinTail) {
  for (long n = 1; n <= 3; ++n) {
    const SumEstimate s = sum_S_numeric(2, n, table(), 2000);
    const Real closed = m(1, 1, 3).eval(table().zeta(n));
    EXPECT_LT(rel_dev(s.value, closed), 1e-6) << n;
    EXPECT_LT(abs(s.value - closed), s.error_bound * 4L + Real("1e-30", 256)) << n;
    EXPECT_EQ(s.truncation_K, 2000);
    EXPECT_EQ(s.tail, TailModel::euler_maclaurin);
  }
}

TEST(SingleSums, ThirdPowerWithModestTruncation) {
  const SumEstimate s = sum_S_numeric(3, 1, table(), 500);
  EXPECT_LT(abs(s.value - Real(0.25, 256)), 1e-6);
}

TEST(SingleSums, UntailedSecondPowerMissesTightTolerance) {
  EXPECT_THROW(sum_S_numeric(2, 1, table(), 2000, TailModel::none, 1e-12), ConvergenceError);
  const SumEstimate s = sum_S_numeric(2, 1, table(), 2000, TailModel::none);
  const Real closed = m(1, 1, 3).eval(table().zeta(1));
  EXPECT_LT(abs(s.value - closed), s.error_bound);
  EXPECT_GT(abs(s.value - closed), 1e-4);
}

TEST(SingleSums, DivergentPowersAreRejected) {
  EXPECT_THROW(sum_S_numeric(1, 1, table(), 100), std::invalid_argument);
  EXPECT_THROW(sum_laurent_numeric(DeltaLaurent::delta(-1), 1, table(), 100), ConvergenceError);
  EXPECT_THROW(sum_S_numeric(2, 1, table(), 5000), std::invalid_argument);
  EXPECT_THROW(sum_laurent_numeric(DeltaLaurent::sigma_one() * DeltaLaurent::delta(-2), 1, table(), 100),
               std::invalid_argument);
}

TEST(SingleSums, EvenPowersArePositiveAndGrowMonotonically) {
  for (int p : {2, 4, 6, 8}) {
    Real prev(256);
    for (long K : {50L, 100L, 200L, 400L}) {
      const SumEstimate s = sum_S_numeric(p, 2, table(), K, TailModel::none);
      EXPECT_GT(s.value, 0.0);
      EXPECT_GT(s.value, prev) << "p=" << p << " K=" << K;
      prev = s.value;
    }
  }
}

TEST(SingleSums, DoublingTruncationStaysWithinErrorBound) {
  for (int p : {2, 3, 4, 7}) {
    for (long n : {1L, 4L}) {
      const SumEstimate a = sum_S_numeric(p, n, table(), 500);
      const SumEstimate b = sum_S_numeric(p, n, table(), 1000);
      EXPECT_LT(abs(a.value - b.value), a.error_bound + b.error_bound) << "p=" << p << " n=" << n;
    }
  }
}

TEST(SingleSums, AgreesAcrossPrecisions) {
  const ZeroTable low = build_zero_table(300, 128);
  for (int p : {3, 5, 8}) {
    const SumEstimate a = sum_S_numeric(p, 2, low, 300);
    const SumEstimate b = sum_S_numeric(p, 2, table(), 300);
    EXPECT_LT(rel_dev(a.value.with_precision(256), b.value), 1e-25) << p;
  }
}

TEST(SingleSums, EleventhPowerToHighAccuracy) {
  const DerivationLedger l = derive_ledger(11);
  for (long n = 1; n <= 3; ++n) {
    const SumEstimate s = sum_S_numeric(11, n, table(), 500);
    EXPECT_LT(rel_dev(s.value, l.get(11).closed_form.eval(table().zeta(n))), 1e-10) << n;
  }
}

TEST(Compare, CorrectIdentityPasses) {
  const CompareReport r = compare({7, m(2, 1, 270)}, {1, 2, 3, 4, 5}, table(), 1e-8, 2000);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.rows.size(), 5u);
  for (const auto& row : r.rows) EXPECT_LT(row.relative_deviation, 1e-8);
  EXPECT_FALSE(r.suspect_power.has_value());
}

TEST(Compare, CorruptedIdentityLocatesTheTerm) {
  // S_9 with the constant term 1/2240 replaced by 1/2000
  const SumIdentity bad{9, m(3, 1, 2100) + m(0, 1, 2000)};
  const CompareReport r = compare(bad, {1, 2, 3, 4, 5}, table(), 1e-8, 2000);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.suspect_power.has_value());
  EXPECT_EQ(*r.suspect_power, 0);
  EXPECT_NEAR(*r.fitted_coefficient, 1.0 / 2240, 1e-9);

  const SumIdentity bad_lead{9, m(3, 1, 2000) + m(0, 1, 2240)};
  const CompareReport r2 = compare(bad_lead, {1, 2, 3, 4, 5}, table(), 1e-8, 2000);
  EXPECT_EQ(r2.suspect_power.value_or(-1), 3);
  EXPECT_NEAR(*r2.fitted_coefficient, 1.0 / 2100, 1e-12);
}

TEST(Compare, EmptyIndexSetIsVacuouslyTrue) {
  const CompareReport r = compare({4, m(2, 1, 45)}, {}, table(), 1e-8);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.rows.empty());
}

TEST(LeastSquares, RecoversExactFit) {
  std::vector<std::vector<Real>> rows;
  std::vector<Real> y;
  for (long x = 1; x <= 6; ++x) {
    rows.push_back({Real(1, 128), Real(x, 128), Real(x * x, 128)});
    y.push_back(Real(3 - 2 * x + 5 * x * x, 128));
  }
  const auto c = detail::least_squares(rows, y);
  EXPECT_NEAR(c[0].to_double(), 3, 1e-12);
  EXPECT_NEAR(c[1].to_double(), -2, 1e-12);
  EXPECT_NEAR(c[2].to_double(), 5, 1e-12);
}
