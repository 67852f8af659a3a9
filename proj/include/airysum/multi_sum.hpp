#pragma once

// Double sums T_{a,b,c}(n), the Stark shift of the bouncer to third order,
// and T closed forms from third-order perturbation theory and the triple
// closure sum_{k,j} <n|x|k><k|x|j><j|x|n> = <n|x^3|n>.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "airysum/airy.hpp"
#include "airysum/identity.hpp"
#include "airysum/matrix_elements.hpp"
#include "airysum/numeric_sums.hpp"
#include "airysum/sum_derivation.hpp"

namespace airysum {

inline constexpr long kDefaultDoubleSumTruncation = 300;

struct TSumEstimate {
  Real value;
  Real error_bound;
  long truncation_K = 0;
};

namespace detail {

inline Real int_pow(const Real& x, int e) {
  Real r(1, x.precision());
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// sum_{j > J} (zeta_k - zeta_j)^-b (zeta_j - zeta_n)^-c by Euler-Maclaurin on
// the leading zero density, with {value, error}.
inline std::pair<Real, Real> inner_tail(int b, int c, const Real& zk, const Real& zn, long J) {
  const long prec = zk.precision();
  const Real w = asymptotic_zero(J, prec);
  const Real xk = zk / w, xn = zn / w;
  // (u - zk)^-b (u - zn)^-c = u^-(b+c) sum_N coef_N u^-N
  std::vector<Real> A{Real(1, prec)}, B{Real(1, prec)};
  Real integral(prec);
  const Real base = pow(w, Real(3, prec) / 2L - Real(b + c, prec));
  for (int N = 0; N < 400; ++N) {
    if (N > 0) {
      A.push_back(A.back() * xk * (b + N - 1) / static_cast<long>(N));
      B.push_back(B.back() * xn * (c + N - 1) / static_cast<long>(N));
    }
    Real coef(prec);
    for (int i = 0; i <= N; ++i) coef += A[static_cast<std::size_t>(i)] * B[static_cast<std::size_t>(N - i)];
    Real term = coef / (Real(b + c + N, prec) - mpq_class(3, 2));
    integral += term;
    if (N > 4 && (term.is_zero() || term.exponent() < integral.exponent() - prec + 8)) break;
  }
  integral *= base / pi(prec);
  if (b % 2) integral = -integral;

  const Real dk = zk - w, dn = w - zn;
  Real f = 1L / (int_pow(dk, b) * int_pow(dn, c));
  const Real dz = pi(prec) / sqrt(w);
  // d/dk log|f| = (b/(zk - Z) - c/(Z - zn)) dZ/dk
  const Real dlog = (Real(b, prec) / dk - Real(c, prec) / dn) * dz;
  Real fp = f * dlog;
  Real v = integral - f / 2L - fp / 12L;
  Real err = abs(f) * pow(abs(dlog), 3L) / 360L + abs(v) * Real(b + c, prec) * mpq_class(5, 48) / (w * w * dn);
  return {v, err};
}

}  // namespace detail

// sum over distinct k, j (both != n) of
// 1/((zeta_k - zeta_n)^a (zeta_k - zeta_j)^b (zeta_j - zeta_n)^c).
//
// Every row k <= K is summed over all j: table zeros to K, large-k zeros to
// 4K, Euler-Maclaurin beyond. Rows k > K are modelled by fitting the computed
// rows on [K/2, K] to inverse powers of Delta_k; the error bound comes from
// varying the fit order and window.
inline TSumEstimate t_sum_numeric(int a, int b, int c, long n, const ZeroTable& table,
                                  long K = kDefaultDoubleSumTruncation, long precision_bits = 128) {
  if (a < 1 || b < 1 || c < 1) throw std::invalid_argument("T exponents must be positive");
  if (a + c < 4 || b < 2) throw std::invalid_argument("T_{a,b,c} needs a + c >= 4 and b >= 2");
  if (K > table.size()) throw std::invalid_argument("K exceeds zero table size");
  if (K < 40 || K < 4 * n) throw std::invalid_argument("T sums need K >= 40 and K >= 4n");
  const long prec = std::clamp(precision_bits, kMinPrecisionBits, table.precision_bits());
  const long J = 4 * K;

  std::vector<Real> z(static_cast<std::size_t>(J) + 1, Real(prec));
  for (long j = 1; j <= J; ++j) z[static_cast<std::size_t>(j)] = zero_or_virtual(table, j, prec);
  const Real zn = z[static_cast<std::size_t>(n)];
  std::vector<Real> inv_dc(z.size(), Real(prec));  // Delta_j^-c
  for (long j = 1; j <= J; ++j) {
    if (j != n) inv_dc[static_cast<std::size_t>(j)] = pow(z[static_cast<std::size_t>(j)] - zn, static_cast<long>(-c));
  }

  std::vector<Real> h(static_cast<std::size_t>(K) + 1, Real(prec));
  Real direct(prec), tail_err(prec);
  for (long k = 1; k <= K; ++k) {
    if (k == n) continue;
    const Real& zk = z[static_cast<std::size_t>(k)];
    Real G(prec);
    for (long j = 1; j <= J; ++j) {
      if (j == k || j == n) continue;
      const Real inv = 1L / (zk - z[static_cast<std::size_t>(j)]);
      G += detail::int_pow(inv, b) * inv_dc[static_cast<std::size_t>(j)];
    }
    auto [tv, te] = detail::inner_tail(b, c, zk, zn, J);
    G += tv;
    const Real wa = pow(zk - zn, static_cast<long>(-a));
    h[static_cast<std::size_t>(k)] = wa * G;
    direct += h[static_cast<std::size_t>(k)];
    tail_err += abs(wa) * te;
  }

  const int m0 = std::min(a + c - 1, a + b);
  auto outer_tail = [&](int terms, long lo) {
    std::vector<std::vector<Real>> rows;
    std::vector<Real> y;
    for (long k = lo; k <= K; ++k) {
      const Real inv = 1L / (z[static_cast<std::size_t>(k)] - zn);
      std::vector<Real> row;
      for (int m = m0; m < m0 + terms; ++m) row.push_back(pow(inv, static_cast<long>(m - m0)));
      rows.push_back(std::move(row));
      // Scale out the leading power to keep the normal equations well conditioned.
      y.push_back(h[static_cast<std::size_t>(k)] * pow(z[static_cast<std::size_t>(k)] - zn, static_cast<long>(m0)));
    }
    const auto beta = detail::least_squares(rows, y);
    Real t(prec), e(prec);
    for (int i = 0; i < terms; ++i) {
      auto [tv, te] = tail_power_sum(m0 + i, zn, K, TailModel::euler_maclaurin, &table);
      t += beta[static_cast<std::size_t>(i)] * tv.with_precision(prec);
      e += abs(beta[static_cast<std::size_t>(i)]) * te.with_precision(prec);
    }
    return std::pair<Real, Real>{t, e};
  };

  auto [tail, tail_model_err] = outer_tail(4, K / 2);
  Real spread(prec);
  for (auto [terms, lo] : {std::pair<int, long>{3, K / 2}, {5, K / 2}, {4, K / 3}, {4, (2 * K) / 3}}) {
    spread = max(spread, abs(outer_tail(terms, lo).first - tail));
  }
  TSumEstimate out{direct + tail, spread + tail_err + tail_model_err, K};
  return out;
}

struct StarkConfig {
  Real F{1, kDefaultPrecisionBits};
  Real F_bar{0, kDefaultPrecisionBits};
  ScaledUnits units{};

  Real ratio() const { return F_bar / F; }
  void validate() const {
    units.validate();
    if (!(F > 0.0)) throw std::invalid_argument("Stark config needs F > 0");
    if (!(abs(ratio()) < 1.0)) throw std::invalid_argument("Stark series needs |F_bar/F| < 1");
  }
};

// The added field only rescales the force: E_n (1 + F_bar/F)^(2/3).
inline Real stark_exact(const Real& zeta_n, const StarkConfig& cfg) {
  cfg.validate();
  const long p = zeta_n.precision();
  const Real lam = cfg.ratio().with_precision(p);
  return cfg.units.energy(zeta_n) * pow(1L + lam, Real(2, p) / 3L);
}

inline Real stark_exact(long n, const StarkConfig& cfg) {
  return stark_exact(zero(n, cfg.F.precision()), cfg);
}

// Coefficient of (F_bar/F)^order in (1 + F_bar/F)^(2/3).
inline Rational stark_series_coefficient(int order) {
  if (order < 0) throw std::invalid_argument("order must be >= 0");
  Rational c(1);
  for (int i = 0; i < order; ++i) c *= (Rational(2, 3) - i) / Rational(i + 1);
  c.canonicalize();
  return c;
}

namespace detail {

// sum_k |<n|z|k>|^2 (V_kk - V_nn)/Delta^2 with V the diagonal dipole, i.e.
// the part of the third-order shift with j = k plus the diagonal subtraction.
inline DeltaLaurent stark3_single_index_part() {
  const DeltaLaurent l1 = off_diagonal(1).value;
  const ZetaPoly d1 = diagonal(1).value;
  return l1 * swap_endpoints(l1) * (substitute_zeta_k(d1) - DeltaLaurent(d1)) * DeltaLaurent::delta(-2);
}

// Product of the three dipole elements around n -> k -> j -> n with k, j, n
// distinct, as a multiple of 1/(Delta_k^2 (zeta_k - zeta_j)^2 Delta_j^2).
inline Rational dipole_triangle_coefficient() {
  const Rational lead = off_diagonal(1).value.coefficient(-2).coefficient(0);
  // sigma_nk sigma_kj sigma_jn = (-1)^((n-k+1) + (k-j+1) + (j-n+1)) = -1
  return -(lead * lead * lead);
}

}  // namespace detail

// E_n^(order) in units of E0 * (F_bar/F)^0, i.e. including the factor
// (F_bar/F)^order. Orders 2 and 3 are computed by direct summation.
inline SumEstimate stark_perturbative(long n, const StarkConfig& cfg, int order, const ZeroTable& table,
                                      long K = kDefaultTruncation, long K_double = kDefaultDoubleSumTruncation) {
  cfg.validate();
  if (order < 1 || order > 3) throw std::invalid_argument("perturbative orders 1..3 only");
  const long prec = table.precision_bits();
  const Real zn = table.zeta(n);
  const Real lam = cfg.ratio().with_precision(prec);
  const Real e0(cfg.units.E0, prec);
  const Real scale = pow(lam, static_cast<long>(order)) * e0;
  if (order == 1) {
    Real v = diagonal(1).value.eval(zn) * scale;
    return {v, 0, Real(prec), Real(prec), TailModel::none};
  }
  const DeltaLaurent l1 = off_diagonal(1).value;
  if (order == 2) {
    // sum_k |V_nk|^2 / (E_n - E_k), E_n - E_k = -Delta
    SumEstimate s = sum_laurent_numeric(-(l1 * swap_endpoints(l1) * DeltaLaurent::delta(-1)), n, table, K);
    return {s.value * scale, s.truncation_K, s.tail_correction * scale, s.error_bound * abs(scale), s.tail};
  }
  SumEstimate single = sum_laurent_numeric(detail::stark3_single_index_part(), n, table, K);
  TSumEstimate t = t_sum_numeric(3, 2, 3, n, table, K_double);
  const Rational tri = detail::dipole_triangle_coefficient();
  Real v = (single.value + t.value.with_precision(prec) * tri) * scale;
  Real err = (single.error_bound + t.error_bound.with_precision(prec) * abs(Rational(tri))) * abs(scale);
  return {v, single.truncation_K, single.tail_correction * scale, err, single.tail};
}

enum class TIdentity { stark3, triple_x };

struct TripleCase {
  std::string label;
  ZetaPoly value;  // contribution once T is substituted
};

struct TDerivation {
  MultiSumIdentity identity;
  std::vector<TripleCase> cases;  // triple_x only
  bool cases_complete = false;
};

inline TDerivation derive_T_detailed(TIdentity which, const DerivationLedger& ledger) {
  const Rational tri = detail::dipole_triangle_coefficient();
  const ZetaPoly z = ZetaPoly::zeta();
  if (which == TIdentity::stark3) {
    // E^(3) / (lambda^3 E0) = single-index part + tri * T_{3,2,3} = c_3 zeta_n
    const SumRelation rel = build_relation(detail::stark3_single_index_part(), ZetaPoly());
    int need = 2;
    for (const auto& [m, c] : rel.coeffs) need = std::max(need, m);
    require_ledger(ledger, 2, need);
    const ZetaPoly single = relation_residual(rel, ledger);
    const ZetaPoly exact = z * stark_series_coefficient(3);
    TDerivation d;
    d.identity = {3, 2, 3, (exact - single) / tri, "third-order Stark shift"};
    d.cases_complete = true;
    return d;
  }

  // Split sum_{k,j} <n|x|k><k|x|j><j|x|n> by which indices coincide with n.
  const auto L = off_diagonal_table(1);
  const auto D = diagonal_table(3);
  const DeltaLaurent dip2 = L[1] * swap_endpoints(L[1]);
  auto sum_of = [&](const DeltaLaurent& summand) {
    const SumRelation rel = build_relation(summand, ZetaPoly());
    int need = 2;
    for (const auto& [m, c] : rel.coeffs) need = std::max(need, m);
    require_ledger(ledger, 2, need);
    return relation_residual(rel, ledger);
  };
  TDerivation d;
  d.cases.push_back({"k = j = n", D[1] * D[1] * D[1]});
  d.cases.push_back({"exactly one of k, j equal to n", D[1] * sum_of(dip2) * Rational(2)});
  d.cases.push_back({"j = k != n", sum_of(dip2 * substitute_zeta_k(D[1]))});
  ZetaPoly known;
  for (const auto& c : d.cases) known += c.value;
  const ZetaPoly T = (D[3] - known) / tri;
  d.cases.push_back({"k, j, n distinct", T * tri});
  ZetaPoly total;
  for (const auto& c : d.cases) total += c.value;
  // Index patterns (n,n), (n,j), (k,n), (k,k), (k,j) with multiplicities 1 + 2 + 1 + 1.
  d.cases_complete = total == D[3] && d.cases.size() == 4;
  d.identity = {2, 2, 2, T, "triple dipole closure"};
  return d;
}

inline MultiSumIdentity derive_T_from_identities(TIdentity which, const DerivationLedger& ledger) {
  return derive_T_detailed(which, ledger).identity;
}

}  // namespace airysum
