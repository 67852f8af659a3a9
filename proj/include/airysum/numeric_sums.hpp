#pragma once

// Numeric evaluation of S_p(n) and of general sigma-free Laurent sums over
// k != n, with a tail model for k > K built on the large-k zero formula.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "airysum/airy.hpp"
#include "airysum/delta_laurent.hpp"
#include "airysum/errors.hpp"
#include "airysum/identity.hpp"

namespace airysum {

enum class TailModel { none, integral, euler_maclaurin };

inline std::string to_string(TailModel t) {
  switch (t) {
    case TailModel::none: return "none";
    case TailModel::integral: return "integral";
    case TailModel::euler_maclaurin: return "euler_maclaurin";
  }
  return "?";
}

inline TailModel parse_tail_model(const std::string& s) {
  if (s == "none") return TailModel::none;
  if (s == "integral") return TailModel::integral;
  if (s == "euler_maclaurin" || s == "em") return TailModel::euler_maclaurin;
  throw std::invalid_argument("unknown tail model '" + s + "'");
}

struct SumEstimate {
  Real value;
  long truncation_K = 0;
  Real tail_correction;
  Real error_bound;
  TailModel tail = TailModel::euler_maclaurin;
};

inline constexpr long kDefaultTruncation = 2000;

// zeta_k from the table where available, from the refined large-k
// expansion beyond it.
inline Real zero_or_virtual(const ZeroTable& table, long k, long prec) {
  if (k <= table.size()) return table.zeta(k).with_precision(prec);
  return asymptotic_zero_refined(Real(k, prec));
}

namespace detail {

inline Real binomial_neg(long m, long j, long prec) {
  // C(m + j - 1, j)
  Real r(1, prec);
  for (long i = 1; i <= j; ++i) {
    r *= m + i - 1;
    r /= i;
  }
  return r;
}

// (1/pi) int_{w0}^inf u^(1/2 - s) (u - z)^(-m) du. With s = 0 this is the
// integral over k of (Z(k) - z)^-m under the leading zero density
// dk/du = sqrt(u)/pi.
inline Real density_integral(long m, const Real& z, const Real& w0, long s = 0) {
  const long prec = w0.precision();
  const Real r = z / w0;
  if (!(abs(r) < 0.5)) throw std::logic_error("density integral needs zeta_n / w0 < 1/2");
  Real acc(prec);
  Real rj(1, prec);
  const Real base = pow(w0, Real(3, prec) / 2L - Real(m + s, prec));
  for (long j = 0; j < 100000; ++j) {
    Real term = binomial_neg(m, j, prec) * rj / (Real(m + j + s, prec) - mpq_class(3, 2));
    acc += term;
    if (j > 2 && (term.is_zero() || term.exponent() < acc.exponent() - prec - 4)) break;
    rj *= r;
  }
  return acc * base / pi(prec);
}

}  // namespace detail

// Approximates sum_{k > K} (zeta_k - zeta_n)^-m, Delta_k > 0 there.
// Returns {tail, error bound}.
inline std::pair<Real, Real> tail_power_sum(long m, const Real& zeta_n, long K, TailModel model,
                                            const ZeroTable* table = nullptr) {
  if (m < 2) throw ConvergenceError("sum of Delta^-" + std::to_string(m) + " does not converge");
  const long prec = zeta_n.precision();
  Real acc(prec);
  auto zeta_at = [&](long k) {
    return table ? zero_or_virtual(*table, k, prec) : asymptotic_zero_refined(Real(k, prec));
  };

  // Move far enough out that the density integral converges quickly.
  long k0 = K;
  while (!(zeta_n * 8L < asymptotic_zero(k0, prec))) {
    ++k0;
    acc += pow(zeta_at(k0) - zeta_n, -m);
  }
  const Real zk = asymptotic_zero(k0, prec);
  const Real dk = zk - zeta_n;
  const Real f = pow(dk, -m);
  const Real dz_dk = pi(prec) / sqrt(zk);
  const Real fp = -Real(m, prec) * f / dk * dz_dk;
  // |f'''| ~ m(m+1)(m+2) (dZ/dk)^3 / dk^(m+3) up to lower-order terms.
  const Real fppp = Real(m * (m + 1) * (m + 2), prec) * f * pow(dz_dk / dk, 3L);
  // The zeros sit at Z + 5/(48 Z^2) + O(Z^-5) rather than at the leading Z;
  // first-order shift of the tail, and a bound for what that leaves out.
  const Real g0 = pow(zk, -2L) * pow(dk, -(m + 1));
  const Real shift = -Real(m, prec) * mpq_class(5, 48) *
                     (detail::density_integral(m + 1, zeta_n, zk, 2) - g0 / 2L);
  const Real delta = pow(zk, -2L) * mpq_class(5, 48);
  const Real model_err = Real(m * (m + 1), prec) * delta * delta * detail::density_integral(m + 2, zeta_n, zk) +
                         Real(m, prec) * mpq_class(5, 36) * detail::density_integral(m + 1, zeta_n, zk, 5) +
                         abs(shift) * pi(prec) / sqrt(zk) / dk;

  Real em = acc + detail::density_integral(m, zeta_n, zk) - f / 2L - fp / 12L + shift;
  Real em_err = abs(fppp) / 360L + model_err;

  switch (model) {
    case TailModel::euler_maclaurin:
      return {em, em_err};
    case TailModel::integral: {
      const Real wh = asymptotic_zero_at(Real(k0, prec) + mpq_class(1, 2));
      return {acc + detail::density_integral(m, zeta_n, wh) + shift, abs(fp) / 12L + model_err};
    }
    case TailModel::none:
      // The neglected tail is the error.
      return {Real(prec), abs(em) + em_err};
  }
  return {em, em_err};
}

// sum_{k != n} L(zeta_n, zeta_k - zeta_n) for a sigma-free Laurent L whose
// Delta powers are all <= -2.
inline SumEstimate sum_laurent_numeric(const DeltaLaurent& L, long n, const ZeroTable& table,
                                       long K = kDefaultTruncation,
                                       TailModel model = TailModel::euler_maclaurin) {
  if (L.sigma()) throw std::invalid_argument("numeric sums need a sigma-free summand");
  if (K > table.size()) {
    throw std::invalid_argument("K = " + std::to_string(K) + " exceeds zero table size " +
                                std::to_string(table.size()));
  }
  if (n < 1 || n > K) throw std::invalid_argument("need 1 <= n <= K");
  const long prec = table.precision_bits();
  const Real zn = table.zeta(n).with_precision(prec);

  std::vector<std::pair<long, Real>> coeffs;  // (m, c_m(zeta_n)) for Delta^-m
  for (const auto& [e, c] : L.terms()) {
    if (e > -2) {
      throw ConvergenceError("summand has a Delta^" + std::to_string(e) + " term; the sum diverges");
    }
    coeffs.emplace_back(-e, c.eval(zn));
  }

  Real direct(prec), magnitude(prec);
  for (long k = 1; k <= K; ++k) {
    if (k == n) continue;
    const Real inv = 1L / (table.zeta(k).with_precision(prec) - zn);
    Real term(prec);
    for (const auto& [m, c] : coeffs) term += c * pow(inv, m);
    direct += term;
    magnitude += abs(term);
  }

  Real tail(prec), err(prec);
  for (const auto& [m, c] : coeffs) {
    auto [t, e] = tail_power_sum(m, zn, K, model, &table);
    tail += c * t;
    err += abs(c) * e;
  }
  err += magnitude * Real(K, prec) * pow2(-prec + 2, prec);
  return {direct + tail, K, tail, err, model};
}

inline SumEstimate sum_S_numeric(int p, long n, const ZeroTable& table, long K = kDefaultTruncation,
                                 TailModel model = TailModel::euler_maclaurin,
                                 std::optional<double> tolerance = std::nullopt) {
  if (p < 2) throw std::invalid_argument("S_p needs p >= 2");
  SumEstimate s = sum_laurent_numeric(DeltaLaurent::delta(-p), n, table, K, model);
  if (tolerance && !(s.error_bound < *tolerance)) {
    throw ConvergenceError("S_" + std::to_string(p) + "(" + std::to_string(n) + ") with K=" +
                           std::to_string(K) + ", tail=" + to_string(model) + ": error bound " +
                           s.error_bound.str(3) + " exceeds tolerance");
  }
  return s;
}

struct CompareRow {
  long n;
  Real closed;
  Real numeric;
  Real relative_deviation;
  Real error_bound;
  bool pass;
};

struct CompareReport {
  int p = 0;
  std::vector<CompareRow> rows;
  bool pass = true;
  // For a failing identity: the zeta power whose coefficient disagrees most
  // with a fit of the numeric values, and the fitted coefficient.
  std::optional<int> suspect_power;
  std::optional<double> fitted_coefficient;
};

namespace detail {

// Solves the small dense system A x = b by Gaussian elimination with partial pivoting.
inline std::vector<Real> solve_dense(std::vector<std::vector<Real>> A, std::vector<Real> b) {
  const std::size_t N = b.size();
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r) {
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    if (A[c][c].is_zero()) throw std::domain_error("singular system");
    for (std::size_t r = c + 1; r < N; ++r) {
      Real f = A[r][c] / A[c][c];
      for (std::size_t j = c; j < N; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<Real> x(N, Real(b[0].precision()));
  for (std::size_t i = N; i-- > 0;) {
    Real s = b[i];
    for (std::size_t j = i + 1; j < N; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

// Least squares via normal equations.
inline std::vector<Real> least_squares(const std::vector<std::vector<Real>>& rows, const std::vector<Real>& y) {
  const std::size_t N = rows.front().size();
  const long prec = y.front().precision();
  std::vector<std::vector<Real>> A(N, std::vector<Real>(N, Real(prec)));
  std::vector<Real> b(N, Real(prec));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < N; ++i) {
      b[i] += rows[r][i] * y[r];
      for (std::size_t j = 0; j < N; ++j) A[i][j] += rows[r][i] * rows[r][j];
    }
  }
  return solve_dense(std::move(A), std::move(b));
}

}  // namespace detail

inline CompareReport compare(const SumIdentity& identity, const std::vector<long>& n_set,
                             const ZeroTable& table, double tol, long K = kDefaultTruncation,
                             TailModel model = TailModel::euler_maclaurin) {
  CompareReport rep;
  rep.p = identity.p;
  const long prec = table.precision_bits();
  for (long n : n_set) {
    const Real zn = table.zeta(n);
    SumEstimate s = sum_S_numeric(identity.p, n, table, K, model);
    Real closed = identity.closed_form.eval(zn);
    Real scale = closed.is_zero() ? Real(1, prec) : abs(closed);
    Real rel = abs(s.value - closed) / scale;
    bool ok = rel < tol;
    rep.rows.push_back({n, closed, s.value, rel, s.error_bound, ok});
    rep.pass = rep.pass && ok;
  }
  const auto powers = identity.closed_form.powers();
  if (!rep.pass && !powers.empty() && rep.rows.size() >= powers.size()) {
    std::vector<std::vector<Real>> A;
    std::vector<Real> y;
    for (const auto& r : rep.rows) {
      const Real zn = table.zeta(r.n);
      std::vector<Real> row;
      for (int e : powers) row.push_back(pow(zn, static_cast<long>(e)));
      A.push_back(row);
      y.push_back(r.numeric);
    }
    const auto fit = detail::least_squares(A, y);
    double worst = -1;
    for (std::size_t i = 0; i < powers.size(); ++i) {
      const double claimed = identity.closed_form.coefficient(powers[i]).get_d();
      const double got = fit[i].to_double();
      const double dev = std::fabs(got - claimed) / std::max(std::fabs(claimed), 1e-300);
      if (dev > worst) {
        worst = dev;
        rep.suspect_power = powers[i];
        rep.fitted_coefficient = got;
      }
    }
  }
  return rep;
}

}  // namespace airysum
