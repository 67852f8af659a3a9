#pragma once

// Closed forms for S_p(n) from closure relations.
//
// Each closure sum_k <n|A|k><k|B|n> = <n|AB|n> becomes, after splitting off
// k = n and expanding the off-diagonal product, a sigma-free Laurent
// polynomial in Delta. Its Delta^-m coefficient multiplies S_m, so the
// closure is a linear relation among the S_m with ZetaPoly coefficients.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "airysum/delta_laurent.hpp"
#include "airysum/errors.hpp"
#include "airysum/identity.hpp"
#include "airysum/matrix_elements.hpp"
#include "airysum/numeric_sums.hpp"

namespace airysum {

// sum_m coeffs[m] S_m = rhs.
struct SumRelation {
  std::map<int, ZetaPoly> coeffs;
  ZetaPoly rhs;

  std::set<int> indices() const {
    std::set<int> s;
    for (const auto& [m, c] : coeffs) s.insert(m);
    return s;
  }
  std::string to_string() const {
    std::string out;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += "(" + it->second.to_string() + ") S_" + std::to_string(it->first);
    }
    return (out.empty() ? "0" : out) + " = " + rhs.to_string();
  }
};

// Exact quotient a / b; throws DerivationError if b does not divide a.
inline ZetaPoly exact_divide(ZetaPoly a, const ZetaPoly& b) {
  if (b.is_zero()) throw DerivationError("division by the zero polynomial");
  const int db = b.degree();
  const Rational lead = b.coefficient(db);
  ZetaPoly q;
  while (!a.is_zero() && a.degree() >= db) {
    const int shift = a.degree() - db;
    const Rational c = a.coefficient(a.degree()) / lead;
    const ZetaPoly t = ZetaPoly::monomial(shift, c);
    q += t;
    a -= t * b;
  }
  if (!a.is_zero()) {
    throw DerivationError("relation coefficient " + b.to_string() + " does not divide " + a.to_string());
  }
  return q;
}

// Turns sum_{k != n} bilinear = rhs into a relation. Every term must be a
// convergent Delta^-m with m >= 2; anything else means the closure did not close.
inline SumRelation build_relation(const DeltaLaurent& bilinear, const ZetaPoly& rhs) {
  if (bilinear.sigma()) throw DerivationError("closure summand still carries sigma");
  SumRelation r;
  r.rhs = rhs;
  for (const auto& [e, c] : bilinear.terms()) {
    if (e >= -1) {
      throw DerivationError("closure residue: Delta^" + std::to_string(e) + " term (" + c.to_string() +
                            ") left after extraction");
    }
    r.coeffs[-e] = c;
  }
  return r;
}

struct ClosureIdentity {
  enum class Kind { momentum, commutator, position };
  Kind kind = Kind::position;
  int a = 1;  // commutator: q; position: power on the left
  int b = 1;  // position: power on the right

  static ClosureIdentity momentum() { return {Kind::momentum, 0, 0}; }
  static ClosureIdentity commutator(int q) { return {Kind::commutator, q, 0}; }
  static ClosureIdentity position(int a, int b) { return {Kind::position, a, b}; }

  // The S index this closure determines given all lower ones.
  int target() const {
    switch (kind) {
      case Kind::momentum: return 2;
      case Kind::commutator: return 2 * a + 1;
      case Kind::position: return 2 * (a + b);
    }
    return 0;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::momentum: return "momentum closure <p p>";
      case Kind::commutator:
        return a == 1 ? "commutator [x,p] (TRK)" : "commutator [x^" + std::to_string(a) + ",p]";
      case Kind::position:
        return "position closure <x^" + std::to_string(a) + " x^" + std::to_string(b) + ">";
    }
    return "?";
  }
};

inline SumRelation closure_relation(const ClosureIdentity& c) {
  using K = ClosureIdentity::Kind;
  switch (c.kind) {
    case K::momentum: {
      auto [p_nk, p_kn] = momentum_off_diagonal();
      // <n|p|n> = 0, so no diagonal piece.
      return build_relation((p_nk * p_kn).real_part(), momentum_diagonal_powers().first);
    }
    case K::commutator: {
      if (c.a < 1) throw std::invalid_argument("commutator closure needs q >= 1");
      auto [p_nk, p_kn] = momentum_off_diagonal();
      const auto L = off_diagonal_table(c.a);
      const PhasedLaurent x_nk{0, L[c.a]};
      const PhasedLaurent x_kn{0, swap_endpoints(L[c.a])};
      // sum_k (x_nk p_kn - p_nk x_kn) = i q <x^(q-1)>
      const DeltaLaurent lhs = (x_nk * p_kn).imag_part() - (p_nk * x_kn).imag_part();
      const ZetaPoly rhs = diagonal(c.a - 1).value * Rational(c.a);
      return build_relation(lhs, rhs);
    }
    case K::position: {
      if (c.a < 1 || c.b < 1) throw std::invalid_argument("position closure needs powers >= 1");
      const auto L = off_diagonal_table(std::max(c.a, c.b));
      const auto D = diagonal_table(c.a + c.b);
      const DeltaLaurent lhs = L[c.a] * swap_endpoints(L[c.b]);
      return build_relation(lhs, D[c.a + c.b] - D[c.a] * D[c.b]);
    }
  }
  throw std::logic_error("unknown closure");
}

// The closure used for S_p when all lower S are known.
inline ClosureIdentity primary_closure(int p) {
  if (p < 2) throw std::invalid_argument("S_p is only defined for p >= 2");
  if (p == 2) return ClosureIdentity::momentum();
  if (p % 2 == 1) return ClosureIdentity::commutator((p - 1) / 2);
  return ClosureIdentity::position((p - 2) / 2, 1);
}

// Substitutes known values and solves for the remaining unknowns. Handles one
// relation in one unknown, or two relations in two unknowns.
inline std::map<int, ZetaPoly> solve_relations(const std::vector<SumRelation>& rels,
                                               const std::map<int, ZetaPoly>& known) {
  struct Reduced {
    std::map<int, ZetaPoly> unknown;
    ZetaPoly rhs;
  };
  std::vector<Reduced> red;
  std::set<int> unknowns;
  for (const auto& r : rels) {
    Reduced x{{}, r.rhs};
    for (const auto& [m, c] : r.coeffs) {
      auto it = known.find(m);
      if (it != known.end()) {
        x.rhs -= c * it->second;
      } else {
        x.unknown[m] = c;
        unknowns.insert(m);
      }
    }
    if (x.unknown.empty()) {
      if (!x.rhs.is_zero()) throw DerivationError("relation inconsistent with known sums: residual " + x.rhs.to_string());
      continue;
    }
    red.push_back(std::move(x));
  }
  std::map<int, ZetaPoly> out;
  if (unknowns.empty()) return out;
  if (unknowns.size() == 1) {
    const int u = *unknowns.begin();
    out[u] = exact_divide(red.front().rhs, red.front().unknown.at(u));
    for (std::size_t i = 1; i < red.size(); ++i) {
      if (!(red[i].unknown.at(u) * out[u] == red[i].rhs)) throw DerivationError("relations disagree on S_" + std::to_string(u));
    }
    return out;
  }
  if (unknowns.size() == 2 && red.size() >= 2) {
    const int u = *unknowns.begin();
    const int v = *unknowns.rbegin();
    auto coef = [](const Reduced& r, int m) {
      auto it = r.unknown.find(m);
      return it == r.unknown.end() ? ZetaPoly() : it->second;
    };
    const ZetaPoly a11 = coef(red[0], u), a12 = coef(red[0], v);
    const ZetaPoly a21 = coef(red[1], u), a22 = coef(red[1], v);
    const ZetaPoly det = a11 * a22 - a12 * a21;
    if (det.is_zero()) throw DerivationError("companion relation is degenerate");
    out[u] = exact_divide(red[0].rhs * a22 - red[1].rhs * a12, det);
    out[v] = exact_divide(a11 * red[1].rhs - a21 * red[0].rhs, det);
    return out;
  }
  throw DerivationError("relation system has " + std::to_string(unknowns.size()) + " unknowns and " +
                        std::to_string(red.size()) + " independent relations");
}

struct LedgerEntry {
  SumIdentity identity;
  std::string provenance;
};

// Contiguous S_2 .. S_pmax.
class DerivationLedger {
 public:
  bool contains(int p) const { return e_.count(p) != 0; }
  bool empty() const { return e_.empty(); }
  std::size_t size() const { return e_.size(); }
  int p_max() const { return e_.empty() ? 1 : e_.rbegin()->first; }

  const SumIdentity& get(int p) const {
    auto it = e_.find(p);
    if (it == e_.end()) throw MissingLedgerEntry(p);
    return it->second.identity;
  }
  const std::string& provenance(int p) const {
    auto it = e_.find(p);
    if (it == e_.end()) throw MissingLedgerEntry(p);
    return it->second.provenance;
  }
  const std::map<int, LedgerEntry>& entries() const { return e_; }

  void insert(const SumIdentity& s, const std::string& provenance) {
    if (s.p < 2) throw std::invalid_argument("ledger entries need p >= 2");
    if (!contains(s.p) && s.p != p_max() + 1 && !(e_.empty() && s.p == 2)) {
      throw std::invalid_argument("ledger insert of S_" + std::to_string(s.p) + " would leave a gap after S_" +
                                  std::to_string(p_max()));
    }
    e_[s.p] = {s, provenance};
  }

  std::map<int, ZetaPoly> known() const {
    std::map<int, ZetaPoly> m;
    for (const auto& [p, e] : e_) m[p] = e.identity.closed_form;
    return m;
  }

  friend bool operator==(const DerivationLedger& a, const DerivationLedger& b) {
    if (a.e_.size() != b.e_.size()) return false;
    for (const auto& [p, e] : a.e_) {
      auto it = b.e_.find(p);
      if (it == b.e_.end() || !(it->second.identity == e.identity) || it->second.provenance != e.provenance) return false;
    }
    return true;
  }

 private:
  std::map<int, LedgerEntry> e_;
};

inline void require_ledger(const DerivationLedger& ledger, int from, int to) {
  for (int m = from; m <= to; ++m) {
    if (!ledger.contains(m)) throw MissingLedgerEntry(m);
  }
}

// S_p from the given closure (default: the primary one for p).
inline SumIdentity derive_S(int p, const DerivationLedger& ledger,
                            std::optional<ClosureIdentity> closure = std::nullopt) {
  const ClosureIdentity c = closure.value_or(primary_closure(p));
  if (c.target() != p) throw std::invalid_argument(c.describe() + " does not determine S_" + std::to_string(p));
  require_ledger(ledger, 2, p - 1);
  const SumRelation rel = closure_relation(c);
  auto known = ledger.known();
  known.erase(p);
  const auto sol = solve_relations({rel}, known);
  auto it = sol.find(p);
  if (it == sol.end() || sol.size() != 1) throw DerivationError(c.describe() + " did not isolate S_" + std::to_string(p));
  return {p, it->second};
}

// Extends the ledger to p_max; existing entries are kept.
inline void derive_through(int p_max, DerivationLedger& ledger) {
  for (int p = std::max(2, ledger.p_max() + 1); p <= p_max; ++p) {
    ledger.insert(derive_S(p, ledger), primary_closure(p).describe());
  }
}

inline DerivationLedger derive_ledger(int p_max) {
  DerivationLedger l;
  derive_through(p_max, l);
  return l;
}

// Powers of zeta_n in S_p are all congruent to -p mod 3.
inline bool mod_three_pattern_holds(const SumIdentity& s) {
  for (int e : s.closed_form.powers()) {
    if (((e + s.p) % 3 + 3) % 3 != 0) return false;
  }
  return true;
}

inline std::map<int, ZetaPoly> published_sum_table() {
  const ZetaPoly z = ZetaPoly::zeta();
  auto m = [](int e, long a, long b) { return ZetaPoly::monomial(e, make_rational(a, b)); };
  return {
      {2, m(1, 1, 3)},
      {3, m(0, 1, 4)},
      {4, m(2, 1, 45)},
      {5, m(1, 1, 36)},
      {6, m(3, 2, 945) + m(0, 1, 112)},
      {7, m(2, 1, 270)},
      {8, m(4, 1, 4725) + m(1, 5, 2268)},
      {9, m(3, 1, 2100) + m(0, 1, 2240)},
      {10, m(5, 2, 93555) + m(2, 611, 1496880)},
      {11, m(4, 1, 17010) + m(1, 43, 272160)},
  };
}

struct TableCheck {
  int p;
  ZetaPoly expected;
  ZetaPoly derived;
  bool match;
  std::vector<std::string> differences;  // one line per mismatching zeta power
};

inline std::vector<TableCheck> verify_against_published_table(const DerivationLedger& ledger) {
  std::vector<TableCheck> out;
  for (const auto& [p, expected] : published_sum_table()) {
    if (!ledger.contains(p)) continue;
    const ZetaPoly& got = ledger.get(p).closed_form;
    TableCheck t{p, expected, got, expected == got, {}};
    std::set<int> powers;
    for (int e : expected.powers()) powers.insert(e);
    for (int e : got.powers()) powers.insert(e);
    for (int e : powers) {
      if (expected.coefficient(e) != got.coefficient(e)) {
        t.differences.push_back("z^" + std::to_string(e) + ": expected " + expected.coefficient(e).get_str() +
                                ", derived " + got.coefficient(e).get_str());
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

// sum_k <n|x^3|k><k|x|n> = sum_k <n|x^2|k><k|x^2|n> = <n|x^4|n>, rewritten as
// one relation among S_5, S_6, S_8.
inline SumRelation s8_cross_check_relation() {
  const auto L = off_diagonal_table(3);
  const auto D = diagonal_table(4);
  const DeltaLaurent lhs = L[3] * swap_endpoints(L[1]) - L[2] * swap_endpoints(L[2]);
  return build_relation(lhs, D[2] * D[2] - D[3] * D[1]);
}

// Exact residual of a relation after substituting the ledger.
inline ZetaPoly relation_residual(const SumRelation& r, const DerivationLedger& ledger) {
  ZetaPoly acc = -r.rhs;
  for (const auto& [m, c] : r.coeffs) acc += c * ledger.get(m).closed_form;
  return acc;
}

inline bool cross_check_S8(const DerivationLedger& ledger) {
  require_ledger(ledger, 2, 8);
  return relation_residual(s8_cross_check_relation(), ledger).is_zero();
}

struct NumericCheck {
  Real lhs;
  Real rhs;
  Real residual;
  Real error_bound;
};

// Both sides of a relation evaluated by direct summation at zeta_n.
inline NumericCheck relation_numeric(const SumRelation& r, long n, const ZeroTable& table,
                                     long K = kDefaultTruncation) {
  const long prec = table.precision_bits();
  const Real zn = table.zeta(n);
  DeltaLaurent summand;
  for (const auto& [m, c] : r.coeffs) summand += DeltaLaurent(c, -m);
  SumEstimate s = sum_laurent_numeric(summand, n, table, K);
  Real rhs = r.rhs.eval(zn).with_precision(prec);
  return {s.value, rhs, abs(s.value - rhs), s.error_bound};
}

inline NumericCheck cross_check_S8_numeric(long n, const ZeroTable& table, long K = kDefaultTruncation) {
  return relation_numeric(s8_cross_check_relation(), n, table, K);
}

// Coefficient of q^order in sum_k (E_k - E_n) |<n|e^(iqx)|k>|^2, as a
// sigma-free Laurent polynomial. Its sum is 1 at order 2 and 0 beyond.
inline DeltaLaurent bethe_coefficient(int order) {
  if (order < 1) throw std::invalid_argument("Bethe order must be >= 1");
  const auto L = off_diagonal_table(order - 1);
  DeltaLaurent re, im;
  Rational fj(1);
  for (int j = 1; j < order; ++j) {
    fj *= j;
    const int l = order - j;
    Rational fl(1);
    for (int i = 2; i <= l; ++i) fl *= i;
    // i^j (-i)^l = i^(j + 3l)
    const PhasedLaurent t{(j + 3 * l) % 4, L[j] * swap_endpoints(L[l]) * DeltaLaurent::delta(1) * (Rational(1) / (fj * fl))};
    if (t.is_real()) {
      re += t.real_part();
    } else {
      im += t.imag_part();
    }
  }
  if (!im.is_zero()) throw DerivationError("odd Bethe coefficient did not cancel");
  return re;
}

inline SumRelation bethe_relation(int order) {
  DeltaLaurent c = bethe_coefficient(order);
  if (c.is_zero()) return {};
  return build_relation(c, ZetaPoly(order == 2 ? 1 : 0));
}

struct BetheCheck {
  int order;
  SumRelation relation;
  bool symbolic_holds;
  Real residual;
  Real error_bound;
};

inline BetheCheck bethe_tower_check(int order, long n, const ZeroTable& table, long K = kDefaultTruncation) {
  if (order != 4 && order != 6) throw std::invalid_argument("Bethe tower check supports orders 4 and 6");
  const SumRelation rel = bethe_relation(order);
  int need = 2;
  for (const auto& [m, c] : rel.coeffs) need = std::max(need, m);
  const DerivationLedger ledger = derive_ledger(need);
  const bool sym = relation_residual(rel, ledger).is_zero();
  NumericCheck num = relation_numeric(rel, n, table, K);
  return {order, rel, sym, num.residual, num.error_bound};
}

struct DivergencePoint {
  long K;
  Real partial_sum;
};

struct DivergenceReport {
  int p;
  long n;
  std::vector<DivergencePoint> points;
  std::optional<double> growth_exponent;
  bool bounded = false;
};

// Partial sums of sum_{k != n, k <= K} (zeta_k - zeta_n)^-p with zeta_k from
// the large-k formula (exact zeta_n), and the fitted exponent alpha of K^alpha
// growth. alpha <= 0 means the sums stay bounded. Runs to K ~ 10^6, so the
// terms are accumulated in long double.
inline DivergenceReport divergence_diagnostic(int p, long n, std::vector<long> K_list) {
  if (p < 0 || p > 2) throw std::invalid_argument("divergence diagnostic covers p = 0, 1, 2");
  std::sort(K_list.begin(), K_list.end());
  if (K_list.empty() || K_list.front() <= n) throw std::invalid_argument("K values must exceed n");
  DivergenceReport rep{p, n, {}, std::nullopt, false};
  const long double zn = zero(n, 128).to_double();
  const long double pi_l = 3.141592653589793238462643383279502884L;
  auto zeta_k = [&](long k) {
    const long double t = 3.0L * pi_l / 8.0L * (4.0L * static_cast<long double>(k) - 1.0L);
    const long double t2 = 1.0L / (t * t);
    const long double s = 1.0L + t2 * (5.0L / 48.0L + t2 * (-5.0L / 36.0L + t2 * (77125.0L / 82944.0L)));
    return std::cbrt(t * t) * s;
  };
  long double acc = 0.0L;
  long k = 0;
  for (long K : K_list) {
    for (++k; k <= K; ++k) {
      if (k == n) continue;
      acc += std::pow(zeta_k(k) - zn, static_cast<long double>(-p));
    }
    --k;
    rep.points.push_back({K, Real(static_cast<double>(acc), kMinPrecisionBits)});
  }
  const auto& P = rep.points;
  if (P.size() == 2) {
    const double a = std::log(P[1].partial_sum.to_double() / P[0].partial_sum.to_double()) /
                     std::log(static_cast<double>(P[1].K) / static_cast<double>(P[0].K));
    rep.growth_exponent = a;
  } else if (P.size() >= 3) {
    // Slope of log(increment per unit K) against log K, plus one.
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < P.size(); ++i) {
      const double inc = (P[i + 1].partial_sum - P[i].partial_sum).to_double();
      const double dK = static_cast<double>(P[i + 1].K - P[i].K);
      xs.push_back(0.5 * std::log(static_cast<double>(P[i].K) * static_cast<double>(P[i + 1].K)));
      ys.push_back(std::log(std::fabs(inc) / dK));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.growth_exponent = 1.0 + sxy / sxx;
  }
  if (rep.growth_exponent) rep.bounded = *rep.growth_exponent < 0.0;
  return rep;
}

}  // namespace airysum
