#pragma once

// Laurent polynomials in Delta = zeta_k - zeta_n with ZetaPoly coefficients.
//
// zeta_k never appears: it is always written as zeta_n + Delta. A value may
// carry the overall parity factor sigma = (-1)^(n-k+1); multiplication XORs
// the flag since sigma^2 = 1.

#include <map>
#include <stdexcept>
#include <string>

#include "airysum/zeta_poly.hpp"

namespace airysum {

class DeltaLaurent {
 public:
  DeltaLaurent() = default;
  DeltaLaurent(const ZetaPoly& c, int delta_power = 0, bool sigma = false) : sigma_(sigma) {
    add_term(delta_power, c);
  }

  static DeltaLaurent delta(int power = 1) { return DeltaLaurent(ZetaPoly(1), power); }
  static DeltaLaurent sigma_one() { return DeltaLaurent(ZetaPoly(1), 0, true); }

  const std::map<int, ZetaPoly>& terms() const { return t_; }
  bool sigma() const { return sigma_; }
  bool is_zero() const { return t_.empty(); }
  int min_power() const { return t_.empty() ? 0 : t_.begin()->first; }
  int max_power() const { return t_.empty() ? 0 : t_.rbegin()->first; }

  DeltaLaurent with_sigma(bool s) const {
    DeltaLaurent r = *this;
    r.sigma_ = s;
    return r;
  }

  void add_term(int delta_power, const ZetaPoly& c) {
    if (c.is_zero()) return;
    auto it = t_.find(delta_power);
    if (it == t_.end()) {
      t_.emplace(delta_power, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  ZetaPoly coefficient(int delta_power) const {
    auto it = t_.find(delta_power);
    return it == t_.end() ? ZetaPoly() : it->second;
  }

  DeltaLaurent& operator+=(const DeltaLaurent& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
      sigma_ = o.sigma_;
    } else if (sigma_ != o.sigma_) {
      throw std::logic_error("adding DeltaLaurent values of different sigma parity");
    }
    for (const auto& [k, c] : o.t_) add_term(k, c);
    return *this;
  }
  DeltaLaurent& operator-=(const DeltaLaurent& o) { return *this += -o; }

  DeltaLaurent& operator*=(const Rational& s) {
    if (s == 0) {
      t_.clear();
      return *this;
    }
    for (auto& [k, c] : t_) c *= s;
    return *this;
  }

  friend DeltaLaurent operator-(DeltaLaurent a) { return a *= Rational(-1); }
  friend DeltaLaurent operator+(DeltaLaurent a, const DeltaLaurent& b) { return a += b; }
  friend DeltaLaurent operator-(DeltaLaurent a, const DeltaLaurent& b) { return a -= b; }
  friend DeltaLaurent operator*(DeltaLaurent a, const Rational& s) { return a *= s; }
  friend DeltaLaurent operator*(const Rational& s, DeltaLaurent a) { return a *= s; }

  friend DeltaLaurent operator*(const DeltaLaurent& a, const DeltaLaurent& b) {
    DeltaLaurent r;
    r.sigma_ = a.sigma_ != b.sigma_;
    for (const auto& [i, x] : a.t_) {
      for (const auto& [j, y] : b.t_) r.add_term(i + j, x * y);
    }
    return r;
  }
  friend DeltaLaurent operator*(const DeltaLaurent& a, const ZetaPoly& p) {
    return a * DeltaLaurent(p, 0, false);
  }
  friend DeltaLaurent operator*(const ZetaPoly& p, const DeltaLaurent& a) { return a * p; }

  // Zero compares equal regardless of the flag.
  friend bool operator==(const DeltaLaurent& a, const DeltaLaurent& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return a.sigma_ == b.sigma_ && a.t_ == b.t_;
  }

  // Value at given zeta_n, Delta; sigma_value is +-1 and used only if the flag is set.
  Rational eval(const Rational& zeta_n, const Rational& d, int sigma_value = 1) const {
    if (d == 0 && min_power() < 0) throw std::domain_error("DeltaLaurent evaluated at Delta = 0");
    Rational acc(0);
    for (const auto& [k, c] : t_) {
      Rational dp(1);
      Rational base = k < 0 ? Rational(1) / d : d;
      for (int i = 0; i < std::abs(k); ++i) dp *= base;
      acc += c.eval(zeta_n) * dp;
    }
    if (sigma_ && sigma_value < 0) acc = -acc;
    acc.canonicalize();
    return acc;
  }

  Real eval(const Real& zeta_n, const Real& d, int sigma_value = 1) const {
    const long p = std::max(zeta_n.precision(), d.precision());
    Real acc(p);
    for (const auto& [k, c] : t_) acc += c.eval(zeta_n) * pow(d, static_cast<long>(k));
    if (sigma_ && sigma_value < 0) acc = -acc;
    return acc;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string out = sigma_ ? "sigma*[" : "";
    bool first = true;
    for (auto it = t_.begin(); it != t_.end(); ++it) {
      if (!first) out += " + ";
      out += "(" + it->second.to_string() + ")";
      if (it->first != 0) out += " D^" + std::to_string(it->first);
      first = false;
    }
    if (sigma_) out += "]";
    return out;
  }

 private:
  std::map<int, ZetaPoly> t_;
  bool sigma_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const DeltaLaurent& p) { return os << p.to_string(); }

inline ZetaPoly coefficient_of_delta_power(const DeltaLaurent& p, int m) { return p.coefficient(m); }

// Integer power of (zeta_n + c*Delta) as a DeltaLaurent.
inline DeltaLaurent shifted_zeta_power(int power, const Rational& c) {
  DeltaLaurent base(ZetaPoly::zeta());
  base += DeltaLaurent(ZetaPoly(c), 1);
  DeltaLaurent r(ZetaPoly(1));
  for (int i = 0; i < power; ++i) r = r * base;
  return r;
}

// Polynomial in the marker zeta_ave = (zeta_n + zeta_k)/2 with DeltaLaurent coefficients.
class ZetaAveExpr {
 public:
  ZetaAveExpr() = default;
  ZetaAveExpr(const DeltaLaurent& c, int zeta_ave_power = 0) { add(zeta_ave_power, c); }

  void add(int zeta_ave_power, const DeltaLaurent& c) {
    if (zeta_ave_power < 0) throw std::invalid_argument("negative power of zeta_ave");
    if (c.is_zero()) return;
    c_[zeta_ave_power] += c;
    if (c_[zeta_ave_power].is_zero()) c_.erase(zeta_ave_power);
  }
  const std::map<int, DeltaLaurent>& terms() const { return c_; }

 private:
  std::map<int, DeltaLaurent> c_;
};

// Replaces zeta_ave by zeta_n + Delta/2.
inline DeltaLaurent substitute_zeta_ave(const ZetaAveExpr& e) {
  DeltaLaurent r;
  for (const auto& [j, c] : e.terms()) r += c * shifted_zeta_power(j, Rational(1, 2));
  return r;
}

inline DeltaLaurent substitute_zeta_ave(const DeltaLaurent& p) { return p; }

// Rewrites an expression in zeta_n as one in zeta_k = zeta_n + Delta.
inline DeltaLaurent substitute_zeta_k(const ZetaPoly& p) {
  DeltaLaurent r;
  for (const auto& [j, c] : p.terms()) r += DeltaLaurent(ZetaPoly(c)) * shifted_zeta_power(j, Rational(1));
  return r;
}

// The same expression with the roles of n and k exchanged: zeta_n -> zeta_k
// and Delta -> -Delta. sigma is symmetric in n, k.
inline DeltaLaurent swap_endpoints(const DeltaLaurent& p) {
  DeltaLaurent r;
  for (const auto& [m, c] : p.terms()) {
    DeltaLaurent term = substitute_zeta_k(c) * DeltaLaurent(ZetaPoly(m % 2 == 0 ? 1 : -1), m);
    r += term;
  }
  return r.with_sigma(p.sigma());
}

// i^phase * value; phase taken mod 4.
struct PhasedLaurent {
  int phase = 0;
  DeltaLaurent value;

  friend PhasedLaurent operator*(const PhasedLaurent& a, const PhasedLaurent& b) {
    return {((a.phase + b.phase) % 4 + 4) % 4, a.value * b.value};
  }
  bool is_real() const { return phase % 2 == 0 || value.is_zero(); }
  // Collapses a real-phase value to a plain DeltaLaurent.
  DeltaLaurent real_part() const {
    if (!is_real()) throw std::logic_error("imaginary phased value has no real part representation");
    return phase % 4 == 2 ? -value : value;
  }
  DeltaLaurent imag_part() const {
    if (is_real()) return DeltaLaurent();
    return phase % 4 == 3 ? -value : value;
  }
};

}  // namespace airysum
