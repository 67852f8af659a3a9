#pragma once

// Polynomials in zeta_n with exact rational coefficients.

#include <gmpxx.h>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "airysum/real.hpp"

namespace airysum {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

class ZetaPoly {
 public:
  ZetaPoly() = default;
  ZetaPoly(const Rational& c) { set(0, c); }  // NOLINT(google-explicit-constructor)
  ZetaPoly(long c) { set(0, Rational(c)); }    // NOLINT(google-explicit-constructor)

  static ZetaPoly monomial(int power, const Rational& c) {
    ZetaPoly p;
    p.set(power, c);
    return p;
  }
  static ZetaPoly zeta() { return monomial(1, 1); }

  const std::map<int, Rational>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }

  Rational coefficient(int power) const {
    auto it = c_.find(power);
    return it == c_.end() ? Rational(0) : it->second;
  }

  std::vector<int> powers() const {
    std::vector<int> out;
    for (const auto& [k, v] : c_) out.push_back(k);
    return out;
  }

  void set(int power, Rational c) {
    if (power < 0) throw std::invalid_argument("negative power of zeta in ZetaPoly");
    c.canonicalize();
    if (c == 0) {
      c_.erase(power);
    } else {
      c_[power] = std::move(c);
    }
  }

  void add_to(int power, const Rational& c) { set(power, coefficient(power) + c); }

  ZetaPoly& operator+=(const ZetaPoly& o) {
    for (const auto& [k, v] : o.c_) add_to(k, v);
    return *this;
  }
  ZetaPoly& operator-=(const ZetaPoly& o) {
    for (const auto& [k, v] : o.c_) add_to(k, -v);
    return *this;
  }
  ZetaPoly& operator*=(const Rational& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& [k, v] : c_) v *= s;
    return *this;
  }

  friend ZetaPoly operator+(ZetaPoly a, const ZetaPoly& b) { return a += b; }
  friend ZetaPoly operator-(ZetaPoly a, const ZetaPoly& b) { return a -= b; }
  friend ZetaPoly operator-(ZetaPoly a) { return a *= Rational(-1); }
  friend ZetaPoly operator*(ZetaPoly a, const Rational& s) { return a *= s; }
  friend ZetaPoly operator*(const Rational& s, ZetaPoly a) { return a *= s; }
  friend ZetaPoly operator/(ZetaPoly a, const Rational& s) {
    if (s == 0) throw std::domain_error("ZetaPoly division by zero");
    return a *= Rational(1) / s;
  }

  friend ZetaPoly operator*(const ZetaPoly& a, const ZetaPoly& b) {
    ZetaPoly r;
    for (const auto& [i, x] : a.c_) {
      for (const auto& [j, y] : b.c_) r.add_to(i + j, x * y);
    }
    return r;
  }

  friend bool operator==(const ZetaPoly& a, const ZetaPoly& b) { return a.c_ == b.c_; }

  // Horner evaluation at a Real zeta (coefficients rounded at zeta's precision).
  Real eval(const Real& z) const {
    Real acc(z.precision());
    if (c_.empty()) return acc;
    for (int k = degree(); k >= 0; --k) {
      acc *= z;
      auto it = c_.find(k);
      if (it != c_.end()) acc += it->second;
    }
    return acc;
  }

  Rational eval(const Rational& z) const {
    Rational acc(0);
    for (int k = degree(); k >= 0; --k) {
      acc *= z;
      acc += coefficient(k);
    }
    acc.canonicalize();
    return acc;
  }

  // e.g. "2/945 z^3 + 1/112"
  std::string to_string(const std::string& var = "z") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      Rational c = it->second;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      c = abs(c);
      const int k = it->first;
      if (k == 0) {
        os << c.get_str();
      } else {
        if (c != 1) os << c.get_str() << " ";
        os << var;
        if (k > 1) os << "^" << k;
      }
      first = false;
    }
    return os.str();
  }

 private:
  std::map<int, Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const ZetaPoly& p) { return os << p.to_string(); }

}  // namespace airysum
