#pragma once

// Arbitrary-precision real numbers on top of MPFR.
//
// Every Real carries its own precision (in bits, at least 64). Binary
// operations produce a result at the larger of the operand precisions;
// operations with integers or rationals keep the Real's precision.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace airysum {

inline constexpr long kMinPrecisionBits = 64;
inline constexpr long kDefaultPrecisionBits = 256;

class Real {
 public:
  explicit Real(long precision_bits = kDefaultPrecisionBits) {
    init(precision_bits);
    mpfr_set_zero(v_, 1);
  }

  template <std::integral I>
  Real(I value, long precision_bits) {
    init(precision_bits);
    if constexpr (std::is_signed_v<I>) {
      mpfr_set_si(v_, static_cast<long>(value), MPFR_RNDN);
    } else {
      mpfr_set_ui(v_, static_cast<unsigned long>(value), MPFR_RNDN);
    }
  }

  Real(double value, long precision_bits) {
    init(precision_bits);
    mpfr_set_d(v_, value, MPFR_RNDN);
  }

  Real(const mpq_class& value, long precision_bits) {
    init(precision_bits);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }

  Real(const mpz_class& value, long precision_bits) {
    init(precision_bits);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }

  // Parses a decimal (or MPFR-exponent) string. Throws std::invalid_argument.
  Real(std::string_view text, long precision_bits) {
    init(precision_bits);
    std::string s(text);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      mpfr_clear(v_);
      throw std::invalid_argument("not a real number: '" + s + "'");
    }
  }

  Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  Real(Real&& other) noexcept {
    // Leave the moved-from object valid with a minimal allocation.
    mpfr_init2(v_, kMinPrecisionBits);
    mpfr_swap(v_, other.v_);
  }

  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }

  // Copy rounded (or widened) to a new precision.
  Real with_precision(long precision_bits) const {
    Real r(precision_bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent() const {
    if (mpfr_zero_p(v_)) return -(1L << 30);
    return static_cast<long>(mpfr_get_exp(v_));
  }

  // Decimal representation with the given number of significant digits
  // (0 selects enough digits to round-trip at this precision).
  std::string str(int digits = 0) const {
    if (digits <= 0) {
      digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30102999566398120)) + 1;
    }
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& b) { return apply(b, mpfr_add); }
  Real& operator-=(const Real& b) { return apply(b, mpfr_sub); }
  Real& operator*=(const Real& b) { return apply(b, mpfr_mul); }
  Real& operator/=(const Real& b) { return apply(b, mpfr_div); }

  Real& operator+=(long b) { mpfr_add_si(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator-=(long b) { mpfr_sub_si(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator*=(long b) { mpfr_mul_si(v_, v_, b, MPFR_RNDN); return *this; }
  Real& operator/=(long b) { mpfr_div_si(v_, v_, b, MPFR_RNDN); return *this; }

  Real& operator+=(const mpq_class& b) { mpfr_add_q(v_, v_, b.get_mpq_t(), MPFR_RNDN); return *this; }
  Real& operator-=(const mpq_class& b) { mpfr_sub_q(v_, v_, b.get_mpq_t(), MPFR_RNDN); return *this; }
  Real& operator*=(const mpq_class& b) { mpfr_mul_q(v_, v_, b.get_mpq_t(), MPFR_RNDN); return *this; }
  Real& operator/=(const mpq_class& b) { mpfr_div_q(v_, v_, b.get_mpq_t(), MPFR_RNDN); return *this; }

  // Multiplies by 2^e exactly.
  Real& scale_by_pow2(long e) {
    mpfr_mul_2si(v_, v_, e, MPFR_RNDN);
    return *this;
  }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator+(long a, Real b) { return b += a; }
  friend Real operator*(long a, Real b) { return b *= a; }
  friend Real operator-(long a, const Real& b) {
    Real r(b.precision());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long a, const Real& b) {
    Real r(b.precision());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator*(Real a, const mpq_class& b) { return a *= b; }
  friend Real operator*(const mpq_class& b, Real a) { return a *= b; }
  friend Real operator+(Real a, const mpq_class& b) { return a += b; }
  friend Real operator-(Real a, const mpq_class& b) { return a -= b; }
  friend Real operator/(Real a, const mpq_class& b) { return a /= b; }

  // A double would otherwise convert to long here and lose its fraction.
  template <std::floating_point D> friend Real operator+(Real, D) = delete;
  template <std::floating_point D> friend Real operator-(Real, D) = delete;
  template <std::floating_point D> friend Real operator*(Real, D) = delete;
  template <std::floating_point D> friend Real operator/(Real, D) = delete;
  template <std::floating_point D> friend Real operator+(D, Real) = delete;
  template <std::floating_point D> friend Real operator-(D, const Real&) = delete;
  template <std::floating_point D> friend Real operator*(D, Real) = delete;
  template <std::floating_point D> friend Real operator/(D, const Real&) = delete;
  template <std::floating_point D> Real& operator+=(D) = delete;
  template <std::floating_point D> Real& operator-=(D) = delete;
  template <std::floating_point D> Real& operator*=(D) = delete;
  template <std::floating_point D> Real& operator/=(D) = delete;

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }

  friend std::ostream& operator<<(std::ostream& os, const Real& x) {
    auto digits = os.precision() > 6 ? static_cast<int>(os.precision()) : 20;
    return os << x.str(digits);
  }

 private:
  void init(long precision_bits) {
    if (precision_bits < kMinPrecisionBits) {
      throw std::invalid_argument("Real precision must be at least 64 bits, got " +
                                  std::to_string(precision_bits));
    }
    mpfr_init2(v_, precision_bits);
  }

  template <typename Op>
  Real& apply(const Real& b, Op op) {
    if (mpfr_get_prec(b.v_) > mpfr_get_prec(v_)) {
      mpfr_prec_round(v_, mpfr_get_prec(b.v_), MPFR_RNDN);
    }
    op(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

namespace detail {
template <typename F>
Real unary(const Real& x, F f) {
  Real r(x.precision());
  f(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline Real abs(const Real& x) { return detail::unary(x, mpfr_abs); }
inline Real sqrt(const Real& x) { return detail::unary(x, mpfr_sqrt); }
inline Real cbrt(const Real& x) { return detail::unary(x, mpfr_cbrt); }
inline Real exp(const Real& x) { return detail::unary(x, mpfr_exp); }
inline Real log(const Real& x) { return detail::unary(x, mpfr_log); }
inline Real sin(const Real& x) { return detail::unary(x, mpfr_sin); }
inline Real cos(const Real& x) { return detail::unary(x, mpfr_cos); }
inline Real gamma(const Real& x) { return detail::unary(x, mpfr_gamma); }

inline std::pair<Real, Real> sin_cos(const Real& x) {
  Real s(x.precision()), c(x.precision());
  mpfr_sin_cos(s.get(), c.get(), x.get(), MPFR_RNDN);
  return {s, c};
}

inline Real pow(const Real& x, long e) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

inline Real pow(const Real& x, const Real& e) {
  Real r(std::max(x.precision(), e.precision()));
  mpfr_pow(r.get(), x.get(), e.get(), MPFR_RNDN);
  return r;
}

inline Real pi(long precision_bits) {
  Real r(precision_bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

// 2^e at the given precision.
inline Real pow2(long e, long precision_bits) {
  Real r(1, precision_bits);
  return r.scale_by_pow2(e);
}

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

}  // namespace airysum
