#pragma once

// Airy function Ai, its derivative, and the zeros -zeta_n of Ai.
//
// Evaluation picks, per argument, between the Maclaurin series (with
// enough guard bits to absorb cancellation) and the large-|x| asymptotic
// expansions. The asymptotic branch is used only when its smallest term
// is already below the working precision, so both branches deliver the
// requested precision.

#include <cmath>
#include <string>
#include <vector>

#include "airysum/errors.hpp"
#include "airysum/real.hpp"

namespace airysum {

struct AiryValues {
  Real ai;
  Real ai_prime;
};

namespace detail {

inline constexpr long kAiryGuardBits = 32;
inline constexpr long kMaxWorkingBits = 1L << 16;
inline constexpr double kLog2E = 1.4426950408889634074;

inline double xi_of(double ax) { return 2.0 / 3.0 * ax * std::sqrt(ax); }

// Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3).
struct AiryConstants {
  Real c1{kMinPrecisionBits};
  Real c2{kMinPrecisionBits};
};

inline const AiryConstants& airy_constants(long bits) {
  thread_local AiryConstants cached;
  if (cached.c1.precision() < bits) {
    long p = std::max(bits, 2 * cached.c1.precision());
    const Real three(3, p);
    cached.c1 = 1L / (pow(three, Real(2, p) / 3L) * gamma(Real(2, p) / 3L));
    cached.c2 = 1L / (cbrt(three) * gamma(Real(1, p) / 3L));
  }
  return cached;
}

inline bool exceeds(const Real& term, long threshold_exp) {
  return !term.is_zero() && term.exponent() > threshold_exp;
}

// Working precision the power series needs at x. Largest series term is
// ~e^xi; for x > 0 the result is ~e^-xi.
inline long maclaurin_working_bits(double xd, long target_bits) {
  const double loss = (xd > 0 ? 2.0 : 1.0) * xi_of(std::fabs(xd)) * kLog2E;
  return target_bits + static_cast<long>(std::ceil(loss)) + 16;
}

inline bool use_asymptotic(double xd, long target_bits) {
  const double ax = std::fabs(xd);
  return ax > 1.0 && 2.0 * xi_of(ax) * kLog2E >= static_cast<double>(target_bits + 16);
}

inline AiryValues airy_maclaurin(const Real& x, long target_bits) {
  const double xd = x.to_double();
  const double ax = std::fabs(xd);
  const double xi = xi_of(ax);
  const long wp = maclaurin_working_bits(xd, target_bits);
  if (wp > kMaxWorkingBits) {
    throw PrecisionError("Ai(" + std::to_string(xd) + ") at " + std::to_string(target_bits) +
                         " bits needs " + std::to_string(wp) + " working bits");
  }
  const auto& k = airy_constants(wp);
  const Real X = x.with_precision(wp);
  const Real X3 = X * X * X;

  // f = sum t_k, g = sum u_k, f' = sum b_k, g' = sum d_k.
  Real t(1, wp), u = X, b(0, wp), d(1, wp);
  Real f = t, g = u, fp(0, wp), gp = d;
  const long threshold = -(target_bits + static_cast<long>(std::ceil(xi * kLog2E)) + 8);
  const double k_decreasing = ax * std::sqrt(ax) / 3.0 + 2.0;
  for (long n = 1;; ++n) {
    t *= X3;
    t /= (3 * n - 1) * (3 * n);
    u *= X3;
    u /= (3 * n) * (3 * n + 1);
    if (n == 1) {
      b = X * X / 2L;
    } else {
      b *= X3;
      b /= (3 * n - 3) * (3 * n - 1);
    }
    d *= X3;
    d /= (3 * n - 2) * (3 * n);
    f += t;
    g += u;
    fp += b;
    gp += d;
    if (static_cast<double>(n) > k_decreasing && !exceeds(t, threshold) && !exceeds(u, threshold) &&
        !exceeds(b, threshold) && !exceeds(d, threshold)) {
      break;
    }
  }
  Real ai = k.c1.with_precision(wp) * f - k.c2.with_precision(wp) * g;
  Real aip = k.c1.with_precision(wp) * fp - k.c2.with_precision(wp) * gp;
  return {ai.with_precision(x.precision()), aip.with_precision(x.precision())};
}

inline AiryValues airy_asymptotic(const Real& x, long target_bits) {
  const double xd = x.to_double();
  const double ax = std::fabs(xd);
  const double xi_d = xi_of(ax);
  const long wp = target_bits + static_cast<long>(std::ceil(std::log2(xi_d + 2.0))) + 16;
  const Real z = abs(x.with_precision(wp));
  const Real xi = 2L * z * sqrt(z) / 3L;
  const Real inv_xi = 1L / xi;
  const Real rsqrt_pi = 1L / sqrt(pi(wp));
  const Real z14 = sqrt(sqrt(z));
  const long threshold = -(target_bits + 8);

  // u_k, v_k of the standard Airy asymptotic series.
  Real uk(1, wp), vk(1, wp), pw(1, wp);
  if (xd > 0) {
    Real su(1, wp), sv(1, wp);
    Real prev = uk;
    for (long k = 1;; ++k) {
      uk *= (6 * k - 5) * (6 * k - 3);
      uk *= 6 * k - 1;
      uk /= (2 * k - 1) * 216 * k;
      vk = -uk * (6 * k + 1) / (6 * k - 1);
      pw *= inv_xi;
      Real tu = uk * pw;
      Real tv = vk * pw;
      if (k % 2) {
        su -= tu;
        sv -= tv;
      } else {
        su += tu;
        sv += tv;
      }
      if (!exceeds(tu, threshold) && !exceeds(tv, threshold)) break;
      if (abs(tu) > abs(prev) && k > 2) {
        throw PrecisionError("asymptotic Airy series diverged before reaching target precision");
      }
      prev = tu;
    }
    const Real e = exp(-xi) * rsqrt_pi / 2L;
    Real ai = e / z14 * su;
    Real aip = -(e * z14 * sv);
    return {ai.with_precision(x.precision()), aip.with_precision(x.precision())};
  }

  // x < 0: split the series into even and odd orders.
  Real pu(1, wp), qu(0, wp), pv(1, wp), qv(0, wp);
  Real prev = uk;
  for (long k = 1;; ++k) {
    uk *= (6 * k - 5) * (6 * k - 3);
    uk *= 6 * k - 1;
    uk /= (2 * k - 1) * 216 * k;
    vk = -uk * (6 * k + 1) / (6 * k - 1);
    pw *= inv_xi;
    Real tu = uk * pw;
    Real tv = vk * pw;
    // term index k contributes (-1)^(k/2) to P (k even) or (-1)^((k-1)/2) to Q (k odd).
    const bool negative = ((k % 2 == 0) ? (k / 2) : ((k - 1) / 2)) % 2 == 1;
    if (negative) {
      tu = -tu;
      tv = -tv;
    }
    if (k % 2 == 0) {
      pu += tu;
      pv += tv;
    } else {
      qu += tu;
      qv += tv;
    }
    if (!exceeds(tu, threshold) && !exceeds(tv, threshold)) break;
    if (abs(tu) > abs(prev) && k > 2) {
      throw PrecisionError("asymptotic Airy series diverged before reaching target precision");
    }
    prev = abs(tu);
  }
  const Real theta = xi - pi(wp) / 4L;
  const auto [s, c] = sin_cos(theta);
  Real ai = rsqrt_pi / z14 * (c * pu + s * qu);
  Real aip = rsqrt_pi * z14 * (s * pv - c * qv);
  return {ai.with_precision(x.precision()), aip.with_precision(x.precision())};
}

}  // namespace detail

// Ai(x) and Ai'(x) at the precision of x.
inline AiryValues eval_airy(const Real& x) {
  if (!x.is_finite()) throw std::domain_error("Airy function of a non-finite argument");
  const long target = x.precision() + detail::kAiryGuardBits;
  if (detail::use_asymptotic(x.to_double(), target)) return detail::airy_asymptotic(x, target);
  return detail::airy_maclaurin(x, target);
}

inline Real eval_ai(const Real& x) { return eval_airy(x).ai; }
inline Real eval_ai_prime(const Real& x) { return eval_airy(x).ai_prime; }

// [3pi/2 (nu - 1/4)]^(2/3), the leading large-n zero estimate, at real nu.
inline Real asymptotic_zero_at(const Real& nu) {
  const long p = nu.precision();
  Real base = pi(p) * 3L / 2L * (nu - mpq_class(1, 4));
  return pow(base, Real(2, p) / 3L);
}

inline Real asymptotic_zero(long n, long precision_bits = kDefaultPrecisionBits) {
  if (n < 1) throw std::invalid_argument("zero index must be >= 1");
  return asymptotic_zero_at(Real(n, precision_bits));
}

// Large-n expansion with the first four correction terms,
// zeta_n = t^(2/3) (1 + 5/48 t^-2 - 5/36 t^-4 + 77125/82944 t^-6 - 108056875/6967296 t^-8),
// t = 3pi/8 (4n - 1). Used as the model for zeros beyond a computed table.
inline Real asymptotic_zero_refined(const Real& nu) {
  const long p = nu.precision();
  const Real t = pi(p) * 3L / 8L * (4L * nu - 1L);
  const Real t2 = 1L / (t * t);
  Real series(mpq_class(-108056875, 6967296), p);
  series = series * t2 + mpq_class(77125, 82944);
  series = series * t2 + mpq_class(-5, 36);
  series = series * t2 + mpq_class(5, 48);
  series = series * t2 + 1L;
  return pow(t, Real(2, p) / 3L) * series;
}

inline Real default_tolerance(long precision_bits) {
  return pow2(-(25 * precision_bits) / 32, precision_bits);
}

// zeta_n: Newton iteration on Ai(-zeta) from the asymptotic estimate. The
// working precision doubles from 64 bits up to the target.
inline Real zero(long n, long precision_bits = kDefaultPrecisionBits) {
  if (n < 1) throw std::invalid_argument("zero index must be >= 1");
  const Real tolerance = default_tolerance(precision_bits);
  Real zeta = asymptotic_zero(n, std::min<long>(precision_bits, 64));
  {
    // Fail before the precision ladder, not at its last rung.
    const double x = -zeta.to_double();
    const long target = precision_bits + detail::kAiryGuardBits;
    if (!detail::use_asymptotic(x, target) && detail::maclaurin_working_bits(x, target) > detail::kMaxWorkingBits) {
      throw PrecisionError("zero " + std::to_string(n) + " at " + std::to_string(precision_bits) +
                           " bits exceeds the working-precision budget");
    }
  }
  long prec = zeta.precision();
  constexpr int kMaxIterations = 100;
  for (int it = 0; it < kMaxIterations; ++it) {
    const AiryValues v = eval_airy(-zeta);
    const Real step = v.ai / v.ai_prime;
    zeta += step;
    const bool settled = step.is_zero() || step.exponent() <= zeta.exponent() - prec - 1 + (prec < precision_bits ? 8 : 0);
    if (!settled) continue;
    if (prec < precision_bits) {
      prec = std::min(2 * prec, precision_bits);
      zeta = zeta.with_precision(prec);
      continue;
    }
    const AiryValues r = eval_airy(-zeta);
    if (!(abs(r.ai) < tolerance)) continue;

    const Real lo = asymptotic_zero_at(Real(n, 64) - mpq_class(1, 2));
    const Real hi = asymptotic_zero_at(Real(n, 64) + mpq_class(1, 2));
    if (zeta <= lo || zeta >= hi) {
      throw BracketError("Newton for zero " + std::to_string(n) + " converged to " + zeta.str(20) +
                         " outside (" + lo.str(10) + ", " + hi.str(10) + ")");
    }
    // Ai'(-zeta_n) alternates in sign, starting positive at n = 1.
    const int expected_sign = (n % 2 == 1) ? 1 : -1;
    if (r.ai_prime.sign() != expected_sign) {
      throw BracketError("zero " + std::to_string(n) + ": Ai' has the sign of a neighbouring zero");
    }
    return zeta;
  }
  throw ConvergenceError("Newton iteration for zero " + std::to_string(n) + " did not converge in " +
                         std::to_string(kMaxIterations) + " iterations at " +
                         std::to_string(precision_bits) + " bits");
}

// zeta_1 < zeta_2 < ... < zeta_N, tagged with the precision they were computed at.
class ZeroTable {
 public:
  ZeroTable(std::vector<Real> zeros, long precision_bits, Real tolerance)
      : zeros_(std::move(zeros)), precision_bits_(precision_bits), tolerance_(std::move(tolerance)) {
    if (precision_bits_ < kMinPrecisionBits) throw std::invalid_argument("zero table precision below 64 bits");
    for (std::size_t i = 1; i < zeros_.size(); ++i) {
      if (!(zeros_[i - 1] < zeros_[i])) {
        throw std::invalid_argument("zero table not strictly increasing at index " + std::to_string(i + 1));
      }
    }
    if (!zeros_.empty() && !(zeros_.front() > 0.0)) throw std::invalid_argument("zeta_1 must be positive");
  }

  long size() const { return static_cast<long>(zeros_.size()); }
  long precision_bits() const { return precision_bits_; }
  const Real& tolerance() const { return tolerance_; }
  const std::vector<Real>& zeros() const { return zeros_; }

  // 1-based.
  const Real& zeta(long n) const {
    if (n < 1 || n > size()) {
      throw std::out_of_range("zero index " + std::to_string(n) + " outside table of size " +
                              std::to_string(size()));
    }
    return zeros_[static_cast<std::size_t>(n - 1)];
  }

  // Re-checks |Ai(-zeta_n)| < tolerance, optionally at a higher precision.
  // Returns the first failing index, or 0 when every entry passes.
  long first_residual_failure(long precision_bits = 0) const {
    const long p = std::max(precision_bits, precision_bits_);
    for (long n = 1; n <= size(); ++n) {
      if (!(abs(eval_ai(-zeta(n).with_precision(p))) < tolerance_)) return n;
    }
    return 0;
  }

 private:
  std::vector<Real> zeros_;
  long precision_bits_;
  Real tolerance_;
};

inline ZeroTable build_zero_table(long n_max, long precision_bits = kDefaultPrecisionBits) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::vector<Real> zeros;
  zeros.reserve(static_cast<std::size_t>(n_max));
  for (long n = 1; n <= n_max; ++n) {
    try {
      zeros.push_back(zero(n, precision_bits));
    } catch (const std::exception& e) {
      throw ZeroTableError(n, e.what());
    }
  }
  return ZeroTable(std::move(zeros), precision_bits, default_tolerance(precision_bits));
}

// Physical scales of the bouncer; the engine works with rho = E0 = F = 1.
struct ScaledUnits {
  double rho = 1.0;
  double E0 = 1.0;
  double F = 1.0;

  void validate() const {
    if (!(rho > 0 && E0 > 0 && F > 0)) throw std::invalid_argument("ScaledUnits need rho, E0, F > 0");
  }
  Real energy(const Real& zeta) const { return zeta * Real(E0, zeta.precision()); }
  Real length(const Real& zeta) const { return zeta * Real(rho, zeta.precision()); }
};

}  // namespace airysum
