#pragma once

// Direct numerical integration of <n|zeta^q|k> = int_0^inf psi_n zeta^q psi_k
// with psi_n(zeta) = Ai(zeta - zeta_n) / |Ai'(-zeta_n)|. Used as an oracle,
// independent of the recursion.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "airysum/airy.hpp"
#include "airysum/errors.hpp"

namespace airysum {

struct Eigenstate {
  long n;
  Real zeta_n;
  Real norm;  // 1 / (sqrt(rho) |Ai'(-zeta_n)|)

  Real operator()(const Real& zeta) const { return eval_ai(zeta - zeta_n) * norm; }
};

inline Eigenstate eigenstate(long n, const ZeroTable& table, long precision_bits = 128, double rho = 1.0) {
  const long p = std::max(precision_bits, kMinPrecisionBits);
  const Real z = table.zeta(n).with_precision(p);
  const Real aip = abs(eval_ai_prime(-z));
  return {n, z, 1L / (sqrt(Real(rho, p)) * aip)};
}

struct QuadratureResult {
  Real value;
  Real error_estimate;
};

namespace detail {

struct GaussRule {
  std::vector<Real> x;  // on [-1, 1]
  std::vector<Real> w;
};

inline const GaussRule& gauss_legendre(int m, long prec) {
  static std::mutex mu;
  static std::map<std::pair<int, long>, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(m, prec);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GaussRule g;
  const Real tol = pow2(-prec + 8, prec);
  for (int i = 1; i <= m; ++i) {
    Real x(std::cos(std::numbers::pi * (i - 0.25) / (m + 0.5)), prec);
    Real dp(prec);
    for (int it2 = 0; it2 < 100; ++it2) {
      Real p0(1, prec), p1 = x;
      for (int k = 2; k <= m; ++k) {
        Real p2 = ((2L * k - 1L) * x * p1 - (k - 1L) * p0) / static_cast<long>(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = Real(m, prec) * (x * p1 - p0) / (x * x - 1L);
      Real step = p1 / dp;
      x -= step;
      if (abs(step) < tol) break;
    }
    g.x.push_back(x);
    g.w.push_back(2L / ((1L - x * x) * dp * dp));
  }
  return cache.emplace(key, std::move(g)).first->second;
}

}  // namespace detail

// <n|zeta^q|k> for all 1 <= n, k <= N and 0 <= q <= q_max, integrated together.
// Index as values[q][n-1][k-1].
struct QuadratureBatch {
  std::vector<std::vector<std::vector<QuadratureResult>>> values;
  Real cutoff;
  Real tail_bound;
};

inline QuadratureBatch quadrature_batch(long N, int q_max, const ZeroTable& table, double tolerance = 1e-20,
                                        long precision_bits = 128) {
  if (N < 1 || N > table.size()) throw std::invalid_argument("quadrature states must lie in the zero table");
  if (q_max < 0) throw std::invalid_argument("q must be >= 0");
  const long prec = std::max(precision_bits, kMinPrecisionBits);
  std::vector<Eigenstate> psi;
  for (long n = 1; n <= N; ++n) psi.push_back(eigenstate(n, table, prec));
  const Real zmax = psi.back().zeta_n;
  const Real cutoff = zmax + 15L;

  // Tail past the cutoff from Ai(t) <= exp(-2/3 t^1.5) / (2 sqrt(pi) t^0.25),
  // t >= 15 for every state.
  double tail = 0;
  {
    const double t = 15.0, X = cutoff.to_double();
    double norm_max = 0;
    for (const auto& s : psi) norm_max = std::max(norm_max, s.norm.to_double());
    const double rt = std::sqrt(t);
    const double poly = std::pow(X + q_max / (2 * rt) + 1, q_max);
    tail = std::exp(-4.0 / 3.0 * t * rt) * poly / (2 * rt) / (4 * std::numbers::pi * rt) * norm_max * norm_max;
  }
  if (tail > tolerance) {
    throw ConvergenceError("quadrature tail bound " + std::to_string(tail) + " exceeds tolerance");
  }

  const std::size_t npairs = static_cast<std::size_t>(N * (N + 1) / 2);
  const std::size_t width = npairs * static_cast<std::size_t>(q_max + 1);
  using Vec = std::vector<Real>;
  auto integrand = [&](const Real& zeta, Vec& out, const Real& weight) {
    Vec a;
    a.reserve(static_cast<std::size_t>(N));
    for (const auto& s : psi) a.push_back(s(zeta));
    std::size_t idx = 0;
    Real zq = weight;
    for (int q = 0; q <= q_max; ++q) {
      for (long i = 0; i < N; ++i) {
        for (long j = i; j < N; ++j) out[idx++] += zq * a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)];
      }
      zq *= zeta;
    }
  };
  const auto& rule = detail::gauss_legendre(24, prec);
  auto panel = [&](const Real& lo, const Real& hi) {
    Vec out(width, Real(prec));
    const Real half = (hi - lo) / 2L, mid = (hi + lo) / 2L;
    for (std::size_t i = 0; i < rule.x.size(); ++i) integrand(mid + half * rule.x[i], out, rule.w[i] * half);
    return out;
  };

  Vec total(width, Real(prec)), err(width, Real(prec));
  const double tol_per_unit = tolerance / cutoff.to_double();
  struct Job {
    Real lo, hi;
    Vec whole;
    int depth;
  };
  std::vector<Job> stack;
  const long pieces = static_cast<long>(std::ceil(cutoff.to_double()));
  for (long i = pieces; i-- > 0;) {
    Real lo = cutoff * i / pieces, hi = cutoff * (i + 1) / pieces;
    Vec w = panel(lo, hi);
    stack.push_back({lo, hi, std::move(w), 0});
  }
  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    const Real mid = (job.lo + job.hi) / 2L;
    Vec left = panel(job.lo, mid), right = panel(mid, job.hi);
    double worst = 0;
    for (std::size_t i = 0; i < width; ++i) {
      worst = std::max(worst, std::fabs((left[i] + right[i] - job.whole[i]).to_double()));
    }
    const double allowed = tol_per_unit * (job.hi - job.lo).to_double();
    if (worst <= allowed || job.depth > 30) {
      for (std::size_t i = 0; i < width; ++i) {
        total[i] += left[i] + right[i];
        err[i] += abs(left[i] + right[i] - job.whole[i]);
      }
      continue;
    }
    stack.push_back({mid, job.hi, std::move(right), job.depth + 1});
    stack.push_back({job.lo, mid, std::move(left), job.depth + 1});
  }

  QuadratureBatch b;
  b.cutoff = cutoff;
  b.tail_bound = Real(tail, prec);
  b.values.resize(static_cast<std::size_t>(q_max + 1));
  std::size_t idx = 0;
  for (int q = 0; q <= q_max; ++q) {
    auto& m = b.values[static_cast<std::size_t>(q)];
    m.assign(static_cast<std::size_t>(N), std::vector<QuadratureResult>(static_cast<std::size_t>(N), {Real(prec), Real(prec)}));
    for (long i = 0; i < N; ++i) {
      for (long j = i; j < N; ++j) {
        QuadratureResult r{total[idx], err[idx] + b.tail_bound};
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r;
        m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = r;
        ++idx;
      }
    }
  }
  return b;
}

inline QuadratureResult quadrature_element(long n, long k, int q, const ZeroTable& table, double tolerance = 1e-20,
                                           long precision_bits = 128) {
  const long N = std::max(n, k);
  if (std::min(n, k) < 1) throw std::invalid_argument("state indices start at 1");
  QuadratureBatch b = quadrature_batch(N, q, table, tolerance, precision_bits);
  return b.values[static_cast<std::size_t>(q)][static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)];
}

}  // namespace airysum
