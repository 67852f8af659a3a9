#pragma once

// Position and momentum matrix elements of the bouncer eigenstates in scaled
// units (rho = E0 = hbar = 2m = 1), from the four-term recursion
//
//   2 delta_{1p} sigma = (p)_4 <z^(p-4)> + 4p(p-1) zeta_ave <z^(p-2)>
//                        - 2p(2p-1) <z^(p-1)> + Delta^2 <z^p>
//
// with (p)_4 = p(p-1)(p-2)(p-3) and negative powers dropped.

#include <stdexcept>
#include <utility>
#include <vector>

#include "airysum/delta_laurent.hpp"
#include "airysum/zeta_poly.hpp"

namespace airysum {

struct DiagonalElement {
  int q;
  ZetaPoly value;
};

struct OffDiagonalElement {
  int q;
  DeltaLaurent value;
};

namespace detail {

inline Rational falling4(int p) { return Rational(static_cast<long>(p) * (p - 1) * (p - 2) * (p - 3)); }

}  // namespace detail

// <n|zeta^q|n> for q = 0..q_max. At k = n the Delta^2 term vanishes and the
// level-(q+1) recursion is solved for the (q)-th element.
inline std::vector<ZetaPoly> diagonal_table(int q_max) {
  if (q_max < 0) throw std::invalid_argument("q must be >= 0");
  std::vector<ZetaPoly> d(static_cast<std::size_t>(q_max) + 1);
  d[0] = ZetaPoly(1);
  for (int q = 1; q <= q_max; ++q) {
    const int p = q + 1;
    ZetaPoly acc;
    if (q >= 3) acc += d[q - 3] * detail::falling4(p);
    acc += ZetaPoly::zeta() * d[q - 1] * Rational(4L * p * (p - 1));
    d[q] = acc / Rational(2L * p * (2 * p - 1));
  }
  return d;
}

inline DiagonalElement diagonal(int q) { return {q, diagonal_table(q).back()}; }

// <n|zeta^q|k>, k != n, for q = 0..q_max.
inline std::vector<DeltaLaurent> off_diagonal_table(int q_max) {
  if (q_max < 0) throw std::invalid_argument("q must be >= 0");
  std::vector<DeltaLaurent> l(static_cast<std::size_t>(q_max) + 1);
  const DeltaLaurent inv_d2 = DeltaLaurent::delta(-2);
  for (int p = 1; p <= q_max; ++p) {
    DeltaLaurent rhs;
    if (p == 1) rhs += DeltaLaurent(ZetaPoly(2), 0, true);
    if (p >= 4) rhs -= l[p - 4] * detail::falling4(p);
    if (p >= 2) {
      rhs -= substitute_zeta_ave(ZetaAveExpr(l[p - 2], 1)) * Rational(4L * p * (p - 1));
    }
    rhs += l[p - 1] * Rational(2L * p * (2 * p - 1));
    l[p] = rhs * inv_d2;
  }
  return l;
}

inline OffDiagonalElement off_diagonal(int q) { return {q, off_diagonal_table(q).back()}; }

// <n|p|k> = -i sigma/Delta and <k|p|n> = +i sigma/Delta.
inline std::pair<PhasedLaurent, PhasedLaurent> momentum_off_diagonal() {
  const DeltaLaurent m(ZetaPoly(1), -1, true);
  return {PhasedLaurent{3, m}, PhasedLaurent{1, m}};
}

inline ZetaPoly momentum_diagonal() { return ZetaPoly(); }

// <n|p^2|n> and <n|p^4|n>, using p^2 = zeta_n - zeta on psi_n.
inline std::pair<ZetaPoly, ZetaPoly> momentum_diagonal_powers() {
  const auto d = diagonal_table(2);
  const ZetaPoly z = ZetaPoly::zeta();
  ZetaPoly p2 = z - d[1];
  ZetaPoly p4 = z * z - z * d[1] * Rational(2) + d[2];
  return {p2, p4};
}

// <n|p^2|k> = -<n|zeta|k> = -2 sigma/Delta^2. In units with m = 1 instead of
// 2m = 1 this reads -4 E0 sigma/Delta^2.
inline DeltaLaurent momentum_squared_off_diagonal() { return -off_diagonal(1).value; }

}  // namespace airysum
