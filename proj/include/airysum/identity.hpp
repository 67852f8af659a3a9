#pragma once

#include <string>

#include "airysum/zeta_poly.hpp"

namespace airysum {

// S_p(n) = sum_{k != n} (zeta_k - zeta_n)^-p = closed_form(zeta_n).
struct SumIdentity {
  int p = 0;
  ZetaPoly closed_form;

  friend bool operator==(const SumIdentity& a, const SumIdentity& b) {
    return a.p == b.p && a.closed_form == b.closed_form;
  }
};

// T_{a,b,c}(n) = sum_{k != j != n} 1/((zeta_k - zeta_n)^a (zeta_k - zeta_j)^b (zeta_j - zeta_n)^c).
struct MultiSumIdentity {
  int a = 0, b = 0, c = 0;
  ZetaPoly closed_form;
  std::string source;
};

}  // namespace airysum
