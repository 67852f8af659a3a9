// Ground-state bouncer in a weak extra field: exact shift versus the
// perturbation series built from the derived sums.
#include <iostream>

#include "airysum/multi_sum.hpp"

using namespace airysum;

int main() {
  const ZeroTable table = build_zero_table(2000, 128);
  const DerivationLedger ledger = derive_ledger(6);

  StarkConfig cfg;
  cfg.F = Real(1, 128);
  cfg.F_bar = Real(0.05, 128);

  const Real z1 = table.zeta(1);
  std::cout << "zeta_1          " << z1.str(20) << "\n";
  std::cout << "S_5(1) closed   " << ledger.get(5).closed_form.eval(z1).str(20) << "\n";
  std::cout << "S_5(1) numeric  " << sum_S_numeric(5, 1, table).value.str(20) << "\n\n";

  Real series(128);
  for (int order = 1; order <= 3; ++order) {
    const SumEstimate e = stark_perturbative(1, cfg, order, table);
    series += e.value;
    std::cout << "E^(" << order << ")           " << e.value.str(15) << "\n";
  }
  const Real exact = stark_exact(z1, cfg);
  std::cout << "\nE_1 + series    " << (z1 + series).str(15) << "\n";
  std::cout << "exact           " << exact.str(15) << "\n";
  std::cout << "difference      " << (exact - z1 - series).str(3) << "  (fourth order: ~"
            << (z1 * pow(cfg.ratio(), 4L) * stark_series_coefficient(4)).str(3) << ")\n";
}
