#pragma once

#include <string>
#include <vector>

namespace rev {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Acceptance battery: each check is deterministic given its built-in seeds
// and compares library output against independent oracles or exact
// enumeration. Any single violation fails the check.
CheckResult check_curve_oracle();            // 1: envelope vs O(s^2) construction
CheckResult check_exante_grid();             // 2: LP vs fine-grid exhaustive search
CheckResult check_prices_to_spm_bound();     // 3: eta1*eta2 lower bound
CheckResult check_ud_chain_exact();          // 4: revenue >= CP*/4, CP* >= OPT/8
CheckResult check_ud_chain_perturbed();      // 5: max-min guarantee under 0.01 shift
CheckResult check_srev_brev();               // 6: OPT <= 6 SRev + 2 BRev
CheckResult check_stable_demand_set();       // 7: purchased-set TV <= 2 m xi
CheckResult check_revenue_stability();       // 8: |Rev_D - Rev_Dhat| bound
CheckResult check_single_intersecting();     // 9: event gap <= 2 xi ell
CheckResult check_dkw();                     // 10: empirical DKW tail
CheckResult check_mu_balance();              // 11: median fee acceptance window
CheckResult check_best_aspe();               // 12: selection within 2 Rmax eps'
CheckResult check_symmetric_subadditive();   // 13: core / beta-RSPM / OPT chain
CheckResult check_sample_bound_table();      // 14: d vs d^2 V_max scaling

std::vector<CheckResult> run_all_checks();

}  // namespace rev
