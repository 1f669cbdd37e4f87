#pragma once

#include "rev/mech.hpp"

namespace rev {

struct TinyInstanceGuard {
  long long max_profiles = 100000;     // enumerated type profiles
  long long max_allocations = 10000;   // allocation patterns per profile
};

// Optimal revenue over randomized Bayesian-truthful mechanisms, as an LP
// over ex-post allocation variables and interim payments (BIC + interim IR
// constraints). Additive / unit-demand / constrained-additive only.
struct BicResult {
  double revenue = 0.0;
  double duality_gap = 0.0;
};
BicResult opt_bic_lp(const ProductPrior& prior, const Valuation& val,
                     const TinyInstanceGuard& guard = {});

// Best deterministic SPM/RSPM over support-value price grids (plus the
// sentinel), all bidder orders for n <= 4; exact revenue by enumeration.
std::pair<Mechanism, double> opt_posted_exhaustive(const ProductPrior& prior,
                                                   const Valuation& val,
                                                   Mechanism::Tag family,
                                                   const TinyInstanceGuard& guard = {});

// Exact expected max welfare extractable from items valued below the
// per-item thresholds: E[max over feasible allocations of
// sum_i v(t_i, S_i ∩ {j : V(t_ij) < thr_j})].
double exact_core(const ProductPrior& prior, const Valuation& val,
                  const std::vector<double>& adjusted_thresholds,
                  const TinyInstanceGuard& guard = {});

// Welfare-maximizing item partition for one profile; lexicographic
// tie-break over allocation encodings (item -> bidder index, -1 unassigned).
std::vector<Mask> exact_welfare_allocation(const TypeProfile& profile, const Valuation& val,
                                           const TinyInstanceGuard& guard = {});

double exact_expected_welfare(const ProductPrior& prior, const Valuation& val,
                              const TinyInstanceGuard& guard = {});

// Sum over items of the single-item Myerson optimum E[max(0, max_i phi_ij)]
// (additive scalar priors).
double srev_star(const ProductPrior& prior);

// Exact expected entry fees collected by the median-fee VCG mechanism.
double brev_star(const ProductPrior& prior, const TinyInstanceGuard& guard = {});

// All profiles with probabilities (guarded enumeration helper).
std::vector<std::pair<TypeProfile, double>> enumerate_profiles(const ProductPrior& prior,
                                                               long long max_profiles);

// All assignments of m items to n bidders or nobody ((n+1)^m patterns).
std::vector<std::vector<Mask>> enumerate_allocations(int n, int m, long long max_allocations);

}  // namespace rev
