#pragma once

#include "rev/exante.hpp"

namespace rev {

// Two-point price lottery SPM learned from an (approximate) unit-demand
// prior via the ex-ante relaxation with slack caps 1/2 + n*eps (per item)
// and 1/2 + m*eps (per bidder).
struct UdMaxminResult {
  Mechanism mech;           // randomized RSPM
  ExAnteSolution sol;       // over the supplied prior's curves
  double eps = 0.0;
  bool vacuous = false;     // (n+m) * eps >= 1/4
  // revenue guarantee (1/4 - (n+m) eps)(opt/8 - 2 eps m n H) given the
  // true instance's optimum and value ceiling
  double guarantee(double opt, double H) const;
};
UdMaxminResult learn_ud_maxmin(const ProductPrior& dhat, double eps);

// Sample-only pipeline for regular unit-demand marginals: per-cell tail
// truncation at a threshold with tail mass in [1/(3CZ), 1/(CZ)],
// Z = max{m, n}, empirical reconstruction, and the capped ex-ante program
// with caps 1/2 + 1/C (+ slack).
struct UdRegularResult {
  Mechanism mech;
  ExAnteSolution sol;
  std::vector<std::vector<double>> caps_h;  // per-cell truncation thresholds
  ProductPrior empirical_prior;
};
UdRegularResult learn_ud_regular(const ProductPrior& true_prior, int samples_per_cell,
                                 uint64_t seed, int C = 8, double slack = 0.0);

// Additive bounded-support learner: per-item anonymous posted price at the
// empirical monopoly price of the item's max-value distribution, plus a
// single-sample VCG-with-entry-fee mechanism over the empirical prior.
struct AdditiveBoundedResult {
  Mechanism spm;
  Mechanism vcg;            // single-sample entry fees drawn at run time
  ProductPrior empirical_prior;
  std::vector<double> prices;
  std::vector<double> median_of_max;  // recorded for audit
};
AdditiveBoundedResult learn_additive_bounded(const ProductPrior& true_prior, int samples,
                                             uint64_t seed);

// Additive max-min learner: per-item ex-ante SPMs over the approximate
// prior plus a VCG mechanism with order-statistic entry fees (the
// ceil(5k/16)-th largest of k surplus draws).
struct AdditiveMaxminResult {
  Mechanism spm;            // lotteries merged across per-item programs
  Mechanism vcg;            // order-stat fee over dhat
  std::vector<ExAnteSolution> per_item;
  double eps = 0.0;
  bool fee_guarantee_void = false;  // m * eps > 1/16
};
AdditiveMaxminResult learn_additive_maxmin(const ProductPrior& dhat, double eps, int k = 512,
                                           uint64_t fee_seed = 0);

// Lazily-iterated grid of price vectors: every coordinate is a positive
// multiple of `step`, at most B.
struct EpsilonNet {
  double B = 0.0, step = 0.0;
  int m = 0;
  int levels = 0;

  long long size() const;
  std::vector<double> at(long long idx) const;
};
EpsilonNet epsilon_net(double B, double step, int m);

// G = max over cells of sup{x : Pr[V(t_ij) >= x] >= 1/(5 max{m,n})}
double estimate_G(const ProductPrior& prior, const Valuation& val);

// Anonymous-price entry-fee mechanisms over a price net, fees = empirical
// medians of the best utility on a fee batch, winner chosen by empirical
// revenue on a disjoint selection batch.
struct XosSampleResult {
  Mechanism mech;                       // best ASPE
  long long best_index = -1;
  std::vector<double> empirical_revenue;  // per net index
};
XosSampleResult learn_xos_sample(const ProductPrior& prior, const Valuation& val, double B,
                                 double step, int fee_batch, int selection_batch,
                                 uint64_t seed);

struct BalancedThresholds {
  std::vector<double> beta;
  double b = 0.0;
  double c = 0.0;
  double eta = 0.0;
};

// Per-item thresholds with tail Pr[V >= beta_j] in [b/n, b/(n-1)] (exact
// mode) or estimated in the interior band [b/n + b/3n^2, b/(n-1) - b/3n^2]
// (sample mode), plus the smallest shift c making the tail sum land in
// [1/2 - eta/2, 1/2 - eta/4] when it exceeds 1/2 - eta/2 at c = 0.
BalancedThresholds learn_symmetric_thresholds(const ProductPrior& prior, const Valuation& val,
                                              double b, double eta, int samples = 0,
                                              uint64_t seed = 0);

// ASPE for symmetric XOS: item price Q_j = mean over profiles of
// (1/2) sum_i 1[j in A_i] gamma_j^{A_i}(t_i), with A the exact welfare
// maximizer of the threshold-truncated valuation and gamma its supporting
// prices; entry fees are medians of the utility at prices Q. samples = 0
// computes exact expectations by enumeration.
struct SymmetricAspeResult {
  Mechanism mech;
  std::vector<double> Q;
  std::vector<double> adjusted_thresholds;
};
SymmetricAspeResult learn_symmetric_aspe(const ProductPrior& prior, const Valuation& val,
                                         const BalancedThresholds& thr, int samples,
                                         int fee_batch, uint64_t seed);

// Unit-demand instance with marginals F_j = distribution of V(t_ij)
// (pushforward of each cell through the single-item value).
ProductPrior induced_unit_demand(const ProductPrior& prior, const Valuation& val);

// Symmetric subadditive learner: run the unit-demand max-min learner on
// the induced instance; the lotteries transfer verbatim because an RSPM
// only ever sells single items, whose values coincide by construction.
UdMaxminResult learn_symmetric_subadditive(const ProductPrior& prior, const Valuation& val,
                                           double eps);

// Deterministic anonymous-price RSPM at the given per-item prices.
Mechanism beta_priced_rspm(int n, int m, const std::vector<double>& prices);

}  // namespace rev
