#pragma once

#include "rev/curve.hpp"
#include "rev/lp.hpp"
#include "rev/mech.hpp"

namespace rev {

// Solution of the ex-ante relaxation: per-cell service probabilities under
// row caps (per bidder) and column caps (per item).
struct ExAnteSolution {
  std::vector<std::vector<double>> q;  // [bidder][item]
  double objective = 0.0;
  std::string tag = "exact";
};

// Maximize sum of R_ij(q_ij) subject to row/column caps. The concave
// piecewise-linear objective is decomposed into per-segment LP variables
// (amount in each segment bounded by segment width, objective weighted by
// segment slope), so the LP optimum is the exact program optimum.
ExAnteSolution solve_exante(const std::vector<std::vector<RevenueCurve>>& curves,
                            double row_cap, double col_cap,
                            const std::string& tag = "exact");

// Per-cell two-point price lotteries achieving R_ij(q_ij).
std::vector<std::vector<Lottery>> solution_to_lotteries(
    const ExAnteSolution& sol, const std::vector<std::vector<RevenueCurve>>& curves);

// Randomized RSPM drawing each cell price from its lottery at execution time.
Mechanism lotteries_to_rspm(std::vector<std::vector<Lottery>> lots,
                            std::vector<int> order = {});

// Analytic revenue lower bound of a randomized RSPM under `prior`:
//   eta1 * eta2 * sum_ij E[p_ij * Pr[t_ij >= p_ij]]
// with eta1 = 1 - max_j sum_i Pr[sale_ij], eta2 = 1 - max_i sum_j Pr[sale_ij]
// where Pr[sale_ij] is over both the price lottery and t_ij ~ prior.
struct RspmBound {
  double eta1 = 0.0, eta2 = 0.0;
  double price_revenue_sum = 0.0;  // sum_ij E[p * Pr[t >= p]]
  double bound = 0.0;
  bool vacuous = false;  // eta1 <= 0 or eta2 <= 0
};
RspmBound rspm_bound(const Mechanism& mech, const ProductPrior& prior);

}  // namespace rev
