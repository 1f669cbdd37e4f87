#pragma once

#include <functional>
#include <map>

#include "rev/valuation.hpp"

namespace rev {

// Boolean event over a finite axis-aligned grid in dimension ell.
struct GridEvent {
  std::vector<std::vector<double>> grids;  // per-axis ascending points
  std::vector<char> cells;                 // flattened membership tensor

  int ell() const { return (int)grids.size(); }
  long long size() const;
  long long flat_index(const std::vector<int>& idx) const;
  bool member(const std::vector<int>& idx) const;
};

// true iff along every axis-parallel grid line the member cells form one
// contiguous run (or none)
bool is_single_intersecting(const GridEvent& e);

// exact |Pr_D[E] - Pr_Dhat[E]| where D, Dhat are products of per-axis
// weight vectors aligned with the grids
double event_prob_gap(const GridEvent& e, const std::vector<std::vector<double>>& d,
                      const std::vector<std::vector<double>>& dhat);

// per-axis weights of a marginal restricted to a grid (must be supported
// exactly on the grid points)
std::vector<double> axis_weights(const Marginal& d, const std::vector<double>& grid);

// the additive surplus event {t : sum_j (t_j - p_j)^+ >= x} on the support
// grid of a bidder's row of marginals
GridEvent surplus_event(const std::vector<Marginal>& row, const std::vector<double>& prices,
                        double x);

// Per-subset complexity inputs for the partitioned sample bound: either a
// direct sample-complexity function s_T(eps, delta) or a VC dimension V_T.
struct ComplexityTable {
  enum class Mode { SampleFn, Vc };
  Mode mode = Mode::SampleFn;
  int d = 0;
  std::function<double(Mask, double, double)> s_fn;  // SampleFn: s_T(eps, delta)
  std::map<Mask, double> vc;                         // Vc: V_T per subset
};

struct PartitionBound {
  double bound = 0.0;
  std::vector<Mask> partition;
  double v_max = 0.0;  // Vc mode: min over partitions of k^2 * max V_{T_i}
};

// Minimize over all set partitions of [d] (d <= 12):
//   SampleFn: max_i s_{T_i}(eps/k, delta/k)
//   Vc:       V_max = k^2 * max_i V_{T_i}, then the sample formula
//             (V_max/eps^2) ln(k/eps) + (k^2/eps^2) ln(k/delta)
// with unit leading constants (a formula instantiation, not a tight claim).
PartitionBound sample_bound_partition(const ComplexityTable& tbl, double eps, double delta);

}  // namespace rev
