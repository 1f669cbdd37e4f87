#pragma once

#include <cstdint>

#include "rev/dist.hpp"

namespace rev {

// Item sets are bitmasks over [m], m <= 16 for exhaustive operations.
using Mask = uint32_t;

inline int popcount(Mask s) { return __builtin_popcount(s); }

// true if set a precedes set b lexicographically as a sorted element list,
// with cardinality compared first
bool set_precedes(Mask a, Mask b);

struct Valuation {
  enum class Cls { Additive, UnitDemand, ConstrainedAdditive, Xos, SubaddTable };
  enum class Feas { CardinalityK, ExplicitSets, PartitionMatroid };

  Cls cls = Cls::Additive;
  int m = 0;

  // constrained-additive feasibility family (downward closed)
  Feas feas = Feas::CardinalityK;
  int card_k = 1;
  std::vector<Mask> feas_sets;        // ExplicitSets: maximal feasible sets
  std::vector<int> part_of;           // PartitionMatroid: item -> part id
  std::vector<int> part_cap;          // per-part capacity

  int K = 1;  // XOS clause count, shared by all items of the valuation

  // subadditive table: per-item signal-index counts and the value table
  // value[joint_index][mask], joint_index mixed-radix over table_sizes
  std::vector<int> table_sizes;
  std::vector<std::vector<double>> table;

  static Valuation additive(int m);
  static Valuation unit_demand(int m);
  static Valuation cardinality(int m, int k);
  static Valuation explicit_sets(int m, std::vector<Mask> maximal_feasible);
  static Valuation partition_matroid(int m, std::vector<int> part_of, std::vector<int> part_cap);
  static Valuation xos(int m, int K);
  static Valuation subadd_table(int m, std::vector<int> sizes,
                                std::vector<std::vector<double>> table);

  bool feasible(Mask s) const;  // constrained-additive feasibility
  int joint_index(const std::vector<ItemSignal>& t) const;  // subadditive table key
};

using TypeRow = std::vector<ItemSignal>;  // one bidder's signals

double value(const Valuation& val, const TypeRow& t, Mask S);
double single_item_value(const Valuation& val, const TypeRow& t, int j);

// Favorite affordable bundle among subsets of `available`. Tie rule:
// maximum utility first; the empty set only if no nonempty set attains the
// maximum (trade at indifference); then smallest cardinality; then
// lexicographically smallest element list.
Mask demand(const Valuation& val, const TypeRow& t, const std::vector<double>& prices,
            Mask available);

// best utility achievable from `available` under `prices`
double best_utility(const Valuation& val, const TypeRow& t, const std::vector<double>& prices,
                    Mask available);

// XOS supporting prices on S: entries of the maximizing clause
std::vector<double> supporting_prices(const Valuation& val, const TypeRow& t, Mask S);

// The threshold-truncated valuation v'(t, S) = v(t, S ∩ C(t)) with
// C(t) = {j : V(t_j) < thr_j}. Oracles mirror the base class's.
struct RestrictedValuation {
  const Valuation* base;
  std::vector<double> thresholds;

  Mask cheap_set(const TypeRow& t) const;
  double value(const TypeRow& t, Mask S) const;
  Mask demand(const TypeRow& t, const std::vector<double>& prices, Mask available) const;
  double best_utility(const TypeRow& t, const std::vector<double>& prices, Mask available) const;
  std::vector<double> supporting_prices(const TypeRow& t, Mask S) const;
};

RestrictedValuation restrict_to_cheap_items(const Valuation& val,
                                            std::vector<double> adjusted_thresholds);

}  // namespace rev
