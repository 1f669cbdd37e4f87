#include "rev/valuation.hpp"

#include <algorithm>
#include <cmath>

namespace rev {

bool set_precedes(Mask a, Mask b) {
  if (a == b) return false;
  int ca = popcount(a), cb = popcount(b);
  if (ca != cb) return ca < cb;
  // lexicographic on sorted element lists: the lowest differing item decides
  Mask diff = a ^ b;
  Mask low = diff & (~diff + 1);
  return (a & low) != 0;
}

Valuation Valuation::additive(int m) {
  Valuation v;
  v.cls = Cls::Additive;
  v.m = m;
  return v;
}
Valuation Valuation::unit_demand(int m) {
  Valuation v;
  v.cls = Cls::UnitDemand;
  v.m = m;
  return v;
}
Valuation Valuation::cardinality(int m, int k) {
  require(k >= 1, "cardinality valuation: k >= 1");
  Valuation v;
  v.cls = Cls::ConstrainedAdditive;
  v.feas = Feas::CardinalityK;
  v.m = m;
  v.card_k = k;
  return v;
}
Valuation Valuation::explicit_sets(int m, std::vector<Mask> maximal_feasible) {
  require(!maximal_feasible.empty(), "invalid-valuation: empty feasibility family");
  Valuation v;
  v.cls = Cls::ConstrainedAdditive;
  v.feas = Feas::ExplicitSets;
  v.m = m;
  v.feas_sets = std::move(maximal_feasible);
  return v;
}
Valuation Valuation::partition_matroid(int m, std::vector<int> part_of, std::vector<int> part_cap) {
  require((int)part_of.size() == m, "partition matroid: part_of size mismatch");
  Valuation v;
  v.cls = Cls::ConstrainedAdditive;
  v.feas = Feas::PartitionMatroid;
  v.m = m;
  v.part_of = std::move(part_of);
  v.part_cap = std::move(part_cap);
  return v;
}
Valuation Valuation::xos(int m, int K) {
  require(K >= 1, "xos: K >= 1");
  Valuation v;
  v.cls = Cls::Xos;
  v.m = m;
  v.K = K;
  return v;
}
Valuation Valuation::subadd_table(int m, std::vector<int> sizes,
                                  std::vector<std::vector<double>> table) {
  require(m <= 10, "subadd_table: m <= 10");
  require((int)sizes.size() == m, "subadd_table: sizes length mismatch");
  Valuation v;
  v.cls = Cls::SubaddTable;
  v.m = m;
  v.table_sizes = std::move(sizes);
  v.table = std::move(table);
  return v;
}

bool Valuation::feasible(Mask s) const {
  require(cls == Cls::ConstrainedAdditive, "feasible: constrained-additive only");
  switch (feas) {
    case Feas::CardinalityK: return popcount(s) <= card_k;
    case Feas::ExplicitSets:
      for (Mask f : feas_sets)
        if ((s & ~f) == 0) return true;
      return false;
    case Feas::PartitionMatroid: {
      std::vector<int> used(part_cap.size(), 0);
      for (int j = 0; j < m; ++j)
        if (s & (Mask(1) << j))
          if (++used[part_of[j]] > part_cap[part_of[j]]) return false;
      return true;
    }
  }
  return false;
}

int Valuation::joint_index(const TypeRow& t) const {
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    int k = (int)std::lround(t[j].scalar());
    require(k >= 0 && k < table_sizes[j], "subadd_table: signal index out of range");
    idx = idx * table_sizes[j] + k;
  }
  return idx;
}

double single_item_value(const Valuation& val, const TypeRow& t, int j) {
  return value(val, t, Mask(1) << j);
}

double value(const Valuation& val, const TypeRow& t, Mask S) {
  if (S == 0) return 0.0;
  switch (val.cls) {
    case Valuation::Cls::Additive: {
      double s = 0.0;
      for (int j = 0; j < val.m; ++j)
        if (S & (Mask(1) << j)) s += t[j].scalar();
      return s;
    }
    case Valuation::Cls::UnitDemand: {
      double best = 0.0;
      for (int j = 0; j < val.m; ++j)
        if (S & (Mask(1) << j)) best = std::max(best, t[j].scalar());
      return best;
    }
    case Valuation::Cls::ConstrainedAdditive: {
      switch (val.feas) {
        case Valuation::Feas::CardinalityK: {
          std::vector<double> vals;
          for (int j = 0; j < val.m; ++j)
            if (S & (Mask(1) << j)) vals.push_back(t[j].scalar());
          std::sort(vals.rbegin(), vals.rend());
          double s = 0.0;
          for (int k = 0; k < std::min<int>(val.card_k, vals.size()); ++k) s += vals[k];
          return s;
        }
        case Valuation::Feas::ExplicitSets: {
          require(!val.feas_sets.empty(), "invalid-valuation: empty feasibility family");
          double best = 0.0;
          for (Mask f : val.feas_sets) {
            double s = 0.0;
            for (int j = 0; j < val.m; ++j)
              if ((S & f) & (Mask(1) << j)) s += t[j].scalar();
            best = std::max(best, s);
          }
          return best;
        }
        case Valuation::Feas::PartitionMatroid: {
          int nparts = (int)val.part_cap.size();
          std::vector<std::vector<double>> per_part(nparts);
          for (int j = 0; j < val.m; ++j)
            if (S & (Mask(1) << j)) per_part[val.part_of[j]].push_back(t[j].scalar());
          double s = 0.0;
          for (int p = 0; p < nparts; ++p) {
            std::sort(per_part[p].rbegin(), per_part[p].rend());
            for (int k = 0; k < std::min<int>(val.part_cap[p], per_part[p].size()); ++k)
              s += per_part[p][k];
          }
          return s;
        }
      }
      return 0.0;
    }
    case Valuation::Cls::Xos: {
      double best = 0.0;
      for (int k = 0; k < val.K; ++k) {
        double s = 0.0;
        for (int j = 0; j < val.m; ++j)
          if (S & (Mask(1) << j)) s += t[j].v[k];
        best = std::max(best, s);
      }
      return best;
    }
    case Valuation::Cls::SubaddTable:
      return val.table[val.joint_index(t)][S];
  }
  return 0.0;
}

namespace {

std::pair<Mask, double> demand_impl(const Valuation& val, const TypeRow& t,
                                    const std::vector<double>& prices, Mask available) {
  auto price_of = [&prices](Mask s) {
    double p = 0.0;
    for (int j = 0; j < 32; ++j)
      if (s & (Mask(1) << j)) p += prices[j];
    return p;
  };

  if (val.cls == Valuation::Cls::Additive) {
    Mask buy = 0;
    int zero = -1;
    double u = 0.0;
    for (int j = 0; j < val.m; ++j) {
      if (!(available & (Mask(1) << j))) continue;
      double margin = t[j].scalar() - prices[j];
      if (margin > 0) {
        buy |= Mask(1) << j;
        u += margin;
      } else if (margin == 0.0 && zero < 0) {
        zero = j;
      }
    }
    if (buy == 0 && zero >= 0) buy = Mask(1) << zero;  // trade at indifference
    return {buy, u};
  }
  if (val.cls == Valuation::Cls::UnitDemand) {
    Mask buy = 0;
    double u = -1.0;
    for (int j = 0; j < val.m; ++j) {
      if (!(available & (Mask(1) << j))) continue;
      double margin = t[j].scalar() - prices[j];
      // lowest index wins ties (strict improvement required to switch)
      if (margin >= 0.0 && (buy == 0 || margin > u)) {
        buy = Mask(1) << j;
        u = margin;
      }
    }
    return {buy, std::max(u, 0.0)};
  }

  require(val.m <= 16, "exhaustive-demand-too-large: m > 16 without a structured shortcut");
  Mask best = 0;
  double best_u = 0.0;
  Mask sub = available;
  // iterate all subsets of available (including 0)
  while (true) {
    double u = value(val, t, sub) - price_of(sub);
    bool better = u > best_u + 1e-12;
    bool tie = std::fabs(u - best_u) <= 1e-12;
    if (better || (tie && sub != 0 && (best == 0 || set_precedes(sub, best)))) {
      best = sub;
      best_u = std::max(u, best_u);
    }
    if (sub == 0) break;
    sub = (sub - 1) & available;
  }
  return {best, best_u};
}

}  // namespace

Mask demand(const Valuation& val, const TypeRow& t, const std::vector<double>& prices,
            Mask available) {
  return demand_impl(val, t, prices, available).first;
}

double best_utility(const Valuation& val, const TypeRow& t, const std::vector<double>& prices,
                    Mask available) {
  return demand_impl(val, t, prices, available).second;
}

std::vector<double> supporting_prices(const Valuation& val, const TypeRow& t, Mask S) {
  require(val.cls == Valuation::Cls::Xos, "unsupported-oracle: supporting prices need XOS");
  require(S != 0, "supporting_prices: S non-empty");
  int best_k = 0;
  double best = -1.0;
  for (int k = 0; k < val.K; ++k) {
    double s = 0.0;
    for (int j = 0; j < val.m; ++j)
      if (S & (Mask(1) << j)) s += t[j].v[k];
    if (s > best) {
      best = s;
      best_k = k;
    }
  }
  std::vector<double> theta(val.m, 0.0);
  for (int j = 0; j < val.m; ++j)
    if (S & (Mask(1) << j)) theta[j] = t[j].v[best_k];
  return theta;
}

Mask RestrictedValuation::cheap_set(const TypeRow& t) const {
  Mask c = 0;
  for (int j = 0; j < base->m; ++j)
    if (single_item_value(*base, t, j) < thresholds[j]) c |= Mask(1) << j;
  return c;
}

double RestrictedValuation::value(const TypeRow& t, Mask S) const {
  return rev::value(*base, t, S & cheap_set(t));
}

Mask RestrictedValuation::demand(const TypeRow& t, const std::vector<double>& prices,
                                 Mask available) const {
  require(base->m <= 16, "exhaustive-demand-too-large");
  Mask cheap = cheap_set(t);
  Mask best = 0;
  double best_u = 0.0;
  Mask sub = available;
  while (true) {
    double p = 0.0;
    for (int j = 0; j < base->m; ++j)
      if (sub & (Mask(1) << j)) p += prices[j];
    double u = rev::value(*base, t, sub & cheap) - p;
    bool better = u > best_u + 1e-12;
    bool tie = std::fabs(u - best_u) <= 1e-12;
    if (better || (tie && sub != 0 && (best == 0 || set_precedes(sub, best)))) {
      best = sub;
      best_u = std::max(u, best_u);
    }
    if (sub == 0) break;
    sub = (sub - 1) & available;
  }
  return best;
}

double RestrictedValuation::best_utility(const TypeRow& t, const std::vector<double>& prices,
                                         Mask available) const {
  Mask d = demand(t, prices, available);
  double p = 0.0;
  for (int j = 0; j < base->m; ++j)
    if (d & (Mask(1) << j)) p += prices[j];
  return value(t, d) - p;
}

std::vector<double> RestrictedValuation::supporting_prices(const TypeRow& t, Mask S) const {
  Mask sc = S & cheap_set(t);
  std::vector<double> gamma(base->m, 0.0);
  if (sc == 0) return gamma;
  std::vector<double> theta = rev::supporting_prices(*base, t, sc);
  for (int j = 0; j < base->m; ++j)
    if (sc & (Mask(1) << j)) gamma[j] = theta[j];
  return gamma;
}

RestrictedValuation restrict_to_cheap_items(const Valuation& val,
                                            std::vector<double> adjusted_thresholds) {
  require((int)adjusted_thresholds.size() == val.m, "restrict_to_cheap_items: threshold count");
  return RestrictedValuation{&val, std::move(adjusted_thresholds)};
}

}  // namespace rev
