#include "rev/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rev/curve.hpp"
#include "rev/lp.hpp"

namespace rev {

namespace {

// all type rows of one bidder with probabilities
std::vector<std::pair<TypeRow, double>> enumerate_rows(const ProductPrior& prior, int i) {
  std::vector<std::pair<TypeRow, double>> rows = {{TypeRow{}, 1.0}};
  for (int j = 0; j < prior.m; ++j) {
    std::vector<std::pair<TypeRow, double>> next;
    for (const auto& [row, p] : rows)
      for (const auto& [sig, w] : prior.cell(i, j).enumerate()) {
        TypeRow r = row;
        r.push_back(sig);
        next.push_back({std::move(r), p * w});
      }
    rows = std::move(next);
  }
  return rows;
}

}  // namespace

std::vector<std::pair<TypeProfile, double>> enumerate_profiles(const ProductPrior& prior,
                                                               long long max_profiles) {
  double total = 1.0;
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j) total *= (double)prior.cell(i, j).enumerate().size();
  require(total <= (double)max_profiles, "guard exceeded: too many type profiles");

  std::vector<std::pair<TypeProfile, double>> out = {
      {TypeProfile{std::vector<std::vector<ItemSignal>>(prior.n)}, 1.0}};
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j) {
      std::vector<std::pair<TypeProfile, double>> next;
      for (const auto& [prof, p] : out)
        for (const auto& [sig, w] : prior.cell(i, j).enumerate()) {
          TypeProfile q = prof;
          q.signals[i].push_back(sig);
          next.push_back({std::move(q), p * w});
        }
      out = std::move(next);
    }
  return out;
}

std::vector<std::vector<Mask>> enumerate_allocations(int n, int m, long long max_allocations) {
  double total = std::pow((double)(n + 1), m);
  require(total <= (double)max_allocations, "guard exceeded: too many allocation patterns");
  std::vector<std::vector<Mask>> out;
  std::vector<int> owner(m, -1);  // -1 = unassigned; lexicographic encoding order
  while (true) {
    std::vector<Mask> alloc(n, 0);
    for (int j = 0; j < m; ++j)
      if (owner[j] >= 0) alloc[owner[j]] |= Mask(1) << j;
    out.push_back(std::move(alloc));
    int j = m - 1;
    while (j >= 0 && owner[j] == n - 1) owner[j--] = -1;
    if (j < 0) break;
    ++owner[j];
  }
  return out;
}

BicResult opt_bic_lp(const ProductPrior& prior, const Valuation& val,
                     const TinyInstanceGuard& guard) {
  require(val.cls == Valuation::Cls::Additive || val.cls == Valuation::Cls::UnitDemand ||
              val.cls == Valuation::Cls::ConstrainedAdditive,
          "opt_bic_lp: unsupported valuation class");
  int n = prior.n, m = prior.m;
  std::vector<std::vector<std::pair<TypeRow, double>>> types(n);
  long long P = 1;
  for (int i = 0; i < n; ++i) {
    types[i] = enumerate_rows(prior, i);
    P *= (long long)types[i].size();
    require(P <= guard.max_profiles, "guard exceeded: too many type profiles");
  }
  auto allocs = enumerate_allocations(n, m, guard.max_allocations);
  long long A = (long long)allocs.size();

  // variables: x[t*A + a] then p[i][ti]
  std::vector<long long> p_off(n);
  long long nv = P * A;
  for (int i = 0; i < n; ++i) {
    p_off[i] = nv;
    nv += (long long)types[i].size();
  }

  // profile index <-> per-bidder type indices (bidder 0 most significant)
  std::vector<long long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * (long long)types[i + 1].size();
  auto prob_of = [&](const std::vector<int>& ti) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= types[i][ti[i]].second;
    return p;
  };

  std::vector<std::vector<double>> Amat;
  std::vector<double> b;
  // feasibility: sum_a x[t][a] <= 1 per profile
  for (long long t = 0; t < P; ++t) {
    std::vector<double> row(nv, 0.0);
    for (long long a = 0; a < A; ++a) row[t * A + a] = 1.0;
    Amat.push_back(std::move(row));
    b.push_back(1.0);
  }

  // interim value of bidder i with true type `ti` when profiles are drawn
  // with bidder i reporting `rep`; adds coefficients into `row` with sign
  auto add_interim_value = [&](std::vector<double>& row, int i, int ti, int rep, double sign) {
    std::vector<int> idx(n, 0);
    while (true) {
      idx[i] = rep;
      double fmi = 1.0;
      for (int k = 0; k < n; ++k)
        if (k != i) fmi *= types[k][idx[k]].second;
      long long t = 0;
      for (int k = 0; k < n; ++k) t += stride[k] * idx[k];
      for (long long a = 0; a < A; ++a) {
        double v = value(val, types[i][ti].first, allocs[a][i]);
        if (v != 0.0) row[t * A + a] += sign * fmi * v;
      }
      // advance over t_{-i}
      int k = n - 1;
      while (k >= 0) {
        if (k == i) { --k; continue; }
        if (++idx[k] < (int)types[k].size()) break;
        idx[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  };

  for (int i = 0; i < n; ++i) {
    int Ti = (int)types[i].size();
    for (int ti = 0; ti < Ti; ++ti) {
      // IR: p_i(ti) - interim_value(ti | truth) <= 0
      std::vector<double> ir(nv, 0.0);
      add_interim_value(ir, i, ti, ti, -1.0);
      ir[p_off[i] + ti] = 1.0;
      Amat.push_back(std::move(ir));
      b.push_back(0.0);
      // BIC: utility(report ti') - utility(truth) <= 0
      for (int tj = 0; tj < Ti; ++tj) {
        if (tj == ti) continue;
        std::vector<double> row(nv, 0.0);
        add_interim_value(row, i, ti, tj, 1.0);
        add_interim_value(row, i, ti, ti, -1.0);
        row[p_off[i] + tj] -= 1.0;
        row[p_off[i] + ti] += 1.0;
        Amat.push_back(std::move(row));
        b.push_back(0.0);
      }
    }
  }

  std::vector<double> c(nv, 0.0);
  for (int i = 0; i < n; ++i)
    for (size_t ti = 0; ti < types[i].size(); ++ti)
      c[p_off[i] + ti] = types[i][ti].second;

  LpResult res = lp_solve_max(Amat, b, c);
  require(res.optimal, "opt_bic_lp: LP did not reach optimality");
  return {res.objective, res.duality_gap};
}

std::pair<Mechanism, double> opt_posted_exhaustive(const ProductPrior& prior,
                                                   const Valuation& val, Mechanism::Tag family,
                                                   const TinyInstanceGuard& guard) {
  require(family == Mechanism::Tag::Spm || family == Mechanism::Tag::Rspm,
          "opt_posted_exhaustive: spm or rspm only");
  int n = prior.n, m = prior.m;
  auto profiles = enumerate_profiles(prior, guard.max_profiles);

  // candidate prices per (i, j): the bidder's achievable single-item
  // values plus a just-above-everything sentinel
  std::vector<std::vector<std::vector<double>>> cand(n, std::vector<std::vector<double>>(m));
  for (int i = 0; i < n; ++i) {
    auto rows = enumerate_rows(prior, i);
    for (int j = 0; j < m; ++j) {
      std::vector<double> vs;
      for (const auto& [row, p] : rows) vs.push_back(single_item_value(val, row, j));
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      vs.push_back(vs.back() + 1.0);
      cand[i][j] = std::move(vs);
    }
  }

  std::vector<std::vector<int>> orders;
  {
    std::vector<int> o(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    if (n <= 4) {
      do orders.push_back(o);
      while (std::next_permutation(o.begin(), o.end()));
    } else {
      orders.push_back(o);
    }
  }

  double combos = (double)orders.size() * (double)profiles.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) combos *= (double)cand[i][j].size();
  require(combos <= 2e7, "guard exceeded: posted-price search too large");

  Mechanism best;
  double best_rev = -1.0;
  std::vector<int> pick(n * m, 0);
  Mechanism mech;
  mech.tag = family;
  mech.n = n;
  mech.m = m;
  mech.lotteries.assign(n, std::vector<Lottery>(m));
  while (true) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        mech.lotteries[i][j] = Lottery::deterministic(cand[i][j][pick[i * m + j]], 0.0);
    std::vector<std::vector<double>> prices(n, std::vector<double>(m));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) prices[i][j] = mech.lotteries[i][j].price_lo_q;
    for (const auto& o : orders) {
      mech.order = o;
      double rev = 0.0;
      for (const auto& [prof, p] : profiles) rev += p * run_posted(mech, val, prof, prices).revenue;
      if (rev > best_rev + 1e-12) {
        best_rev = rev;
        best = mech;
      }
    }
    int k = n * m - 1;
    while (k >= 0 && pick[k] + 1 == (int)cand[k / m][k % m].size()) pick[k--] = 0;
    if (k < 0) break;
    ++pick[k];
  }
  return {best, best_rev};
}

double exact_core(const ProductPrior& prior, const Valuation& val,
                  const std::vector<double>& adjusted_thresholds,
                  const TinyInstanceGuard& guard) {
  RestrictedValuation rv = restrict_to_cheap_items(val, adjusted_thresholds);
  auto profiles = enumerate_profiles(prior, guard.max_profiles);
  auto allocs = enumerate_allocations(prior.n, prior.m, guard.max_allocations);
  double core = 0.0;
  for (const auto& [prof, p] : profiles) {
    double best = 0.0;
    for (const auto& a : allocs) {
      double w = 0.0;
      for (int i = 0; i < prior.n; ++i) w += rv.value(prof.row(i), a[i]);
      best = std::max(best, w);
    }
    core += p * best;
  }
  return core;
}

std::vector<Mask> exact_welfare_allocation(const TypeProfile& profile, const Valuation& val,
                                           const TinyInstanceGuard& guard) {
  auto allocs = enumerate_allocations(profile.n(), profile.m(), guard.max_allocations);
  std::vector<Mask> best;
  double best_w = -1.0;
  for (const auto& a : allocs) {
    double w = 0.0;
    for (int i = 0; i < profile.n(); ++i) w += value(val, profile.row(i), a[i]);
    if (w > best_w + 1e-12) {  // first in encoding order wins ties
      best_w = w;
      best = a;
    }
  }
  return best;
}

double exact_expected_welfare(const ProductPrior& prior, const Valuation& val,
                              const TinyInstanceGuard& guard) {
  auto profiles = enumerate_profiles(prior, guard.max_profiles);
  auto allocs = enumerate_allocations(prior.n, prior.m, guard.max_allocations);
  double out = 0.0;
  for (const auto& [prof, p] : profiles) {
    double best = 0.0;
    for (const auto& a : allocs) {
      double w = 0.0;
      for (int i = 0; i < prior.n; ++i) w += value(val, prof.row(i), a[i]);
      best = std::max(best, w);
    }
    out += p * best;
  }
  return out;
}

double srev_star(const ProductPrior& prior) {
  double total = 0.0;
  for (int j = 0; j < prior.m; ++j) {
    std::vector<IronedVirtuals> phi;
    std::vector<std::vector<std::pair<ItemSignal, double>>> atoms;
    for (int i = 0; i < prior.n; ++i) {
      phi.push_back(ironed_virtuals(prior.cell(i, j)));
      atoms.push_back(prior.cell(i, j).enumerate());
    }
    // expectation over the item-j column of max(0, max_i phi_ij)
    std::vector<int> idx(prior.n, 0);
    while (true) {
      double p = 1.0, best = 0.0;
      for (int i = 0; i < prior.n; ++i) {
        p *= atoms[i][idx[i]].second;
        best = std::max(best, phi[i].at(atoms[i][idx[i]].first.scalar()));
      }
      total += p * best;
      int i = prior.n - 1;
      while (i >= 0 && ++idx[i] == (int)atoms[i].size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return total;
}

double brev_star(const ProductPrior& prior, const TinyInstanceGuard& guard) {
  auto profiles = enumerate_profiles(prior, guard.max_profiles);
  double total = 0.0;
  for (const auto& [prof, p] : profiles) {
    for (int i = 0; i < prior.n; ++i) {
      std::vector<double> sp(prior.m, 0.0);
      for (int j = 0; j < prior.m; ++j)
        for (int k = 0; k < prior.n; ++k)
          if (k != i) sp[j] = std::max(sp[j], prof.signals[k][j].scalar());
      double fee = vcg_median_fee(prior, i, sp);
      if (vcg_surplus(prof.row(i), sp) >= fee - 1e-12) total += p * fee;
    }
  }
  return total;
}

}  // namespace rev
