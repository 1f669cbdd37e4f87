#include "rev/learn.hpp"

#include <algorithm>
#include <cmath>

#include "rev/oracle.hpp"

namespace rev {

namespace {

// distribution of the single-item value V(t_ij) (pushforward of one cell);
// other items pinned to their first atom, which cannot matter because
// valuations have no externalities
Marginal pushforward_item_value(const ProductPrior& prior, const Valuation& val, int i, int j) {
  TypeRow base(prior.m);
  for (int k = 0; k < prior.m; ++k) base[k] = prior.cell(i, k).enumerate().front().first;
  std::vector<std::pair<double, double>> vp;
  for (const auto& [sig, p] : prior.cell(i, j).enumerate()) {
    TypeRow row = base;
    row[j] = sig;
    vp.push_back({single_item_value(val, row, j), p});
  }
  std::sort(vp.begin(), vp.end());
  std::vector<double> support, probs;
  for (const auto& [v, p] : vp) {
    if (!support.empty() && std::fabs(support.back() - v) <= 1e-12)
      probs.back() += p;
    else {
      support.push_back(v);
      probs.push_back(p);
    }
  }
  return Marginal::discrete(std::move(support), std::move(probs));
}

std::vector<std::vector<RevenueCurve>> curves_of(const ProductPrior& prior) {
  std::vector<std::vector<RevenueCurve>> curves(prior.n);
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j) curves[i].push_back(revenue_curve(prior.cell(i, j)));
  return curves;
}

}  // namespace

double UdMaxminResult::guarantee(double opt, double H) const {
  return (0.25 - (mech.n + mech.m) * eps) * (opt / 8.0 - 2.0 * eps * mech.m * mech.n * H);
}

UdMaxminResult learn_ud_maxmin(const ProductPrior& dhat, double eps) {
  require(eps >= 0.0, "learn_ud_maxmin: eps >= 0");
  auto curves = curves_of(dhat);
  UdMaxminResult out;
  out.eps = eps;
  out.sol = solve_exante(curves, 0.5 + dhat.m * eps, 0.5 + dhat.n * eps,
                         eps == 0.0 ? "exact" : "approx");
  out.mech = lotteries_to_rspm(solution_to_lotteries(out.sol, curves));
  out.vacuous = (dhat.n + dhat.m) * eps >= 0.25;
  return out;
}

UdRegularResult learn_ud_regular(const ProductPrior& true_prior, int samples_per_cell,
                                 uint64_t seed, int C, double slack) {
  require(samples_per_cell >= 1, "learn_ud_regular: samples_per_cell >= 1");
  int n = true_prior.n, m = true_prior.m;
  double Z = (double)std::max(n, m);
  UdRegularResult out;
  out.caps_h.assign(n, std::vector<double>(m, 0.0));
  out.empirical_prior.n = n;
  out.empirical_prior.m = m;
  out.empirical_prior.cells.assign(n, std::vector<Marginal>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      Rng rng = Rng::split(seed, (uint64_t)(i * m + j));
      std::vector<double> xs(samples_per_cell);
      for (double& x : xs) x = true_prior.cell(i, j).sample(rng);
      double h;
      try {
        h = tail_threshold(xs, 1.0 / (3.0 * C * Z), 1.0 / (C * Z));
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("learn_ud_regular cell (" + std::to_string(i) + "," +
                                 std::to_string(j) + "): " + e.what());
      }
      out.caps_h[i][j] = h;
      for (double& x : xs) x = std::min(x, h);
      out.empirical_prior.cells[i][j] = empirical(xs);
    }
  auto curves = curves_of(out.empirical_prior);
  double cap = 0.5 + 1.0 / C + slack;
  out.sol = solve_exante(curves, cap, cap, "regular");
  out.mech = lotteries_to_rspm(solution_to_lotteries(out.sol, curves));
  return out;
}

AdditiveBoundedResult learn_additive_bounded(const ProductPrior& true_prior, int samples,
                                             uint64_t seed) {
  require(samples >= 1, "learn_additive_bounded: samples >= 1");
  int n = true_prior.n, m = true_prior.m;
  auto profiles = sample(true_prior, seed, samples);

  AdditiveBoundedResult out;
  out.empirical_prior.n = n;
  out.empirical_prior.m = m;
  out.empirical_prior.symmetric = true_prior.symmetric;
  out.empirical_prior.cells.assign(n, std::vector<Marginal>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<double> xs;
      for (const auto& prof : profiles) xs.push_back(prof.signals[i][j].scalar());
      out.empirical_prior.cells[i][j] = empirical(xs);
    }

  out.prices.resize(m);
  out.median_of_max.resize(m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> mx;
    for (const auto& prof : profiles) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v = std::max(v, prof.signals[i][j].scalar());
      mx.push_back(v);
    }
    out.median_of_max[j] = upper_median(mx);
    // empirical monopoly price of the max-value distribution; it does at
    // least as well as the prophet median threshold on the empirical data
    std::vector<double> cand = mx;
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    double best_p = cand.front(), best_rev = -1.0;
    for (double p : cand) {
      double sold = 0.0;
      for (double v : mx)
        if (v >= p - 1e-12) sold += 1.0;
      double rev = p * sold / (double)mx.size();
      if (rev > best_rev + 1e-12) {
        best_rev = rev;
        best_p = p;
      }
    }
    out.prices[j] = best_p;
  }

  out.spm.tag = Mechanism::Tag::Spm;
  out.spm.n = n;
  out.spm.m = m;
  out.spm.lotteries.assign(n, std::vector<Lottery>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      out.spm.lotteries[i][j] = Lottery::deterministic(out.prices[j], 0.0);

  out.vcg.tag = Mechanism::Tag::VcgEntry;
  out.vcg.n = n;
  out.vcg.m = m;
  out.vcg.vcg_mode = Mechanism::VcgFeeMode::SingleSample;
  out.vcg.fee_prior = out.empirical_prior;
  return out;
}

AdditiveMaxminResult learn_additive_maxmin(const ProductPrior& dhat, double eps, int k,
                                           uint64_t fee_seed) {
  require(k >= 1, "learn_additive_maxmin: k >= 1");
  int n = dhat.n, m = dhat.m;
  AdditiveMaxminResult out;
  out.eps = eps;
  out.fee_guarantee_void = m * eps > 1.0 / 16.0;

  out.spm.tag = Mechanism::Tag::Spm;
  out.spm.n = n;
  out.spm.m = m;
  out.spm.lotteries.assign(n, std::vector<Lottery>(m));
  for (int j = 0; j < m; ++j) {
    ProductPrior col;
    col.n = n;
    col.m = 1;
    col.cells.assign(n, std::vector<Marginal>(1));
    for (int i = 0; i < n; ++i) col.cells[i][0] = dhat.cell(i, j);
    UdMaxminResult item = learn_ud_maxmin(col, eps);
    out.per_item.push_back(item.sol);
    for (int i = 0; i < n; ++i) out.spm.lotteries[i][j] = item.mech.lotteries[i][0];
  }

  out.vcg.tag = Mechanism::Tag::VcgEntry;
  out.vcg.n = n;
  out.vcg.m = m;
  out.vcg.vcg_mode = Mechanism::VcgFeeMode::OrderStat;
  out.vcg.fee_prior = dhat;
  out.vcg.orderstat_k = k;
  out.vcg.fee_seed = fee_seed;
  return out;
}

long long EpsilonNet::size() const {
  long long s = 1;
  for (int j = 0; j < m; ++j) s *= (long long)levels;
  return s;
}

std::vector<double> EpsilonNet::at(long long idx) const {
  std::vector<double> p(m);
  for (int j = m - 1; j >= 0; --j) {
    p[j] = step * (double)(idx % levels + 1);
    idx /= levels;
  }
  return p;
}

EpsilonNet epsilon_net(double B, double step, int m) {
  require(step > 0.0 && B >= step, "epsilon_net: need step > 0 and B >= step");
  EpsilonNet net;
  net.B = B;
  net.step = step;
  net.m = m;
  net.levels = (int)std::floor(B / step + 1e-9);
  double sz = std::pow((double)net.levels, m);
  require(sz <= 1e7, "epsilon_net: budget exceeded (> 1e7 vectors); use a larger step");
  return net;
}

double estimate_G(const ProductPrior& prior, const Valuation& val) {
  double q = 1.0 / (5.0 * std::max(prior.m, prior.n));
  double g = 0.0;
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j)
      g = std::max(g, quantile(pushforward_item_value(prior, val, i, j), q));
  return g;
}

XosSampleResult learn_xos_sample(const ProductPrior& prior, const Valuation& val, double B,
                                 double step, int fee_batch, int selection_batch,
                                 uint64_t seed) {
  require(fee_batch >= 1 && selection_batch >= 1, "learn_xos_sample: non-empty batches");
  EpsilonNet net = epsilon_net(B, step, prior.m);
  auto fees = sample(prior, Rng::derive(seed, 1), fee_batch);
  auto sel = sample(prior, Rng::derive(seed, 2), selection_batch);

  std::vector<std::vector<TypeRow>> fee_rows(prior.n);
  for (int i = 0; i < prior.n; ++i)
    for (const auto& prof : fees) fee_rows[i].push_back(prof.row(i));

  XosSampleResult out;
  long long nsz = net.size();
  out.empirical_revenue.assign(nsz, 0.0);
  double best = -1.0;
  for (long long idx = 0; idx < nsz; ++idx) {
    Mechanism mech;
    mech.tag = Mechanism::Tag::Aspe;
    mech.n = prior.n;
    mech.m = prior.m;
    mech.item_prices = net.at(idx);
    mech.fee.mode = EntryFeeRule::Mode::MedianSamples;
    mech.fee.samples = fee_rows;
    std::vector<std::vector<double>> prices(prior.n, mech.item_prices);
    double rev = 0.0;
    for (const auto& prof : sel) rev += run_entry_fee(mech, val, prof, prices).revenue;
    rev /= (double)sel.size();
    out.empirical_revenue[idx] = rev;
    if (rev > best + 1e-12) {
      best = rev;
      out.best_index = idx;
      out.mech = std::move(mech);
    }
  }
  return out;
}

BalancedThresholds learn_symmetric_thresholds(const ProductPrior& prior, const Valuation& val,
                                              double b, double eta, int samples,
                                              uint64_t seed) {
  require(prior.symmetric, "learn_symmetric_thresholds: symmetric prior required");
  require(b > 0.0 && b < 1.0 && eta >= 0.0 && eta <= 0.25,
          "learn_symmetric_thresholds: b in (0,1), eta in [0, 1/4]");
  int n = prior.n, m = prior.m;

  std::vector<Marginal> F(m);  // value distributions used for all estimates
  for (int j = 0; j < m; ++j) {
    Marginal push = pushforward_item_value(prior, val, 0, j);
    if (samples == 0) {
      F[j] = push;
    } else {
      Rng rng = Rng::split(seed, (uint64_t)j);
      std::vector<double> xs(samples);
      for (double& x : xs) x = push.sample(rng);
      F[j] = empirical(xs);
    }
  }

  BalancedThresholds out;
  out.b = b;
  out.eta = eta;
  out.beta.resize(m);
  double lo = b / n, hi = b / (n - 1.0);
  if (samples > 0) {  // interior band so the true tails stay in [b/n, b/(n-1)]
    lo += b / (3.0 * n * n);
    hi -= b / (3.0 * n * n);
  }
  for (int j = 0; j < m; ++j) out.beta[j] = tail_threshold(F[j], lo, hi);

  auto tail_sum = [&](double c) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += F[j].tail(out.beta[j] + c);
    return s;
  };
  if (tail_sum(0.0) <= 0.5 - eta / 2.0 + 1e-12) {
    out.c = 0.0;
    return out;
  }
  std::vector<double> shifts;
  for (int j = 0; j < m; ++j)
    for (double v : F[j].support)
      if (v > out.beta[j]) shifts.push_back(v - out.beta[j]);
  std::sort(shifts.begin(), shifts.end());
  for (double c : shifts) {
    double s = tail_sum(c);
    if (s <= 0.5 - eta / 4.0 + 1e-12) {
      require(s >= 0.5 - eta / 2.0 - 1e-12,
              "infeasible-band: no shift lands the tail sum in [1/2-eta/2, 1/2-eta/4]");
      out.c = c;
      return out;
    }
  }
  throw std::runtime_error(
      "infeasible-band: no shift lands the tail sum in [1/2-eta/2, 1/2-eta/4]");
}

SymmetricAspeResult learn_symmetric_aspe(const ProductPrior& prior, const Valuation& val,
                                         const BalancedThresholds& thr, int samples,
                                         int fee_batch, uint64_t seed) {
  require(prior.symmetric, "learn_symmetric_aspe: symmetric prior required");
  require(val.cls == Valuation::Cls::Xos, "learn_symmetric_aspe: XOS valuations only");
  int n = prior.n, m = prior.m;
  require(m <= 8 && n <= 6, "learn_symmetric_aspe: brute-force welfare guard (m <= 8, n <= 6)");

  SymmetricAspeResult out;
  out.adjusted_thresholds.resize(m);
  for (int j = 0; j < m; ++j) out.adjusted_thresholds[j] = thr.beta[j] + thr.c;
  RestrictedValuation rv = restrict_to_cheap_items(val, out.adjusted_thresholds);

  auto allocs = enumerate_allocations(n, m, 10000);
  auto q_contrib = [&](const TypeProfile& prof, std::vector<double>& acc, double w) {
    std::vector<Mask> best;
    double best_w = -1.0;
    for (const auto& a : allocs) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rv.value(prof.row(i), a[i]);
      if (s > best_w + 1e-12) {
        best_w = s;
        best = a;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (best[i] == 0) continue;
      std::vector<double> gamma = rv.supporting_prices(prof.row(i), best[i]);
      for (int j = 0; j < m; ++j)
        if (best[i] & (Mask(1) << j)) acc[j] += w * 0.5 * gamma[j];
    }
  };

  out.Q.assign(m, 0.0);
  if (samples == 0) {
    for (const auto& [prof, p] : enumerate_profiles(prior, 100000)) q_contrib(prof, out.Q, p);
  } else {
    auto profs = sample(prior, Rng::derive(seed, 1), samples);
    for (const auto& prof : profs) q_contrib(prof, out.Q, 1.0 / samples);
  }

  out.mech.tag = Mechanism::Tag::Aspe;
  out.mech.n = n;
  out.mech.m = m;
  out.mech.item_prices = out.Q;
  out.mech.fee.mode = EntryFeeRule::Mode::MedianSamples;
  // symmetric: one shared fee sample batch for every bidder
  std::vector<TypeRow> rows;
  for (const auto& prof : sample(prior, Rng::derive(seed, 2), std::max(fee_batch, 1)))
    rows.push_back(prof.row(0));
  out.mech.fee.samples.assign(n, rows);
  return out;
}

ProductPrior induced_unit_demand(const ProductPrior& prior, const Valuation& val) {
  ProductPrior ud;
  ud.n = prior.n;
  ud.m = prior.m;
  ud.symmetric = prior.symmetric;
  ud.cells.assign(prior.n, std::vector<Marginal>(prior.m));
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j)
      ud.cells[i][j] = pushforward_item_value(prior, val, i, j);
  return ud;
}

UdMaxminResult learn_symmetric_subadditive(const ProductPrior& prior, const Valuation& val,
                                           double eps) {
  return learn_ud_maxmin(induced_unit_demand(prior, val), eps);
}

Mechanism beta_priced_rspm(int n, int m, const std::vector<double>& prices) {
  Mechanism mech;
  mech.tag = Mechanism::Tag::Rspm;
  mech.n = n;
  mech.m = m;
  mech.lotteries.assign(n, std::vector<Lottery>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) mech.lotteries[i][j] = Lottery::deterministic(prices[j], 0.0);
  return mech;
}

}  // namespace rev
