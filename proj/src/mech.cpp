#include "rev/mech.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

namespace rev {

double upper_median(std::vector<double> xs) {
  require(!xs.empty(), "upper_median: empty sample set");
  std::sort(xs.rbegin(), xs.rend());
  size_t k = xs.size();
  size_t idx = (k + 1) / 2;  // ceil(k/2) elements are >= the answer
  return xs[idx - 1];
}

double EntryFeeRule::fee(int bidder, Mask available, const Valuation& val,
                         const std::vector<double>& prices) const {
  switch (mode) {
    case Mode::None: return 0.0;
    case Mode::Table: {
      const auto& tb = table.at(bidder);
      auto it = tb.find(available);
      require(it != tb.end(), "entry fee table: missing set entry");
      return it->second;
    }
    case Mode::MedianSamples: {
      require(bidder < (int)samples.size() && !samples[bidder].empty(),
              "unusable-rule: median fee with empty sample set");
      if (memo.size() <= (size_t)bidder) memo.resize(samples.size());
      auto it = memo[bidder].find(available);
      if (it != memo[bidder].end()) return it->second;
      std::vector<double> us;
      us.reserve(samples[bidder].size());
      for (const auto& row : samples[bidder])
        us.push_back(best_utility(val, row, prices, available));
      double f = upper_median(std::move(us));
      memo[bidder][available] = f;
      return f;
    }
  }
  return 0.0;
}

std::vector<int> Mechanism::visiting_order() const {
  if (!order.empty()) return order;
  std::vector<int> o(n);
  for (int i = 0; i < n; ++i) o[i] = i;
  return o;
}

std::vector<std::vector<double>> Mechanism::draw_prices(Rng& rng) const {
  std::vector<std::vector<double>> p(n, std::vector<double>(m, 0.0));
  if (tag == Tag::Aspe) {
    for (int i = 0; i < n; ++i) p[i] = item_prices;
    return p;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const Lottery& l = lotteries[i][j];
      p[i][j] = (rng.uniform01() < l.x) ? l.price_lo_q : l.price_hi_q;
    }
  return p;
}

Mechanism Mechanism::myerson_item(const std::vector<Marginal>& bidder_marginals) {
  Mechanism mech;
  mech.tag = Tag::MyersonItem;
  mech.n = (int)bidder_marginals.size();
  mech.m = 1;
  mech.item_marginals = bidder_marginals;
  for (const auto& d : bidder_marginals) mech.virtuals.push_back(ironed_virtuals(d));
  return mech;
}

Outcome run_posted(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                   const std::vector<std::vector<double>>& prices) {
  Outcome out;
  out.alloc.assign(mech.n, 0);
  out.payments.assign(mech.n, 0.0);
  Mask avail = (Mask(1) << mech.m) - 1;
  for (int i : mech.visiting_order()) {
    Mask buy = 0;
    if (mech.tag == Mechanism::Tag::Rspm) {
      // rationing: best affordable single item, lowest index on ties
      double best = -1.0;
      int best_j = -1;
      for (int j = 0; j < mech.m; ++j) {
        if (!(avail & (Mask(1) << j))) continue;
        double u = single_item_value(val, profile.row(i), j) - prices[i][j];
        if (u >= 0.0 && u > best) {
          best = u;
          best_j = j;
        }
      }
      if (best_j >= 0) buy = Mask(1) << best_j;
    } else {
      buy = demand(val, profile.row(i), prices[i], avail);
    }
    double pay = 0.0;
    for (int j = 0; j < mech.m; ++j)
      if (buy & (Mask(1) << j)) pay += prices[i][j];
    out.alloc[i] = buy;
    out.payments[i] = pay;
    out.revenue += pay;
    avail &= ~buy;
  }
  return out;
}

Outcome run_posted(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                   uint64_t price_draw_seed) {
  Rng rng(price_draw_seed);
  return run_posted(mech, val, profile, mech.draw_prices(rng));
}

Outcome run_entry_fee(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                      const std::vector<std::vector<double>>& prices) {
  Outcome out;
  out.alloc.assign(mech.n, 0);
  out.payments.assign(mech.n, 0.0);
  Mask avail = (Mask(1) << mech.m) - 1;
  for (int i : mech.visiting_order()) {
    double u = best_utility(val, profile.row(i), prices[i], avail);
    double delta = mech.fee.fee(i, avail, val, prices[i]);
    if (u >= delta - 1e-12) {  // acceptance at equality
      Mask buy = demand(val, profile.row(i), prices[i], avail);
      double pay = delta;
      for (int j = 0; j < mech.m; ++j)
        if (buy & (Mask(1) << j)) pay += prices[i][j];
      out.alloc[i] = buy;
      out.payments[i] = pay;
      out.revenue += pay;
      avail &= ~buy;
    }
  }
  return out;
}

Outcome run_entry_fee(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                      uint64_t price_draw_seed) {
  Rng rng(price_draw_seed);
  return run_entry_fee(mech, val, profile, mech.draw_prices(rng));
}

double vcg_surplus(const TypeRow& t, const std::vector<double>& second_prices) {
  double s = 0.0;
  for (size_t j = 0; j < second_prices.size(); ++j)
    s += std::max(0.0, t[j].scalar() - second_prices[j]);
  return s;
}

namespace {

// enumerate bidder i's type row atoms: (row, probability) pairs
void enumerate_row(const ProductPrior& prior, int i,
                   const std::function<void(const TypeRow&, double)>& f) {
  std::vector<std::vector<std::pair<ItemSignal, double>>> per_item;
  for (int j = 0; j < prior.m; ++j) per_item.push_back(prior.cell(i, j).enumerate());
  TypeRow row(prior.m);
  std::function<void(int, double)> rec = [&](int j, double p) {
    if (j == prior.m) {
      f(row, p);
      return;
    }
    for (const auto& [sig, w] : per_item[j]) {
      row[j] = sig;
      rec(j + 1, p * w);
    }
  };
  rec(0, 1.0);
}

}  // namespace

double vcg_median_fee(const ProductPrior& prior, int bidder,
                      const std::vector<double>& second_prices) {
  std::vector<std::pair<double, double>> surp;  // (surplus, prob)
  enumerate_row(prior, bidder, [&](const TypeRow& row, double p) {
    surp.push_back({vcg_surplus(row, second_prices), p});
  });
  std::sort(surp.rbegin(), surp.rend());
  double acc = 0.0;
  for (const auto& [s, p] : surp) {
    acc += p;
    if (acc >= 0.5 - kProbTolAssert) return s;
  }
  return surp.back().first;
}

double vcg_orderstat_fee(const ProductPrior& prior, int bidder,
                         const std::vector<double>& second_prices, int k, uint64_t seed) {
  // stream keyed by the observed second prices so the fee is a
  // deterministic function of (seed, bidder, b_{-i})
  uint64_t h = Rng::mix(seed ^ (uint64_t)(bidder + 1));
  for (double p : second_prices) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(p));
    std::memcpy(&bits, &p, sizeof(bits));
    h = Rng::mix(h ^ bits);
  }
  Rng rng(h);
  std::vector<double> draws(k);
  for (int s = 0; s < k; ++s) {
    TypeRow row(prior.m);
    for (int j = 0; j < prior.m; ++j) row[j] = prior.cell(bidder, j).sample_signal(rng);
    draws[s] = vcg_surplus(row, second_prices);
  }
  std::sort(draws.rbegin(), draws.rend());
  int idx = (int)std::ceil(5.0 * k / 16.0);
  return draws[idx - 1];
}

Outcome run_vcg_entry(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                      const std::vector<TypeRow>* single_samples) {
  require(val.cls == Valuation::Cls::Additive, "run_vcg_entry: additive valuations only");
  Outcome out;
  out.alloc.assign(mech.n, 0);
  out.payments.assign(mech.n, 0.0);
  for (int i = 0; i < mech.n; ++i) {
    std::vector<double> sp(mech.m, 0.0);  // second prices max_{k != i} t_kj
    for (int j = 0; j < mech.m; ++j) {
      double mx = 0.0;
      for (int k = 0; k < mech.n; ++k)
        if (k != i) mx = std::max(mx, profile.signals[k][j].scalar());
      sp[j] = mx;
    }
    double fee;
    switch (mech.vcg_mode) {
      case Mechanism::VcgFeeMode::MedianPrior:
        fee = vcg_median_fee(mech.fee_prior, i, sp);
        break;
      case Mechanism::VcgFeeMode::SingleSample:
        require(single_samples != nullptr, "run_vcg_entry: single-sample mode needs samples");
        fee = vcg_surplus((*single_samples)[i], sp);
        break;
      case Mechanism::VcgFeeMode::OrderStat:
        fee = vcg_orderstat_fee(mech.fee_prior, i, sp, mech.orderstat_k, mech.fee_seed);
        break;
    }
    double surplus = vcg_surplus(profile.row(i), sp);
    if (surplus >= fee - 1e-12) {  // acceptance at equality
      double pay = fee;
      for (int j = 0; j < mech.m; ++j) {
        // zero-gain takes are disallowed: strict winner only
        if (profile.signals[i][j].scalar() > sp[j]) {
          out.alloc[i] |= Mask(1) << j;
          pay += sp[j];
        }
      }
      out.payments[i] = pay;
      out.revenue += pay;
    }
  }
  return out;
}

Outcome run_myerson_item(const Mechanism& mech, const TypeProfile& profile) {
  require(mech.m == 1, "run_myerson_item: single item only");
  Outcome out;
  out.alloc.assign(mech.n, 0);
  out.payments.assign(mech.n, 0.0);
  std::vector<double> phi(mech.n);
  for (int i = 0; i < mech.n; ++i) phi[i] = mech.virtuals[i].at(profile.signals[i][0].scalar());
  int w = -1;
  // only strictly positive ironed virtuals win: selling to a zero-virtual
  // type is revenue-neutral, and the threshold payments below rely on the
  // strict rule
  for (int i = 0; i < mech.n; ++i)
    if (phi[i] > 0.0 && (w < 0 || phi[i] > phi[w])) w = i;  // lowest index wins ties
  if (w < 0) return out;
  // threshold payment: the smallest support value keeping the win
  const Marginal& dw = mech.item_marginals[w];
  double pay = dw.upper_bound();
  for (double x : dw.support) {
    double px = mech.virtuals[w].at(x);
    if (px <= 0.0) continue;
    bool wins = true;
    for (int k = 0; k < mech.n && wins; ++k) {
      if (k == w) continue;
      if (px < phi[k] || (px == phi[k] && k < w)) wins = false;
    }
    if (wins) {
      pay = x;
      break;
    }
  }
  out.alloc[w] = 1;
  out.payments[w] = pay;
  out.revenue = pay;
  return out;
}

Outcome run_any(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                Rng& rng) {
  switch (mech.tag) {
    case Mechanism::Tag::Spm:
    case Mechanism::Tag::Rspm:
      return run_posted(mech, val, profile, mech.draw_prices(rng));
    case Mechanism::Tag::Spem:
    case Mechanism::Tag::Aspe:
      return run_entry_fee(mech, val, profile, mech.draw_prices(rng));
    case Mechanism::Tag::VcgEntry: {
      if (mech.vcg_mode == Mechanism::VcgFeeMode::SingleSample) {
        std::vector<TypeRow> ss(mech.n);
        for (int i = 0; i < mech.n; ++i) {
          ss[i].resize(mech.m);
          for (int j = 0; j < mech.m; ++j)
            ss[i][j] = mech.fee_prior.cell(i, j).sample_signal(rng);
        }
        return run_vcg_entry(mech, val, profile, &ss);
      }
      return run_vcg_entry(mech, val, profile);
    }
    case Mechanism::Tag::MyersonItem:
      return run_myerson_item(mech, profile);
  }
  throw std::runtime_error("run_any: unknown tag");
}

double expected_revenue_exact(const Mechanism& mech, const ProductPrior& prior,
                              const Valuation& val, long long budget) {
  // dimensions: profile cells, then price-lottery draws (posted families),
  // then held-out samples (single-sample VCG)
  struct Dim {
    enum class What { Cell, Price, Sample } what;
    int i, j;
    std::vector<std::pair<ItemSignal, double>> atoms;  // Cell / Sample
    std::vector<std::pair<double, double>> prices;     // Price: (price, prob)
  };
  std::vector<Dim> dims;
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j)
      dims.push_back({Dim::What::Cell, i, j, prior.cell(i, j).enumerate(), {}});

  bool posted = mech.tag == Mechanism::Tag::Spm || mech.tag == Mechanism::Tag::Rspm ||
                mech.tag == Mechanism::Tag::Spem;
  if (posted) {
    for (int i = 0; i < mech.n; ++i)
      for (int j = 0; j < mech.m; ++j) {
        const Lottery& l = mech.lotteries[i][j];
        Dim d{Dim::What::Price, i, j, {}, {}};
        if (l.x >= 1.0 - 1e-15 || l.price_lo_q == l.price_hi_q)
          d.prices = {{l.price_lo_q, 1.0}};
        else if (l.x <= 1e-15)
          d.prices = {{l.price_hi_q, 1.0}};
        else
          d.prices = {{l.price_lo_q, l.x}, {l.price_hi_q, 1.0 - l.x}};
        dims.push_back(std::move(d));
      }
  }
  bool single_sample = mech.tag == Mechanism::Tag::VcgEntry &&
                       mech.vcg_mode == Mechanism::VcgFeeMode::SingleSample;
  if (single_sample) {
    for (int i = 0; i < mech.n; ++i)
      for (int j = 0; j < mech.m; ++j)
        dims.push_back({Dim::What::Sample, i, j, mech.fee_prior.cell(i, j).enumerate(), {}});
  }

  double total = 1.0;
  for (const auto& d : dims)
    total *= (double)(d.what == Dim::What::Price ? d.prices.size() : d.atoms.size());
  require(total <= (double)budget,
          "expected_revenue_exact: enumeration budget exceeded; use expected_revenue_mc");

  TypeProfile profile;
  profile.signals.assign(prior.n, std::vector<ItemSignal>(prior.m));
  std::vector<std::vector<double>> prices(mech.n, std::vector<double>(mech.m, 0.0));
  std::vector<TypeRow> samples(mech.n, TypeRow(mech.m));

  double revenue = 0.0;
  std::function<void(size_t, double)> rec = [&](size_t d, double w) {
    if (w <= 0.0) return;
    if (d == dims.size()) {
      Outcome out;
      switch (mech.tag) {
        case Mechanism::Tag::Spm:
        case Mechanism::Tag::Rspm:
          out = run_posted(mech, val, profile, prices);
          break;
        case Mechanism::Tag::Spem:
          out = run_entry_fee(mech, val, profile, prices);
          break;
        case Mechanism::Tag::Aspe: {
          std::vector<std::vector<double>> ap(mech.n, mech.item_prices);
          out = run_entry_fee(mech, val, profile, ap);
          break;
        }
        case Mechanism::Tag::VcgEntry:
          out = run_vcg_entry(mech, val, profile, single_sample ? &samples : nullptr);
          break;
        case Mechanism::Tag::MyersonItem:
          out = run_myerson_item(mech, profile);
          break;
      }
      revenue += w * out.revenue;
      return;
    }
    const Dim& dim = dims[d];
    if (dim.what == Dim::What::Price) {
      for (const auto& [p, pw] : dim.prices) {
        prices[dim.i][dim.j] = p;
        rec(d + 1, w * pw);
      }
    } else if (dim.what == Dim::What::Cell) {
      for (const auto& [sig, pw] : dim.atoms) {
        profile.signals[dim.i][dim.j] = sig;
        rec(d + 1, w * pw);
      }
    } else {
      for (const auto& [sig, pw] : dim.atoms) {
        samples[dim.i][dim.j] = sig;
        rec(d + 1, w * pw);
      }
    }
  };
  rec(0, 1.0);
  return revenue;
}

McEstimate expected_revenue_mc(const Mechanism& mech, const ProductPrior& prior,
                               const Valuation& val, int trials, uint64_t seed) {
  require(trials >= 1, "expected_revenue_mc: trials >= 1");
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::split(seed, t);
    TypeProfile profile;
    profile.signals.resize(prior.n);
    for (int i = 0; i < prior.n; ++i) {
      profile.signals[i].resize(prior.m);
      for (int j = 0; j < prior.m; ++j)
        profile.signals[i][j] = prior.cell(i, j).sample_signal(rng);
    }
    double r = run_any(mech, val, profile, rng).revenue;
    sum += r;
    sumsq += r * r;
  }
  McEstimate est;
  est.estimate = sum / trials;
  double var = std::max(0.0, sumsq / trials - est.estimate * est.estimate);
  est.stderr_ = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
  return est;
}

}  // namespace rev
