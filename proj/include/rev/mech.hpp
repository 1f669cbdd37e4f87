#pragma once

#include <map>

#include "rev/curve.hpp"
#include "rev/valuation.hpp"

namespace rev {

// Entry fees: explicit table per bidder, or the upper median of the
// bidder's utility for the offered set over a stored sample batch.
// Median fees are computed lazily and memoized (at most n distinct sets
// show up per execution).
struct EntryFeeRule {
  enum class Mode { None, Table, MedianSamples };
  Mode mode = Mode::None;

  std::vector<std::map<Mask, double>> table;             // [bidder][set] -> fee
  std::vector<std::vector<TypeRow>> samples;             // [bidder][sample]
  mutable std::vector<std::map<Mask, double>> memo;

  double fee(int bidder, Mask available, const Valuation& val,
             const std::vector<double>& prices) const;
};

struct Outcome {
  std::vector<Mask> alloc;
  std::vector<double> payments;
  double revenue = 0.0;
};

struct Mechanism {
  enum class Tag { Spm, Rspm, Spem, Aspe, VcgEntry, MyersonItem };
  enum class VcgFeeMode { MedianPrior, SingleSample, OrderStat };

  Tag tag = Tag::Spm;
  int n = 0, m = 0;

  // spm / rspm / spem: per (bidder, item) two-point price lotteries
  // (deterministic prices are degenerate lotteries)
  std::vector<std::vector<Lottery>> lotteries;

  // aspe: anonymous per-item prices
  std::vector<double> item_prices;

  EntryFeeRule fee;             // spem / aspe
  std::vector<int> order;       // bidder visiting order (identity by default)

  // vcg_entry
  VcgFeeMode vcg_mode = VcgFeeMode::MedianPrior;
  ProductPrior fee_prior;       // D or D-hat backing median / order-stat fees
  int orderstat_k = 512;
  uint64_t fee_seed = 0;

  // myerson_item (single item): per-bidder marginals + ironed virtuals
  std::vector<Marginal> item_marginals;
  std::vector<IronedVirtuals> virtuals;

  std::vector<int> visiting_order() const;
  // one price draw per execution, before bidder 1 moves
  std::vector<std::vector<double>> draw_prices(Rng& rng) const;

  static Mechanism myerson_item(const std::vector<Marginal>& bidder_marginals);
};

Outcome run_posted(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                   const std::vector<std::vector<double>>& prices);
Outcome run_posted(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                   uint64_t price_draw_seed);

Outcome run_entry_fee(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                      const std::vector<std::vector<double>>& prices);
Outcome run_entry_fee(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                      uint64_t price_draw_seed);

// VCG with entry fee (additive bidders). In single-sample mode the fee of
// bidder i is the surplus of `sample[i]` against the realized second
// prices; in median mode it is the upper median of the surplus under
// fee_prior; in order-stat mode the ceil(5k/16)-th largest of k surplus
// draws from fee_prior.
Outcome run_vcg_entry(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                      const std::vector<TypeRow>* single_samples = nullptr);

// upper median of the surplus of bidder i under row_prior given second prices
double vcg_median_fee(const ProductPrior& prior, int bidder,
                      const std::vector<double>& second_prices);
double vcg_orderstat_fee(const ProductPrior& prior, int bidder,
                         const std::vector<double>& second_prices, int k, uint64_t seed);
double vcg_surplus(const TypeRow& t, const std::vector<double>& second_prices);

Outcome run_myerson_item(const Mechanism& mech, const TypeProfile& profile);

Outcome run_any(const Mechanism& mech, const Valuation& val, const TypeProfile& profile,
                Rng& rng);

// Exact expectation by full enumeration over type profiles, lottery draws
// and (for single-sample VCG) held-out samples; refuses budgets > 10^7.
double expected_revenue_exact(const Mechanism& mech, const ProductPrior& prior,
                              const Valuation& val, long long budget = 10000000LL);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};
McEstimate expected_revenue_mc(const Mechanism& mech, const ProductPrior& prior,
                               const Valuation& val, int trials, uint64_t seed);

// sup{x : Pr[X >= x] >= 1/2} over a finite sample
double upper_median(std::vector<double> xs);

}  // namespace rev
