#pragma once

#include <optional>
#include <vector>

#include "rev/common.hpp"

namespace rev {

// One item-level signal of a bidder type: a scalar for additive /
// unit-demand / constrained-additive classes, a K-vector of clause values
// for XOS, or a single table index for explicit subadditive tables.
struct ItemSignal {
  std::vector<double> v;

  double scalar() const {
    require(v.size() == 1, "ItemSignal: scalar access on vector signal");
    return v[0];
  }
  bool operator==(const ItemSignal& o) const { return v == o.v; }
};

// One (bidder, item) signal distribution.
//
// kind Discrete:   finite scalar support with probabilities.
// kind Parametric: closed-form cdf / inverse-cdf families.
// kind Atoms:      finite support over ItemSignal vectors (XOS clauses or
//                  subadditive table indices); scalar queries are invalid.
struct Marginal {
  enum class Kind { Discrete, Parametric, Atoms };
  enum class Family { UniformAB, TruncExp, EqualRevenueTrunc };

  Kind kind = Kind::Discrete;

  // discrete
  std::vector<double> support;  // strictly ascending, >= 0
  std::vector<double> probs;    // sums to 1 within 1e-12

  // parametric
  Family family = Family::UniformAB;
  std::vector<double> params;

  // atoms
  std::vector<ItemSignal> atoms;
  std::vector<double> atom_probs;

  static Marginal discrete(std::vector<double> support, std::vector<double> probs);
  static Marginal point_mass(double v) { return discrete({v}, {1.0}); }
  static Marginal parametric(Family f, std::vector<double> params);
  static Marginal with_atoms(std::vector<ItemSignal> atoms, std::vector<double> probs);

  bool is_scalar() const { return kind != Kind::Atoms; }
  bool bounded() const;
  double upper_bound() const;        // H
  double lower_bound() const;
  double sentinel_price() const;     // support max + 1: the "sell with prob 0" price
  double cdf(double x) const;        // Pr[v <= x]
  double tail(double x) const;       // Pr[v >= x]
  double mean() const;
  double sample(Rng& rng) const;     // scalar kinds only
  ItemSignal sample_signal(Rng& rng) const;

  // support atoms as (signal, probability) pairs; discretizes parametric
  // kinds on demand via `grid` points (equi-quantile)
  std::vector<std::pair<ItemSignal, double>> enumerate(int grid = 256) const;

  // discrete view of a parametric marginal (equi-quantile grid)
  Marginal discretized(int grid) const;
};

// The n x m grid of independent marginals defining D.
struct ProductPrior {
  int n = 0, m = 0;
  std::vector<std::vector<Marginal>> cells;  // [bidder][item]
  bool symmetric = false;

  const Marginal& cell(int i, int j) const { return cells[i][j]; }
  void validate() const;
};

// One realized type profile: n x m item signals.
struct TypeProfile {
  std::vector<std::vector<ItemSignal>> signals;  // [bidder][item]

  int n() const { return (int)signals.size(); }
  int m() const { return signals.empty() ? 0 : (int)signals[0].size(); }
  const std::vector<ItemSignal>& row(int i) const { return signals[i]; }
};

std::vector<TypeProfile> sample(const ProductPrior& prior, uint64_t seed, int count);

double kolmogorov_distance(const Marginal& a, const Marginal& b);

Marginal empirical(const std::vector<double>& samples);

Marginal truncate(const Marginal& d, double cap);

// F^{-1}(1-q) = sup{x : Pr[v >= x] >= q}; q = 0 returns the sentinel price.
double quantile(const Marginal& d, double q);

// A value x whose tail probability Pr[v >= x] lies in [lo, hi]; exact on
// discrete marginals, empirical when given raw samples.
double tail_threshold(const Marginal& d, double lo, double hi);
double tail_threshold(const std::vector<double>& samples, double lo, double hi);

}  // namespace rev
