#pragma once

#include <string>

#include "rev/dist.hpp"

namespace rev {

// Two-point price lottery: charge price_lo_q (the price at the lower
// quantile, i.e. the HIGHER price) with probability x, price_hi_q with
// probability 1-x. Expected sale probability x*qlo + (1-x)*qhi.
struct Lottery {
  double x = 1.0;
  double qlo = 0.0, qhi = 0.0;
  double price_lo_q = 0.0;  // F^{-1}(1-qlo)
  double price_hi_q = 0.0;  // F^{-1}(1-qhi)

  double sale_prob() const { return x * qlo + (1.0 - x) * qhi; }
  double expected_revenue() const {
    return x * qlo * price_lo_q + (1.0 - x) * qhi * price_hi_q;
  }
  static Lottery deterministic(double price, double q) {
    return Lottery{1.0, q, q, price, price};
  }
};

// Concave revenue curve R(q): upper concave envelope of the points
// (q, q * F^{-1}(1-q)) over all support quantiles plus (0, 0).
struct RevenueCurve {
  struct Pt {
    double q, r, price;  // price = F^{-1}(1-q), sentinel at q = 0
  };
  std::vector<Pt> pts;  // ascending q; pts.front().q == 0

  double eval(double q) const;
  Lottery lottery_at(double q) const;
  double peak_q() const;  // argmax_q R(q) (first breakpoint attaining the max)
  double peak_r() const;
  std::string to_csv() const;  // rows q, R, price_lo, price_hi
};

struct IronedVirtuals {
  // step function over the value support: phi[k] is the ironed virtual
  // value of support value values[k]; non-decreasing in k
  std::vector<double> values;
  std::vector<double> phi;

  double at(double value) const;  // virtual value of a support point
};

RevenueCurve revenue_curve(const Marginal& d);

IronedVirtuals ironed_virtuals(const Marginal& d);

struct RegularityReport {
  bool regular = true;
  double worst_violation = 0.0;  // max of (1-p)R(q') - R(q) over the grid triples
  double at_qprime = 0.0, at_q = 0.0, at_p = 0.0;
};

// Checks the extreme-value inequality (1-p) R(q') <= R(q) for all grid
// triples 0 < q' <= q <= p < 1.
RegularityReport check_regular_curve(const Marginal& d, int grid);

}  // namespace rev
