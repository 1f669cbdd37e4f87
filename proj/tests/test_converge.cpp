#include <doctest.h>

#include <cmath>

#include "rev/converge.hpp"

using namespace rev;

TEST_SUITE_BEGIN("converge");

namespace {
GridEvent two_boxes() {
  GridEvent e;
  e.grids = {{0.0, 1.0, 1.5, 2.0, 3.0}, {0.0, 1.0}};
  e.cells.assign(e.size(), 0);
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 2; ++y)
      if (x != 2) e.cells[e.flat_index({x, y})] = 1;
  return e;
}
}  // namespace

TEST_CASE("single intersecting detection") {
  // full rectangle
  GridEvent full;
  full.grids = {{0, 1, 2}, {0, 1}};
  full.cells.assign(full.size(), 1);
  CHECK(is_single_intersecting(full));
  // axis-aligned L-shape: rows {0,1} of column 0 plus row 0 of column 1
  GridEvent ell;
  ell.grids = {{0, 1}, {0, 1}};
  ell.cells.assign(ell.size(), 0);
  ell.cells[ell.flat_index({0, 0})] = 1;
  ell.cells[ell.flat_index({0, 1})] = 1;
  ell.cells[ell.flat_index({1, 0})] = 1;
  CHECK(is_single_intersecting(ell));
  // two boxes with a gap fail on a horizontal line
  CHECK_FALSE(is_single_intersecting(two_boxes()));
}

TEST_CASE("identical measures give zero gap") {
  GridEvent e = two_boxes();
  std::vector<std::vector<double>> d = {{0.2, 0.2, 0.2, 0.2, 0.2}, {0.5, 0.5}};
  CHECK(event_prob_gap(e, d, d) == doctest::Approx(0.0));
}

TEST_CASE("one dimensional interval gap bounded by 2 xi") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    GridEvent e;
    e.grids = {{0, 1, 2, 3}};
    e.cells.assign(4, 0);
    int lo = (int)(rng.bits() % 4), hi = lo + (int)(rng.bits() % (4 - lo));
    for (int k = lo; k <= hi; ++k) e.cells[k] = 1;
    REQUIRE(is_single_intersecting(e));
    std::vector<double> p(4), q(4);
    double tp = 0, tq = 0;
    for (int k = 0; k < 4; ++k) {
      tp += (p[k] = rng.uniform(0.05, 1));
      tq += (q[k] = rng.uniform(0.05, 1));
    }
    for (int k = 0; k < 4; ++k) {
      p[k] /= tp;
      q[k] /= tq;
    }
    // cellwise Kolmogorov distance = max prefix-sum gap
    double xi = 0, cp = 0, cq = 0;
    for (int k = 0; k < 4; ++k) {
      cp += p[k];
      cq += q[k];
      xi = std::max(xi, std::fabs(cp - cq));
    }
    CHECK(event_prob_gap(e, {p}, {q}) <= 2 * xi + 1e-12);
  }
}

TEST_CASE("surplus events are single intersecting") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Marginal> row;
    for (int j = 0; j < 3; ++j) {
      std::vector<double> sup, pr;
      double tot = 0, base = 0;
      for (int k = 0; k < 4; ++k) {
        base += rng.uniform(0.1, 1);
        sup.push_back(base);
        pr.push_back(rng.uniform(0.1, 1));
        tot += pr.back();
      }
      for (double& p : pr) p /= tot;
      row.push_back(Marginal::discrete(sup, pr));
    }
    std::vector<double> prices = {rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    double x = rng.uniform(0, 3);
    GridEvent e = surplus_event(row, prices, x);
    CHECK(is_single_intersecting(e));
  }
  // degenerate thresholds
  std::vector<Marginal> row = {Marginal::discrete({1, 2}, {0.5, 0.5})};
  GridEvent all = surplus_event(row, {0.0}, 0.0);
  CHECK(event_prob_gap(all, {row[0].probs}, {row[0].probs}) == doctest::Approx(0.0));
  long long members = 0;
  for (long long k = 0; k < all.size(); ++k) members += all.cells[k] ? 1 : 0;
  CHECK(members == all.size());  // x = 0 includes every type
  GridEvent none = surplus_event(row, {0.0}, 99.0);
  members = 0;
  for (long long k = 0; k < none.size(); ++k) members += none.cells[k] ? 1 : 0;
  CHECK(members == 0);
}

TEST_CASE("axis weights require exact support") {
  Marginal d = Marginal::discrete({1, 2}, {0.4, 0.6});
  auto w = axis_weights(d, {1, 2});
  CHECK(w[0] == doctest::Approx(0.4));
  CHECK(w[1] == doctest::Approx(0.6));
  CHECK_THROWS_AS((void)axis_weights(d, {1, 3}), std::runtime_error);
}

TEST_CASE("partition bound basics") {
  // d = 1: the bound is the single entry evaluated as-is
  ComplexityTable t1;
  t1.mode = ComplexityTable::Mode::SampleFn;
  t1.d = 1;
  t1.s_fn = [](Mask, double e, double del) {
    return std::ceil(std::log(2.0 / del) / (2.0 * e * e));
  };
  PartitionBound b1 = sample_bound_partition(t1, 0.1, 0.1);
  CHECK(b1.partition.size() == 1);
  CHECK(b1.bound == doctest::Approx(std::ceil(std::log(20.0) / 0.02)));

  // d = 2 singleton DKW entries at eps = delta = 0.1: 738
  ComplexityTable t2 = t1;
  t2.d = 2;
  t2.s_fn = [](Mask t, double e, double del) -> double {
    if (popcount(t) != 1) return -1.0;
    return std::ceil(std::log(2.0 / del) / (2.0 * e * e));
  };
  CHECK(sample_bound_partition(t2, 0.1, 0.1).bound == doctest::Approx(738.0));

  // incomplete tables are rejected
  ComplexityTable bad;
  bad.mode = ComplexityTable::Mode::SampleFn;
  bad.d = 2;
  bad.s_fn = [](Mask, double, double) { return -1.0; };
  CHECK_THROWS_AS((void)sample_bound_partition(bad, 0.1, 0.1), std::runtime_error);
}

TEST_CASE("refining the table never increases the bound") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 3;
    std::map<Mask, double> base;
    for (Mask t = 1; t < 8u; ++t) base[t] = rng.uniform(10, 1000);
    ComplexityTable a;
    a.mode = ComplexityTable::Mode::SampleFn;
    a.d = d;
    a.s_fn = [&base](Mask t, double, double) { return base.at(t); };
    std::map<Mask, double> lower = base;
    for (auto& [t, s] : lower) s *= rng.uniform(0.3, 1.0);
    ComplexityTable b = a;
    b.s_fn = [&lower](Mask t, double, double) { return lower.at(t); };
    CHECK(sample_bound_partition(b, 0.1, 0.1).bound <=
          sample_bound_partition(a, 0.1, 0.1).bound + 1e-9);
  }
}

TEST_CASE("rectangle gap bounded by sum of axis deviations") {
  // product-class events (axis-aligned rectangles) over a product measure:
  // the hybrid swap argument gives gap <= sum of per-axis interval gaps
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    int ell = 2 + (int)(rng.bits() % 2);
    GridEvent e;
    std::vector<std::vector<double>> d, dh;
    std::vector<double> axis_gap(ell, 0.0);
    std::vector<std::pair<int, int>> ranges;
    for (int a = 0; a < ell; ++a) {
      int g = 3;
      e.grids.push_back({0.0, 1.0, 2.0});
      std::vector<double> p(g), q(g);
      double tp = 0, tq = 0;
      for (int k = 0; k < g; ++k) {
        tp += (p[k] = rng.uniform(0.05, 1));
        tq += (q[k] = rng.uniform(0.05, 1));
      }
      for (int k = 0; k < g; ++k) {
        p[k] /= tp;
        q[k] /= tq;
      }
      int lo = (int)(rng.bits() % g), hi = lo + (int)(rng.bits() % (g - lo));
      ranges.push_back({lo, hi});
      double in_p = 0, in_q = 0;
      for (int k = lo; k <= hi; ++k) {
        in_p += p[k];
        in_q += q[k];
      }
      axis_gap[a] = std::fabs(in_p - in_q);
      d.push_back(p);
      dh.push_back(q);
    }
    e.cells.assign(e.size(), 0);
    std::vector<int> idx(ell, 0);
    while (true) {
      bool in = true;
      for (int a = 0; a < ell; ++a) in = in && idx[a] >= ranges[a].first && idx[a] <= ranges[a].second;
      if (in) e.cells[e.flat_index(idx)] = 1;
      int a = ell - 1;
      while (a >= 0 && ++idx[a] == 3) idx[a--] = 0;
      if (a < 0) break;
    }
    double bound = 0;
    for (double g : axis_gap) bound += g;
    CHECK(event_prob_gap(e, d, dh) <= bound + 1e-12);
  }
}

TEST_SUITE_END();
