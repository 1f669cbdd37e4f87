#include <doctest.h>

#include "rev/exante.hpp"

using namespace rev;

namespace {
std::vector<std::vector<RevenueCurve>> curves_of(const ProductPrior& prior) {
  std::vector<std::vector<RevenueCurve>> c(prior.n);
  for (int i = 0; i < prior.n; ++i)
    for (int j = 0; j < prior.m; ++j) c[i].push_back(revenue_curve(prior.cell(i, j)));
  return c;
}
}  // namespace

TEST_SUITE_BEGIN("exante");

TEST_CASE("single cell optimum") {
  ProductPrior prior;
  prior.n = 1;
  prior.m = 1;
  prior.cells = {{Marginal::discrete({1, 2}, {0.5, 0.5})}};
  ExAnteSolution sol = solve_exante(curves_of(prior), 0.5, 0.5);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.q[0][0] == doctest::Approx(0.5));
}

TEST_CASE("two bidders share a column cap") {
  ProductPrior prior;
  prior.n = 2;
  prior.m = 1;
  prior.cells.assign(2, {Marginal::discrete({1, 2}, {0.5, 0.5})});
  ExAnteSolution sol = solve_exante(curves_of(prior), 0.5, 0.5);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.q[0][0] + sol.q[1][0] <= 0.5 + 1e-9);
}

TEST_CASE("zero values give zero objective") {
  ProductPrior prior;
  prior.n = 1;
  prior.m = 2;
  prior.cells = {{Marginal::point_mass(0.0), Marginal::point_mass(0.0)}};
  CHECK(solve_exante(curves_of(prior), 0.5, 0.5).objective == doctest::Approx(0.0));
}

TEST_CASE("feasibility invariants post-solve") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    ProductPrior prior;
    prior.n = 2;
    prior.m = 2;
    prior.cells.assign(2, std::vector<Marginal>(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double a = rng.uniform(0.2, 1), b = a + rng.uniform(0.2, 2);
        double p = rng.uniform(0.2, 0.8);
        prior.cells[i][j] = Marginal::discrete({a, b}, {p, 1 - p});
      }
    double rc = rng.uniform(0.3, 0.8), cc = rng.uniform(0.3, 0.8);
    ExAnteSolution sol = solve_exante(curves_of(prior), rc, cc);
    for (int i = 0; i < 2; ++i) {
      double row = 0;
      for (int j = 0; j < 2; ++j) {
        CHECK(sol.q[i][j] >= -1e-9);
        row += sol.q[i][j];
      }
      CHECK(row <= rc + 1e-9);
    }
    for (int j = 0; j < 2; ++j) CHECK(sol.q[0][j] + sol.q[1][j] <= cc + 1e-9);
  }
}

TEST_CASE("solution to lotteries") {
  ProductPrior prior;
  prior.n = 1;
  prior.m = 1;
  prior.cells = {{Marginal::discrete({1, 2}, {0.5, 0.5})}};
  auto curves = curves_of(prior);
  ExAnteSolution sol;
  sol.q = {{0.25}};
  auto lots = solution_to_lotteries(sol, curves);
  CHECK(lots[0][0].sale_prob() == doctest::Approx(0.25));
  CHECK(lots[0][0].expected_revenue() == doctest::Approx(0.5));
  CHECK(lots[0][0].x == doctest::Approx(0.5));
  CHECK(lots[0][0].price_hi_q == doctest::Approx(2.0));
  // q = 0 is the sentinel-price degenerate lottery
  sol.q = {{0.0}};
  auto zero = solution_to_lotteries(sol, curves);
  CHECK(zero[0][0].sale_prob() == doctest::Approx(0.0));
}

TEST_CASE("rspm bound on the lottery instance") {
  ProductPrior prior;
  prior.n = 2;
  prior.m = 1;
  prior.cells.assign(2, {Marginal::discrete({1, 2}, {0.5, 0.5})});
  Lottery l;
  l.x = 0.5;
  l.qlo = 0.0;
  l.qhi = 0.5;
  l.price_lo_q = 3.0;
  l.price_hi_q = 2.0;
  Mechanism mech = lotteries_to_rspm({{l}, {l}});
  RspmBound b = rspm_bound(mech, prior);
  CHECK(b.eta1 == doctest::Approx(0.5));
  CHECK(b.eta2 == doctest::Approx(0.75));
  CHECK(b.price_revenue_sum == doctest::Approx(1.0));
  CHECK(b.bound == doctest::Approx(0.375));
  double exact = expected_revenue_exact(mech, prior, Valuation::unit_demand(1));
  CHECK(exact == doctest::Approx(0.875));
  CHECK(exact >= b.bound);
}

TEST_CASE("single bidder deterministic price revenue identity") {
  ProductPrior prior;
  prior.n = 1;
  prior.m = 1;
  Marginal d = Marginal::discrete({1, 2, 4}, {0.3, 0.4, 0.3});
  prior.cells = {{d}};
  Mechanism mech = lotteries_to_rspm({{Lottery::deterministic(2.0, d.tail(2.0))}});
  CHECK(expected_revenue_exact(mech, prior, Valuation::unit_demand(1)) ==
        doctest::Approx(2.0 * d.tail(2.0)));
}

TEST_SUITE_END();
