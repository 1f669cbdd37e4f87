#include <doctest.h>

#include <cmath>

#include "rev/dist.hpp"

using namespace rev;

TEST_SUITE_BEGIN("dist");

TEST_CASE("sampling determinism and point mass") {
  ProductPrior prior;
  prior.n = 2;
  prior.m = 2;
  prior.cells.assign(2, std::vector<Marginal>(2, Marginal::point_mass(3.0)));
  auto a = sample(prior, 7, 5);
  auto b = sample(prior, 7, 5);
  REQUIRE(a.size() == 5);
  for (int t = 0; t < 5; ++t)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(a[t].signals[i][j].scalar() == 3.0);
        CHECK(a[t].signals[i][j].v == b[t].signals[i][j].v);
      }
}

TEST_CASE("sample mean law of large numbers") {
  ProductPrior prior;
  prior.n = 1;
  prior.m = 1;
  prior.cells = {{Marginal::discrete({1, 2}, {0.5, 0.5})}};
  auto xs = sample(prior, 7, 100000);
  double mean = 0;
  for (const auto& p : xs) mean += p.signals[0][0].scalar();
  mean /= xs.size();
  CHECK(std::fabs(mean - 1.5) < 0.02);
}

TEST_CASE("kolmogorov distance") {
  Marginal a = Marginal::discrete({1, 2}, {0.5, 0.5});
  CHECK(kolmogorov_distance(a, a) == doctest::Approx(0.0));
  CHECK(kolmogorov_distance(Marginal::point_mass(1), Marginal::point_mass(2)) ==
        doctest::Approx(1.0));
  Marginal b = Marginal::discrete({1, 2}, {0.3, 0.7});
  CHECK(kolmogorov_distance(a, b) == doctest::Approx(0.2));
}

TEST_CASE("empirical construction") {
  Marginal one = empirical({2});
  CHECK(one.support == std::vector<double>{2});
  CHECK(one.probs[0] == doctest::Approx(1.0));
  Marginal e = empirical({1, 1, 3});
  REQUIRE(e.support.size() == 2);
  CHECK(e.support[0] == 1);
  CHECK(e.support[1] == 3);
  CHECK(e.probs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(e.probs[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("truncate") {
  Marginal d = Marginal::discrete({1, 3}, {0.5, 0.5});
  Marginal t2 = truncate(d, 2.0);
  CHECK(t2.support == std::vector<double>{1, 2});
  CHECK(t2.probs[0] == doctest::Approx(0.5));
  Marginal same = truncate(d, 5.0);
  CHECK(same.support == d.support);
  Marginal t1 = truncate(d, 1.0);
  REQUIRE(t1.support.size() == 1);
  CHECK(t1.support[0] == 1);
}

TEST_CASE("truncation never increases kolmogorov distance") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> sup = {1, 2, 4};
    auto probs = [&rng]() {
      double a = rng.uniform(0.1, 1), b = rng.uniform(0.1, 1), c = rng.uniform(0.1, 1);
      double s = a + b + c;
      return std::vector<double>{a / s, b / s, c / s};
    };
    Marginal x = Marginal::discrete(sup, probs()), y = Marginal::discrete(sup, probs());
    double cap = rng.uniform(0.5, 5.0);
    CHECK(kolmogorov_distance(truncate(x, cap), truncate(y, cap)) <=
          kolmogorov_distance(x, y) + 1e-12);
  }
}

TEST_CASE("quantile sup convention") {
  Marginal d = Marginal::discrete({1, 2}, {0.5, 0.5});
  CHECK(quantile(d, 0.5) == doctest::Approx(2.0));
  CHECK(quantile(d, 0.75) == doctest::Approx(1.0));
  CHECK(quantile(Marginal::point_mass(5), 0.3) == doctest::Approx(5.0));
  CHECK(quantile(d, 0.0) == doctest::Approx(d.sentinel_price()));
  // Pr[v >= quantile(q)] >= q and any strictly larger support value has
  // tail < q, exhaustively over the support tails
  Marginal e = Marginal::discrete({1, 2, 4}, {0.2, 0.5, 0.3});
  for (double q : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    double x = quantile(e, q);
    CHECK(e.tail(x) >= q - 1e-12);
    for (double v : e.support)
      if (v > x) CHECK(e.tail(v) < q);
  }
}

TEST_CASE("tail_threshold") {
  Marginal d = Marginal::discrete({1, 3}, {0.6, 0.4});
  CHECK(tail_threshold(d, 0.25, 0.5) == doctest::Approx(3.0));
  CHECK_THROWS_WITH_AS(tail_threshold(Marginal::point_mass(2), 0.25, 0.5),
                       doctest::Contains("infeasible-band"), std::runtime_error);
}

TEST_CASE("dkw property, small scale") {
  // 200 trials of 10^4 draws from {0:0.5, 1:0.5}; empirical deviation at
  // eps = 0.05 should essentially never occur
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::split(99, t);
    int zeros = 0;
    for (int k = 0; k < 10000; ++k)
      if (rng.uniform01() < 0.5) ++zeros;
    if (std::fabs(zeros / 10000.0 - 0.5) > 0.05) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("parametric uniform cdf and sampling") {
  Marginal u = Marginal::parametric(Marginal::Family::UniformAB, {0.0, 2.0});
  CHECK(u.cdf(1.0) == doctest::Approx(0.5));
  CHECK(u.upper_bound() == doctest::Approx(2.0));
  CHECK(quantile(u, 0.5) == doctest::Approx(1.0));
  Marginal disc = u.discretized(64);
  CHECK(disc.support.size() == 64);
  CHECK(disc.mean() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_SUITE_END();
