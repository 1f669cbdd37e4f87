#include <doctest.h>

#include <cmath>

#include "rev/valuation.hpp"

using namespace rev;

namespace {
TypeRow scalars(std::vector<double> xs) {
  TypeRow t;
  for (double x : xs) t.push_back(ItemSignal{{x}});
  return t;
}
}  // namespace

TEST_SUITE_BEGIN("valuation");

TEST_CASE("value by class") {
  TypeRow t = scalars({1, 4});
  CHECK(value(Valuation::unit_demand(2), t, 0b11) == doctest::Approx(4.0));
  CHECK(value(Valuation::additive(2), t, 0b11) == doctest::Approx(5.0));
  CHECK(value(Valuation::additive(2), t, 0) == doctest::Approx(0.0));
  // xos K=2, clauses per item (3,0) and (0,3): best clause sum is 3
  TypeRow x = {ItemSignal{{3, 0}}, ItemSignal{{0, 3}}};
  CHECK(value(Valuation::xos(2, 2), x, 0b11) == doctest::Approx(3.0));
}

TEST_CASE("single item value") {
  CHECK(single_item_value(Valuation::additive(1), scalars({2}), 0) == doctest::Approx(2.0));
  TypeRow x = {ItemSignal{{3, 1}}};
  CHECK(single_item_value(Valuation::xos(1, 2), x, 0) == doctest::Approx(3.0));
  CHECK(single_item_value(Valuation::additive(1), scalars({0}), 0) == doctest::Approx(0.0));
}

TEST_CASE("demand oracle") {
  Valuation add = Valuation::additive(2);
  CHECK(demand(add, scalars({1, 4}), {2, 3}, 0b11) == Mask(0b10));
  CHECK(demand(add, scalars({1, 4}), {5, 6}, 0b11) == Mask(0));
  // unit-demand tie goes to the first item
  CHECK(demand(Valuation::unit_demand(2), scalars({5, 5}), {1, 1}, 0b11) == Mask(0b01));
  // trade at indifference: a zero-utility purchase beats the empty set
  CHECK(demand(add, scalars({2}), {2}, 0b1) == Mask(0b1));
}

TEST_CASE("demand matches exhaustive enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    int m = 2 + (int)(rng.bits() % 3);
    TypeRow t;
    std::vector<double> prices;
    for (int j = 0; j < m; ++j) {
      t.push_back(ItemSignal{{rng.uniform(0, 3)}});
      prices.push_back(rng.uniform(0, 3));
    }
    Valuation val;
    switch (rng.bits() % 3) {
      case 0: val = Valuation::additive(m); break;
      case 1: val = Valuation::unit_demand(m); break;
      default: val = Valuation::cardinality(m, 1 + (int)(rng.bits() % m)); break;
    }
    Mask avail = (Mask)(rng.bits() % (1u << m));
    Mask got = demand(val, t, prices, avail);
    double best = 0;
    for (Mask S = 0; S < (Mask(1) << m); ++S) {
      if ((S & ~avail) != 0) continue;
      double u = value(val, t, S);
      for (int j = 0; j < m; ++j)
        if (S & (Mask(1) << j)) u -= prices[j];
      best = std::max(best, u);
    }
    double got_u = value(val, t, got);
    for (int j = 0; j < m; ++j)
      if (got & (Mask(1) << j)) got_u -= prices[j];
    CHECK(got_u == doctest::Approx(best).epsilon(1e-9));
    CHECK(got_u == doctest::Approx(best_utility(val, t, prices, avail)).epsilon(1e-9));
  }
}

TEST_CASE("supporting prices") {
  // unit-demand encoded as XOS: one clause per item
  TypeRow t = {ItemSignal{{1, 0}}, ItemSignal{{0, 4}}};
  Valuation v = Valuation::xos(2, 2);
  auto theta = supporting_prices(v, t, 0b11);
  CHECK(theta[0] == doctest::Approx(0.0));
  CHECK(theta[1] == doctest::Approx(4.0));
  CHECK_THROWS_AS((void)supporting_prices(Valuation::additive(2), scalars({1, 2}), 0b11),
                  std::runtime_error);
}

TEST_CASE("supporting price conditions on random xos") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 2 + (int)(rng.bits() % 2), K = 1 + (int)(rng.bits() % 3);
    Valuation v = Valuation::xos(m, K);
    TypeRow t;
    for (int j = 0; j < m; ++j) {
      ItemSignal s;
      for (int k = 0; k < K; ++k) s.v.push_back(rng.uniform(0, 2));
      t.push_back(s);
    }
    Mask S = 1 + (Mask)(rng.bits() % ((1u << m) - 1));
    auto theta = supporting_prices(v, t, S);
    double tot = 0;
    for (int j = 0; j < m; ++j)
      if (S & (Mask(1) << j)) tot += theta[j];
    CHECK(tot == doctest::Approx(value(v, t, S)).epsilon(1e-9));
    for (Mask Sp = 0; Sp < (Mask(1) << m); ++Sp) {
      if ((Sp & ~S) != 0) continue;
      double sub = 0;
      for (int j = 0; j < m; ++j)
        if (Sp & (Mask(1) << j)) sub += theta[j];
      CHECK(sub <= value(v, t, Sp) + 1e-9);
    }
  }
}

TEST_CASE("restricted valuation") {
  Valuation add = Valuation::additive(2);
  RestrictedValuation low = restrict_to_cheap_items(add, {0.5, 0.5});
  CHECK(low.value(scalars({1, 3}), 0b11) == doctest::Approx(0.0));
  RestrictedValuation high = restrict_to_cheap_items(add, {10, 10});
  CHECK(high.value(scalars({1, 3}), 0b11) == doctest::Approx(4.0));
  RestrictedValuation mid = restrict_to_cheap_items(add, {2, 2});
  CHECK(mid.value(scalars({1, 3}), 0b11) == doctest::Approx(1.0));
}

TEST_CASE("restricted xos keeps supporting price conditions") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 2;
    Valuation v = Valuation::xos(m, 2);
    RestrictedValuation rv = restrict_to_cheap_items(v, {rng.uniform(0, 2), rng.uniform(0, 2)});
    TypeRow t = {ItemSignal{{rng.uniform(0, 2), rng.uniform(0, 2)}},
                 ItemSignal{{rng.uniform(0, 2), rng.uniform(0, 2)}}};
    Mask S = 0b11;
    auto theta = rv.supporting_prices(t, S);
    double tot = theta[0] + theta[1];
    CHECK(tot == doctest::Approx(rv.value(t, S)).epsilon(1e-9));
    for (Mask Sp = 0; Sp <= S; ++Sp) {
      double sub = 0;
      for (int j = 0; j < m; ++j)
        if (Sp & (Mask(1) << j)) sub += theta[j];
      CHECK(sub <= rv.value(t, Sp) + 1e-9);
    }
  }
}

TEST_CASE("monotone and subadditive for built classes") {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 3;
    TypeRow t;
    for (int j = 0; j < m; ++j) t.push_back(ItemSignal{{rng.uniform(0, 3)}});
    Valuation vals[] = {Valuation::additive(m), Valuation::unit_demand(m),
                        Valuation::cardinality(m, 2)};
    for (const auto& v : vals)
      for (Mask U = 0; U < 8u; ++U)
        for (Mask V = 0; V < 8u; ++V) {
          if ((U & ~V) == 0) CHECK(value(v, t, U) <= value(v, t, V) + 1e-12);
          CHECK(value(v, t, U | V) <= value(v, t, U) + value(v, t, V) + 1e-12);
        }
  }
}

TEST_CASE("set ordering helper") {
  CHECK(set_precedes(0b01, 0b10));   // {0} before {1}
  CHECK(set_precedes(0b10, 0b011));  // smaller cardinality first
  CHECK_FALSE(set_precedes(0b10, 0b01));
}

TEST_SUITE_END();
