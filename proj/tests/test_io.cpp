#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "rev/io.hpp"

using namespace rev;
using nlohmann::json;

namespace {
Instance sample_instance() {
  Instance inst;
  inst.prior.n = 2;
  inst.prior.m = 2;
  inst.prior.symmetric = false;
  inst.prior.cells = {
      {Marginal::discrete({1, 2}, {0.5, 0.5}),
       Marginal::parametric(Marginal::Family::UniformAB, {0.0, 2.0})},
      {Marginal::with_atoms({ItemSignal{{0.5, 1.0}}, ItemSignal{{1.5, 0.2}}}, {0.3, 0.7}),
       Marginal::discrete({1, 3}, {0.6, 0.4})}};
  inst.val = Valuation::cardinality(2, 1);
  return inst;
}
}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("instance json round trip") {
  Instance inst = sample_instance();
  Instance back = instance_from_json(instance_to_json(inst));
  CHECK(back.prior.n == 2);
  CHECK(back.prior.m == 2);
  CHECK(back.prior.cell(0, 0).support == inst.prior.cell(0, 0).support);
  CHECK(back.prior.cell(0, 0).probs == inst.prior.cell(0, 0).probs);
  CHECK(back.prior.cell(0, 1).kind == Marginal::Kind::Parametric);
  CHECK(back.prior.cell(1, 0).kind == Marginal::Kind::Atoms);
  CHECK(back.prior.cell(1, 0).atoms[1].v == inst.prior.cell(1, 0).atoms[1].v);
  CHECK(back.val.cls == Valuation::Cls::ConstrainedAdditive);
  CHECK(back.val.card_k == 1);
}

TEST_CASE("valuation variants round trip") {
  Valuation vals[] = {
      Valuation::additive(3),
      Valuation::unit_demand(2),
      Valuation::explicit_sets(3, {Mask(0b011), Mask(0b100)}),
      Valuation::partition_matroid(3, {0, 0, 1}, {1, 1}),
      Valuation::xos(2, 3),
      Valuation::subadd_table(2, {2, 2},
                              {{0, 1, 1, 1.5}, {0, 1, 2, 2.5}, {0, 2, 1, 2.5}, {0, 2, 2, 3}}),
  };
  for (const auto& v : vals) {
    Instance inst;
    inst.prior.n = 1;
    inst.prior.m = v.m;
    inst.prior.cells.assign(1, std::vector<Marginal>(v.m, Marginal::point_mass(1.0)));
    inst.val = v;
    Instance back = instance_from_json(instance_to_json(inst));
    CHECK(back.val.cls == v.cls);
    CHECK(back.val.m == v.m);
    if (v.cls == Valuation::Cls::Xos) CHECK(back.val.K == v.K);
    if (v.cls == Valuation::Cls::SubaddTable) CHECK(back.val.table == v.table);
    if (!v.feas_sets.empty()) CHECK(back.val.feas_sets == v.feas_sets);
  }
}

TEST_CASE("mechanism json round trip") {
  Mechanism mech;
  mech.tag = Mechanism::Tag::Spem;
  mech.n = 1;
  mech.m = 2;
  Lottery l;
  l.x = 0.5;
  l.qlo = 0.0;
  l.qhi = 0.5;
  l.price_lo_q = 3.0;
  l.price_hi_q = 2.0;
  mech.lotteries = {{l, Lottery::deterministic(1.0, 0.25)}};
  mech.fee.mode = EntryFeeRule::Mode::Table;
  mech.fee.table = {{{Mask(1), 0.25}, {Mask(3), 0.5}}};
  Mechanism back = mechanism_from_json(mechanism_to_json(mech));
  CHECK(back.tag == Mechanism::Tag::Spem);
  CHECK(back.lotteries[0][0].x == doctest::Approx(0.5));
  CHECK(back.lotteries[0][0].price_hi_q == doctest::Approx(2.0));
  CHECK(back.lotteries[0][1].price_lo_q == doctest::Approx(1.0));
  CHECK(back.fee.table[0].at(Mask(3)) == doctest::Approx(0.5));

  Mechanism aspe;
  aspe.tag = Mechanism::Tag::Aspe;
  aspe.n = 2;
  aspe.m = 2;
  aspe.item_prices = {0.5, 1.0};
  aspe.fee.mode = EntryFeeRule::Mode::MedianSamples;
  aspe.fee.samples = {{{ItemSignal{{1}}, ItemSignal{{2}}}}, {{ItemSignal{{0.5}}, ItemSignal{{1}}}}};
  Mechanism aback = mechanism_from_json(mechanism_to_json(aspe));
  CHECK(aback.item_prices == aspe.item_prices);
  CHECK(aback.fee.samples[1][0][1].v == aspe.fee.samples[1][0][1].v);
}

TEST_CASE("file save and load") {
  Instance inst = sample_instance();
  std::string path = "io_test_instance.json";
  save_instance(inst, path);
  Instance back = load_instance(path);
  CHECK(back.prior.cell(1, 1).support == inst.prior.cell(1, 1).support);
  // deterministic bytes: saving twice gives identical files
  std::string path2 = "io_test_instance2.json";
  save_instance(inst, path2);
  std::ifstream f1(path), f2(path2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("malformed documents are rejected with a diagnostic") {
  json j = instance_to_json(sample_instance());
  j["marginals"][0][0]["probs"] = {0.5, 0.6};  // does not sum to 1
  CHECK_THROWS_AS((void)instance_from_json(j), std::runtime_error);
  json missing = instance_to_json(sample_instance());
  missing.erase("n");
  CHECK_THROWS_AS((void)instance_from_json(missing), std::runtime_error);
}

TEST_SUITE_END();
