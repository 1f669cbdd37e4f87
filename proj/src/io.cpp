#include "rev/io.hpp"

#include <fstream>

namespace rev {

using nlohmann::json;

namespace {

json marginal_to_json(const Marginal& d) {
  json j;
  switch (d.kind) {
    case Marginal::Kind::Discrete:
      j["kind"] = "discrete";
      j["support"] = d.support;
      j["probs"] = d.probs;
      break;
    case Marginal::Kind::Parametric: {
      j["kind"] = "parametric";
      const char* fam = d.family == Marginal::Family::UniformAB      ? "uniform"
                        : d.family == Marginal::Family::TruncExp     ? "trunc-exp"
                                                                     : "equal-revenue";
      j["family"] = fam;
      j["params"] = d.params;
      break;
    }
    case Marginal::Kind::Atoms: {
      j["kind"] = "atoms";
      json atoms = json::array();
      for (const auto& a : d.atoms) atoms.push_back(a.v);
      j["atoms"] = atoms;
      j["probs"] = d.atom_probs;
      break;
    }
  }
  return j;
}

Marginal marginal_from_json(const json& j, const std::string& where) {
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "discrete") {
      return Marginal::discrete(j.at("support").get<std::vector<double>>(),
                                j.at("probs").get<std::vector<double>>());
    }
    if (kind == "parametric") {
      std::string fam = j.at("family").get<std::string>();
      Marginal::Family f;
      if (fam == "uniform")
        f = Marginal::Family::UniformAB;
      else if (fam == "trunc-exp")
        f = Marginal::Family::TruncExp;
      else if (fam == "equal-revenue")
        f = Marginal::Family::EqualRevenueTrunc;
      else
        throw std::runtime_error("unknown family '" + fam + "'");
      return Marginal::parametric(f, j.at("params").get<std::vector<double>>());
    }
    if (kind == "atoms") {
      std::vector<ItemSignal> atoms;
      for (const auto& a : j.at("atoms")) atoms.push_back({a.get<std::vector<double>>()});
      return Marginal::with_atoms(std::move(atoms), j.at("probs").get<std::vector<double>>());
    }
    throw std::runtime_error("unknown kind '" + kind + "'");
  } catch (const std::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
}

json valuation_to_json(const Valuation& v) {
  json j;
  switch (v.cls) {
    case Valuation::Cls::Additive: j["class"] = "additive"; break;
    case Valuation::Cls::UnitDemand: j["class"] = "unit-demand"; break;
    case Valuation::Cls::ConstrainedAdditive:
      j["class"] = "constrained-additive";
      if (v.feas == Valuation::Feas::CardinalityK) {
        j["feasibility"] = "cardinality";
        j["k"] = v.card_k;
      } else if (v.feas == Valuation::Feas::ExplicitSets) {
        j["feasibility"] = "explicit-sets";
        j["sets"] = v.feas_sets;
      } else {
        j["feasibility"] = "partition-matroid";
        j["part_of"] = v.part_of;
        j["part_cap"] = v.part_cap;
      }
      break;
    case Valuation::Cls::Xos:
      j["class"] = "xos";
      j["K"] = v.K;
      break;
    case Valuation::Cls::SubaddTable:
      j["class"] = "subadditive-table";
      j["sizes"] = v.table_sizes;
      j["table"] = v.table;
      break;
  }
  return j;
}

Valuation valuation_from_json(const json& j, int m) {
  std::string cls = j.value("class", "additive");
  if (cls == "additive") return Valuation::additive(m);
  if (cls == "unit-demand") return Valuation::unit_demand(m);
  if (cls == "constrained-additive") {
    std::string feas = j.value("feasibility", "cardinality");
    if (feas == "cardinality") return Valuation::cardinality(m, j.value("k", 1));
    if (feas == "explicit-sets")
      return Valuation::explicit_sets(m, j.at("sets").get<std::vector<Mask>>());
    return Valuation::partition_matroid(m, j.at("part_of").get<std::vector<int>>(),
                                        j.at("part_cap").get<std::vector<int>>());
  }
  if (cls == "xos") return Valuation::xos(m, j.at("K").get<int>());
  if (cls == "subadditive-table")
    return Valuation::subadd_table(m, j.at("sizes").get<std::vector<int>>(),
                                   j.at("table").get<std::vector<std::vector<double>>>());
  throw std::runtime_error("valuation: unknown class '" + cls + "'");
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json j;
  j["n"] = inst.prior.n;
  j["m"] = inst.prior.m;
  j["symmetric"] = inst.prior.symmetric;
  json grid = json::array();
  for (int i = 0; i < inst.prior.n; ++i) {
    json row = json::array();
    for (int jj = 0; jj < inst.prior.m; ++jj) row.push_back(marginal_to_json(inst.prior.cell(i, jj)));
    grid.push_back(row);
  }
  j["marginals"] = grid;
  j["valuation"] = valuation_to_json(inst.val);
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  try {
    inst.prior.n = j.at("n").get<int>();
  inst.prior.m = j.at("m").get<int>();
  inst.prior.symmetric = j.value("symmetric", false);
  const json& grid = j.at("marginals");
  require((int)grid.size() == inst.prior.n, "instance: marginals row count != n");
  inst.prior.cells.resize(inst.prior.n);
  for (int i = 0; i < inst.prior.n; ++i) {
    require((int)grid[i].size() == inst.prior.m,
            "instance: marginals[" + std::to_string(i) + "] column count != m");
    for (int jj = 0; jj < inst.prior.m; ++jj)
      inst.prior.cells[i].push_back(marginal_from_json(
          grid[i][jj], "marginals[" + std::to_string(i) + "][" + std::to_string(jj) + "]"));
  }
  inst.prior.validate();
  inst.val = j.contains("valuation") ? valuation_from_json(j["valuation"], inst.prior.m)
                                     : Valuation::additive(inst.prior.m);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
  return inst;
}

namespace {

json lottery_to_json(const Lottery& l) {
  return json{{"x", l.x},
              {"qlo", l.qlo},
              {"qhi", l.qhi},
              {"price_lo", l.price_lo_q},
              {"price_hi", l.price_hi_q}};
}

Lottery lottery_from_json(const json& j) {
  Lottery l;
  if (j.contains("price")) return Lottery::deterministic(j.at("price").get<double>(), 0.0);
  l.x = j.at("x").get<double>();
  l.qlo = j.at("qlo").get<double>();
  l.qhi = j.at("qhi").get<double>();
  l.price_lo_q = j.at("price_lo").get<double>();
  l.price_hi_q = j.at("price_hi").get<double>();
  return l;
}

json rows_to_json(const std::vector<TypeRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (const auto& sig : row) r.push_back(sig.v);
    out.push_back(r);
  }
  return out;
}

std::vector<TypeRow> rows_from_json(const json& j) {
  std::vector<TypeRow> rows;
  for (const auto& r : j) {
    TypeRow row;
    for (const auto& s : r) row.push_back({s.get<std::vector<double>>()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json mechanism_to_json(const Mechanism& mech) {
  json j;
  const char* tag = nullptr;
  switch (mech.tag) {
    case Mechanism::Tag::Spm: tag = "spm"; break;
    case Mechanism::Tag::Rspm: tag = "rspm"; break;
    case Mechanism::Tag::Spem: tag = "spem"; break;
    case Mechanism::Tag::Aspe: tag = "aspe"; break;
    case Mechanism::Tag::VcgEntry: tag = "vcg_entry"; break;
    case Mechanism::Tag::MyersonItem: tag = "myerson_item"; break;
  }
  j["tag"] = tag;
  j["n"] = mech.n;
  j["m"] = mech.m;
  if (!mech.order.empty()) j["order"] = mech.order;
  if (!mech.lotteries.empty()) {
    json lots = json::array();
    for (const auto& row : mech.lotteries) {
      json r = json::array();
      for (const auto& l : row) r.push_back(lottery_to_json(l));
      lots.push_back(r);
    }
    j["lotteries"] = lots;
  }
  if (!mech.item_prices.empty()) j["item_prices"] = mech.item_prices;
  if (mech.fee.mode != EntryFeeRule::Mode::None) {
    json f;
    if (mech.fee.mode == EntryFeeRule::Mode::Table) {
      f["mode"] = "table";
      json tbl = json::array();
      for (const auto& per : mech.fee.table) {
        json e = json::object();
        for (const auto& [s, v] : per) e[std::to_string(s)] = v;
        tbl.push_back(e);
      }
      f["table"] = tbl;
    } else {
      f["mode"] = "median_samples";
      json batches = json::array();
      for (const auto& rows : mech.fee.samples) batches.push_back(rows_to_json(rows));
      f["samples"] = batches;
    }
    j["entry_fee"] = f;
  }
  if (mech.tag == Mechanism::Tag::VcgEntry) {
    json v;
    v["mode"] = mech.vcg_mode == Mechanism::VcgFeeMode::MedianPrior  ? "median"
                : mech.vcg_mode == Mechanism::VcgFeeMode::SingleSample ? "single_sample"
                                                                       : "order_stat";
    v["k"] = mech.orderstat_k;
    v["seed"] = mech.fee_seed;
    Instance fp{mech.fee_prior, Valuation::additive(mech.m)};
    v["fee_prior"] = instance_to_json(fp);
    j["vcg"] = v;
  }
  if (mech.tag == Mechanism::Tag::MyersonItem) {
    json ms = json::array();
    for (const auto& d : mech.item_marginals) {
      Instance one;
      one.prior.n = 1;
      one.prior.m = 1;
      one.prior.cells = {{d}};
      ms.push_back(instance_to_json(one)["marginals"][0][0]);
    }
    j["item_marginals"] = ms;
  }
  return j;
}

Mechanism mechanism_from_json(const json& j) {
  Mechanism mech;
  try {
  std::string tag = j.at("tag").get<std::string>();
  if (tag == "spm")
    mech.tag = Mechanism::Tag::Spm;
  else if (tag == "rspm")
    mech.tag = Mechanism::Tag::Rspm;
  else if (tag == "spem")
    mech.tag = Mechanism::Tag::Spem;
  else if (tag == "aspe")
    mech.tag = Mechanism::Tag::Aspe;
  else if (tag == "vcg_entry")
    mech.tag = Mechanism::Tag::VcgEntry;
  else if (tag == "myerson_item")
    mech.tag = Mechanism::Tag::MyersonItem;
  else
    throw std::runtime_error("mechanism: unknown tag '" + tag + "'");
  mech.n = j.at("n").get<int>();
  mech.m = j.at("m").get<int>();
  if (j.contains("order")) mech.order = j["order"].get<std::vector<int>>();
  if (j.contains("lotteries")) {
    for (const auto& row : j["lotteries"]) {
      std::vector<Lottery> r;
      for (const auto& l : row) r.push_back(lottery_from_json(l));
      mech.lotteries.push_back(std::move(r));
    }
  }
  if (j.contains("item_prices")) mech.item_prices = j["item_prices"].get<std::vector<double>>();
  if (j.contains("entry_fee")) {
    const json& f = j["entry_fee"];
    std::string mode = f.at("mode").get<std::string>();
    if (mode == "table") {
      mech.fee.mode = EntryFeeRule::Mode::Table;
      for (const auto& per : f.at("table")) {
        std::map<Mask, double> e;
        for (auto it = per.begin(); it != per.end(); ++it)
          e[(Mask)std::stoul(it.key())] = it.value().get<double>();
        mech.fee.table.push_back(std::move(e));
      }
    } else if (mode == "median_samples") {
      mech.fee.mode = EntryFeeRule::Mode::MedianSamples;
      for (const auto& batch : f.at("samples")) mech.fee.samples.push_back(rows_from_json(batch));
    } else {
      throw std::runtime_error("entry_fee: unknown mode '" + mode + "'");
    }
  }
  if (j.contains("vcg")) {
    const json& v = j["vcg"];
    std::string mode = v.at("mode").get<std::string>();
    mech.vcg_mode = mode == "median"          ? Mechanism::VcgFeeMode::MedianPrior
                    : mode == "single_sample" ? Mechanism::VcgFeeMode::SingleSample
                                              : Mechanism::VcgFeeMode::OrderStat;
    mech.orderstat_k = v.value("k", 512);
    mech.fee_seed = v.value("seed", (uint64_t)0);
    mech.fee_prior = instance_from_json(v.at("fee_prior")).prior;
  }
  if (j.contains("item_marginals")) {
    for (const auto& dm : j["item_marginals"]) {
      json wrap;
      wrap["n"] = 1;
      wrap["m"] = 1;
      wrap["marginals"] = json::array({json::array({dm})});
      mech.item_marginals.push_back(instance_from_json(wrap).prior.cell(0, 0));
    }
    for (const auto& d : mech.item_marginals) mech.virtuals.push_back(ironed_virtuals(d));
  }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("mechanism: ") + e.what());
  }
  return mech;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot write file: " + path);
  out << j.dump(2) << "\n";
}

Instance load_instance(const std::string& path) { return instance_from_json(load_json(path)); }
void save_instance(const Instance& inst, const std::string& path) {
  save_json(instance_to_json(inst), path);
}
Mechanism load_mechanism(const std::string& path) { return mechanism_from_json(load_json(path)); }
void save_mechanism(const Mechanism& mech, const std::string& path) {
  save_json(mechanism_to_json(mech), path);
}

}  // namespace rev
