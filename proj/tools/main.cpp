// revmech: instance generation, learners, evaluation, oracles, bounds and
// the verification battery behind one binary.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "rev/checks.hpp"
#include "rev/converge.hpp"
#include "rev/io.hpp"
#include "rev/learn.hpp"
#include "rev/oracle.hpp"

using nlohmann::json;
using namespace rev;

namespace {

void emit(const json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(j, out);
}

json mc_json(const McEstimate& e) {
  return json{{"estimate", e.estimate}, {"stderr", e.stderr_}};
}

// ---------------------------------------------------------------- generate

struct GenArgs {
  std::string family = "iid-discrete";
  int n = 2, m = 2, support = 3, clauses = 2;
  double vmax = 3.0, value = 1.0;
  uint64_t seed = 0;
  bool symmetric = false;
  std::string out;
};

int cmd_generate(const GenArgs& a) {
  Rng rng(Rng::derive(a.seed, 0xC0FFEE));
  Instance inst;
  inst.prior.n = a.n;
  inst.prior.m = a.m;
  inst.prior.symmetric = a.symmetric;
  inst.prior.cells.resize(a.n);

  auto random_discrete = [&]() {
    int s = 1 + (int)(rng.bits() % (uint64_t)a.support);
    std::vector<double> sup(s), pr(s);
    for (double& x : sup) x = rng.uniform(0.05, a.vmax);
    std::sort(sup.begin(), sup.end());
    for (int k = 1; k < s; ++k)
      if (sup[k] - sup[k - 1] < 1e-6) sup[k] = sup[k - 1] + 1e-6;
    double tot = 0;
    for (double& p : pr) tot += (p = rng.uniform(0.05, 1.0));
    for (double& p : pr) p /= tot;
    return Marginal::discrete(sup, pr);
  };
  auto random_xos_cell = [&]() {
    int s = 1 + (int)(rng.bits() % (uint64_t)a.support);
    std::vector<ItemSignal> atoms(s);
    for (auto& at : atoms) {
      at.v.resize(a.clauses);
      for (double& x : at.v) x = rng.uniform(0.01, a.vmax);
    }
    std::vector<double> pr(s);
    double tot = 0;
    for (double& p : pr) tot += (p = rng.uniform(0.05, 1.0));
    for (double& p : pr) p /= tot;
    return Marginal::with_atoms(std::move(atoms), std::move(pr));
  };

  if (a.family == "point-mass") {
    for (int i = 0; i < a.n; ++i)
      inst.prior.cells[i].assign(a.m, Marginal::point_mass(a.value));
    inst.val = Valuation::additive(a.m);
  } else if (a.family == "iid-discrete") {
    std::vector<Marginal> row;
    for (int i = 0; i < a.n; ++i) {
      if (i == 0 || !a.symmetric) {
        row.clear();
        for (int j = 0; j < a.m; ++j) row.push_back(random_discrete());
      }
      inst.prior.cells[i] = row;
    }
    inst.val = Valuation::unit_demand(a.m);
  } else if (a.family == "parametric") {
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.m; ++j)
        inst.prior.cells[i].push_back(
            Marginal::parametric(Marginal::Family::UniformAB, {0.0, a.vmax}));
    inst.val = Valuation::additive(a.m);
  } else if (a.family == "sym-xos") {
    inst.prior.symmetric = true;
    std::vector<Marginal> row;
    for (int j = 0; j < a.m; ++j) row.push_back(random_xos_cell());
    for (int i = 0; i < a.n; ++i) inst.prior.cells[i] = row;
    inst.val = Valuation::xos(a.m, a.clauses);
  } else {
    throw CLI::ValidationError("--family", "unknown family " + a.family);
  }
  inst.prior.validate();
  require(!a.out.empty(), "generate: --out is required");
  save_instance(inst, a.out);
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

// ------------------------------------------------------------------- learn

struct LearnArgs {
  std::string model, instance, out;
  double eps = 0.0, slack = 0.0, B = 0.0, step = 0.0, b = 0.0, eta = 0.1;
  int samples = 0, C = 8, fee_batch = 512, selection_batch = 4096, k = 512;
  uint64_t seed = 0;
};

int cmd_learn(const LearnArgs& a) {
  Instance inst = load_instance(a.instance);
  require(!a.out.empty(), "learn: --out is required");
  Mechanism mech;
  json audit{{"model", a.model}, {"seed", a.seed}};

  if (a.model == "ud-maxmin") {
    UdMaxminResult r = learn_ud_maxmin(inst.prior, a.eps);
    mech = r.mech;
    audit["exante_objective"] = r.sol.objective;
    audit["eps"] = r.eps;
    audit["vacuous"] = r.vacuous;
  } else if (a.model == "ud-regular") {
    require(a.samples > 0, "ud-regular: --samples must be positive");
    UdRegularResult r = learn_ud_regular(inst.prior, a.samples, a.seed, a.C, a.slack);
    mech = r.mech;
    audit["exante_objective"] = r.sol.objective;
    audit["truncation_caps"] = r.caps_h;
  } else if (a.model == "additive-bounded") {
    require(a.samples > 0, "additive-bounded: --samples must be positive");
    AdditiveBoundedResult r = learn_additive_bounded(inst.prior, a.samples, a.seed);
    mech = r.spm;
    audit["prices"] = r.prices;
    audit["median_of_max"] = r.median_of_max;
    save_json(mechanism_to_json(r.vcg), a.out + ".vcg.json");
  } else if (a.model == "additive-maxmin") {
    AdditiveMaxminResult r = learn_additive_maxmin(inst.prior, a.eps, a.k, a.seed);
    mech = r.spm;
    audit["eps"] = r.eps;
    audit["fee_guarantee_void"] = r.fee_guarantee_void;
    save_json(mechanism_to_json(r.vcg), a.out + ".vcg.json");
  } else if (a.model == "xos-sample") {
    double B = a.B, step = a.step;
    if (B <= 0) B = 2.0 * estimate_G(inst.prior, inst.val);
    if (step <= 0) step = B / 8.0;
    XosSampleResult r =
        learn_xos_sample(inst.prior, inst.val, B, step, a.fee_batch, a.selection_batch, a.seed);
    mech = r.mech;
    audit["B"] = B;
    audit["step"] = step;
    audit["best_index"] = r.best_index;
    audit["empirical_revenue"] = r.empirical_revenue;
  } else if (a.model == "sym-xos") {
    double Z = std::max(inst.prior.n, inst.prior.m);
    double b = a.b > 0 ? a.b : inst.prior.n / (3.0 * Z);
    BalancedThresholds thr =
        learn_symmetric_thresholds(inst.prior, inst.val, b, a.eta, a.samples, a.seed);
    SymmetricAspeResult r =
        learn_symmetric_aspe(inst.prior, inst.val, thr, a.samples, a.fee_batch, a.seed);
    mech = r.mech;
    audit["beta"] = thr.beta;
    audit["c"] = thr.c;
    audit["Q"] = r.Q;
  } else if (a.model == "sym-subadditive") {
    UdMaxminResult r = learn_symmetric_subadditive(inst.prior, inst.val, a.eps);
    mech = r.mech;
    audit["exante_objective"] = r.sol.objective;
    audit["vacuous"] = r.vacuous;
  } else {
    throw CLI::ValidationError("--model", "unknown model " + a.model);
  }
  save_mechanism(mech, a.out);
  save_json(audit, a.out + ".audit.json");
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

// ----------------------------------------------------------- eval and mech

int cmd_eval(const std::string& mech_path, const std::string& inst_path, int trials,
             uint64_t seed, long long budget, const std::string& out) {
  Mechanism mech = load_mechanism(mech_path);
  Instance inst = load_instance(inst_path);
  json j;
  if (trials <= 0) {
    j["revenue"] = expected_revenue_exact(mech, inst.prior, inst.val, budget);
    j["method"] = "exact";
  } else {
    McEstimate e = expected_revenue_mc(mech, inst.prior, inst.val, trials, seed);
    j = mc_json(e);
    j["method"] = "mc";
    j["trials"] = trials;
    j["seed"] = seed;
  }
  emit(j, out);
  return 0;
}

int cmd_mech(const std::string& mech_path, const std::string& inst_path, int runs,
             uint64_t seed, const std::string& out) {
  Mechanism mech = load_mechanism(mech_path);
  Instance inst = load_instance(inst_path);
  auto profiles = sample(inst.prior, seed, runs);
  json rows = json::array();
  for (int t = 0; t < runs; ++t) {
    Rng rng = Rng::split(seed, 1000003ULL + t);
    Outcome o = run_any(mech, inst.val, profiles[t], rng);
    json r{{"revenue", o.revenue}, {"payments", o.payments}};
    std::vector<int> alloc(o.alloc.begin(), o.alloc.end());
    r["alloc_masks"] = alloc;
    rows.push_back(r);
  }
  emit(json{{"runs", rows}, {"seed", seed}}, out);
  return 0;
}

// ----------------------------------------------------------------- oracles

int cmd_oracle(const std::string& verb, const std::string& inst_path,
               const std::string& family, const std::vector<double>& thresholds,
               long long guard_profiles, const std::string& out) {
  Instance inst = load_instance(inst_path);
  TinyInstanceGuard guard;
  if (guard_profiles > 0) guard.max_profiles = guard_profiles;
  json j{{"verb", verb}};
  if (verb == "bic") {
    BicResult r = opt_bic_lp(inst.prior, inst.val, guard);
    j["revenue"] = r.revenue;
    j["duality_gap"] = r.duality_gap;
  } else if (verb == "posted") {
    Mechanism::Tag tag = family == "spm" ? Mechanism::Tag::Spm : Mechanism::Tag::Rspm;
    auto [mech, rev] = opt_posted_exhaustive(inst.prior, inst.val, tag, guard);
    j["revenue"] = rev;
    j["family"] = family;
    j["mechanism"] = mechanism_to_json(mech);
  } else if (verb == "core") {
    require(!thresholds.empty(), "oracle core: --thresholds required");
    j["core"] = exact_core(inst.prior, inst.val, thresholds, guard);
    j["thresholds"] = thresholds;
  } else if (verb == "welfare") {
    j["welfare"] = exact_expected_welfare(inst.prior, inst.val, guard);
  } else {
    throw CLI::ValidationError("verb", "unknown oracle verb " + verb);
  }
  emit(j, out);
  return 0;
}

// ------------------------------------------------------------------ bounds

int cmd_bounds(const std::string& builtin, int d, double eps, double delta,
               const std::string& out) {
  ComplexityTable tbl;
  tbl.d = d;
  std::string basis;
  if (builtin == "rectangles") {
    tbl.mode = ComplexityTable::Mode::Vc;
    for (Mask t = 1; t < (Mask(1) << d); ++t) tbl.vc[t] = 2.0 * popcount(t);
    basis = "VC of axis-aligned rectangles: 2|T| per coordinate subset";
  } else if (builtin == "intervals") {
    tbl.mode = ComplexityTable::Mode::Vc;
    for (int a = 0; a < d; ++a) tbl.vc[Mask(1) << a] = 2.0;
    basis = "per-axis intervals only (convex / single-intersecting projections)";
  } else if (builtin == "dkw") {
    tbl.mode = ComplexityTable::Mode::SampleFn;
    tbl.s_fn = [](Mask t, double e, double del) -> double {
      if (popcount(t) != 1) return -1.0;
      return std::ceil(std::log(2.0 / del) / (2.0 * e * e));
    };
    basis = "singleton DKW sample complexity ceil(ln(2/delta)/(2 eps^2))";
  } else {
    throw CLI::ValidationError("--builtin", "unknown table " + builtin);
  }
  PartitionBound r = sample_bound_partition(tbl, eps, delta);
  std::vector<int> part(r.partition.begin(), r.partition.end());
  emit(json{{"bound", r.bound},
            {"partition_masks", part},
            {"v_max", r.v_max},
            {"formula", "(V_max/eps^2) ln(k/eps) + (k^2/eps^2) ln(k/delta), unit constants"},
            {"basis", basis}},
       out);
  return 0;
}

// ------------------------------------------------------------------ exante

int cmd_exante(const std::string& inst_path, double row_cap, double col_cap,
               const std::string& out) {
  Instance inst = load_instance(inst_path);
  std::vector<std::vector<RevenueCurve>> curves(inst.prior.n);
  for (int i = 0; i < inst.prior.n; ++i)
    for (int j = 0; j < inst.prior.m; ++j)
      curves[i].push_back(revenue_curve(inst.prior.cell(i, j)));
  ExAnteSolution sol = solve_exante(curves, row_cap, col_cap);
  emit(json{{"objective", sol.objective}, {"q", sol.q}, {"tag", sol.tag}}, out);
  return 0;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const std::string& out) {
  auto results = run_all_checks();
  json rows = json::array();
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    rows.push_back(json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    ok = ok && r.pass;
  }
  if (!out.empty()) save_json(json{{"checks", rows}, {"all_pass", ok}}, out);
  std::cout << (ok ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revenue-optimal auction learning toolkit"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("generate", "write a random instance file");
  gen->add_option("--family", ga.family, "iid-discrete|parametric|sym-xos|point-mass");
  gen->add_option("--n", ga.n);
  gen->add_option("--m", ga.m);
  gen->add_option("--support", ga.support);
  gen->add_option("--clauses", ga.clauses);
  gen->add_option("--vmax", ga.vmax);
  gen->add_option("--value", ga.value);
  gen->add_option("--seed", ga.seed);
  gen->add_flag("--symmetric", ga.symmetric);
  gen->add_option("--out", ga.out)->required();

  LearnArgs la;
  auto* lrn = app.add_subcommand("learn", "run a learner, write mechanism + audit JSON");
  lrn->add_option("--model", la.model)->required();
  lrn->add_option("--instance", la.instance)->required();
  lrn->add_option("--out", la.out)->required();
  lrn->add_option("--eps", la.eps);
  lrn->add_option("--samples", la.samples);
  lrn->add_option("--seed", la.seed);
  lrn->add_option("--C", la.C);
  lrn->add_option("--slack", la.slack);
  lrn->add_option("--B", la.B);
  lrn->add_option("--step", la.step);
  lrn->add_option("--fee-batch", la.fee_batch);
  lrn->add_option("--selection-batch", la.selection_batch);
  lrn->add_option("--b", la.b);
  lrn->add_option("--eta", la.eta);
  lrn->add_option("--k", la.k);

  std::string ev_mech, ev_inst, ev_out;
  int ev_trials = 0;
  uint64_t ev_seed = 0;
  long long ev_budget = 10000000LL;
  auto* ev = app.add_subcommand("eval", "expected revenue of a mechanism (exact or MC)");
  ev->add_option("--mech", ev_mech)->required();
  ev->add_option("--instance", ev_inst)->required();
  ev->add_option("--trials", ev_trials, "0 = exact enumeration");
  ev->add_option("--seed", ev_seed);
  ev->add_option("--budget", ev_budget);
  ev->add_option("--out", ev_out);

  std::string mc_mech, mc_inst, mc_out;
  int mc_runs = 10;
  uint64_t mc_seed = 0;
  auto* mc = app.add_subcommand("mech", "run a mechanism on sampled profiles");
  mc->add_option("--mech", mc_mech)->required();
  mc->add_option("--instance", mc_inst)->required();
  mc->add_option("--runs", mc_runs);
  mc->add_option("--seed", mc_seed);
  mc->add_option("--out", mc_out);

  std::string ex_inst, ex_out;
  double ex_row = 0.5, ex_col = 0.5;
  auto* ex = app.add_subcommand("exante", "solve the capped ex-ante program");
  ex->add_option("--instance", ex_inst)->required();
  ex->add_option("--row-cap", ex_row);
  ex->add_option("--col-cap", ex_col);
  ex->add_option("--out", ex_out);

  std::string or_verb, or_inst, or_family = "rspm", or_out;
  std::vector<double> or_thr;
  long long or_guard = 0;
  auto* orc = app.add_subcommand("oracle", "brute-force oracles: bic|posted|core|welfare");
  orc->add_option("verb", or_verb)->required();
  orc->add_option("--instance", or_inst)->required();
  orc->add_option("--family", or_family, "spm|rspm (posted verb)");
  orc->add_option("--thresholds", or_thr, "per-item thresholds (core verb)");
  orc->add_option("--guard-profiles", or_guard);
  orc->add_option("--out", or_out);

  std::string bd_builtin = "rectangles", bd_out;
  int bd_d = 2;
  double bd_eps = 0.1, bd_delta = 0.1;
  auto* bd = app.add_subcommand("bounds", "partitioned sample-complexity calculator");
  bd->add_option("--builtin", bd_builtin, "rectangles|intervals|dkw");
  bd->add_option("--d", bd_d);
  bd->add_option("--eps", bd_eps);
  bd->add_option("--delta", bd_delta);
  bd->add_option("--out", bd_out);

  std::string vf_out;
  auto* vf = app.add_subcommand("verify", "run the acceptance battery");
  vf->add_option("--out", vf_out);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_generate(ga);
    if (lrn->parsed()) return cmd_learn(la);
    if (ev->parsed()) return cmd_eval(ev_mech, ev_inst, ev_trials, ev_seed, ev_budget, ev_out);
    if (mc->parsed()) return cmd_mech(mc_mech, mc_inst, mc_runs, mc_seed, mc_out);
    if (ex->parsed()) return cmd_exante(ex_inst, ex_row, ex_col, ex_out);
    if (orc->parsed()) return cmd_oracle(or_verb, or_inst, or_family, or_thr, or_guard, or_out);
    if (bd->parsed()) return cmd_bounds(bd_builtin, bd_d, bd_eps, bd_delta, bd_out);
    if (vf->parsed()) return cmd_verify(vf_out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
