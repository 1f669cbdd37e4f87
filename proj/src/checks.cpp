#include "rev/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rev/converge.hpp"
#include "rev/exante.hpp"
#include "rev/learn.hpp"
#include "rev/oracle.hpp"

namespace rev {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::vector<double> rand_support(Rng& rng, int s, double vmax) {
  std::vector<double> v(s);
  for (double& x : v) x = rng.uniform(0.05, vmax);
  std::sort(v.begin(), v.end());
  for (int k = 1; k < s; ++k)  // keep strictly ascending
    if (v[k] - v[k - 1] < 1e-6) v[k] = v[k - 1] + 1e-6 + rng.uniform(0.0, 1e-4);
  return v;
}

std::vector<double> rand_probs(Rng& rng, int s) {
  std::vector<double> p(s);
  double tot = 0.0;
  for (double& x : p) {
    x = rng.uniform(0.05, 1.0);
    tot += x;
  }
  for (double& x : p) x /= tot;
  return p;
}

Marginal rand_marginal(Rng& rng, int max_support, double vmax) {
  int s = 1 + (int)(rng.bits() % (uint64_t)max_support);
  return Marginal::discrete(rand_support(rng, s, vmax), rand_probs(rng, s));
}

ProductPrior rand_prior(Rng& rng, int n, int m, int max_support, double vmax) {
  ProductPrior prior;
  prior.n = n;
  prior.m = m;
  prior.cells.assign(n, std::vector<Marginal>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) prior.cells[i][j] = rand_marginal(rng, max_support, vmax);
  return prior;
}

// shift probability mass between adjacent atoms; Kolmogorov distance to the
// input is at most eps per cell
Marginal perturb_probs(const Marginal& d, double eps, Rng& rng) {
  Marginal out = d;
  int s = (int)d.support.size();
  if (s < 2) return out;
  int moves = 1 + (int)(rng.bits() % 2);
  for (int t = 0; t < moves; ++t) {
    int a = (int)(rng.bits() % (uint64_t)(s - 1));
    // each move shifts one prefix sum by delta, so cap the per-move budget at
    // eps / moves to keep the total cellwise distance within eps
    double delta = std::min(out.probs[a], rng.uniform(0.0, eps / moves));
    if (rng.bits() & 1) {
      delta = std::min(out.probs[a + 1], delta);
      out.probs[a + 1] -= delta;
      out.probs[a] += delta;
    } else {
      out.probs[a] -= delta;
      out.probs[a + 1] += delta;
    }
  }
  return out;
}

double max_support_value(const ProductPrior& prior) {
  double h = 0.0;
  for (const auto& row : prior.cells)
    for (const auto& d : row) h = std::max(h, d.upper_bound());
  return h;
}

CheckResult fail(const std::string& name, const std::string& why) { return {name, false, why}; }
CheckResult pass(const std::string& name, const std::string& detail) {
  return {name, true, detail};
}

}  // namespace

CheckResult check_curve_oracle() {
  const std::string name = "curve-envelope-oracle";
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    Marginal d = rand_marginal(rng, 20, 10.0);
    // independent O(s^2) envelope: raw points (tail(x), tail(x)*x) plus the
    // origin; envelope value at q = best chord over all point pairs
    std::vector<std::pair<double, double>> raw = {{0.0, 0.0}};
    for (double x : d.support) raw.push_back({d.tail(x), d.tail(x) * x});
    auto envelope = [&raw](double q) {
      double best = 0.0;
      for (size_t a = 0; a < raw.size(); ++a) {
        if (std::fabs(raw[a].first - q) <= 1e-15) best = std::max(best, raw[a].second);
        for (size_t b = 0; b < raw.size(); ++b) {
          double qa = raw[a].first, qb = raw[b].first;
          if (qa < q && q < qb) {
            double t = (q - qa) / (qb - qa);
            best = std::max(best, raw[a].second + t * (raw[b].second - raw[a].second));
          }
        }
      }
      return best;
    };
    RevenueCurve c = revenue_curve(d);
    std::vector<double> qs;
    for (const auto& p : raw) qs.push_back(p.first);
    for (int k = 0; k <= 100; ++k) qs.push_back(k / 100.0);
    for (double q : qs) worst = std::max(worst, std::fabs(c.eval(q) - envelope(q)));
  }
  if (worst > 1e-9) return fail(name, "max abs error " + fmt(worst));
  return pass(name, "500 marginals, max abs error " + fmt(worst));
}

namespace {

// best grid point of a concave curve on [0, cap] (grid step h)
double best_on_grid(const RevenueCurve& c, double cap, double h) {
  if (cap <= 0.0) return 0.0;
  double top = std::floor(cap / h + 1e-9) * h;
  double best = 0.0;
  auto consider = [&](double q) {
    if (q < 0.0 || q > top + 1e-15) return;
    best = std::max(best, c.eval(q));
  };
  consider(0.0);
  consider(top);
  double pk = c.peak_q();
  consider(std::floor(pk / h) * h);
  consider(std::ceil(pk / h) * h);
  return best;
}

// exact continuous optimum of R_a(q_a) + R_b(q_b), q_a <= cap_a,
// q_b <= cap_b, q_a + q_b <= shared (greedy fill over merged segments)
double pair_fill(const RevenueCurve& ca, double cap_a, const RevenueCurve& cb, double cap_b,
                 double shared) {
  struct Seg {
    double slope, width;
  };
  std::vector<Seg> segs;
  auto add = [&segs](const RevenueCurve& c, double cap) {
    double used = 0.0;
    for (size_t k = 0; k + 1 < c.pts.size() && used < cap; ++k) {
      double w = std::min(c.pts[k + 1].q - c.pts[k].q, cap - used);
      if (w <= 0.0) continue;
      double slope = (c.pts[k + 1].r - c.pts[k].r) / (c.pts[k + 1].q - c.pts[k].q);
      segs.push_back({slope, w});
      used += w;
    }
  };
  add(ca, std::max(0.0, cap_a));
  add(cb, std::max(0.0, cap_b));
  std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.slope > y.slope; });
  double budget = std::max(0.0, shared), out = 0.0;
  for (const Seg& s : segs) {
    if (s.slope <= 0.0 || budget <= 0.0) break;
    double take = std::min(s.width, budget);
    out += s.slope * take;
    budget -= take;
  }
  return out;
}

// fine-grid exhaustive reference for the ex-ante program, n*m <= 4; the
// last one or two cells of each enumeration are resolved exactly via
// concavity, which can only move the reference value up towards the LP
double grid_reference(const std::vector<std::vector<RevenueCurve>>& curves, double row_cap,
                      double col_cap, double h) {
  int n = (int)curves.size(), m = (int)curves[0].size();
  int k = n * m;
  require(k <= 4, "grid_reference: n*m <= 4");
  double cell_cap = std::min(1.0, std::min(row_cap, col_cap));

  if (n == 2 && m == 2) {
    double best = 0.0;
    double top = std::min(1.0, col_cap);
    for (double q00 = 0.0; q00 <= top + 1e-12; q00 += h)
      for (double q01 = 0.0; q00 + q01 <= row_cap + 1e-12 && q01 <= top + 1e-12; q01 += h) {
        double base = curves[0][0].eval(q00) + curves[0][1].eval(q01);
        double rest = pair_fill(curves[1][0], std::min(1.0, col_cap - q00), curves[1][1],
                                std::min(1.0, col_cap - q01), row_cap);
        best = std::max(best, base + rest);
      }
    return best;
  }

  // line shapes: all cells share one cap, each also bounded by the other
  std::vector<const RevenueCurve*> cs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) cs.push_back(&curves[i][j]);
  double shared = (n == 1) ? row_cap : col_cap;
  double indiv = std::min(1.0, (n == 1) ? col_cap : row_cap);

  if (k == 1) return best_on_grid(*cs[0], cell_cap, h);
  if (k == 2) {
    double best = 0.0;
    for (double q = 0.0; q <= std::min(indiv, shared) + 1e-12; q += h)
      best = std::max(best, cs[0]->eval(q) +
                                best_on_grid(*cs[1], std::min(indiv, shared - q), h));
    return best;
  }
  double best = 0.0;
  for (double q0 = 0.0; q0 <= std::min(indiv, shared) + 1e-12; q0 += h)
    for (double q1 = 0.0; q1 <= std::min(indiv, shared - q0) + 1e-12; q1 += h) {
      double base = cs[0]->eval(q0) + cs[1]->eval(q1);
      double left = shared - q0 - q1;
      double rest = (k == 3) ? best_on_grid(*cs[2], std::min(indiv, left), h)
                             : pair_fill(*cs[2], indiv, *cs[3], indiv, left);
      best = std::max(best, base + rest);
    }
  return best;
}

}  // namespace

CheckResult check_exante_grid() {
  const std::string name = "exante-grid-exhaustive";
  Rng rng(2002);
  const int shapes[][2] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {1, 4}, {4, 1}, {2, 2}};
  double worst = 0.0;
  for (const auto& sh : shapes)
    for (int rep = 0; rep < 3; ++rep) {
      ProductPrior prior = rand_prior(rng, sh[0], sh[1], 4, 3.0);
      std::vector<std::vector<RevenueCurve>> curves(sh[0]);
      for (int i = 0; i < sh[0]; ++i)
        for (int j = 0; j < sh[1]; ++j) curves[i].push_back(revenue_curve(prior.cell(i, j)));
      double lp = solve_exante(curves, 0.5, 0.5).objective;
      double ref = grid_reference(curves, 0.5, 0.5, 1e-3);
      double gap = std::fabs(lp - ref);
      worst = std::max(worst, gap);
      if (gap > 1e-3)
        return fail(name, "shape " + std::to_string(sh[0]) + "x" + std::to_string(sh[1]) +
                              " gap " + fmt(gap));
    }
  return pass(name, "24 instances, worst LP-vs-grid gap " + fmt(worst));
}

CheckResult check_prices_to_spm_bound() {
  const std::string name = "rspm-eta-bound";
  Rng rng(3003);
  double worst_margin = 1e18;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + (int)(rng.bits() % 2), m = 1 + (int)(rng.bits() % 2);
    ProductPrior prior = rand_prior(rng, n, m, 3, 3.0);
    UdMaxminResult res = learn_ud_maxmin(prior, 0.0);
    RspmBound bound = rspm_bound(res.mech, prior);
    double exact = expected_revenue_exact(res.mech, prior, Valuation::unit_demand(m));
    worst_margin = std::min(worst_margin, exact - bound.bound);
    if (exact < bound.bound - 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": revenue " + fmt(exact) +
                            " < bound " + fmt(bound.bound));
  }
  return pass(name, "200 instances, min revenue-minus-bound margin " + fmt(worst_margin));
}

namespace {

ProductPrior chain_instance(Rng& rng) {
  int n = 1 + (int)(rng.bits() % 2), m = 1 + (int)(rng.bits() % 2);
  return rand_prior(rng, n, m, 3, 3.0);
}

}  // namespace

CheckResult check_ud_chain_exact() {
  const std::string name = "ud-chain-eps0";
  Rng rng(4004);
  for (int trial = 0; trial < 50; ++trial) {
    ProductPrior prior = chain_instance(rng);
    Valuation val = Valuation::unit_demand(prior.m);
    UdMaxminResult res = learn_ud_maxmin(prior, 0.0);
    double rev = expected_revenue_exact(res.mech, prior, val);
    if (rev < res.sol.objective / 4.0 - 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": revenue " + fmt(rev) +
                            " < CP*/4 = " + fmt(res.sol.objective / 4.0));
    double opt = opt_bic_lp(prior, val).revenue;
    if (res.sol.objective < opt / 8.0 - 1e-6)
      return fail(name, "trial " + std::to_string(trial) + ": CP* " + fmt(res.sol.objective) +
                            " < OPT/8 = " + fmt(opt / 8.0));
  }
  return pass(name, "50 instances: revenue >= CP*/4 and CP* >= OPT/8");
}

CheckResult check_ud_chain_perturbed() {
  const std::string name = "ud-chain-maxmin";
  Rng rng(4004);  // same instances as the eps = 0 check
  Rng prng(5005);
  const double eps = 0.01;
  for (int trial = 0; trial < 50; ++trial) {
    ProductPrior prior = chain_instance(rng);
    Valuation val = Valuation::unit_demand(prior.m);
    ProductPrior dhat = prior;
    for (auto& row : dhat.cells)
      for (auto& d : row) d = perturb_probs(d, eps, prng);
    double xi = 0.0;
    for (int i = 0; i < prior.n; ++i)
      for (int j = 0; j < prior.m; ++j)
        xi = std::max(xi, kolmogorov_distance(prior.cell(i, j), dhat.cell(i, j)));
    require(xi <= eps + 1e-12, "perturbation exceeded eps");
    UdMaxminResult res = learn_ud_maxmin(dhat, eps);
    double rev = expected_revenue_exact(res.mech, prior, val);
    double opt = opt_bic_lp(prior, val).revenue;
    double bound = res.guarantee(opt, max_support_value(prior));
    if (rev < bound - 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": revenue " + fmt(rev) +
                            " < guarantee " + fmt(bound));
  }
  return pass(name, "50 perturbed instances satisfy the max-min guarantee");
}

CheckResult check_srev_brev() {
  const std::string name = "opt-vs-6srev-2brev";
  Rng rng(6006);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + (int)(rng.bits() % 2), m = 1 + (int)(rng.bits() % 2);
    ProductPrior prior = rand_prior(rng, n, m, 2, 3.0);
    double opt = opt_bic_lp(prior, Valuation::additive(m)).revenue;
    double srev = srev_star(prior);
    double brev = brev_star(prior);
    if (opt > 6.0 * srev + 2.0 * brev + 1e-6)
      return fail(name, "trial " + std::to_string(trial) + ": OPT " + fmt(opt) + " > 6*" +
                            fmt(srev) + " + 2*" + fmt(brev));
  }
  return pass(name, "50 additive instances: OPT <= 6 SRev + 2 BRev");
}

namespace {

// purchased-set distribution of one bidder facing (prices, fee, S)
std::map<Mask, double> purchased_set_dist(const std::vector<Marginal>& row, const Valuation& val,
                                          const std::vector<double>& prices, double fee,
                                          Mask S) {
  std::map<Mask, double> dist;
  std::vector<std::vector<std::pair<ItemSignal, double>>> atoms;
  for (const auto& d : row) atoms.push_back(d.enumerate());
  int m = (int)row.size();
  std::vector<int> idx(m, 0);
  while (true) {
    TypeRow t(m);
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      t[j] = atoms[j][idx[j]].first;
      p *= atoms[j][idx[j]].second;
    }
    Mask buy = 0;
    if (best_utility(val, t, prices, S) >= fee - 1e-12) buy = demand(val, t, prices, S);
    dist[buy] += p;
    int j = m - 1;
    while (j >= 0 && ++idx[j] == (int)atoms[j].size()) idx[j--] = 0;
    if (j < 0) break;
  }
  return dist;
}

}  // namespace

CheckResult check_stable_demand_set() {
  const std::string name = "purchased-set-tv";
  Rng rng(7007);
  double worst = -1e18;
  for (int trial = 0; trial < 100; ++trial) {
    int m = 2 + (int)(rng.bits() % 2);
    std::vector<Marginal> row, rowh;
    double xi = 0.0;
    for (int j = 0; j < m; ++j) {
      row.push_back(rand_marginal(rng, 3, 3.0));
      rowh.push_back(perturb_probs(row.back(), 0.05, rng));
      xi = std::max(xi, kolmogorov_distance(row.back(), rowh.back()));
    }
    Valuation val = (rng.bits() & 1) ? Valuation::cardinality(m, 1 + (int)(rng.bits() % 2))
                                     : Valuation::explicit_sets(m, {Mask(1), Mask(m == 3 ? 6 : 2)});
    std::vector<double> prices(m);
    for (double& p : prices) p = rng.uniform(0.0, 3.0);
    double fee = rng.uniform(0.0, 2.0);
    Mask S = 1 + (Mask)(rng.bits() % ((1u << m) - 1));
    auto a = purchased_set_dist(row, val, prices, fee, S);
    auto b = purchased_set_dist(rowh, val, prices, fee, S);
    double tv = 0.0;
    for (const auto& [s, p] : a) tv += std::fabs(p - (b.count(s) ? b[s] : 0.0));
    for (const auto& [s, p] : b)
      if (!a.count(s)) tv += p;
    tv /= 2.0;
    worst = std::max(worst, tv - 2.0 * m * xi);
    if (tv > 2.0 * m * xi + 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": TV " + fmt(tv) + " > 2m*xi " +
                            fmt(2.0 * m * xi));
  }
  return pass(name, "100 pairs, worst TV minus bound " + fmt(worst));
}

CheckResult check_revenue_stability() {
  const std::string name = "spem-revenue-stability";
  Rng rng(8008);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2, m = 2;
    ProductPrior prior = rand_prior(rng, n, m, 2, 3.0);
    ProductPrior dhat = prior;
    double xi = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        dhat.cells[i][j] = perturb_probs(prior.cell(i, j), 0.02, rng);
        xi = std::max(xi, kolmogorov_distance(prior.cell(i, j), dhat.cell(i, j)));
      }
    Valuation val = Valuation::cardinality(m, 1 + (int)(rng.bits() % 2));

    Mechanism mech;
    mech.tag = Mechanism::Tag::Spem;
    mech.n = n;
    mech.m = m;
    mech.lotteries.assign(n, std::vector<Lottery>(m));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        mech.lotteries[i][j] = Lottery::deterministic(rng.uniform(0.0, 3.0), 0.0);
    mech.fee.mode = EntryFeeRule::Mode::Table;
    mech.fee.table.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (Mask s = 0; s < (Mask(1) << m); ++s) mech.fee.table[i][s] = rng.uniform(0.0, 1.0);

    double rev_d = expected_revenue_exact(mech, prior, val);
    double rev_dh = expected_revenue_exact(mech, dhat, val);
    double opt = opt_bic_lp(prior, val).revenue;
    double bound = 2.0 * n * m * xi * (m * max_support_value(prior) + opt);
    if (std::fabs(rev_d - rev_dh) > bound + 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": |dRev| " +
                            fmt(std::fabs(rev_d - rev_dh)) + " > " + fmt(bound));
  }
  return pass(name, "50 SPEM instances within the 2nm*xi(mH+OPT) envelope");
}

CheckResult check_single_intersecting() {
  const std::string name = "single-intersecting-gap";
  Rng rng(9009);
  double worst = -1e18;
  for (int trial = 0; trial < 200; ++trial) {
    int ell = 1 + (int)(rng.bits() % 4);
    GridEvent e;
    std::vector<std::vector<double>> d, dh;
    double xi = 0.0;
    for (int a = 0; a < ell; ++a) {
      int g = 2 + (int)(rng.bits() % 3);
      e.grids.push_back(rand_support(rng, g, 3.0));
      Marginal da = Marginal::discrete(e.grids.back(), rand_probs(rng, g));
      Marginal db = perturb_probs(da, 0.05, rng);
      xi = std::max(xi, kolmogorov_distance(da, db));
      d.push_back(da.probs);
      dh.push_back(db.probs);
    }
    // random upward-closed event (union of corner up-sets), optionally
    // complemented; both intersect every axis-parallel line in one run
    e.cells.assign(e.size(), 0);
    int corners = 1 + (int)(rng.bits() % 3);
    std::vector<std::vector<int>> cs(corners, std::vector<int>(ell));
    for (auto& c : cs)
      for (int a = 0; a < ell; ++a) c[a] = (int)(rng.bits() % e.grids[a].size());
    std::vector<int> idx(ell, 0);
    bool flip = rng.bits() & 1;
    while (true) {
      bool in = false;
      for (const auto& c : cs) {
        bool dom = true;
        for (int a = 0; a < ell; ++a) dom = dom && idx[a] >= c[a];
        in = in || dom;
      }
      e.cells[e.flat_index(idx)] = (in != flip) ? 1 : 0;
      int a = ell - 1;
      while (a >= 0 && ++idx[a] == (int)e.grids[a].size()) idx[a--] = 0;
      if (a < 0) break;
    }
    if (!is_single_intersecting(e))
      return fail(name, "trial " + std::to_string(trial) + ": monotone event not recognized");
    double gap = event_prob_gap(e, d, dh);
    worst = std::max(worst, gap - 2.0 * xi * ell);
    if (gap > 2.0 * xi * ell + 1e-12)
      return fail(name, "trial " + std::to_string(trial) + ": gap " + fmt(gap) + " > " +
                            fmt(2.0 * xi * ell));
  }
  // the two-box counterexample must be rejected
  GridEvent boxes;
  boxes.grids = {{0.0, 1.0, 1.5, 2.0, 3.0}, {0.0, 1.0}};
  boxes.cells.assign(boxes.size(), 0);
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 2; ++y)
      if (x != 2) boxes.cells[boxes.flat_index({x, y})] = 1;
  if (is_single_intersecting(boxes)) return fail(name, "two-box event wrongly accepted");
  return pass(name, "200 events, worst gap minus bound " + fmt(worst) + "; two-box rejected");
}

CheckResult check_dkw() {
  const std::string name = "dkw-empirical";
  const int K = 10000, trials = 10000;
  const double eps = 0.05;
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::split(10010, t);
    int zeros = 0;
    for (int k = 0; k < K; ++k)
      if (rng.uniform01() < 0.5) ++zeros;
    // {0:0.5, 1:0.5}: the empirical Kolmogorov distance is |#0/K - 0.5|
    if (std::fabs(zeros / (double)K - 0.5) > eps) ++violations;
  }
  double p = 2.0 * std::exp(-2.0 * K * eps * eps);
  double allowed = trials * p + 3.0 * std::sqrt(trials * p * (1.0 - p));
  if (violations > allowed)
    return fail(name, std::to_string(violations) + " violations > allowed " + fmt(allowed));
  return pass(name, std::to_string(violations) + " violations in " + std::to_string(trials) +
                        " trials (allowed " + fmt(allowed) + ")");
}

namespace {

ProductPrior xos_prior(Rng& rng, int n, int m, int atoms, double vmin, double vmax,
                       bool equiprob = false) {
  ProductPrior prior;
  prior.n = n;
  prior.m = m;
  prior.symmetric = false;
  prior.cells.assign(n, std::vector<Marginal>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<ItemSignal> as(atoms);
      for (auto& a : as) a.v = {rng.uniform(vmin, vmax), rng.uniform(vmin, vmax)};
      std::vector<double> pr = equiprob ? std::vector<double>(atoms, 1.0 / atoms)
                                        : rand_probs(rng, atoms);
      prior.cells[i][j] = Marginal::with_atoms(std::move(as), std::move(pr));
    }
  return prior;
}

}  // namespace

CheckResult check_mu_balance() {
  const std::string name = "mu-balanced-medians";
  const double mu = 0.125, eta = 0.1;
  const int n = 2, m = 2;
  Rng grng(11011);
  // clause values sit strictly above every net price so utilities never clamp
  // at zero, and 64 equiprobable atoms keep each utility atom's mass well
  // below mu (the upper median can overshoot by one atom of mass)
  ProductPrior prior = xos_prior(grng, n, m, 64, 1.05, 3.0, true);
  Valuation val = Valuation::xos(m, 2);
  EpsilonNet net = epsilon_net(1.0, 0.5, m);
  int K = (int)std::ceil(
      (std::log(1.0 / eta) + std::log((double)n) + m * std::log(net.B / net.step)) / (mu * mu));

  // per-bidder exact type rows for the acceptance probabilities
  std::vector<std::vector<std::pair<TypeRow, double>>> rows(n);
  for (int i = 0; i < n; ++i)
    for (const auto& [a0, p0] : prior.cell(i, 0).enumerate())
      for (const auto& [a1, p1] : prior.cell(i, 1).enumerate())
        rows[i].push_back({{a0, a1}, p0 * p1});

  long long audited = 0, violated = 0;
  for (int seed = 0; seed < 100; ++seed) {
    auto batch = sample(prior, Rng::derive(12012, seed), K);
    for (long long idx = 0; idx < net.size(); ++idx) {
      std::vector<double> prices = net.at(idx);
      for (int i = 0; i < n; ++i)
        for (Mask S = 1; S < (Mask(1) << m); ++S) {
          std::vector<double> us;
          for (const auto& prof : batch) us.push_back(best_utility(val, prof.row(i), prices, S));
          double delta = upper_median(us);
          double acc = 0.0;
          for (const auto& [t, p] : rows[i])
            if (best_utility(val, t, prices, S) >= delta - 1e-12) acc += p;
          ++audited;
          if (acc < 0.5 - mu - 1e-9 || acc > 0.5 + mu + 1e-9) ++violated;
        }
    }
  }
  double sigma = std::sqrt(eta * (1.0 - eta) / (double)audited);
  double frac = violated / (double)audited;
  if (frac > eta + 3.0 * sigma)
    return fail(name, "violation fraction " + fmt(frac) + " > " + fmt(eta + 3.0 * sigma));
  return pass(name, "violation fraction " + fmt(frac) + " over " + std::to_string(audited) +
                        " audits (allowed " + fmt(eta + 3.0 * sigma) + ")");
}

CheckResult check_best_aspe() {
  const std::string name = "best-aspe-selection";
  const double B = 1.5, step = 0.25;
  const int fee_batch = 200, sel_batch = 4000;
  for (int inst = 0; inst < 3; ++inst) {
    Rng grng(13013 + inst);
    ProductPrior prior = xos_prior(grng, 2, 2, 3, 0.01, 1.4);
    Valuation val = Valuation::xos(2, 2);
    uint64_t seed = 14014 + inst;
    XosSampleResult res = learn_xos_sample(prior, val, B, step, fee_batch, sel_batch, seed);

    EpsilonNet net = epsilon_net(B, step, prior.m);
    auto fees = sample(prior, Rng::derive(seed, 1), fee_batch);
    std::vector<std::vector<TypeRow>> fee_rows(prior.n);
    for (int i = 0; i < prior.n; ++i)
      for (const auto& prof : fees) fee_rows[i].push_back(prof.row(i));

    double max_exact = -1.0, selected_exact = 0.0, max_fee = 0.0;
    Mask full = (Mask(1) << prior.m) - 1;
    for (long long idx = 0; idx < net.size(); ++idx) {
      Mechanism mech;
      mech.tag = Mechanism::Tag::Aspe;
      mech.n = prior.n;
      mech.m = prior.m;
      mech.item_prices = net.at(idx);
      mech.fee.mode = EntryFeeRule::Mode::MedianSamples;
      mech.fee.samples = fee_rows;
      double exact = expected_revenue_exact(mech, prior, val);
      for (int i = 0; i < prior.n; ++i)
        max_fee = std::max(max_fee, mech.fee.fee(i, full, val, mech.item_prices));
      max_exact = std::max(max_exact, exact);
      if (idx == res.best_index) selected_exact = exact;
    }
    double eps_dev = std::sqrt(std::log(2.0 * (double)net.size() / 0.05) / (2.0 * sel_batch));
    double rmax = prior.m * B + prior.n * max_fee;
    if (selected_exact < max_exact - 2.0 * rmax * eps_dev - 1e-9)
      return fail(name, "instance " + std::to_string(inst) + ": selected " + fmt(selected_exact) +
                            " < max " + fmt(max_exact) + " - 2*Rmax*eps' " +
                            fmt(2.0 * rmax * eps_dev));
  }
  return pass(name, "3 nets of size 36: selection within 2*Rmax*eps'");
}

namespace {

// symmetric scalar prior whose per-item value tails can hit [b/n, b/(n-1)]
ProductPrior symmetric_scalar_prior(Rng& rng, int n, int m) {
  std::vector<Marginal> row(m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> sup = rand_support(rng, 3, 3.0);
    row[j] = Marginal::discrete(sup, {0.5, 0.25, 0.25});  // tails 1, 0.5, 0.25
  }
  ProductPrior prior;
  prior.n = n;
  prior.m = m;
  prior.symmetric = true;
  prior.cells.assign(n, row);
  return prior;
}

// symmetric prior of table-index signals plus a random monotone
// subadditive two-item table
std::pair<ProductPrior, Valuation> symmetric_table_instance(Rng& rng, int n) {
  int m = 2;
  std::vector<int> sizes = {2, 2};
  // single-item values per signal index
  std::vector<std::vector<double>> item_vals(m);
  for (int j = 0; j < m; ++j) item_vals[j] = rand_support(rng, 2, 3.0);
  std::vector<std::vector<double>> table(4, std::vector<double>(4, 0.0));
  for (int k0 = 0; k0 < 2; ++k0)
    for (int k1 = 0; k1 < 2; ++k1) {
      int t = k0 * 2 + k1;
      double v0 = item_vals[0][k0], v1 = item_vals[1][k1];
      table[t][1] = v0;
      table[t][2] = v1;
      table[t][3] = std::max(v0, v1) + rng.uniform01() * std::min(v0, v1);
    }
  Valuation val = Valuation::subadd_table(m, sizes, table);

  std::vector<Marginal> row(m);
  for (int j = 0; j < m; ++j)
    row[j] = Marginal::with_atoms({{{0.0}}, {{1.0}}}, {0.75, 0.25});  // tails 1, 0.25
  ProductPrior prior;
  prior.n = n;
  prior.m = m;
  prior.symmetric = true;
  prior.cells.assign(n, row);
  return {prior, val};
}

}  // namespace

CheckResult check_symmetric_subadditive() {
  const std::string name = "symmetric-subadditive-chain";
  Rng rng(15015);
  const int n = 2, m = 2;
  double Z = std::max(n, m);
  double b = n / (3.0 * Z);
  for (int trial = 0; trial < 30; ++trial) {
    bool tables = trial % 2 == 1;
    ProductPrior prior;
    Valuation val = Valuation::additive(m);
    if (tables) {
      auto [p, v] = symmetric_table_instance(rng, n);
      prior = p;
      val = v;
    } else {
      prior = symmetric_scalar_prior(rng, n, m);
      val = Valuation::cardinality(m, 1 + (int)(rng.bits() % 2));
    }
    // n/(3Z)-balanced thresholds from the exact induced value distributions
    ProductPrior induced = induced_unit_demand(prior, val);
    std::vector<double> beta(m);
    double beta_sum = 0.0;
    for (int j = 0; j < m; ++j) {
      beta[j] = tail_threshold(induced.cell(0, j), b / n, b / (n - 1.0));
      beta_sum += beta[j];
    }
    double core = exact_core(prior, val, beta);
    if (core > beta_sum + 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": core " + fmt(core) +
                            " > sum(beta) " + fmt(beta_sum));
    Mechanism rspm = beta_priced_rspm(n, m, beta);
    double rev = expected_revenue_exact(rspm, prior, val);
    double floor_bound = (n / (9.0 * Z)) * beta_sum;
    if (rev < floor_bound - 1e-9)
      return fail(name, "trial " + std::to_string(trial) + ": beta-RSPM revenue " + fmt(rev) +
                            " < " + fmt(floor_bound));
    if (!tables) {
      double opt = opt_bic_lp(prior, val).revenue;
      double post = opt_posted_exhaustive(prior, val, Mechanism::Tag::Rspm).second;
      double cap = (24.0 + 36.0 * Z / n) * post;
      if (opt > cap + 1e-6)
        return fail(name, "trial " + std::to_string(trial) + ": OPT " + fmt(opt) + " > " +
                              fmt(cap));
    }
  }
  return pass(name, "30 symmetric instances satisfy the core / RSPM / OPT chain");
}

CheckResult check_sample_bound_table() {
  const std::string name = "partition-vmax-scaling";
  for (int d : {2, 4, 8}) {
    ComplexityTable rect;
    rect.mode = ComplexityTable::Mode::Vc;
    rect.d = d;
    for (Mask t = 1; t < (Mask(1) << d); ++t) rect.vc[t] = 2.0 * popcount(t);
    PartitionBound rb = sample_bound_partition(rect, 0.1, 0.1);
    if (rb.v_max != 2.0 * d || rb.partition.size() != 1)
      return fail(name, "rectangles d=" + std::to_string(d) + ": V_max " + fmt(rb.v_max) +
                            " != 2d");
    ComplexityTable conv;
    conv.mode = ComplexityTable::Mode::Vc;
    conv.d = d;
    for (int a = 0; a < d; ++a) conv.vc[Mask(1) << a] = 2.0;  // per-axis intervals only
    PartitionBound cb = sample_bound_partition(conv, 0.1, 0.1);
    if (cb.v_max != 2.0 * d * d || (int)cb.partition.size() != d)
      return fail(name, "convex d=" + std::to_string(d) + ": V_max " + fmt(cb.v_max) +
                            " != 2d^2");
  }
  // DKW singleton arithmetic at eps = delta = 0.1 over two axes
  ComplexityTable dkw;
  dkw.mode = ComplexityTable::Mode::SampleFn;
  dkw.d = 2;
  dkw.s_fn = [](Mask t, double e, double del) -> double {
    if (popcount(t) != 1) return -1.0;
    return std::ceil(std::log(2.0 / del) / (2.0 * e * e));
  };
  PartitionBound db = sample_bound_partition(dkw, 0.1, 0.1);
  if (db.bound != 738.0)
    return fail(name, "DKW bound " + fmt(db.bound) + " != 738");
  return pass(name, "rectangles scale as 2d, per-axis intervals as 2d^2; DKW bound 738");
}

std::vector<CheckResult> run_all_checks() {
  using Fn = CheckResult (*)();
  const Fn fns[] = {check_curve_oracle,        check_exante_grid,
                    check_prices_to_spm_bound, check_ud_chain_exact,
                    check_ud_chain_perturbed,  check_srev_brev,
                    check_stable_demand_set,   check_revenue_stability,
                    check_single_intersecting, check_dkw,
                    check_mu_balance,          check_best_aspe,
                    check_symmetric_subadditive, check_sample_bound_table};
  std::vector<CheckResult> out;
  for (Fn fn : fns) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({"(exception)", false, e.what()});
    }
  }
  return out;
}

}  // namespace rev
