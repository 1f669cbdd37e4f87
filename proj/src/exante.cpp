#include "rev/exante.hpp"

#include <algorithm>
#include <cmath>

namespace rev {

ExAnteSolution solve_exante(const std::vector<std::vector<RevenueCurve>>& curves,
                            double row_cap, double col_cap, const std::string& tag) {
  require(row_cap > 0.0 && col_cap > 0.0, "solve_exante: infeasible caps <= 0");
  int n = (int)curves.size();
  require(n > 0 && !curves[0].empty(), "solve_exante: empty curve grid");
  int m = (int)curves[0].size();

  // variables: one amount per curve segment, bounded by the segment width
  struct Seg {
    int i, j;
    double width, slope;
  };
  std::vector<Seg> segs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const auto& pts = curves[i][j].pts;
      for (size_t k = 0; k + 1 < pts.size(); ++k) {
        double w = pts[k + 1].q - pts[k].q;
        if (w <= 0.0) continue;
        segs.push_back({i, j, w, (pts[k + 1].r - pts[k].r) / w});
      }
    }

  size_t nv = segs.size();
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  for (size_t s = 0; s < nv; ++s) {  // segment capacity
    std::vector<double> row(nv, 0.0);
    row[s] = 1.0;
    A.push_back(std::move(row));
    b.push_back(segs[s].width);
  }
  for (int i = 0; i < n; ++i) {  // row caps
    std::vector<double> row(nv, 0.0);
    for (size_t s = 0; s < nv; ++s)
      if (segs[s].i == i) row[s] = 1.0;
    A.push_back(std::move(row));
    b.push_back(row_cap);
  }
  for (int j = 0; j < m; ++j) {  // column caps
    std::vector<double> row(nv, 0.0);
    for (size_t s = 0; s < nv; ++s)
      if (segs[s].j == j) row[s] = 1.0;
    A.push_back(std::move(row));
    b.push_back(col_cap);
  }
  std::vector<double> c(nv);
  for (size_t s = 0; s < nv; ++s) c[s] = segs[s].slope;

  LpResult res = lp_solve_max(A, b, c);
  require(res.optimal, "solve_exante: LP did not reach optimality");

  ExAnteSolution sol;
  sol.tag = tag;
  sol.objective = res.objective;
  sol.q.assign(n, std::vector<double>(m, 0.0));
  for (size_t s = 0; s < nv; ++s) sol.q[segs[s].i][segs[s].j] += res.x[s];
  // clip tiny negative noise; caps are already enforced by the LP
  for (auto& row : sol.q)
    for (double& v : row) v = std::clamp(v, 0.0, 1.0);
  return sol;
}

std::vector<std::vector<Lottery>> solution_to_lotteries(
    const ExAnteSolution& sol, const std::vector<std::vector<RevenueCurve>>& curves) {
  int n = (int)sol.q.size(), m = (int)sol.q[0].size();
  std::vector<std::vector<Lottery>> lots(n, std::vector<Lottery>(m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) lots[i][j] = curves[i][j].lottery_at(sol.q[i][j]);
  return lots;
}

Mechanism lotteries_to_rspm(std::vector<std::vector<Lottery>> lots, std::vector<int> order) {
  Mechanism mech;
  mech.tag = Mechanism::Tag::Rspm;
  mech.n = (int)lots.size();
  mech.m = (int)lots[0].size();
  mech.lotteries = std::move(lots);
  mech.order = std::move(order);
  return mech;
}

RspmBound rspm_bound(const Mechanism& mech, const ProductPrior& prior) {
  RspmBound out;
  std::vector<double> row_sale(mech.n, 0.0), col_sale(mech.m, 0.0);
  for (int i = 0; i < mech.n; ++i)
    for (int j = 0; j < mech.m; ++j) {
      const Lottery& l = mech.lotteries[i][j];
      const Marginal& d = prior.cell(i, j);
      double sale = l.x * d.tail(l.price_lo_q) + (1.0 - l.x) * d.tail(l.price_hi_q);
      double rev = l.x * l.price_lo_q * d.tail(l.price_lo_q) +
                   (1.0 - l.x) * l.price_hi_q * d.tail(l.price_hi_q);
      row_sale[i] += sale;
      col_sale[j] += sale;
      out.price_revenue_sum += rev;
    }
  out.eta1 = 1.0 - *std::max_element(col_sale.begin(), col_sale.end());
  out.eta2 = 1.0 - *std::max_element(row_sale.begin(), row_sale.end());
  out.vacuous = out.eta1 <= 0.0 || out.eta2 <= 0.0;
  out.bound = out.eta1 * out.eta2 * out.price_revenue_sum;
  if (out.vacuous) out.bound = 0.0;
  return out;
}

}  // namespace rev
