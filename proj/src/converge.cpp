#include "rev/converge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rev {

long long GridEvent::size() const {
  long long s = 1;
  for (const auto& g : grids) s *= (long long)g.size();
  return s;
}

long long GridEvent::flat_index(const std::vector<int>& idx) const {
  long long f = 0;
  for (size_t a = 0; a < grids.size(); ++a) f = f * (long long)grids[a].size() + idx[a];
  return f;
}

bool GridEvent::member(const std::vector<int>& idx) const { return cells[flat_index(idx)] != 0; }

bool is_single_intersecting(const GridEvent& e) {
  int ell = e.ell();
  std::vector<int> idx(ell, 0);
  for (int axis = 0; axis < ell; ++axis) {
    std::fill(idx.begin(), idx.end(), 0);
    // iterate over all lines parallel to `axis`
    while (true) {
      int runs = 0;
      bool prev = false;
      for (int k = 0; k < (int)e.grids[axis].size(); ++k) {
        idx[axis] = k;
        bool cur = e.member(idx);
        if (cur && !prev) ++runs;
        prev = cur;
      }
      idx[axis] = 0;
      if (runs > 1) return false;
      int a = ell - 1;
      while (a >= 0) {
        if (a == axis) { --a; continue; }
        if (++idx[a] < (int)e.grids[a].size()) break;
        idx[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
  }
  return true;
}

double event_prob_gap(const GridEvent& e, const std::vector<std::vector<double>>& d,
                      const std::vector<std::vector<double>>& dhat) {
  int ell = e.ell();
  for (int a = 0; a < ell; ++a) {
    require(d[a].size() == e.grids[a].size() && dhat[a].size() == e.grids[a].size(),
            "event_prob_gap: weight vector shape mismatch");
  }
  double pd = 0.0, pdh = 0.0;
  std::vector<int> idx(ell, 0);
  while (true) {
    if (e.member(idx)) {
      double wd = 1.0, wdh = 1.0;
      for (int a = 0; a < ell; ++a) {
        wd *= d[a][idx[a]];
        wdh *= dhat[a][idx[a]];
      }
      pd += wd;
      pdh += wdh;
    }
    int a = ell - 1;
    while (a >= 0 && ++idx[a] == (int)e.grids[a].size()) idx[a--] = 0;
    if (a < 0) break;
  }
  return std::fabs(pd - pdh);
}

std::vector<double> axis_weights(const Marginal& d, const std::vector<double>& grid) {
  std::vector<double> w(grid.size(), 0.0);
  for (const auto& [sig, p] : d.enumerate()) {
    double x = sig.scalar();
    auto it = std::lower_bound(grid.begin(), grid.end(), x - 1e-12);
    require(it != grid.end() && std::fabs(*it - x) <= 1e-9,
            "axis_weights: marginal not supported on the grid");
    w[it - grid.begin()] += p;
  }
  return w;
}

GridEvent surplus_event(const std::vector<Marginal>& row, const std::vector<double>& prices,
                        double x) {
  GridEvent e;
  for (const auto& d : row) {
    require(d.kind == Marginal::Kind::Discrete, "surplus_event: discrete marginals only");
    e.grids.push_back(d.support);
  }
  e.cells.assign(e.size(), 0);
  int ell = e.ell();
  std::vector<int> idx(ell, 0);
  while (true) {
    double s = 0.0;
    for (int a = 0; a < ell; ++a) s += std::max(0.0, e.grids[a][idx[a]] - prices[a]);
    if (s >= x - 1e-12) e.cells[e.flat_index(idx)] = 1;
    int a = ell - 1;
    while (a >= 0 && ++idx[a] == (int)e.grids[a].size()) idx[a--] = 0;
    if (a < 0) break;
  }
  return e;
}

PartitionBound sample_bound_partition(const ComplexityTable& tbl, double eps, double delta) {
  require(tbl.d >= 1 && tbl.d <= 12, "sample_bound_partition: 1 <= d <= 12");
  require(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0,
          "sample_bound_partition: eps, delta in (0,1)");

  PartitionBound best;
  best.bound = std::numeric_limits<double>::infinity();
  bool any = false;

  // restricted growth strings enumerate all set partitions of [d]
  std::vector<int> rgs(tbl.d, 0);
  auto eval = [&](const std::vector<Mask>& blocks) {
    double k = (double)blocks.size();
    double bound;
    double vmax = 0.0;
    if (tbl.mode == ComplexityTable::Mode::Vc) {
      double mx = 0.0;
      for (Mask t : blocks) {
        auto it = tbl.vc.find(t);
        if (it == tbl.vc.end()) return;  // partition not covered by the table
        mx = std::max(mx, it->second);
      }
      vmax = k * k * mx;
      bound = (vmax / (eps * eps)) * std::log(k / eps) +
              (k * k / (eps * eps)) * std::log(k / delta);
    } else {
      double mx = 0.0;
      for (Mask t : blocks) {
        double s = tbl.s_fn(t, eps / k, delta / k);
        if (!(s >= 0.0)) return;  // negative / NaN marks a missing entry
        mx = std::max(mx, s);
      }
      bound = mx;
    }
    any = true;
    if (bound < best.bound) {
      best.bound = bound;
      best.partition = blocks;
      best.v_max = vmax;
    }
  };

  std::function<void(int, int)> rec = [&](int pos, int maxblk) {
    if (pos == tbl.d) {
      std::vector<Mask> blocks(maxblk + 1, 0);
      for (int i = 0; i < tbl.d; ++i) blocks[rgs[i]] |= Mask(1) << i;
      eval(blocks);
      return;
    }
    for (int blk = 0; blk <= maxblk + 1; ++blk) {
      rgs[pos] = blk;
      rec(pos + 1, std::max(maxblk, blk));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  require(any, "incomplete-table: no partition is covered by the complexity table");
  return best;
}

}  // namespace rev
