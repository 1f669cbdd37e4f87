#include "rev/lp.hpp"

#include <cmath>
#include <limits>

namespace rev {

namespace {
constexpr double kPivEps = 1e-9;
}

LpResult lp_solve_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                      const std::vector<double>& c) {
  const size_t m = A.size();
  const size_t n = c.size();
  for (size_t r = 0; r < m; ++r) {
    require(A[r].size() == n, "lp_solve_max: row width mismatch");
    require(b[r] >= -kPivEps, "lp_solve_max: b >= 0 required (slack basis start)");
  }

  // tableau: m rows x (n structural + m slack + 1 rhs), plus objective row
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(n + m + 1, 0.0));
  for (size_t r = 0; r < m; ++r) {
    for (size_t j = 0; j < n; ++j) T[r][j] = A[r][j];
    T[r][n + r] = 1.0;
    T[r][n + m] = std::max(b[r], 0.0);
  }
  for (size_t j = 0; j < n; ++j) T[m][j] = -c[j];  // maximize

  std::vector<size_t> basis(m);
  for (size_t r = 0; r < m; ++r) basis[r] = n + r;

  LpResult res;
  const size_t max_iter = 100000 + 500 * (n + m);
  size_t iter = 0;
  // Dantzig rule with a switch to Bland after a burn-in to stop any cycling
  for (; iter < max_iter; ++iter) {
    bool bland = iter > 5000 + 20 * (n + m);
    size_t piv_col = SIZE_MAX;
    double best = -kPivEps;
    for (size_t j = 0; j < n + m; ++j) {
      if (T[m][j] < -kPivEps) {
        if (bland) { piv_col = j; break; }
        if (T[m][j] < best) { best = T[m][j]; piv_col = j; }
      }
    }
    if (piv_col == SIZE_MAX) break;  // optimal

    // ratio test; prefer pivots of decent magnitude (tiny pivots wreck the
    // tableau numerically), falling back to the loose tolerance only if no
    // well-scaled row is eligible
    double min_ratio = std::numeric_limits<double>::infinity();
    double piv_tol = 1e-7;
    for (int pass = 0; pass < 2 && !std::isfinite(min_ratio); ++pass) {
      if (pass == 1) piv_tol = kPivEps;
      for (size_t r = 0; r < m; ++r)
        if (T[r][piv_col] > piv_tol)
          min_ratio = std::min(min_ratio, T[r][n + m] / T[r][piv_col]);
    }
    if (!std::isfinite(min_ratio)) {
      res.unbounded = true;
      return res;
    }
    // among (near-)tied minimum-ratio rows pick the largest pivot element for
    // stability, or the smallest basis index in the anti-cycling phase
    size_t piv_row = SIZE_MAX;
    double ratio_tol = 1e-9 * (1.0 + std::fabs(min_ratio));
    for (size_t r = 0; r < m; ++r) {
      if (T[r][piv_col] <= piv_tol) continue;
      if (T[r][n + m] / T[r][piv_col] > min_ratio + ratio_tol) continue;
      if (piv_row == SIZE_MAX ||
          (bland ? basis[r] < basis[piv_row] : T[r][piv_col] > T[piv_row][piv_col]))
        piv_row = r;
    }

    double p = T[piv_row][piv_col];
    for (double& v : T[piv_row]) v /= p;
    for (size_t r = 0; r <= m; ++r) {
      if (r == piv_row) continue;
      double f = T[r][piv_col];
      if (std::fabs(f) <= 1e-13) continue;
      for (size_t j = 0; j <= n + m; ++j) T[r][j] -= f * T[piv_row][j];
    }
    basis[piv_row] = piv_col;
  }
  require(iter < max_iter, "lp_solve_max: iteration limit hit");

  res.optimal = true;
  res.x.assign(n, 0.0);
  for (size_t r = 0; r < m; ++r)
    if (basis[r] < n) res.x[basis[r]] = T[r][n + m];
  res.objective = 0.0;
  for (size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  res.dual.assign(m, 0.0);
  double dual_obj = 0.0;
  for (size_t r = 0; r < m; ++r) {
    res.dual[r] = T[m][n + r];  // reduced cost of slack r
    dual_obj += res.dual[r] * b[r];
  }
  res.duality_gap = std::fabs(res.objective - dual_obj);
  return res;
}

}  // namespace rev
