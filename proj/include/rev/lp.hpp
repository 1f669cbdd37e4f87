#pragma once

#include <vector>

#include "rev/common.hpp"

namespace rev {

// Small dense simplex for  max c'x  s.t.  Ax <= b,  x >= 0,  with b >= 0
// (the all-slack basis is then feasible, so no phase-one is needed).
// Bland's rule guarantees termination on the degenerate b = 0 rows that
// incentive constraints produce.
struct LpResult {
  bool optimal = false;
  bool unbounded = false;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> dual;     // one multiplier per row
  double duality_gap = 0.0;     // |c'x - y'b| at termination
};

LpResult lp_solve_max(const std::vector<std::vector<double>>& A,
                      const std::vector<double>& b, const std::vector<double>& c);

}  // namespace rev
