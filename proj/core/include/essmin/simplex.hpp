#pragma once

#include <vector>

namespace essmin {

enum class LPStatus { optimal, infeasible, unbounded, iteration_limit };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  double value = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

/// maximize c.x subject to A x <= b, x >= 0 (A is row-major, one row per
/// constraint). Dense two-phase tableau simplex; Dantzig pricing with a
/// switch to Bland's rule after a run of degenerate pivots.
LPResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                     const std::vector<double>& c, int max_iterations = 100000);

}  // namespace essmin
