#pragma once

#include "hdgmm/numerics.hpp"

namespace hdgmm {

/// min c'x subject to G x <= h, x >= 0.
struct LpProblem {
  Vector c;  // d
  Matrix G;  // m x d
  Vector h;  // m
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
};

/// Two-phase primal simplex on the dense tableau, Bland's rule throughout.
/// Returns a vertex-optimal solution (primal feasible within 1e-9, zero
/// reduced costs at termination). Throws LpInfeasible / LpUnbounded;
/// CycleDetected on hitting the iteration cap, which Bland's rule rules out
/// short of a bug.
LpSolution lp_solve(const LpProblem& problem);

}  // namespace hdgmm
