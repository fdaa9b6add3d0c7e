#include "hdgmm/lp.hpp"

#include <cmath>
#include <vector>

namespace hdgmm {

namespace {

constexpr double kTol = 1e-9;

// Tableau layout: columns [structural(d) | slack(m) | artificial(a) | rhs].
// basis[i] holds the variable index basic in row i.
struct Tableau {
  Matrix T;
  std::vector<Index> basis;
  Index m, total;  // rows, variable count (without rhs)

  double& rhs(Index i) { return T(i, total); }

  void pivot(Index row, Index col) {
    T.row(row) /= T(row, col);
    for (Index i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = T(i, col);
      if (f != 0.0) T.row(i) -= f * T.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // One simplex phase minimizing cost over the active columns. Bland's rule:
  // smallest-index entering column with negative reduced cost, smallest basis
  // index on ratio ties. cost has length total.
  void run_phase(const Vector& cost, Index active_cols) {
    // z-row maintained implicitly: reduced cost_j = cost_j - y'col_j with
    // y_i = cost[basis[i]] applied through the current tableau rows.
    constexpr long kMaxIter = 200000;
    for (long iter = 0; iter < kMaxIter; ++iter) {
      Index entering = -1;
      for (Index j = 0; j < active_cols; ++j) {
        double rc = cost(j);
        for (Index i = 0; i < m; ++i) rc -= cost(basis[i]) * T(i, j);
        if (rc < -kTol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return;  // optimal

      Index leaving = -1;
      double best_ratio = 0.0;
      for (Index i = 0; i < m; ++i) {
        if (T(i, entering) > kTol) {
          const double ratio = rhs(i) / T(i, entering);
          if (leaving < 0 || ratio < best_ratio - kTol ||
              (std::abs(ratio - best_ratio) <= kTol &&
               basis[i] < basis[leaving])) {
            leaving = i;
            best_ratio = ratio;
          }
        }
      }
      if (leaving < 0) throw LpUnbounded("lp_solve: unbounded direction");
      pivot(leaving, entering);
    }
    throw CycleDetected("lp_solve: iteration cap reached");
  }
};

}  // namespace

LpSolution lp_solve(const LpProblem& problem) {
  const Index m = problem.G.rows(), d = problem.G.cols();
  if (problem.c.size() != d || problem.h.size() != m || m < 1 || d < 1)
    throw DimensionMismatch("lp_solve: inconsistent problem dimensions");
  check_finite(problem.G, "lp_solve G");
  check_finite(problem.c, "lp_solve c");
  check_finite(problem.h, "lp_solve h");

  // Count artificials: one per row with negative rhs.
  Index a = 0;
  for (Index i = 0; i < m; ++i)
    if (problem.h(i) < 0.0) ++a;

  Tableau tab;
  tab.m = m;
  tab.total = d + m + a;
  tab.T = Matrix::Zero(m, tab.total + 1);
  tab.basis.resize(m);

  Index art = 0;
  for (Index i = 0; i < m; ++i) {
    const double sign = problem.h(i) < 0.0 ? -1.0 : 1.0;
    tab.T.block(i, 0, 1, d) = sign * problem.G.row(i);
    tab.T(i, d + i) = sign;  // slack
    tab.rhs(i) = sign * problem.h(i);
    if (sign < 0.0) {
      tab.T(i, d + m + art) = 1.0;
      tab.basis[i] = d + m + art;
      ++art;
    } else {
      tab.basis[i] = d + i;
    }
  }

  if (a > 0) {
    Vector phase1 = Vector::Zero(tab.total);
    phase1.tail(a).setOnes();
    tab.run_phase(phase1, tab.total);

    double infeas = 0.0;
    for (Index i = 0; i < m; ++i)
      if (tab.basis[i] >= d + m) infeas += tab.rhs(i);
    if (infeas > kTol)
      throw LpInfeasible("lp_solve: phase-1 optimum " + std::to_string(infeas));

    // Drive any degenerate basic artificials out of the basis.
    for (Index i = 0; i < m; ++i) {
      if (tab.basis[i] < d + m) continue;
      for (Index j = 0; j < d + m; ++j) {
        if (std::abs(tab.T(i, j)) > kTol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  Vector cost = Vector::Zero(tab.total);
  cost.head(d) = problem.c;
  // Artificial columns are excluded from phase 2 (active_cols = d + m);
  // a leftover basic artificial sits at value zero and never re-enters.
  tab.run_phase(cost, d + m);

  LpSolution sol;
  sol.x = Vector::Zero(d);
  for (Index i = 0; i < m; ++i)
    if (tab.basis[i] < d) sol.x(tab.basis[i]) = tab.rhs(i);
  sol.objective = problem.c.dot(sol.x);
  return sol;
}

}  // namespace hdgmm
