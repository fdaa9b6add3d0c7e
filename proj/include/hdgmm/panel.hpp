#pragma once

#include <cstdint>
#include <vector>

#include "hdgmm/numerics.hpp"

namespace hdgmm {

/// Balanced dynamic panel, y_{i0} = 0. y(i, t-1) holds y_{it} for t = 1..T;
/// x[k](i, t-1) holds the k-th strictly exogenous regressor. The truth
/// fields (rho0, delta0, mu) are simulation metadata only; the GMM
/// transformation never reads them.
struct PanelData {
  Matrix y;                // n x T
  std::vector<Matrix> x;   // K matrices, each n x T
  bool y0_zero = true;

  bool has_truth = false;
  double rho0 = 0.0;
  double delta0 = 0.0;
  Vector mu;  // n
};

/// First-differenced stack: rows (i, t) for t = 3..T in i-major, t-ascending
/// order. X columns are (dy_{i,t-1}, dx_{it}'). Z column layout: lagged-y
/// blocks first (t ascending, lag ascending), then one block of the full
/// K*T exogenous history per difference period s = 2..T (s ascending, then
/// history period t ascending, then k ascending).
struct StackedGmm {
  Vector Y;  // n(T-2)
  Matrix X;  // n(T-2) x (K+1)
  Matrix Z;  // n(T-2) x q, q = (T-2)(T-1)/2 + T(T-1)K
};

/// q for given (T, K).
Index panel_instrument_count(Index T, Index K);

/// Throws TooFewPeriods for T < 3; DimensionMismatch on ragged x.
StackedGmm panel_to_gmm(const PanelData& data);

/// mu_i, x_{itk}, u_{it} all iid N(0,1); y built by the AR recursion from
/// y_{i0} = 0 with common delta0 across the K regressors.
PanelData simulate_panel(Index n, Index T, Index K, double rho0, double delta0,
                         std::uint64_t seed);

}  // namespace hdgmm
