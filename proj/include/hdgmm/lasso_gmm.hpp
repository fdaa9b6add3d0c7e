#pragma once

#include <optional>
#include <vector>

#include "hdgmm/numerics.hpp"
#include "hdgmm/weight.hpp"

namespace hdgmm {

enum class WeightKind { identity, diagonal };

/// The penalized GMM program reduced to standard Lasso form:
/// the quadratic loss (Y-Xb)'Z (W/q) Z'(Y-Xb) / n^2 equals ||r - A b||_2^2
/// with A = W^{1/2} (Z'X) / (n sqrt(q)) and r = W^{1/2} (Z'Y) / (n sqrt(q)).
struct GmmDesign {
  Matrix A;  // q x p
  Vector r;  // q
  Index n = 0;
  WeightKind weight_kind = WeightKind::identity;
};

struct LassoFit {
  Vector beta;
  double lambda = 0.0;
  Vector residuals;  // Y - X beta, empty when the caller has no (X, Y)
  double kkt_gap = 0.0;
  std::vector<Index> active_set;
};

struct CvConfig {
  Index folds = 5;
  std::vector<double> grid;  // candidate lambdas, any order
};

struct CvResult {
  double lambda = 0.0;
  double criterion = 0.0;
  double max_kkt_gap = 0.0;  // worst KKT gap over all inner fold fits
};

/// Identity-weight design. Verifies the loss identity on random probes.
GmmDesign build_design(const Matrix& X, const Matrix& Z, const Vector& Y);

/// Diagonal-weight design. Throws DegenerateWeight if any sigma_sq <= 1e-10.
GmmDesign build_design(const Matrix& X, const Matrix& Z, const Vector& Y,
                       const WeightMatrix& W);

/// Minimizes ||r - A beta||_2^2 + 2 lambda ||beta||_1 by cyclic coordinate
/// descent with soft-thresholding. Converged when the max coefficient change
/// over a full sweep is <= 1e-8; the returned kkt_gap is checked <= 1e-6.
/// An optional warm start seeds the iteration.
LassoFit lasso_solve(const GmmDesign& design, double lambda,
                     const Vector* warm_start = nullptr);

/// Stationarity gap of the system g = -A'(r - A beta):
/// max over j of max(|g_j| - lambda, 0) for beta_j = 0 and
/// |g_j + lambda sign(beta_j)| for beta_j != 0.
double kkt_gap(const GmmDesign& design, const Vector& beta, double lambda);

/// K-fold GMM cross-validation over config.grid. Folds are consecutive index
/// blocks; the first (n mod K) folds take one extra index. Per-fold training
/// solves the mean-moment objective with penalty lambda*||b||_1; the
/// validation criterion is the held-out moment quadratic form (no fold-size
/// normalizer). Ties break toward larger lambda.
CvResult cross_validate(const Matrix& X, const Matrix& Z, const Vector& Y,
                        const WeightMatrix* W, const CvConfig& config);

/// Log-spaced grid from lambda_max = ||A'r||_inf down to lambda_max * 1e-3,
/// strictly decreasing.
std::vector<double> default_lambda_grid(const GmmDesign& design, Index count);

/// Consecutive-block fold boundaries: returns K (start, size) pairs.
std::vector<std::pair<Index, Index>> fold_blocks(Index n, Index K);

}  // namespace hdgmm
