#pragma once

#include "hdgmm/lp.hpp"
#include "hdgmm/weight.hpp"

namespace hdgmm {

/// Sigma_hat = (X'Z/n) (W_d/q) (Z'X/n), the (typically rank-deficient) GMM
/// curvature matrix. Symmetric by construction; PSD-checked on random probes.
struct SigmaHat {
  Matrix sigma;  // p x p
};

/// Row-wise approximate inverse of SigmaHat.
struct ClimeResult {
  Matrix gamma_hat;         // p x p, rows Gamma_j
  Vector mu;                // per-row constraint level mu_j
  Vector feasibility_slack; // ||Gamma_j Sigma - e_j'||_inf per row
};

SigmaHat sigma_hat(const Matrix& X, const Matrix& Z, const WeightMatrix& W);

/// Identity-weight variant (first-step curvature).
SigmaHat sigma_hat(const Matrix& X, const Matrix& Z);

/// mu_j = max(1.2 * inf_a ||a Sigma - e_j'||_inf, 1e-8), the inner min-max
/// solved as an LP in (a+, a-, t). j is zero-based.
double clime_mu(const SigmaHat& sigma, Index j);

/// argmin ||a||_1 subject to ||a Sigma - e_j'||_inf <= mu, via the
/// (a+, a-) split LP. Throws LpInfeasible when mu is below the row's
/// attainable level.
Vector clime_row(const SigmaHat& sigma, Index j, double mu);

/// clime_mu followed by clime_row for every row; rows are independent.
ClimeResult clime_full(const SigmaHat& sigma);

}  // namespace hdgmm
