#pragma once

#include "hdgmm/numerics.hpp"

namespace hdgmm {

/// Diagonal GMM weight matrix W_d = diag(1/sigma_sq(0), ..., 1/sigma_sq(q-1)).
/// Only the per-instrument variance estimates are stored.
struct WeightMatrix {
  Vector sigma_sq;
};

/// sigma_sq(l) = (1/n) sum_i Z_il^2 u_i^2 from the first-step residuals.
/// Throws DegenerateInstrumentVariance if any entry is <= 1e-10.
WeightMatrix weight_matrix(const Matrix& Z, const Vector& residuals);

}  // namespace hdgmm
