#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "hdgmm/errors.hpp"

namespace hdgmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Deterministic PRNG: xoshiro256++ seeded through splitmix64.
///
/// The generator is fully specified here so that streams replicate
/// bit-for-bit across platforms and languages. Gaussians come from the
/// polar-free Box-Muller transform on 53-bit uniforms (the spare draw of
/// each pair is cached).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Derive an independent stream for replication `index` of a run.
  static Rng for_replication(std::uint64_t base_seed, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform on (0,1), 53-bit resolution, never exactly 0.
  double uniform();

  /// Standard normal via Box-Muller.
  double normal();

  Vector normal_vector(Index d);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Lower-triangular L with L*L^T = A. A must be symmetric (tol 1e-10).
/// Throws NotPositiveDefinite if a pivot falls at or below 1e-12.
Matrix cholesky(const Matrix& A);

double max_abs(const Vector& v);
double l1_norm(const Vector& v);
double l2_norm(const Vector& v);

/// max_ij |A_ij| (entrywise max norm).
double matrix_max_norm(const Matrix& A);

/// Throws InputError if any entry of A is NaN or infinite.
void check_finite(const Matrix& A, const char* what);

}  // namespace hdgmm
