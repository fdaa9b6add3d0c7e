#pragma once

#include <cstdint>
#include <vector>

#include "hdgmm/inference.hpp"

namespace hdgmm {

struct Dataset {
  Matrix X;  // n x p
  Matrix Z;  // n x q
  Vector Y;  // n
  Vector beta0;
};

/// Monte Carlo design: Toeplitz-correlated gaussian instruments, first-stage
/// matrix pi per design_id, conditionally heteroskedastic errors.
struct DesignSpec {
  int design_id = 1;  // 1, 2 or 3
  Index n = 0, p = 0, q = 0;
  double rho_z = 0.5;
  double rho_uv = 0.25;
  Vector beta0;
  Index B = 100;
  std::uint64_t base_seed = 0;
  bool non_canonical_beta = false;  // true when p < 8 forced a fallback layout

  /// Validates the design constraints and fills beta0:
  /// (1, 1, 0_{p-8}', 0.5, 0_5')' for p >= 8, (1, 1, 0.5, 0...)' otherwise.
  static DesignSpec make(int design_id, Index n, Index p, Index q, Index B,
                         std::uint64_t base_seed);
};

struct ReplicationOutcome {
  bool reject_size = false;
  bool reject_power = false;
  std::vector<bool> covered;
  Vector ci_lower, ci_upper;
  Vector ci_lengths;
  double sq_error = 0.0;   // ||b_hat - beta0||_2^2
  double t_size = 0.0;     // studentized statistic at the true value
  double delta_diag = 0.0; // sqrt(n) e_2'(Gamma Sigma - I)(beta_hat - beta0)
  double ell1_error = 0.0; // ||beta_hat - beta0||_1, second-step fit
  double max_kkt_gap = 0.0;
  double max_clime_slack_excess = 0.0;  // max_j slack_j - mu_j
};

struct SummaryTable {
  double size = 0.0, power = 0.0, coverage = 0.0, length = 0.0, mse = 0.0;
  Index B = 0;
  std::uint64_t base_seed = 0;
  Index grid_size = 0;
  double max_kkt_gap = 0.0;
  double max_clime_slack_excess = 0.0;
  bool non_canonical_beta = false;
};

Dataset generate_dataset(const DesignSpec& spec, std::uint64_t rep_index);

/// The q x p first-stage coefficient matrix pi of the design.
Matrix design_pi(const DesignSpec& spec);

/// Full estimation-and-inference pipeline on one replication. The test
/// coordinate is
/// j = 2 (one-based); the power shift is 0.5 in Design 1 and 1.5 otherwise.
ReplicationOutcome run_replication(const DesignSpec& spec,
                                   std::uint64_t rep_index,
                                   Index grid_size = 50);

std::vector<ReplicationOutcome> run_replications(const DesignSpec& spec,
                                                 unsigned threads = 0,
                                                 Index grid_size = 50);

SummaryTable run_design(const DesignSpec& spec, unsigned threads = 0,
                        Index grid_size = 50);

/// Mean ||beta_hat - beta0||_1 over `reps` replications for each n in
/// n_list. Replication streams are shared across the n values.
std::vector<double> ell1_error_diagnostic(const DesignSpec& spec,
                                          const std::vector<Index>& n_list,
                                          Index reps = 20,
                                          unsigned threads = 0);

}  // namespace hdgmm
