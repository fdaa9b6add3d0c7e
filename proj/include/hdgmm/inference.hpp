#pragma once

#include "hdgmm/clime.hpp"
#include "hdgmm/lasso_gmm.hpp"

namespace hdgmm {

struct VarianceEstimate {
  Matrix v_hat_d;       // p x p
  Matrix sigma_zu_hat;  // q x q
};

struct InferenceResult {
  Vector b_hat;
  Vector se;  // sigma_bj / sqrt(n)
  Vector t_stats;
  Vector ci_lower, ci_upper;
  double alpha = 0.05;
};

struct PipelineResult {
  LassoFit first_fit;
  WeightMatrix W;
  LassoFit second_fit;
  double lambda_first = 0.0;
  double lambda_second = 0.0;
  double max_kkt_gap = 0.0;  // worst gap over CV inner fits and both fits
};

/// First-step CV (identity weight) -> first fit -> residuals -> W_d ->
/// second-step CV (diagonal weight) -> second fit. cv.grid may be empty, in
/// which case a default log-spaced grid of `grid_size` values is built per
/// step from the step's own design.
PipelineResult two_step_pipeline(const Matrix& X, const Matrix& Z,
                                 const Vector& Y, const CvConfig& cv,
                                 Index grid_size = 50);

/// Debiased estimator:
/// b = beta + Gamma (X'Z/n) (W_d/q) (Z'(Y - X beta) / n).
Vector debias(const Vector& beta_hat, const ClimeResult& gamma,
              const Matrix& X, const Matrix& Z, const WeightMatrix& W,
              const Vector& Y);

/// V_d = (X'Z/n)(W_d/q) Sigma_Zu (W_d/q)(Z'X/n) with
/// Sigma_Zu = (1/n) sum_i Z_i Z_i' u_i^2; u are the FIRST-step residuals.
VarianceEstimate variance_estimate(const Matrix& X, const Matrix& Z,
                                   const WeightMatrix& W,
                                   const Vector& first_step_residuals);

/// Per-coordinate asymptotic variances e_j' Gamma V_d Gamma' e_j.
/// Throws NonPositiveVariance if any is <= 0.
Vector coordinate_variances(const ClimeResult& gamma,
                            const VarianceEstimate& var);

/// t = sqrt(n) (b_j - null) / sqrt(e_j' Gamma V_d Gamma' e_j).
double t_statistic(double b_j, double null_value, double variance_j, Index n);

/// Symmetric level-(1-alpha) intervals around b_hat.
InferenceResult confidence_intervals(const Vector& b_hat,
                                     const Vector& variances, Index n,
                                     double alpha,
                                     const Vector* null_values = nullptr);

/// Standard normal quantile, Acklam rational approximation plus one Newton
/// polish step (abs error well under 1e-8).
double normal_quantile(double u);

double normal_cdf(double x);

}  // namespace hdgmm
