#include "hdgmm/inference.hpp"

#include <cmath>

namespace hdgmm {

WeightMatrix weight_matrix(const Matrix& Z, const Vector& residuals) {
  const Index n = Z.rows(), q = Z.cols();
  if (residuals.size() != n)
    throw DimensionMismatch("weight_matrix: residual length != n");
  WeightMatrix W;
  W.sigma_sq = (Z.cwiseAbs2().transpose() * residuals.cwiseAbs2()) / double(n);
  for (Index l = 0; l < q; ++l)
    if (W.sigma_sq(l) <= 1e-10)
      throw DegenerateInstrumentVariance(
          "weight_matrix: sigma_sq(" + std::to_string(l) + ") <= 1e-10");
  return W;
}

PipelineResult two_step_pipeline(const Matrix& X, const Matrix& Z,
                                 const Vector& Y, const CvConfig& cv,
                                 Index grid_size) {
  PipelineResult out;

  CvConfig cv1 = cv;
  if (cv1.grid.empty())
    cv1.grid = default_lambda_grid(build_design(X, Z, Y), grid_size);
  const CvResult cv_first = cross_validate(X, Z, Y, nullptr, cv1);
  out.lambda_first = cv_first.lambda;
  out.max_kkt_gap = cv_first.max_kkt_gap;

  const GmmDesign d1 = build_design(X, Z, Y);
  out.first_fit = lasso_solve(d1, cv_first.lambda);
  out.first_fit.residuals = Y - X * out.first_fit.beta;
  out.max_kkt_gap = std::max(out.max_kkt_gap, out.first_fit.kkt_gap);

  out.W = weight_matrix(Z, out.first_fit.residuals);

  CvConfig cv2 = cv;
  if (cv2.grid.empty())
    cv2.grid = default_lambda_grid(build_design(X, Z, Y, out.W), grid_size);
  const CvResult cv_second = cross_validate(X, Z, Y, &out.W, cv2);
  out.lambda_second = cv_second.lambda;
  out.max_kkt_gap = std::max(out.max_kkt_gap, cv_second.max_kkt_gap);

  const GmmDesign d2 = build_design(X, Z, Y, out.W);
  out.second_fit = lasso_solve(d2, cv_second.lambda, &out.first_fit.beta);
  out.second_fit.residuals = Y - X * out.second_fit.beta;
  out.max_kkt_gap = std::max(out.max_kkt_gap, out.second_fit.kkt_gap);

  return out;
}

Vector debias(const Vector& beta_hat, const ClimeResult& gamma,
              const Matrix& X, const Matrix& Z, const WeightMatrix& W,
              const Vector& Y) {
  const Index n = X.rows();
  if (Z.rows() != n || Y.size() != n || beta_hat.size() != X.cols() ||
      gamma.gamma_hat.rows() != X.cols())
    throw DimensionMismatch("debias: inconsistent dimensions");
  const Vector moment = Z.transpose() * (Y - X * beta_hat) / double(n);
  const Vector weighted =
      (W.sigma_sq.cwiseInverse() / double(Z.cols())).cwiseProduct(moment);
  return beta_hat +
         gamma.gamma_hat * (X.transpose() * Z / double(n)) * weighted;
}

VarianceEstimate variance_estimate(const Matrix& X, const Matrix& Z,
                                   const WeightMatrix& W,
                                   const Vector& first_step_residuals) {
  const Index n = X.rows(), q = Z.cols();
  if (Z.rows() != n || first_step_residuals.size() != n)
    throw DimensionMismatch("variance_estimate: inconsistent dimensions");

  VarianceEstimate out;
  out.sigma_zu_hat = Z.transpose() *
                     first_step_residuals.cwiseAbs2().asDiagonal() * Z /
                     double(n);
  out.sigma_zu_hat =
      0.5 * (out.sigma_zu_hat + out.sigma_zu_hat.transpose().eval());

  const Matrix C =
      (X.transpose() * Z / double(n)) *
      (W.sigma_sq.cwiseInverse() / double(q)).asDiagonal();  // p x q
  out.v_hat_d = C * out.sigma_zu_hat * C.transpose();
  out.v_hat_d = 0.5 * (out.v_hat_d + out.v_hat_d.transpose().eval());
  return out;
}

Vector coordinate_variances(const ClimeResult& gamma,
                            const VarianceEstimate& var) {
  const Matrix GV = gamma.gamma_hat * var.v_hat_d;
  Vector v(gamma.gamma_hat.rows());
  for (Index j = 0; j < v.size(); ++j) {
    v(j) = GV.row(j).dot(gamma.gamma_hat.row(j));
    if (v(j) <= 0.0)
      throw NonPositiveVariance("coordinate_variances: variance(" +
                                std::to_string(j) + ") <= 0");
  }
  return v;
}

double t_statistic(double b_j, double null_value, double variance_j, Index n) {
  if (variance_j <= 0.0)
    throw NonPositiveVariance("t_statistic: non-positive variance");
  return std::sqrt(double(n)) * (b_j - null_value) / std::sqrt(variance_j);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw InvalidSpec("normal_quantile: u must be in (0,1)");

  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (u < plow) {
    const double t = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else if (u <= phigh) {
    const double t = u - 0.5, s = t * t;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) *
        t /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double t = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t +
          c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  // One Newton step against the exact cdf.
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  x -= (normal_cdf(x) - u) / pdf;
  return x;
}

InferenceResult confidence_intervals(const Vector& b_hat,
                                     const Vector& variances, Index n,
                                     double alpha,
                                     const Vector* null_values) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidSpec("confidence_intervals: alpha must be in (0,1)");
  if (variances.size() != b_hat.size())
    throw DimensionMismatch("confidence_intervals: size mismatch");
  if (null_values && null_values->size() != b_hat.size())
    throw DimensionMismatch("confidence_intervals: null vector size mismatch");

  const double z = normal_quantile(1.0 - alpha / 2.0);
  InferenceResult out;
  out.alpha = alpha;
  out.b_hat = b_hat;
  out.se = (variances / double(n)).cwiseSqrt();
  out.ci_lower = b_hat - z * out.se;
  out.ci_upper = b_hat + z * out.se;
  out.t_stats.resize(b_hat.size());
  for (Index j = 0; j < b_hat.size(); ++j) {
    const double null_j = null_values ? (*null_values)(j) : 0.0;
    out.t_stats(j) = t_statistic(b_hat(j), null_j, variances(j), n);
  }
  return out;
}

}  // namespace hdgmm
