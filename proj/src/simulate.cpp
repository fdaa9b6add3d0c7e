#include "hdgmm/simulate.hpp"

#include <cmath>

#include "hdgmm/parallel.hpp"

namespace hdgmm {

namespace {

Matrix first_stage_pi(const DesignSpec& spec) {
  const Index p = spec.p, q = spec.q;
  Matrix pi = Matrix::Zero(q, p);
  switch (spec.design_id) {
    case 1: {
      // [2 + 2 rho^{q/2}]^{-1/2} (iota_2 kron I_{q/2}), p = q/2.
      const double scale =
          1.0 / std::sqrt(2.0 + 2.0 * std::pow(spec.rho_z, double(q) / 2.0));
      pi.topRows(q / 2) = scale * Matrix::Identity(p, p);
      pi.bottomRows(q / 2) = scale * Matrix::Identity(p, p);
      break;
    }
    case 2:
      pi.setConstant(1.0 / double(q));
      break;
    case 3:
      pi.topRows(q / 4).setConstant(0.25);
      break;
    default:
      throw InvalidSpec("design_id must be 1, 2 or 3");
  }
  return pi;
}

}  // namespace

Matrix design_pi(const DesignSpec& spec) { return first_stage_pi(spec); }

DesignSpec DesignSpec::make(int design_id, Index n, Index p, Index q, Index B,
                            std::uint64_t base_seed) {
  DesignSpec spec;
  spec.design_id = design_id;
  spec.n = n;
  spec.p = p;
  spec.q = q;
  spec.B = B;
  spec.base_seed = base_seed;

  if (design_id < 1 || design_id > 3)
    throw InvalidSpec("design_id must be 1, 2 or 3");
  if (n < 1 || p < 3 || q < p || B < 1)
    throw InvalidSpec("need n >= 1, p >= 3, q >= p, B >= 1");
  if (design_id == 1 && (q != 2 * p || q % 2 != 0))
    throw InvalidSpec("Design 1 requires q = 2p with q even");
  if (design_id == 3 && q % 4 != 0)
    throw InvalidSpec("Design 3 requires q divisible by 4");

  spec.beta0 = Vector::Zero(p);
  if (p >= 8) {
    spec.beta0(0) = 1.0;
    spec.beta0(1) = 1.0;
    spec.beta0(p - 6) = 0.5;
  } else {
    spec.beta0(0) = 1.0;
    spec.beta0(1) = 1.0;
    spec.beta0(2) = 0.5;
    spec.non_canonical_beta = true;
  }
  return spec;
}

Dataset generate_dataset(const DesignSpec& spec, std::uint64_t rep_index) {
  const Index n = spec.n, p = spec.p, q = spec.q;
  Rng rng = Rng::for_replication(spec.base_seed, rep_index);

  Matrix omega(q, q);
  for (Index j = 0; j < q; ++j)
    for (Index k = 0; k < q; ++k)
      omega(j, k) = std::pow(spec.rho_z, std::abs(double(j - k)));
  const Matrix L = cholesky(omega);

  Dataset data;
  data.Z.resize(n, q);
  for (Index i = 0; i < n; ++i)
    data.Z.row(i) = (L * rng.normal_vector(q)).transpose();

  const Matrix pi = first_stage_pi(spec);
  const double sr = std::sqrt(spec.rho_uv);
  const double sc = std::sqrt(1.0 - spec.rho_uv);

  Vector u(n);
  Matrix V(n, p);
  for (Index i = 0; i < n; ++i) {
    const double eps1 = rng.normal();
    const double eps2 = rng.normal();
    const Vector eps3 = rng.normal_vector(p);
    const double u_tilde = sr * eps1 + sc * eps2;
    V.row(i) = (sr * eps1 * Vector::Ones(p) + sc * eps3).transpose();
    u(i) = u_tilde * data.Z.row(i).norm() / std::sqrt(double(q));
  }

  data.X = data.Z * pi + V;
  data.Y = data.X * spec.beta0 + u;
  data.beta0 = spec.beta0;
  return data;
}

ReplicationOutcome run_replication(const DesignSpec& spec,
                                   std::uint64_t rep_index, Index grid_size) {
  const Dataset data = generate_dataset(spec, rep_index);
  const Index n = spec.n, p = spec.p;

  CvConfig cv;
  cv.folds = 5;
  const PipelineResult pipe =
      two_step_pipeline(data.X, data.Z, data.Y, cv, grid_size);

  const SigmaHat sigma = sigma_hat(data.X, data.Z, pipe.W);
  const ClimeResult gamma = clime_full(sigma);
  const Vector b_hat =
      debias(pipe.second_fit.beta, gamma, data.X, data.Z, pipe.W, data.Y);
  const VarianceEstimate var =
      variance_estimate(data.X, data.Z, pipe.W, pipe.first_fit.residuals);
  const Vector variances = coordinate_variances(gamma, var);
  const InferenceResult inf =
      confidence_intervals(b_hat, variances, n, 0.05, &data.beta0);

  const double z = normal_quantile(0.975);
  const double shift = spec.design_id == 1 ? 0.5 : 1.5;
  const Index jc = 1;  // test coordinate beta_{0,2}

  ReplicationOutcome out;
  out.t_size = inf.t_stats(jc);
  out.reject_size = std::abs(out.t_size) > z;
  out.reject_power =
      std::abs(t_statistic(b_hat(jc), data.beta0(jc) + shift, variances(jc),
                           n)) > z;
  out.covered.resize(p);
  out.ci_lower = inf.ci_lower;
  out.ci_upper = inf.ci_upper;
  out.ci_lengths.resize(p);
  for (Index j = 0; j < p; ++j) {
    out.covered[j] = inf.ci_lower(j) <= data.beta0(j) &&
                     data.beta0(j) <= inf.ci_upper(j);
    out.ci_lengths(j) = inf.ci_upper(j) - inf.ci_lower(j);
  }
  out.sq_error = (b_hat - data.beta0).squaredNorm();
  out.ell1_error = (pipe.second_fit.beta - data.beta0).lpNorm<1>();
  const Vector approx_err =
      (gamma.gamma_hat * sigma.sigma - Matrix::Identity(p, p)) *
      (pipe.second_fit.beta - data.beta0);
  out.delta_diag = std::sqrt(double(n)) * approx_err(jc);
  out.max_kkt_gap = pipe.max_kkt_gap;
  out.max_clime_slack_excess =
      (gamma.feasibility_slack - gamma.mu).maxCoeff();
  return out;
}

std::vector<ReplicationOutcome> run_replications(const DesignSpec& spec,
                                                 unsigned threads,
                                                 Index grid_size) {
  std::vector<ReplicationOutcome> reps(spec.B);
  parallel_for(static_cast<std::size_t>(spec.B), resolve_threads(threads),
               [&](std::size_t r) {
                 reps[r] = run_replication(spec, r, grid_size);
               });
  return reps;
}

SummaryTable run_design(const DesignSpec& spec, unsigned threads,
                        Index grid_size) {
  const auto reps = run_replications(spec, threads, grid_size);

  SummaryTable tab;
  tab.B = spec.B;
  tab.base_seed = spec.base_seed;
  tab.grid_size = grid_size;
  tab.non_canonical_beta = spec.non_canonical_beta;

  double covered = 0.0, length = 0.0;
  for (const auto& rep : reps) {
    tab.size += rep.reject_size ? 1.0 : 0.0;
    tab.power += rep.reject_power ? 1.0 : 0.0;
    for (bool c : rep.covered) covered += c ? 1.0 : 0.0;
    length += rep.ci_lengths.sum();
    tab.mse += rep.sq_error;
    tab.max_kkt_gap = std::max(tab.max_kkt_gap, rep.max_kkt_gap);
    tab.max_clime_slack_excess =
        std::max(tab.max_clime_slack_excess, rep.max_clime_slack_excess);
  }
  const double pB = double(spec.p) * double(spec.B);
  tab.size /= double(spec.B);
  tab.power /= double(spec.B);
  tab.coverage = covered / pB;
  tab.length = length / pB;
  tab.mse /= pB;  // per-coordinate, like coverage and length
  return tab;
}

std::vector<double> ell1_error_diagnostic(const DesignSpec& spec,
                                          const std::vector<Index>& n_list,
                                          Index reps, unsigned threads) {
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw InvalidSpec("ell1_error_diagnostic: n_list must be increasing");

  std::vector<double> means;
  for (const Index n : n_list) {
    DesignSpec s = spec;
    s.n = n;
    s.B = reps;
    const auto outcomes = run_replications(s, threads);
    double sum = 0.0;
    for (const auto& rep : outcomes) sum += rep.ell1_error;
    means.push_back(sum / double(reps));
  }
  return means;
}

}  // namespace hdgmm
