#include "hdgmm/lasso_gmm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace hdgmm {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

GmmDesign build_design_impl(const Matrix& X, const Matrix& Z, const Vector& Y,
                            const WeightMatrix* W) {
  const Index n = X.rows(), p = X.cols(), q = Z.cols();
  if (Z.rows() != n || Y.size() != n)
    throw DimensionMismatch("build_design: X has " + std::to_string(n) +
                            " rows, Z has " + std::to_string(Z.rows()) +
                            ", Y has " + std::to_string(Y.size()));
  if (n < 1 || p < 1 || q < 1)
    throw DimensionMismatch("build_design: empty input");

  Vector w_half = Vector::Ones(q);  // diag of W^{1/2}
  if (W) {
    if (W->sigma_sq.size() != q)
      throw DimensionMismatch("build_design: weight length != q");
    for (Index l = 0; l < q; ++l) {
      if (W->sigma_sq(l) <= 1e-10)
        throw DegenerateWeight("build_design: sigma_sq(" + std::to_string(l) +
                               ") <= 1e-10");
      w_half(l) = 1.0 / std::sqrt(W->sigma_sq(l));
    }
  }

  const double scale = 1.0 / (static_cast<double>(n) * std::sqrt(double(q)));
  GmmDesign d;
  d.A = w_half.asDiagonal() * (Z.transpose() * X) * scale;
  d.r = w_half.asDiagonal() * (Z.transpose() * Y) * scale;
  d.n = n;
  d.weight_kind = W ? WeightKind::diagonal : WeightKind::identity;

  // Loss identity ||r - A b||^2 = (Y-Xb)'Z (W/q) Z'(Y-Xb) / n^2, random probes.
  Rng probe_rng(0x5eed0001ULL);
  for (int probe = 0; probe < 2; ++probe) {
    const Vector beta = probe_rng.normal_vector(p);
    const double lhs = (d.r - d.A * beta).squaredNorm();
    const Vector m = Z.transpose() * (Y - X * beta);
    const double rhs = m.dot(w_half.cwiseAbs2().cwiseProduct(m)) /
                       (double(q) * double(n) * double(n));
    if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(rhs)))
      throw NumericalError("build_design: loss identity violated");
  }
  return d;
}

}  // namespace

GmmDesign build_design(const Matrix& X, const Matrix& Z, const Vector& Y) {
  return build_design_impl(X, Z, Y, nullptr);
}

GmmDesign build_design(const Matrix& X, const Matrix& Z, const Vector& Y,
                       const WeightMatrix& W) {
  return build_design_impl(X, Z, Y, &W);
}

double kkt_gap(const GmmDesign& design, const Vector& beta, double lambda) {
  const Vector g = -design.A.transpose() * (design.r - design.A * beta);
  double gap = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta(j) == 0.0)
      gap = std::max(gap, std::abs(g(j)) - lambda);
    else
      gap = std::max(gap, std::abs(g(j) + lambda * (beta(j) > 0 ? 1.0 : -1.0)));
  }
  return std::max(gap, 0.0);
}

LassoFit lasso_solve(const GmmDesign& design, double lambda,
                     const Vector* warm_start) {
  if (lambda <= 0.0) throw InvalidSpec("lasso_solve: lambda must be > 0");
  const Index p = design.A.cols();
  const Vector col_sq = design.A.colwise().squaredNorm();

  Vector beta = Vector::Zero(p);
  if (warm_start) {
    if (warm_start->size() != p)
      throw DimensionMismatch("lasso_solve: warm start length != p");
    beta = *warm_start;
    for (Index j = 0; j < p; ++j)
      if (col_sq(j) == 0.0) beta(j) = 0.0;  // zero columns stay at 0
  }
  Vector resid = design.r - design.A * beta;

#ifndef NDEBUG
  double prev_obj = resid.squaredNorm() + 2.0 * lambda * beta.lpNorm<1>();
#endif

  // Rank-deficient designs (n < p fold fits) can need tens of thousands of
  // sweeps at the smallest grid values; sweeps are cheap at these sizes.
  constexpr int kMaxSweeps = 200000;
  double gap = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double old = beta(j);
      const double z = design.A.col(j).dot(resid) + col_sq(j) * old;
      const double updated = soft_threshold(z, lambda) / col_sq(j);
      if (updated != old) {
        resid += design.A.col(j) * (old - updated);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
#ifndef NDEBUG
    {
      const double obj = resid.squaredNorm() + 2.0 * lambda * beta.lpNorm<1>();
      assert(obj <= prev_obj + 1e-12 * std::max(1.0, prev_obj));
      prev_obj = obj;
    }
#endif
    if (max_change <= 1e-8) {
      gap = kkt_gap(design, beta, lambda);
      if (gap <= 1e-6) {
        LassoFit fit;
        fit.beta = std::move(beta);
        fit.lambda = lambda;
        fit.kkt_gap = gap;
        for (Index j = 0; j < p; ++j)
          if (fit.beta(j) != 0.0) fit.active_set.push_back(j);
        return fit;
      }
    }
  }
  throw MaxIterationsExceeded("lasso_solve: no convergence in 200000 sweeps");
}

std::vector<std::pair<Index, Index>> fold_blocks(Index n, Index K) {
  if (K < 1 || n < K) throw InvalidSpec("fold_blocks: need 1 <= K <= n");
  std::vector<std::pair<Index, Index>> blocks;
  const Index base = n / K, extra = n % K;
  Index start = 0;
  for (Index k = 0; k < K; ++k) {
    const Index size = base + (k < extra ? 1 : 0);
    blocks.emplace_back(start, size);
    start += size;
  }
  return blocks;
}

CvResult cross_validate(const Matrix& X, const Matrix& Z, const Vector& Y,
                        const WeightMatrix* W, const CvConfig& config) {
  const Index n = X.rows(), q = Z.cols();
  if (Z.rows() != n || Y.size() != n)
    throw DimensionMismatch("cross_validate: row counts disagree");
  if (config.grid.empty()) throw InvalidSpec("cross_validate: empty grid");
  if (config.folds < 2 || n < config.folds)
    throw InvalidSpec("cross_validate: need 2 <= K <= n");

  Vector w_inv = Vector::Ones(q);  // diag of W
  if (W) {
    if (W->sigma_sq.size() != q)
      throw DimensionMismatch("cross_validate: weight length != q");
    w_inv = W->sigma_sq.cwiseInverse();
  }

  std::vector<double> grid = config.grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());

  const auto blocks = fold_blocks(n, config.folds);
  std::vector<double> criterion(grid.size(), 0.0);
  double max_gap = 0.0;

  for (const auto& [start, size] : blocks) {
    const Index n_train = n - size;
    Matrix Xt(n_train, X.cols()), Zt(n_train, q);
    Vector Yt(n_train);
    Xt << X.topRows(start), X.bottomRows(n - start - size);
    Zt << Z.topRows(start), Z.bottomRows(n - start - size);
    Yt << Y.head(start), Y.tail(n - start - size);

    const GmmDesign train = W ? build_design(Xt, Zt, Yt, *W)
                              : build_design(Xt, Zt, Yt);

    const Matrix Zv = Z.middleRows(start, size);
    const Matrix Xv = X.middleRows(start, size);
    const Vector Yv = Y.segment(start, size);

    Vector warm;  // pathwise warm starts, large lambda to small
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      // The CV training objective carries lambda*||b||_1, i.e. half the
      // internal 2*lambda'*||b||_1 penalty.
      const LassoFit fit =
          lasso_solve(train, grid[gi] / 2.0, warm.size() ? &warm : nullptr);
      warm = fit.beta;
      max_gap = std::max(max_gap, fit.kkt_gap);

      const Vector m = Zv.transpose() * (Yv - Xv * fit.beta);
      criterion[gi] += m.dot(w_inv.cwiseProduct(m)) / double(q);
    }
  }

  // grid is descending, so '<' breaks ties toward larger lambda.
  std::size_t best = 0;
  for (std::size_t gi = 1; gi < grid.size(); ++gi)
    if (criterion[gi] < criterion[best]) best = gi;

  return CvResult{grid[best], criterion[best], max_gap};
}

std::vector<double> default_lambda_grid(const GmmDesign& design, Index count) {
  if (count < 2) throw InvalidSpec("default_lambda_grid: count must be >= 2");
  double lambda_max = (design.A.transpose() * design.r).cwiseAbs().maxCoeff();
  if (lambda_max <= 0.0) lambda_max = 1e-8;
  std::vector<double> grid(count);
  for (Index i = 0; i < count; ++i)
    grid[i] = lambda_max * std::pow(10.0, -3.0 * double(i) / double(count - 1));
  return grid;
}

}  // namespace hdgmm
