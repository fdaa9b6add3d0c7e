#include "hdgmm/clime.hpp"

#include <cmath>

namespace hdgmm {

namespace {

SigmaHat sigma_hat_impl(const Matrix& X, const Matrix& Z,
                        const WeightMatrix* W) {
  const Index n = X.rows(), q = Z.cols();
  if (Z.rows() != n) throw DimensionMismatch("sigma_hat: X/Z row mismatch");

  Vector w_inv = Vector::Ones(q);
  if (W) {
    if (W->sigma_sq.size() != q)
      throw DimensionMismatch("sigma_hat: weight length != q");
    for (Index l = 0; l < q; ++l)
      if (W->sigma_sq(l) <= 1e-10)
        throw DegenerateWeight("sigma_hat: sigma_sq(" + std::to_string(l) +
                               ") <= 1e-10");
    w_inv = W->sigma_sq.cwiseInverse();
  }

  const Matrix B = Z.transpose() * X / double(n);  // q x p
  Matrix S = B.transpose() * (w_inv / double(q)).asDiagonal() * B;
  S = 0.5 * (S + S.transpose().eval());

  // PSD sanity on random Rayleigh probes.
  Rng probe_rng(0x51317ULL);
  for (int probe = 0; probe < 5; ++probe) {
    const Vector v = probe_rng.normal_vector(S.rows());
    if (v.dot(S * v) < -1e-10)
      throw NumericalError("sigma_hat: negative Rayleigh quotient");
  }
  return SigmaHat{std::move(S)};
}

}  // namespace

SigmaHat sigma_hat(const Matrix& X, const Matrix& Z, const WeightMatrix& W) {
  return sigma_hat_impl(X, Z, &W);
}

SigmaHat sigma_hat(const Matrix& X, const Matrix& Z) {
  return sigma_hat_impl(X, Z, nullptr);
}

double clime_mu(const SigmaHat& sigma, Index j) {
  const Index p = sigma.sigma.rows();
  if (j < 0 || j >= p) throw InvalidSpec("clime_mu: row index out of range");

  // Variables (a+, a-, t); minimize t subject to +-((a+ - a-) Sigma - e_j') <= t.
  LpProblem lp;
  lp.c = Vector::Zero(2 * p + 1);
  lp.c(2 * p) = 1.0;
  lp.G = Matrix::Zero(2 * p, 2 * p + 1);
  lp.h = Vector::Zero(2 * p);
  for (Index k = 0; k < p; ++k) {
    const double ej = (k == j) ? 1.0 : 0.0;
    lp.G.block(2 * k, 0, 1, p) = sigma.sigma.col(k).transpose();
    lp.G.block(2 * k, p, 1, p) = -sigma.sigma.col(k).transpose();
    lp.G(2 * k, 2 * p) = -1.0;
    lp.h(2 * k) = ej;
    lp.G.row(2 * k + 1) = -lp.G.row(2 * k);
    lp.G(2 * k + 1, 2 * p) = -1.0;
    lp.h(2 * k + 1) = -ej;
  }
  const LpSolution sol = lp_solve(lp);
  return std::max(1.2 * sol.objective, 1e-8);
}

Vector clime_row(const SigmaHat& sigma, Index j, double mu) {
  const Index p = sigma.sigma.rows();
  if (j < 0 || j >= p) throw InvalidSpec("clime_row: row index out of range");
  if (mu < 0.0) throw InvalidSpec("clime_row: mu must be >= 0");

  LpProblem lp;
  lp.c = Vector::Ones(2 * p);
  lp.G = Matrix::Zero(2 * p, 2 * p);
  lp.h = Vector::Zero(2 * p);
  for (Index k = 0; k < p; ++k) {
    const double ej = (k == j) ? 1.0 : 0.0;
    lp.G.block(2 * k, 0, 1, p) = sigma.sigma.col(k).transpose();
    lp.G.block(2 * k, p, 1, p) = -sigma.sigma.col(k).transpose();
    lp.h(2 * k) = mu + ej;
    lp.G.row(2 * k + 1) = -lp.G.row(2 * k);
    lp.h(2 * k + 1) = mu - ej;
  }
  const LpSolution sol = lp_solve(lp);
  return sol.x.head(p) - sol.x.tail(p);
}

ClimeResult clime_full(const SigmaHat& sigma) {
  const Index p = sigma.sigma.rows();
  ClimeResult out;
  out.gamma_hat = Matrix::Zero(p, p);
  out.mu = Vector::Zero(p);
  out.feasibility_slack = Vector::Zero(p);
  for (Index j = 0; j < p; ++j) {
    out.mu(j) = clime_mu(sigma, j);
    const Vector row = clime_row(sigma, j, out.mu(j));
    out.gamma_hat.row(j) = row.transpose();
    Vector viol = (row.transpose() * sigma.sigma).transpose();
    viol(j) -= 1.0;
    out.feasibility_slack(j) = viol.cwiseAbs().maxCoeff();
  }
  return out;
}

}  // namespace hdgmm
