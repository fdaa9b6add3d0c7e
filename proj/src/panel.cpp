#include "hdgmm/panel.hpp"

#include <cmath>

namespace hdgmm {

Index panel_instrument_count(Index T, Index K) {
  return (T - 2) * (T - 1) / 2 + T * (T - 1) * K;
}

StackedGmm panel_to_gmm(const PanelData& data) {
  const Index n = data.y.rows(), T = data.y.cols();
  const Index K = static_cast<Index>(data.x.size());
  if (T < 3) throw TooFewPeriods("panel_to_gmm: need T >= 3");
  for (const auto& xk : data.x)
    if (xk.rows() != n || xk.cols() != T)
      throw DimensionMismatch("panel_to_gmm: x block shape != y shape");

  const Index rows = n * (T - 2);
  const Index q = panel_instrument_count(T, K);
  const Index q_y = (T - 2) * (T - 1) / 2;

  StackedGmm out;
  out.Y.resize(rows);
  out.X.resize(rows, K + 1);
  out.Z = Matrix::Zero(rows, q);

  // y values use 1-based period t mapped onto column t-1.
  const auto yv = [&](Index i, Index t) { return data.y(i, t - 1); };

  for (Index i = 0; i < n; ++i) {
    for (Index t = 3; t <= T; ++t) {
      const Index row = i * (T - 2) + (t - 3);
      out.Y(row) = yv(i, t) - yv(i, t - 1);
      out.X(row, 0) = yv(i, t - 1) - yv(i, t - 2);
      for (Index k = 0; k < K; ++k)
        out.X(row, k + 1) = data.x[k](i, t - 1) - data.x[k](i, t - 2);

      // Lagged-y block for period t: y_{i1}, ..., y_{i,t-2}.
      const Index y_off = (t - 3) * (t - 2) / 2;
      for (Index lag = 1; lag <= t - 2; ++lag)
        out.Z(row, y_off + lag - 1) = yv(i, lag);

      // Full exogenous history in the block for difference period s = t.
      const Index x_off = q_y + (t - 2) * T * K;
      for (Index s = 1; s <= T; ++s)
        for (Index k = 0; k < K; ++k)
          out.Z(row, x_off + (s - 1) * K + k) = data.x[k](i, s - 1);
    }
  }
  return out;
}

PanelData simulate_panel(Index n, Index T, Index K, double rho0, double delta0,
                         std::uint64_t seed) {
  if (std::abs(rho0) >= 1.0)
    throw InvalidSpec("simulate_panel: need |rho0| < 1");
  if (n < 1 || T < 1 || K < 0) throw InvalidSpec("simulate_panel: bad sizes");

  Rng rng(seed);
  PanelData data;
  data.has_truth = true;
  data.rho0 = rho0;
  data.delta0 = delta0;
  data.mu = rng.normal_vector(n);
  data.x.assign(K, Matrix(n, T));
  for (Index k = 0; k < K; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index t = 0; t < T; ++t) data.x[k](i, t) = rng.normal();

  data.y.resize(n, T);
  for (Index i = 0; i < n; ++i) {
    double prev = 0.0;  // y_{i0}
    for (Index t = 0; t < T; ++t) {
      double val = rho0 * prev + data.mu(i) + rng.normal();
      for (Index k = 0; k < K; ++k) val += delta0 * data.x[k](i, t);
      data.y(i, t) = val;
      prev = val;
    }
  }
  return data;
}

}  // namespace hdgmm
