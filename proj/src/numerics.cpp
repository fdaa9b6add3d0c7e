#include "hdgmm/numerics.hpp"

#include <cmath>

namespace hdgmm {

namespace {

// splitmix64 step; used only to expand the 64-bit seed into generator state.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

Rng Rng::for_replication(std::uint64_t base_seed, std::uint64_t index) {
  // Large odd multiplier decorrelates consecutive replication streams.
  return Rng(base_seed ^ (index * 0x9e3779b97f4a7c15ULL));
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53-bit mantissa; add 1/2^54 offset so the result is strictly positive.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector Rng::normal_vector(Index d) {
  if (d < 1) throw EmptyInput("normal_vector: d must be >= 1");
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = normal();
  return v;
}

Matrix cholesky(const Matrix& A) {
  const Index n = A.rows();
  if (n != A.cols()) throw DimensionMismatch("cholesky: matrix not square");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw InputError("cholesky: matrix not symmetric within 1e-10");

  Matrix L = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = A(j, j) - L.row(j).head(j).squaredNorm();
    if (d <= 1e-12)
      throw NotPositiveDefinite("cholesky: pivot <= 1e-12 at column " +
                                std::to_string(j));
    L(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      L(i, j) =
          (A(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
  }
  return L;
}

double max_abs(const Vector& v) {
  if (v.size() == 0) throw EmptyInput("max_abs: empty vector");
  return v.cwiseAbs().maxCoeff();
}

double l1_norm(const Vector& v) {
  if (v.size() == 0) throw EmptyInput("l1_norm: empty vector");
  return v.lpNorm<1>();
}

double l2_norm(const Vector& v) {
  if (v.size() == 0) throw EmptyInput("l2_norm: empty vector");
  return v.norm();
}

double matrix_max_norm(const Matrix& A) {
  if (A.size() == 0) throw EmptyInput("matrix_max_norm: empty matrix");
  return A.cwiseAbs().maxCoeff();
}

void check_finite(const Matrix& A, const char* what) {
  if (!A.allFinite())
    throw InputError(std::string(what) + ": non-finite entry");
}

}  // namespace hdgmm
