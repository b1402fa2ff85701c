#pragma once

// Seeded generators: random unitaries, Hermitian and PD matrices, and the
// pair generator behind `frenkel gen`.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

#include <Eigen/QR>

#include "frenkel/linalg.hpp"

namespace frenkel {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hash of a tuple of integers; stable across platforms.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

/// Uniform in [0, 1) from the top 53 bits.
inline double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

using Rng = std::mt19937_64;

inline Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

inline Vector random_unit_vector(Index n, Rng& rng) {
  Vector v = gaussian_matrix(n, 1, rng).col(0);
  return v / v.norm();
}

/// Haar unitary: QR of a complex Gaussian matrix with R's diagonal phases removed.
inline Matrix random_unitary(Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline HermitianMatrix random_hermitian(Index n, Rng& rng, double scale = 1.0) {
  const Matrix g = gaussian_matrix(n, n, rng);
  return HermitianMatrix(0.5 * scale * (g + g.adjoint()));
}

/// Eigenvalues log-uniform in [1/cond, 1], in random order.
inline RealVector log_uniform_spectrum(Index n, double cond, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVector d(n);
  for (Index i = 0; i < n; ++i) d(i) = std::pow(cond, -u(rng));
  return d;
}

inline HermitianMatrix random_pd(Index n, Rng& rng, double cond = 10.0) {
  const Matrix u = random_unitary(n, rng);
  return HermitianMatrix::diagonal(log_uniform_spectrum(n, cond, rng)).congruence(u);
}

struct GeneratorOptions {
  std::uint64_t seed = 0;
  Index dim = 4;
  bool commuting = false;
  /// B gets max(1, dim/3) zero eigenvalues; A is built inside range(B).
  bool singular_b = false;
  /// Like singular_b, but A is definite, so range(A) is not inside range(B).
  bool unsupported = false;
  double condition_target = 10.0;
};

inline void validate(const GeneratorOptions& o) {
  if (o.dim < 1 || o.dim > 512) throw InvalidArgument("generate_pair: dim must lie in [1, 512]");
  if (!(o.condition_target >= 1.0) || !std::isfinite(o.condition_target))
    throw InvalidArgument("generate_pair: condition target must be a finite number >= 1");
  if (o.singular_b && o.unsupported) throw InvalidArgument("generate_pair: --singular-b and --unsupported exclude each other");
  if ((o.singular_b || o.unsupported) && o.dim < 2)
    throw InvalidArgument("generate_pair: a singular B needs dim >= 2");
}

inline std::pair<HermitianMatrix, HermitianMatrix> generate_pair(const GeneratorOptions& o) {
  validate(o);
  Rng rng(o.seed);
  const Index n = o.dim;
  const Matrix ua = random_unitary(n, rng);
  const Matrix ub = o.commuting ? ua : random_unitary(n, rng);
  RealVector da = log_uniform_spectrum(n, o.condition_target, rng);
  RealVector db = log_uniform_spectrum(n, o.condition_target, rng);
  if (!o.singular_b && !o.unsupported)
    return {HermitianMatrix::diagonal(da).congruence(ua), HermitianMatrix::diagonal(db).congruence(ub)};

  const Index k = std::max<Index>(1, n / 3);
  const Index r = n - k;
  db.tail(k).setZero();
  const HermitianMatrix b = HermitianMatrix::diagonal(db).congruence(ub);
  if (o.unsupported) return {HermitianMatrix::diagonal(da).congruence(ua), b};
  if (o.commuting) {
    da.tail(k).setZero();
    return {HermitianMatrix::diagonal(da).congruence(ub), b};
  }
  // A = V M V* with V the range basis of B and M definite on that block.
  const Matrix v = ub.leftCols(r);
  const Matrix w = random_unitary(r, rng);
  const HermitianMatrix m = HermitianMatrix::diagonal(RealVector(da.head(r))).congruence(w);
  return {m.congruence(v), b};
}

}  // namespace frenkel
