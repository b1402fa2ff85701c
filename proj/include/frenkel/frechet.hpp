#pragma once

// Frechet derivative of the matrix logarithm, Dlog[B](A), by the
// Daleckii-Krein formula, plus the central finite-difference oracle.

#include <cmath>
#include <span>
#include <utility>

#include "frenkel/linalg.hpp"

namespace frenkel {

/// First divided differences of log at the eigenvalues of B.
struct LoewnerMatrix {
  RealMatrix values;
};

namespace detail {

/// Gap below which (log a - log b)/(a - b) is replaced by 2/(a + b).
inline constexpr double kCoincidenceGap = 1e-7;

inline double log_divided_difference(double a, double b) {
  const double hi = std::max(a, b);
  const double gap = std::abs(a - b);
  if (gap <= kCoincidenceGap * hi) return 2.0 / (a + b);
  // log1p keeps full precision when a/b is close to 1.
  return std::log1p((a - b) / b) / (a - b);
}

}  // namespace detail

inline LoewnerMatrix loewner_log(std::span<const double> eigs) {
  const auto n = static_cast<Index>(eigs.size());
  for (double b : eigs) {
    if (!(b > 0.0)) throw NotPositiveDefinite("loewner_log: eigenvalue " + std::to_string(b) + " is not positive", b);
  }
  LoewnerMatrix l{RealMatrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    l.values(i, i) = 1.0 / eigs[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < n; ++j) {
      const double q = detail::log_divided_difference(eigs[static_cast<std::size_t>(i)],
                                                      eigs[static_cast<std::size_t>(j)]);
      l.values(i, j) = q;
      l.values(j, i) = q;
    }
  }
  return l;
}

inline LoewnerMatrix loewner_log(const RealVector& eigs) {
  return loewner_log(std::span<const double>(eigs.data(), static_cast<std::size_t>(eigs.size())));
}

/// Dlog[B](A) = U (L o U^*AU) U^* for a precomputed decomposition of B.
inline HermitianMatrix dlog(const SpectralDecomposition& eb, const HermitianMatrix& a) {
  if (eb.dim() != a.dim()) throw DimensionMismatch("dlog: dimension mismatch");
  require_positive_definite(eb, "dlog");
  const LoewnerMatrix l = loewner_log(eb.eigenvalues);
  const Matrix& u = eb.eigenvectors;
  Matrix c = u.adjoint() * a.matrix() * u;
  c = c.cwiseProduct(l.values.cast<Complex>());
  return HermitianMatrix(u * c * u.adjoint());
}

inline HermitianMatrix dlog(const HermitianMatrix& b, const HermitianMatrix& a) {
  require_same_dim(b, a, "dlog");
  return dlog(eig_hermitian(b), a);
}

/// Default step 1e-5 * ||B|| / max(||A||, 1).
inline double default_fd_step(const HermitianMatrix& b, const HermitianMatrix& a) {
  return 1e-5 * operator_norm(b) / std::max(operator_norm(a), 1.0);
}

/// (log(B + tA) - log(B - tA)) / (2t)
inline HermitianMatrix dlog_fd_oracle(const HermitianMatrix& b, const HermitianMatrix& a, double t) {
  require_same_dim(b, a, "dlog_fd_oracle");
  if (!(t > 0.0)) throw InvalidArgument("dlog_fd_oracle: step must be positive");
  const SpectralDecomposition plus = eig_hermitian(b + t * a);
  const SpectralDecomposition minus = eig_hermitian(b - t * a);
  if (!(plus.min() > tol::kZeroBand * plus.norm()) || !(minus.min() > tol::kZeroBand * minus.norm())) {
    throw NotPositiveDefinite("dlog_fd_oracle: step too large, B +/- tA is not positive definite",
                              std::min(plus.min(), minus.min()));
  }
  return (0.5 / t) * (matrix_log(plus) - matrix_log(minus));
}

inline HermitianMatrix dlog_fd_oracle(const HermitianMatrix& b, const HermitianMatrix& a) {
  return dlog_fd_oracle(b, a, default_fd_step(b, a));
}

/// |tr(B Dlog[B](A)) - tr A| and ||Dlog[B](B) - I||.
struct TracePairingResiduals {
  double trace_residual;
  double identity_residual;
};

inline TracePairingResiduals trace_pairing_check(const HermitianMatrix& b, const HermitianMatrix& a) {
  require_same_dim(b, a, "trace_pairing_check");
  const SpectralDecomposition eb = eig_hermitian(b);
  const HermitianMatrix d = dlog(eb, a);
  const double tr = (b.matrix() * d.matrix()).trace().real();
  const HermitianMatrix self = dlog(eb, b);
  return {std::abs(tr - a.trace()), operator_norm(self - HermitianMatrix::identity(b.dim()))};
}

}  // namespace frenkel
