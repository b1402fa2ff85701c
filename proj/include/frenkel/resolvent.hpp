#pragma once

// Resolvent integral representations used as independent oracles for the
// spectral routines: log B, |A|, Dlog[B](A), B Dlog[B](A) and A(log A - log B).
// Every integrand is built from linear solves, never from an eigendecomposition.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>

#include "frenkel/divergence.hpp"
#include "frenkel/linalg.hpp"
#include "frenkel/quadrature.hpp"

namespace frenkel {

template <class V>
struct ResolventResult {
  V value;
  double error_estimate = 0.0;
  /// Norm of the untransformed x-integrand at the last sample point x_end.
  double endpoint_integrand_norm = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

/// Upper end of the substituted variable; x_end = c (1 - s_end) / s_end ~ c 1e12.
inline constexpr double kResolventSEnd = 1.0 - 1e-12;

/// int_0^inf f(x) dx with x = c s / (1 - s), s in [0, 1 - 1e-12].
template <class V, class F>
ResolventResult<V> semi_infinite(F&& f, double c, double tol) {
  using T = QuadratureTraits<V>;
  auto g = [&](double s) {
    const double x = c * s / (1.0 - s);
    const double jac = c / ((1.0 - s) * (1.0 - s));
    return T::scaled(f(x), jac);
  };
  QuadratureResult<V> q = adaptive_integral<V>(g, 0.0, kResolventSEnd, tol);
  const double x_end = c * kResolventSEnd / (1.0 - kResolventSEnd);
  return {std::move(q.value), q.error_estimate, T::norm(f(x_end)), q.evaluations, q.converged};
}

inline Matrix shifted_inverse(const Matrix& b, double x) {
  const Index n = b.rows();
  Matrix m = b;
  m.diagonal().array() += x;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite("resolvent: B + xI is not positive definite", 0.0);
  return llt.solve(Matrix::Identity(n, n));
}

inline double substitution_scale(const HermitianMatrix& a, const HermitianMatrix& b) {
  return std::max({operator_norm(a), operator_norm(b), 1.0});
}

/// Definiteness test by Cholesky, keeping the oracle path free of eigensolvers.
inline void require_pd_cholesky(const HermitianMatrix& b, const char* what) {
  Eigen::LLT<Matrix> llt(b.matrix());
  if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().real().array() <= 0).any())
    throw NotPositiveDefinite(std::string(what) + ": matrix is not positive definite", 0.0);
}

}  // namespace detail

/// log B = int_0^inf ((1+x)^{-1} I - (B+xI)^{-1}) dx.
inline ResolventResult<HermitianMatrix> log_resolvent(const HermitianMatrix& b, double tol = 1e-8) {
  detail::require_pd_cholesky(b, "log_resolvent");
  const double c = std::max(operator_norm(b), 1.0);
  return detail::semi_infinite<HermitianMatrix>(
      [&](double x) {
        Matrix m = -detail::shifted_inverse(b.matrix(), x);
        m.diagonal().array() += 1.0 / (1.0 + x);
        return HermitianMatrix(m);
      },
      c, tol);
}

struct AbsResolvent {
  HermitianMatrix abs;
  HermitianMatrix plus;   // (A + |A|) / 2
  HermitianMatrix minus;  // (|A| - A) / 2
  double error_estimate = 0.0;
};

/// |A| = (2/pi) int_0^inf A^2 (A^2 + x^2 I)^{-1} dx with x = ||A|| u / (1 - u).
inline AbsResolvent abs_resolvent(const HermitianMatrix& a, double tol = 1e-8) {
  const Index n = a.dim();
  const double na = operator_norm(a);
  if (na == 0.0) {
    const HermitianMatrix z = HermitianMatrix::zero(n);
    return {z, z, z, 0.0};
  }
  const Matrix a2 = a.matrix() * a.matrix();
  const double scale = 2.0 / std::numbers::pi;
  auto r = detail::semi_infinite<HermitianMatrix>(
      [&](double x) {
        Matrix m = a2;
        m.diagonal().array() += x * x;
        Eigen::LDLT<Matrix> ldlt(m);
        return HermitianMatrix(a2 * ldlt.solve(Matrix::Identity(n, n)));
      },
      na, tol / scale);
  HermitianMatrix abs = scale * r.value;
  HermitianMatrix plus = 0.5 * (abs + a);
  HermitianMatrix minus = 0.5 * (abs - a);
  return {std::move(abs), std::move(plus), std::move(minus), scale * r.error_estimate};
}

/// Dlog[B](A) = int_0^inf (B+xI)^{-1} A (B+xI)^{-1} dx.
inline ResolventResult<HermitianMatrix> dlog_resolvent(const HermitianMatrix& b, const HermitianMatrix& a,
                                                       double tol = 1e-8) {
  require_same_dim(a, b, "dlog_resolvent");
  detail::require_pd_cholesky(b, "dlog_resolvent");
  return detail::semi_infinite<HermitianMatrix>(
      [&](double x) {
        const Matrix r = detail::shifted_inverse(b.matrix(), x);
        return HermitianMatrix(r * a.matrix() * r);
      },
      detail::substitution_scale(a, b), tol);
}

/// Smallest constants with A^2 <= alpha^2 B^2, B^2 <= beta_a^2 A^2 and
/// (A - B)^2 <= beta_b^2 A^2. For definite B, alpha = ||A B^{-1}||; the
/// betas need A definite and are otherwise absent.
struct DominationConstants {
  double alpha = 0.0;
  std::optional<double> beta_a;
  std::optional<double> beta_b;
};

inline DominationConstants domination_constants(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "domination_constants");
  detail::require_pd_cholesky(b, "domination_constants: B");
  const Index n = a.dim();
  const Matrix id = Matrix::Identity(n, n);
  DominationConstants dc;
  const Matrix binv = Eigen::LLT<Matrix>(b.matrix()).solve(id);
  dc.alpha = operator_norm(Matrix(a.matrix() * binv));
  Eigen::LLT<Matrix> la(a.matrix());
  if (la.info() == Eigen::Success && (la.matrixL().toDenseMatrix().diagonal().real().array() > 0).all()) {
    const Matrix ainv = la.solve(id);
    dc.beta_a = operator_norm(Matrix(b.matrix() * ainv));
    dc.beta_b = operator_norm(Matrix((a.matrix() - b.matrix()) * ainv));
  }
  return dc;
}

/// min eig(c^2 D^2 - X^2): non-negative iff X^2 <= c^2 D^2.
inline double domination_margin(const HermitianMatrix& dominated, const HermitianMatrix& dominator, double c) {
  const Matrix d2 = dominator.matrix() * dominator.matrix();
  const Matrix x2 = dominated.matrix() * dominated.matrix();
  return min_eigenvalue(HermitianMatrix(c * c * d2 - x2));
}

struct BdlogProduct {
  Matrix value;  // B Dlog[B](A); not Hermitian in general
  double error_estimate = 0.0;
  double alpha = 0.0;
  double norm = 0.0;
  double bound = 0.0;  // alpha ||B||
  bool bound_holds = true;
};

/// B Dlog[B](A) = int_0^inf B (B+xI)^{-1} A (B+xI)^{-1} dx with the bound
/// ||B Dlog[B](A)|| <= alpha ||B||. Singular B is handled on range(B), which
/// requires ker B inside ker A.
inline BdlogProduct bdlog_product(const HermitianMatrix& a, const HermitianMatrix& b, double tol = 1e-8) {
  require_same_dim(a, b, "bdlog_product");
  require_psd(b, "bdlog_product: B");
  const SpectralDecomposition eb = eig_hermitian(b);
  const RangeSplit split = split_range(eb);
  if (split.rank() == 0) return {Matrix::Zero(a.dim(), a.dim())};
  const bool full = split.full_rank();
  if (!full) {
    const double leak = operator_norm(Matrix(a.matrix() * split.kernel));
    if (leak > tol::kSupportLeak * std::max(operator_norm(a), 1e-300))
      throw InvalidArgument("bdlog_product: ker B is not contained in ker A");
  }
  const HermitianMatrix ab = full ? a : a.compress(split.range);
  const HermitianMatrix bb = full ? b : HermitianMatrix::diagonal(split.range_eigenvalues);

  BdlogProduct out;
  auto q = detail::semi_infinite<Matrix>(
      [&](double x) {
        const Matrix r = detail::shifted_inverse(bb.matrix(), x);
        return Matrix(bb.matrix() * r * ab.matrix() * r);
      },
      detail::substitution_scale(ab, bb), tol);
  out.value = full ? q.value : Matrix(split.range * q.value * split.range.adjoint());
  out.error_estimate = q.error_estimate;
  out.alpha = domination_constants(ab, bb).alpha;
  out.norm = operator_norm(out.value);
  out.bound = out.alpha * operator_norm(bb);
  out.bound_holds = out.norm <= out.bound * (1.0 + 1e-6);
  return out;
}

struct AlogdiffIntegral {
  Matrix value;  // A(log A - log B)
  double error_estimate = 0.0;
  DominationConstants constants;
  double norm = 0.0;
  /// (log||B|| - log||A||) / (||B|| - ||A||), or 1/||A|| when the norms agree.
  double log_factor = 0.0;
  double bound_a = 0.0;  // alpha (1 + beta_a) ||A|| ||B|| L
  double bound_b = 0.0;  // alpha beta_b ||A|| ||B|| L
  bool condition_a = false;
  bool condition_b = false;
  bool bound_a_holds = true;
  bool bound_b_holds = true;
};

/// A(log A - log B) = int_0^inf (A(B+xI)^{-1} - A(A+xI)^{-1}) dx, evaluated as
/// A (B+xI)^{-1} (A - B) (A+xI)^{-1} to avoid cancellation.
inline AlogdiffIntegral alogdiff_integral(const HermitianMatrix& a, const HermitianMatrix& b, double tol = 1e-8) {
  require_same_dim(a, b, "alogdiff_integral");
  detail::require_pd_cholesky(a, "alogdiff_integral: A");
  detail::require_pd_cholesky(b, "alogdiff_integral: B");
  const Matrix d = a.matrix() - b.matrix();
  auto q = detail::semi_infinite<Matrix>(
      [&](double x) {
        return Matrix(a.matrix() * detail::shifted_inverse(b.matrix(), x) * d *
                      detail::shifted_inverse(a.matrix(), x));
      },
      detail::substitution_scale(a, b), tol);
  AlogdiffIntegral out;
  out.value = std::move(q.value);
  out.error_estimate = q.error_estimate;
  out.constants = domination_constants(a, b);
  out.norm = operator_norm(out.value);
  const double na = operator_norm(a);
  const double nb = operator_norm(b);
  out.log_factor = std::abs(nb - na) <= 1e-12 * std::max(na, nb) ? 1.0 / na : (std::log(nb) - std::log(na)) / (nb - na);
  const double base = out.constants.alpha * na * nb * out.log_factor;
  if (out.constants.beta_a) {
    out.condition_a = true;
    out.bound_a = base * (1.0 + *out.constants.beta_a);
    out.bound_a_holds = out.norm <= out.bound_a * (1.0 + 1e-6);
  }
  if (out.constants.beta_b) {
    out.condition_b = true;
    out.bound_b = base * *out.constants.beta_b;
    out.bound_b_holds = out.norm <= out.bound_b * (1.0 + 1e-6);
  }
  return out;
}

/// Regularization study: distance of A_e(log A_e - log B_e), with A_e = A + eI
/// and B_e = B + eI, to the unregularized spectral value.
struct EpsilonLadderStep {
  double epsilon;
  double residual;
};

inline std::vector<EpsilonLadderStep> epsilon_ladder(const HermitianMatrix& a, const HermitianMatrix& b,
                                                     double tol = 1e-8) {
  require_same_dim(a, b, "epsilon_ladder");
  const Matrix exact = x_log_x(eig_hermitian(a)).matrix() - a.matrix() * matrix_log(b).matrix();
  const HermitianMatrix id = HermitianMatrix::identity(a.dim());
  std::vector<EpsilonLadderStep> out;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
    const HermitianMatrix ae = a + eps * id;
    const HermitianMatrix be = b + eps * id;
    out.push_back({eps, operator_norm(Matrix(alogdiff_integral(ae, be, tol).value - exact))});
  }
  return out;
}

}  // namespace frenkel
