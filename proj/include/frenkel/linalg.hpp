#pragma once

// Dense Hermitian matrix arithmetic: cyclic Jacobi eigensolver, spectral
// functions, positive/negative parts, Schatten norms and PSD-order predicates.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frenkel/errors.hpp"

namespace frenkel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace tol {
/// Eigenvalues within this fraction of the operator norm count as zero.
inline constexpr double kZeroBand = 1e-12;
/// Relative slack used by every "is >= 0" predicate.
inline constexpr double kPsdSlack = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius mass is below this fraction of ||T||_F.
inline constexpr double kJacobiStop = 1e-13;
inline constexpr int kJacobiMaxSweeps = 40;
/// A kernel direction of B counts as a support leak when x*Ax exceeds this fraction of ||A||.
inline constexpr double kSupportLeak = 1e-8;
}  // namespace tol

// ---------------------------------------------------------------------------
// HermitianMatrix
// ---------------------------------------------------------------------------

/// Dense complex Hermitian matrix. Construction symmetrizes via (M + M*)/2 and
/// keeps the largest pre-symmetrization defect |M_ij - conj(M_ji)|.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m) : m_(m) {
    if (m.rows() != m.cols()) {
      throw DimensionMismatch("HermitianMatrix: matrix is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
    if (m.rows() < 1) throw InvalidArgument("HermitianMatrix: dimension must be >= 1");
    const Index n = m.rows();
    for (Index j = 0; j < n; ++j) {
      defect_ = std::max(defect_, std::abs(m_(j, j).imag()) * 2.0);
      m_(j, j) = Complex(m_(j, j).real(), 0.0);
      for (Index i = j + 1; i < n; ++i) {
        const Complex a = m_(i, j);
        const Complex b = std::conj(m_(j, i));
        defect_ = std::max(defect_, std::abs(a - b));
        const Complex s = 0.5 * (a + b);
        m_(i, j) = s;
        m_(j, i) = std::conj(s);
      }
    }
  }

  static HermitianMatrix zero(Index n) { return HermitianMatrix(Matrix::Zero(n, n)); }
  static HermitianMatrix identity(Index n) { return HermitianMatrix(Matrix::Identity(n, n)); }
  static HermitianMatrix diagonal(const RealVector& d) {
    return HermitianMatrix(d.cast<Complex>().asDiagonal().toDenseMatrix());
  }
  static HermitianMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(RealVector::Map(d.begin(), static_cast<Index>(d.size())));
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  /// Largest |M_ij - conj(M_ji)| seen before symmetrization.
  double hermiticity_defect() const { return defect_; }
  double relative_hermiticity_defect() const {
    const double scale = m_.cwiseAbs().maxCoeff();
    return scale > 0 ? defect_ / scale : 0.0;
  }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }
  double max_abs_entry() const { return m_.cwiseAbs().maxCoeff(); }

  /// V * H * V^*; V may be rectangular (embeds a block into a larger space).
  HermitianMatrix congruence(const Matrix& v) const { return HermitianMatrix(v * m_ * v.adjoint()); }
  /// V^* * H * V; compresses onto the column span of V.
  HermitianMatrix compress(const Matrix& v) const { return HermitianMatrix(v.adjoint() * m_ * v); }

  /// Leading k x k principal block.
  HermitianMatrix leading_block(Index k) const { return HermitianMatrix(m_.topLeftCorner(k, k)); }

  HermitianMatrix& operator+=(const HermitianMatrix& o) {
    check_dims(o);
    m_ += o.m_;
    return *this;
  }
  HermitianMatrix& operator-=(const HermitianMatrix& o) {
    check_dims(o);
    m_ -= o.m_;
    return *this;
  }
  HermitianMatrix& operator*=(double s) {
    m_ *= s;
    return *this;
  }
  /// this += s * o, in place.
  void add_scaled(double s, const HermitianMatrix& o) {
    check_dims(o);
    m_ += s * o.m_;
  }

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator-(HermitianMatrix a) {
    a.m_ = -a.m_;
    return a;
  }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

 private:
  void check_dims(const HermitianMatrix& o) const {
    if (o.dim() != dim()) throw DimensionMismatch("HermitianMatrix: dimension mismatch");
  }

  Matrix m_;
  double defect_ = 0.0;
};

inline void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()) + " differ");
  }
}

// ---------------------------------------------------------------------------
// Eigendecomposition (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

/// Eigenvalues sorted descending with the matching unitary eigenvector matrix.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;  // columns

  Index dim() const { return eigenvalues.size(); }
  double max() const { return eigenvalues(0); }
  double min() const { return eigenvalues(dim() - 1); }
  /// Operator norm max |lambda_i|.
  double norm() const { return std::max(std::abs(max()), std::abs(min())); }

  HermitianMatrix reconstruct() const { return from_values(eigenvalues); }

  /// U * diag(values) * U^*.
  HermitianMatrix from_values(const RealVector& values) const {
    Matrix scaled = eigenvectors * values.cast<Complex>().asDiagonal();
    return HermitianMatrix(scaled * eigenvectors.adjoint());
  }
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

/// Diagonalizes `a` in place; accumulates rotations into `v` when non-null.
inline void jacobi_sweeps(Matrix& a, Matrix* v) {
  const Index n = a.rows();
  if (!a.allFinite()) throw EigenNonConvergence("eig_hermitian: input has non-finite entries", kInf);
  const double scale = a.norm();
  const double stop = tol::kJacobiStop * scale;
  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > stop) {
    if (sweep++ == tol::kJacobiMaxSweeps) {
      throw EigenNonConvergence("eig_hermitian: no convergence after " +
                                    std::to_string(tol::kJacobiMaxSweeps) +
                                    " sweeps, off-diagonal residual " + std::to_string(off),
                                off);
    }
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Complex g = a(p, q);
        const double ag = std::abs(g);
        if (ag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * ag);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;
        } else {
          t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex ph = g / ag;
        const Complex sph = s * std::conj(ph);
        const Complex cph = c * std::conj(ph);
        // A <- J^* A J with J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
        for (Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          const Complex nkp = c * akp - sph * akq;
          const Complex nkq = s * akp + cph * akq;
          a(k, p) = nkp;
          a(p, k) = std::conj(nkp);
          a(k, q) = nkq;
          a(q, k) = std::conj(nkq);
        }
        a(p, p) = app - t * ag;
        a(q, q) = aqq + t * ag;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (v != nullptr) {
          for (Index k = 0; k < n; ++k) {
            const Complex vkp = (*v)(k, p);
            const Complex vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - sph * vkq;
            (*v)(k, q) = s * vkp + cph * vkq;
          }
        }
      }
    }
    off = off_diagonal_norm(a);
  }
}

inline std::vector<Index> descending_order(const RealVector& d) {
  std::vector<Index> order(static_cast<std::size_t>(d.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return d(i) > d(j); });
  return order;
}

}  // namespace detail

inline SpectralDecomposition eig_hermitian(const HermitianMatrix& t) {
  const Index n = t.dim();
  Matrix a = t.matrix();
  Matrix v = Matrix::Identity(n, n);
  detail::jacobi_sweeps(a, &v);
  RealVector d = a.diagonal().real();
  const auto order = detail::descending_order(d);
  SpectralDecomposition out{RealVector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = d(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Eigenvalues only (descending); skips eigenvector accumulation.
inline RealVector eigenvalues(const HermitianMatrix& t) {
  Matrix a = t.matrix();
  detail::jacobi_sweeps(a, nullptr);
  RealVector d = a.diagonal().real();
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

inline double operator_norm(const HermitianMatrix& t) {
  const RealVector d = eigenvalues(t);
  return std::max(std::abs(d(0)), std::abs(d(d.size() - 1)));
}

/// Spectral norm of a general square or rectangular matrix.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const HermitianMatrix gram(m.adjoint() * m);
  return std::sqrt(std::max(0.0, eigenvalues(gram)(0)));
}

inline double min_eigenvalue(const HermitianMatrix& t) {
  const RealVector d = eigenvalues(t);
  return d(d.size() - 1);
}

// ---------------------------------------------------------------------------
// Spectral functions
// ---------------------------------------------------------------------------

/// U * diag(f(lambda)) * U^*. Throws if f is non-finite at some eigenvalue.
template <class F>
HermitianMatrix spectral_apply(const SpectralDecomposition& e, F&& f) {
  RealVector fv(e.dim());
  for (Index i = 0; i < e.dim(); ++i) {
    const double lam = e.eigenvalues(i);
    fv(i) = f(lam);
    if (!std::isfinite(fv(i))) {
      throw UndefinedSpectralFunction(
          "spectral_apply: function undefined at eigenvalue " + std::to_string(lam), lam);
    }
  }
  return e.from_values(fv);
}

template <class F>
HermitianMatrix spectral_apply(const HermitianMatrix& t, F&& f) {
  return spectral_apply(eig_hermitian(t), std::forward<F>(f));
}

/// T = T+ - T-, with the spectral projections onto the positive and negative eigenspaces.
struct PartsDecomposition {
  HermitianMatrix positive_part;
  HermitianMatrix negative_part;
  HermitianMatrix positive_projection;
  HermitianMatrix negative_projection;

  HermitianMatrix abs() const { return positive_part + negative_part; }
};

inline double zero_band(const SpectralDecomposition& e) { return tol::kZeroBand * e.norm(); }

inline PartsDecomposition parts(const SpectralDecomposition& e) {
  const double eps = zero_band(e);
  const Index n = e.dim();
  RealVector pos = RealVector::Zero(n), neg = RealVector::Zero(n);
  RealVector ppos = RealVector::Zero(n), pneg = RealVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double lam = e.eigenvalues(i);
    if (lam > eps) {
      pos(i) = lam;
      ppos(i) = 1.0;
    } else if (lam < -eps) {
      neg(i) = -lam;
      pneg(i) = 1.0;
    }
  }
  return {e.from_values(pos), e.from_values(neg), e.from_values(ppos), e.from_values(pneg)};
}

inline PartsDecomposition parts(const HermitianMatrix& t) { return parts(eig_hermitian(t)); }

inline HermitianMatrix positive_part(const SpectralDecomposition& e) {
  const double eps = zero_band(e);
  return e.from_values(e.eigenvalues.unaryExpr([eps](double l) { return l > eps ? l : 0.0; }));
}
inline HermitianMatrix positive_part(const HermitianMatrix& t) { return positive_part(eig_hermitian(t)); }

inline HermitianMatrix negative_part(const SpectralDecomposition& e) {
  const double eps = zero_band(e);
  return e.from_values(e.eigenvalues.unaryExpr([eps](double l) { return l < -eps ? -l : 0.0; }));
}
inline HermitianMatrix negative_part(const HermitianMatrix& t) { return negative_part(eig_hermitian(t)); }

/// {T > 0}
inline HermitianMatrix positive_projection(const SpectralDecomposition& e) {
  const double eps = zero_band(e);
  return e.from_values(e.eigenvalues.unaryExpr([eps](double l) { return l > eps ? 1.0 : 0.0; }));
}
inline HermitianMatrix positive_projection(const HermitianMatrix& t) {
  return positive_projection(eig_hermitian(t));
}

/// |T| = T+ + T-
inline HermitianMatrix abs_value(const HermitianMatrix& t) {
  return spectral_apply(t, [](double l) { return std::abs(l); });
}

inline void require_positive_definite(const SpectralDecomposition& e, const char* what) {
  if (!(e.min() > tol::kZeroBand * e.norm()) || e.norm() == 0.0) {
    throw NotPositiveDefinite(std::string(what) + ": matrix is not positive definite (min eigenvalue " +
                                  std::to_string(e.min()) + ")",
                              e.min());
  }
}

inline void require_psd(const SpectralDecomposition& e, const char* what) {
  if (e.min() < -tol::kPsdSlack * e.norm()) {
    throw NotPositiveSemidefinite(std::string(what) + ": matrix is not positive semidefinite (min eigenvalue " +
                                      std::to_string(e.min()) + ")",
                                  e.min());
  }
}

inline void require_psd(const HermitianMatrix& t, const char* what) {
  const RealVector d = eigenvalues(t);
  const double norm = std::max(std::abs(d(0)), std::abs(d(d.size() - 1)));
  if (d(d.size() - 1) < -tol::kPsdSlack * norm) {
    throw NotPositiveSemidefinite(std::string(what) + ": matrix is not positive semidefinite (min eigenvalue " +
                                      std::to_string(d(d.size() - 1)) + ")",
                                  d(d.size() - 1));
  }
}

inline HermitianMatrix matrix_log(const SpectralDecomposition& e) {
  require_positive_definite(e, "matrix_log");
  return spectral_apply(e, [](double l) { return std::log(l); });
}

inline HermitianMatrix matrix_log(const HermitianMatrix& t) { return matrix_log(eig_hermitian(t)); }

inline HermitianMatrix matrix_exp(const HermitianMatrix& t) {
  return spectral_apply(t, [](double l) { return std::exp(l); });
}

/// x log x with the continuous extension 0 log 0 = 0; eigenvalues inside the
/// zero band (including slightly negative rounding residue) map to 0.
inline HermitianMatrix x_log_x(const SpectralDecomposition& e) {
  const double eps = zero_band(e);
  return spectral_apply(e, [eps](double l) { return l > eps ? l * std::log(l) : 0.0; });
}

// ---------------------------------------------------------------------------
// Schatten norms
// ---------------------------------------------------------------------------

/// (sum |lambda_i|^p)^(1/p); p = kInf gives max |lambda_i|.
inline double schatten_norm_of_values(std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("schatten_norm: p must be >= 1, got " + std::to_string(p));
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

inline double schatten_norm_of_values(const RealVector& values, double p) {
  return schatten_norm_of_values(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())),
                                 p);
}

inline double schatten_norm(const HermitianMatrix& t, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("schatten_norm: p must be >= 1, got " + std::to_string(p));
  return schatten_norm_of_values(eigenvalues(t), p);
}

// ---------------------------------------------------------------------------
// PSD order and support containment
// ---------------------------------------------------------------------------

struct PsdOrderVerdict {
  bool holds = false;
  /// psd_order: min eigenvalue of tau*B - A. support_relation: -(x^*Ax) for the
  /// worst unit kernel direction x of B (0 when B has no kernel).
  double margin = 0.0;
  std::optional<Vector> witness;
};

/// Does A <= tau * B hold (up to the relative PSD slack)?
inline PsdOrderVerdict psd_order(const HermitianMatrix& a, const HermitianMatrix& b, double tau) {
  require_same_dim(a, b, "psd_order");
  const double na = operator_norm(a);
  const double nb = operator_norm(b);
  const SpectralDecomposition e = eig_hermitian(tau * b - a);
  PsdOrderVerdict v;
  v.margin = e.min();
  v.holds = e.min() >= -tol::kPsdSlack * (na + std::abs(tau) * nb);
  if (!v.holds) v.witness = e.eigenvectors.col(e.dim() - 1);
  return v;
}

/// Orthonormal basis of range(B) as detected by the zero band, plus its complement.
struct RangeSplit {
  Matrix range;   // n x r
  Matrix kernel;  // n x (n - r)
  RealVector range_eigenvalues;
  bool full_rank() const { return kernel.cols() == 0; }
  Index rank() const { return range.cols(); }
};

inline RangeSplit split_range(const SpectralDecomposition& eb) {
  const double eps = tol::kZeroBand * eb.norm();
  Index r = 0;
  while (r < eb.dim() && eb.eigenvalues(r) > eps && eb.norm() > 0) ++r;
  RangeSplit s;
  const Index n = eb.dim();
  if (r == n) {
    s.range = Matrix::Identity(n, n);  // keep the original coordinates when B is definite
    s.kernel = Matrix(n, 0);
  } else {
    s.range = eb.eigenvectors.leftCols(r);
    s.kernel = eb.eigenvectors.rightCols(n - r);
  }
  s.range_eigenvalues = eb.eigenvalues.head(r);
  return s;
}

/// range(A) within range(B)? Decided by the largest value of x^*Ax over unit x in ker(B).
inline PsdOrderVerdict support_relation(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "support_relation");
  const SpectralDecomposition ea = eig_hermitian(a);
  const SpectralDecomposition eb = eig_hermitian(b);
  require_psd(ea, "support_relation(A)");
  require_psd(eb, "support_relation(B)");
  const RangeSplit split = split_range(eb);
  PsdOrderVerdict v;
  v.holds = true;
  if (split.full_rank()) return v;
  const SpectralDecomposition ek = eig_hermitian(a.compress(split.kernel));
  v.margin = -ek.max();
  if (ek.max() > tol::kSupportLeak * ea.norm()) {
    v.holds = false;
    Vector x = split.kernel * ek.eigenvectors.col(0);
    v.witness = x / x.norm();
  }
  return v;
}

/// Eigenvalues (descending) of B^{-1/2} A B^{-1/2}; these are the values of
/// gamma at which A - gamma B is singular. B must be positive definite.
inline RealVector relative_spectrum(const HermitianMatrix& a, const SpectralDecomposition& eb) {
  if (a.dim() != eb.dim()) throw DimensionMismatch("relative_spectrum: dimension mismatch");
  require_positive_definite(eb, "relative_spectrum");
  const HermitianMatrix inv_sqrt = spectral_apply(eb, [](double l) { return 1.0 / std::sqrt(l); });
  return eigenvalues(HermitianMatrix(inv_sqrt.matrix() * a.matrix() * inv_sqrt.matrix()));
}

inline RealVector relative_spectrum(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "relative_spectrum");
  return relative_spectrum(a, eig_hermitian(b));
}

}  // namespace frenkel
