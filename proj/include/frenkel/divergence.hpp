#pragma once

// The divergence operator Delta(A||B) = A(log A - log B) - B Dlog[B](A) + B,
// the trace divergence D(A||B), the clipped operator (A - gamma B)+ and the
// finite/divergent dichotomy with restriction to range(B).

#include <optional>

#include "frenkel/frechet.hpp"
#include "frenkel/linalg.hpp"

namespace frenkel {

enum class Dichotomy { Finite, Divergent };

inline const char* to_string(Dichotomy d) { return d == Dichotomy::Finite ? "Finite" : "Divergent"; }

/// O_gamma(A||B) = (A - gamma B)+
inline HermitianMatrix o_gamma(const HermitianMatrix& a, const HermitianMatrix& b, double gamma) {
  require_same_dim(a, b, "o_gamma");
  return positive_part(a - gamma * b);
}

/// A PSD pair with range(A) inside range(B), compressed onto range(B).
/// When B is definite the block is the pair itself in the original basis.
class RestrictedPair {
 public:
  RestrictedPair(const HermitianMatrix& a, const HermitianMatrix& b, const SpectralDecomposition& eb)
      : dim_(a.dim()), split_(split_range(eb)) {
    if (split_.rank() > 0) {
      if (split_.full_rank()) {
        a_block_.emplace(a);
        b_block_.emplace(b);
      } else {
        a_block_.emplace(a.compress(split_.range));
        b_block_.emplace(HermitianMatrix::diagonal(split_.range_eigenvalues));
      }
    }
  }

  Index dim() const { return dim_; }
  Index rank() const { return split_.rank(); }
  bool empty() const { return split_.rank() == 0; }
  bool full_rank() const { return split_.full_rank(); }
  const HermitianMatrix& a() const { return *a_block_; }
  const HermitianMatrix& b() const { return *b_block_; }
  const RangeSplit& split() const { return split_; }

  HermitianMatrix embed(const HermitianMatrix& block) const {
    if (split_.full_rank()) return block;
    return block.congruence(split_.range);
  }
  Matrix embed(const Matrix& block) const {
    if (split_.full_rank()) return block;
    return split_.range * block * split_.range.adjoint();
  }

 private:
  Index dim_;
  RangeSplit split_;
  std::optional<HermitianMatrix> a_block_;
  std::optional<HermitianMatrix> b_block_;
};

/// Support verdict plus, when finite, the pair restricted to range(B).
struct PairAnalysis {
  PsdOrderVerdict support;
  std::optional<RestrictedPair> restricted;
  Dichotomy dichotomy() const { return support.holds ? Dichotomy::Finite : Dichotomy::Divergent; }
};

inline PairAnalysis analyze_pair(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "analyze_pair");
  PairAnalysis out;
  out.support = support_relation(a, b);
  if (out.support.holds) out.restricted.emplace(a, b, eig_hermitian(b));
  return out;
}

/// Smallest tau with A <= tau B, or nullopt when range(A) is not inside range(B).
inline std::optional<double> minimal_tau(const HermitianMatrix& a, const HermitianMatrix& b) {
  const PairAnalysis pa = analyze_pair(a, b);
  if (!pa.restricted) return std::nullopt;
  if (pa.restricted->empty()) return 0.0;
  return std::max(0.0, relative_spectrum(pa.restricted->a(), pa.restricted->b())(0));
}

struct DivergenceReport {
  std::optional<HermitianMatrix> delta;  // empty when divergent
  double trace_div = kInf;               // +inf sentinel when divergent
  Dichotomy dichotomy = Dichotomy::Divergent;
  std::optional<Vector> witness;
  double residual_trace_consistency = 0.0;
  /// Largest |M_ij - conj(M_ji)| of the assembled expression before symmetrization.
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  Index support_rank = 0;
};

namespace detail {

struct BlockDivergence {
  HermitianMatrix delta;
  double trace_div;
};

/// Delta and D on a block where B is definite and A is PSD.
inline BlockDivergence divergence_on_block(const HermitianMatrix& a, const HermitianMatrix& b) {
  const SpectralDecomposition ea = eig_hermitian(a);
  const SpectralDecomposition eb = eig_hermitian(b);
  const HermitianMatrix alog = x_log_x(ea);
  const HermitianMatrix logb = matrix_log(eb);
  const HermitianMatrix dl = dlog(eb, a);
  const Matrix alogb = a.matrix() * logb.matrix();
  const Matrix m = alog.matrix() - alogb - b.matrix() * dl.matrix() + b.matrix();
  const double d = alog.trace() - alogb.trace().real() - a.trace() + b.trace();
  return {HermitianMatrix(m), d};
}

}  // namespace detail

inline DivergenceReport delta_operator(const HermitianMatrix& a, const HermitianMatrix& b) {
  const PairAnalysis pa = analyze_pair(a, b);
  DivergenceReport r;
  if (!pa.restricted) {
    r.dichotomy = Dichotomy::Divergent;
    r.witness = pa.support.witness;
    r.trace_div = kInf;
    r.residual_trace_consistency = 0.0;
    return r;
  }
  const RestrictedPair& rp = *pa.restricted;
  r.dichotomy = Dichotomy::Finite;
  r.support_rank = rp.rank();
  if (rp.empty()) {
    r.delta.emplace(HermitianMatrix::zero(a.dim()));
    r.trace_div = 0.0;
    return r;
  }
  const detail::BlockDivergence blk = detail::divergence_on_block(rp.a(), rp.b());
  r.hermiticity_defect = blk.delta.hermiticity_defect();
  r.delta.emplace(rp.embed(blk.delta));
  r.trace_div = blk.trace_div;
  r.residual_trace_consistency = std::abs(r.delta->trace() - r.trace_div);
  r.min_eigenvalue = min_eigenvalue(blk.delta);
  if (!rp.full_rank()) r.min_eigenvalue = std::min(r.min_eigenvalue, 0.0);
  return r;
}

/// D(A||B) = tr(A(log A - log B) - A + B); +inf when range(A) is not inside range(B).
inline double trace_divergence(const HermitianMatrix& a, const HermitianMatrix& b) {
  const PairAnalysis pa = analyze_pair(a, b);
  if (!pa.restricted) return kInf;
  if (pa.restricted->empty()) return 0.0;
  const RestrictedPair& rp = *pa.restricted;
  const SpectralDecomposition ea = eig_hermitian(rp.a());
  const SpectralDecomposition eb = eig_hermitian(rp.b());
  const double alog = x_log_x(ea).trace();
  const double alogb = (rp.a().matrix() * matrix_log(eb).matrix()).trace().real();
  return alog - alogb - rp.a().trace() + rp.b().trace();
}

/// Delta(A||B + eps I) at two regularizations, linearly extrapolated to eps = 0.
/// For range(A) inside range(B) this converges to the restricted Delta.
struct RegularizedDelta {
  HermitianMatrix at_eps1;
  HermitianMatrix at_eps2;
  HermitianMatrix extrapolated;
};

inline RegularizedDelta regularized_delta(const HermitianMatrix& a, const HermitianMatrix& b, double eps1 = 1e-6,
                                          double eps2 = 1e-8) {
  if (!(eps1 > 0.0 && eps2 > 0.0 && eps1 != eps2)) throw InvalidArgument("regularized_delta: need distinct eps > 0");
  const HermitianMatrix id = HermitianMatrix::identity(a.dim());
  HermitianMatrix d1 = *delta_operator(a, b + eps1 * id).delta;
  HermitianMatrix d2 = *delta_operator(a, b + eps2 * id).delta;
  HermitianMatrix ex = (eps1 / (eps1 - eps2)) * d2 - (eps2 / (eps1 - eps2)) * d1;
  return {std::move(d1), std::move(d2), std::move(ex)};
}

}  // namespace frenkel
