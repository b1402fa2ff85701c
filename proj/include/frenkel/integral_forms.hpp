#pragma once

// Quadrature realizations of the integral formulas for Delta(A||B):
//   gamma-form   int_1^inf [ g^-1 (A - gB)+ + g^-2 (B - gA)+ ] dg
//   t-form       int_{R \ [0,1]} dt / (|t| (t-1)^2) ((1-t)A + tB)-
// plus the scalar trace version, the u + v - w decomposition of A(log A - log B)
// and the growth probe for pairs whose support condition fails.
//
// Both forms share one parametrization: g in [1, g_max] for the first piece
// and u = 1/g in (0, 1) for the second. For the t-form, g = t/(t-1) on t > 1
// and u = t/(t-1) on t < 0.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "frenkel/divergence.hpp"
#include "frenkel/linalg.hpp"
#include "frenkel/pencil.hpp"
#include "frenkel/quadrature.hpp"

namespace frenkel {

inline constexpr double kDefaultQuadratureTol = 1e-8;

using MatrixQuadrature = QuadratureResult<HermitianMatrix>;

struct FrgResult {
  Dichotomy verdict = Dichotomy::Divergent;
  std::optional<Vector> witness;
  MatrixQuadrature total;
  MatrixQuadrature term1;  // panels in g (or t > 1 for the t-form)
  MatrixQuadrature term2;  // panels in u (or t < 0 for the t-form)
  /// "term1" / "term2" per entry of total.panels.
  std::vector<std::string> panel_segments;
  double gamma_max = 1.0;
  /// Largest |lambda| of the second-piece integrand over all nodes; bounded by ||B||.
  double term2_peak_norm = 0.0;
  double b_norm = 0.0;
  /// Kinks that seeded the initial panels, in integration coordinates.
  std::vector<double> kinks;
  /// Limit of (B - A/u)+ as u -> 0: B compressed to ker A. The rule never
  /// samples u = 0, so this is reported rather than integrated.
  std::optional<HermitianMatrix> term2_endpoint;
};

namespace detail {

inline MatrixQuadrature zero_quadrature(Index n) { return MatrixQuadrature{HermitianMatrix::zero(n)}; }

inline void atomic_max(std::atomic<double>& slot, double v) {
  double cur = slot.load();
  while (v > cur && !slot.compare_exchange_weak(cur, v)) {
  }
}

/// Negative part of (1-t)A + tB divided by |t|(t-1)^2: the t-form density.
inline HermitianMatrix frg_t_density(const HermitianMatrix& a, const HermitianMatrix& b, double t) {
  HermitianMatrix m = (1.0 - t) * a;
  m.add_scaled(t, b);
  HermitianMatrix neg = negative_part(m);
  neg *= 1.0 / (std::abs(t) * (t - 1.0) * (t - 1.0));
  return neg;
}

/// Trace of frg_t_density from eigenvalues only.
inline double frg_t_density_trace(const HermitianMatrix& a, const HermitianMatrix& b, double t) {
  HermitianMatrix m = (1.0 - t) * a;
  m.add_scaled(t, b);
  const RealVector ev = eigenvalues(m);
  const double band = tol::kZeroBand * ev.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -band) s -= ev(i);
  return s / (std::abs(t) * (t - 1.0) * (t - 1.0));
}

inline double t_from_gamma(double g) { return g / (g - 1.0); }
inline double t_from_u(double u) { return u / (u - 1.0); }

/// Shared setup for both operator forms on the range(B) block.
struct FrgSetup {
  PairAnalysis analysis;
  RealVector mu;  // spectrum of B^{-1/2} A B^{-1/2} on the block, descending
  double gamma_max = 1.0;
  std::vector<double> kinks1;  // in (1, gamma_max)
  std::vector<double> kinks2;  // in (0, 1)
};

inline FrgSetup frg_setup(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "rhs_frg");
  require_psd(a, "rhs_frg: A");
  require_psd(b, "rhs_frg: B");
  FrgSetup s{analyze_pair(a, b)};
  if (!s.analysis.restricted || s.analysis.restricted->empty()) return s;
  const RestrictedPair& rp = *s.analysis.restricted;
  s.mu = relative_spectrum(rp.a(), rp.b());
  s.gamma_max = std::max(1.0, s.mu(0));
  for (Index i = 0; i < s.mu.size(); ++i) {
    if (s.mu(i) > 1.0 && s.mu(i) < s.gamma_max) s.kinks1.push_back(s.mu(i));
    if (s.mu(i) > 0.0 && s.mu(i) < 1.0) s.kinks2.push_back(s.mu(i));
  }
  std::sort(s.kinks1.begin(), s.kinks1.end());
  std::sort(s.kinks2.begin(), s.kinks2.end());
  return s;
}

inline MatrixQuadrature embed_quadrature(const RestrictedPair& rp, MatrixQuadrature q) {
  q.value = rp.embed(q.value);
  return q;
}

inline HermitianMatrix u_endpoint_limit(const RestrictedPair& rp) {
  const RangeSplit sa = split_range(eig_hermitian(rp.a()));
  if (sa.full_rank()) return HermitianMatrix::zero(rp.dim());
  const Matrix k = sa.kernel;
  return rp.embed(rp.b().compress(k).congruence(k));
}

inline FrgResult assemble_frg(const FrgSetup& s, const HermitianMatrix& b, MatrixQuadrature t1, MatrixQuadrature t2,
                              double peak) {
  const RestrictedPair& rp = *s.analysis.restricted;
  FrgResult r{Dichotomy::Finite, std::nullopt, zero_quadrature(rp.dim()), embed_quadrature(rp, std::move(t1)),
              embed_quadrature(rp, std::move(t2))};
  r.total.value = r.term1.value + r.term2.value;
  r.total.error_estimate = r.term1.error_estimate + r.term2.error_estimate;
  r.total.evaluations = r.term1.evaluations + r.term2.evaluations;
  r.total.converged = r.term1.converged && r.term2.converged;
  for (const auto& p : r.term1.panels) {
    r.total.panels.push_back(p);
    r.panel_segments.emplace_back("term1");
  }
  for (const auto& p : r.term2.panels) {
    r.total.panels.push_back(p);
    r.panel_segments.emplace_back("term2");
  }
  r.gamma_max = s.gamma_max;
  r.term2_peak_norm = peak;
  r.b_norm = operator_norm(b);
  r.kinks = s.kinks1;
  r.kinks.insert(r.kinks.end(), s.kinks2.begin(), s.kinks2.end());
  r.term2_endpoint = u_endpoint_limit(rp);
  return r;
}

inline FrgResult degenerate_frg(const FrgSetup& s, const HermitianMatrix& b) {
  const Index n = b.dim();
  FrgResult r{Dichotomy::Divergent, std::nullopt, zero_quadrature(n), zero_quadrature(n), zero_quadrature(n)};
  r.b_norm = operator_norm(b);
  if (!s.analysis.restricted) {
    r.witness = s.analysis.support.witness;
    r.total.error_estimate = kInf;
    r.total.converged = false;
    return r;
  }
  r.verdict = Dichotomy::Finite;
  r.term2_endpoint = HermitianMatrix::zero(n);
  return r;
}

}  // namespace detail

/// g-form. On support failure the verdict is Divergent, the witness is set,
/// total.value is left at zero and total.error_estimate is +inf.
inline FrgResult rhs_frg1(const HermitianMatrix& a, const HermitianMatrix& b, double tol = kDefaultQuadratureTol,
                          const QuadratureOptions& opt = {}) {
  const detail::FrgSetup s = detail::frg_setup(a, b);
  if (!s.analysis.restricted || s.analysis.restricted->empty()) return detail::degenerate_frg(s, b);
  const RestrictedPair& rp = *s.analysis.restricted;
  const HermitianMatrix& ab = rp.a();
  const HermitianMatrix& bb = rp.b();

  MatrixQuadrature t1 = detail::zero_quadrature(rp.rank());
  if (s.gamma_max > 1.0) {
    t1 = adaptive_integral<HermitianMatrix>(
        [&](double g) {
          HermitianMatrix p = positive_part(ab - g * bb);
          p *= 1.0 / g;
          return p;
        },
        1.0, s.gamma_max, 0.5 * tol, s.kinks1, opt);
  }
  std::atomic<double> peak{0.0};
  MatrixQuadrature t2 = adaptive_integral<HermitianMatrix>(
      [&](double u) {
        const SpectralDecomposition e = eig_hermitian(bb - (1.0 / u) * ab);
        detail::atomic_max(peak, std::max(e.max(), 0.0));
        return positive_part(e);
      },
      0.0, 1.0, 0.5 * tol, s.kinks2, opt);
  return detail::assemble_frg(s, b, std::move(t1), std::move(t2), peak.load());
}

/// t-form, evaluated on its own integrand ((1-t)A + tB)- with the Jacobians of
/// t = g/(g-1) and t = u/(u-1). Panel records are in t.
inline FrgResult rhs_frg(const HermitianMatrix& a, const HermitianMatrix& b, double tol = kDefaultQuadratureTol,
                         const QuadratureOptions& opt = {}) {
  const detail::FrgSetup s = detail::frg_setup(a, b);
  if (!s.analysis.restricted || s.analysis.restricted->empty()) return detail::degenerate_frg(s, b);
  const RestrictedPair& rp = *s.analysis.restricted;
  const HermitianMatrix& ab = rp.a();
  const HermitianMatrix& bb = rp.b();

  MatrixQuadrature t1 = detail::zero_quadrature(rp.rank());
  if (s.gamma_max > 1.0) {
    t1 = adaptive_integral<HermitianMatrix>(
        [&](double g) {
          HermitianMatrix d = detail::frg_t_density(ab, bb, detail::t_from_gamma(g));
          d *= 1.0 / ((g - 1.0) * (g - 1.0));
          return d;
        },
        1.0, s.gamma_max, 0.5 * tol, s.kinks1, opt);
    for (auto& p : t1.panels) p = {detail::t_from_gamma(p.hi), detail::t_from_gamma(p.lo), p.error};
    std::reverse(t1.panels.begin(), t1.panels.end());
  }
  std::atomic<double> peak{0.0};
  MatrixQuadrature t2 = adaptive_integral<HermitianMatrix>(
      [&](double u) {
        HermitianMatrix d = detail::frg_t_density(ab, bb, detail::t_from_u(u));
        d *= 1.0 / ((1.0 - u) * (1.0 - u));
        detail::atomic_max(peak, operator_norm(d));
        return d;
      },
      0.0, 1.0, 0.5 * tol, s.kinks2, opt);
  for (auto& p : t2.panels) p = {detail::t_from_u(p.hi), detail::t_from_u(p.lo), p.error};
  std::reverse(t2.panels.begin(), t2.panels.end());
  FrgResult r = detail::assemble_frg(s, b, std::move(t1), std::move(t2), peak.load());
  // Present the t-axis in increasing order: (-inf, 0) first.
  std::vector<PanelRecord> ordered = r.term2.panels;
  ordered.insert(ordered.end(), r.term1.panels.begin(), r.term1.panels.end());
  r.total.panels = std::move(ordered);
  r.panel_segments.assign(r.term2.panels.size(), "term2");
  r.panel_segments.insert(r.panel_segments.end(), r.term1.panels.size(), "term1");
  for (double& k : r.kinks) k = k > 1.0 ? detail::t_from_gamma(k) : detail::t_from_u(k);
  return r;
}

/// Scalar trace of the t-form integrated; +inf when range(A) is not inside range(B).
inline double frenkel_trace(const HermitianMatrix& a, const HermitianMatrix& b, double tol = kDefaultQuadratureTol) {
  const detail::FrgSetup s = detail::frg_setup(a, b);
  if (!s.analysis.restricted) return kInf;
  if (s.analysis.restricted->empty()) return 0.0;
  const HermitianMatrix& ab = s.analysis.restricted->a();
  const HermitianMatrix& bb = s.analysis.restricted->b();
  double total = 0.0;
  if (s.gamma_max > 1.0) {
    total += adaptive_integral<double>(
                 [&](double g) {
                   return detail::frg_t_density_trace(ab, bb, detail::t_from_gamma(g)) / ((g - 1.0) * (g - 1.0));
                 },
                 1.0, s.gamma_max, 0.5 * tol, s.kinks1)
                 .value;
  }
  total += adaptive_integral<double>(
               [&](double u) {
                 return detail::frg_t_density_trace(ab, bb, detail::t_from_u(u)) / ((1.0 - u) * (1.0 - u));
               },
               0.0, 1.0, 0.5 * tol, s.kinks2)
               .value;
  return total;
}

/// A(log A - log B) = u + v - w with
///   u = int_1^inf g^-1 (A - gB)+ + g^-2 (B - gA)+ dg
///   v = int_1^inf B {A - gB > 0} dg
///   w = int_1^inf g^-2 B {B - gA > 0} dg,
/// together with residuals of the two projection-integral representations
///   log A - log B = int_1^inf ({A - gB > 0} - {B - gA > 0}) / g dg
///   Dlog[A](B)    = int_0^inf {B - gA > 0} dg.
struct ProofChainResult {
  HermitianMatrix u;
  Matrix v;
  Matrix w;
  double chain_residual;           // ||u + v - w - A(log A - log B)||
  double log_difference_residual;  // first representation vs spectral
  double dlog_residual;            // second representation vs Dlog[A](B)
  double error_estimate;           // summed quadrature error of all pieces
};

inline ProofChainResult proof_chain_integrals(const HermitianMatrix& a, const HermitianMatrix& b,
                                              double tol = kDefaultQuadratureTol) {
  require_same_dim(a, b, "proof_chain_integrals");
  const SpectralDecomposition ea = eig_hermitian(a);
  const SpectralDecomposition eb = eig_hermitian(b);
  require_positive_definite(ea, "proof_chain_integrals: A");
  require_positive_definite(eb, "proof_chain_integrals: B");
  const Index n = a.dim();
  const RealVector mu = relative_spectrum(a, eb);
  const double gmax = std::max(1.0, mu(0));
  const double umin = std::min(1.0, mu(n - 1));
  std::vector<double> kinks(mu.data(), mu.data() + n);

  auto proj_ab = [&](double g) { return positive_projection(a - g * b); };
  // {B - gA > 0} = {uB - A > 0} with u = 1/g.
  auto proj_ba_u = [&](double u) { return positive_projection(u * b - a); };

  double err = 0.0;
  const FrgResult frg = rhs_frg1(a, b, tol);
  err += frg.total.error_estimate;

  Matrix v = Matrix::Zero(n, n);
  HermitianMatrix log_diff = HermitianMatrix::zero(n);
  if (gmax > 1.0) {
    auto pv = adaptive_integral<HermitianMatrix>(proj_ab, 1.0, gmax, tol, kinks);
    v = b.matrix() * pv.value.matrix();
    err += pv.error_estimate * operator_norm(b);
    auto pl = adaptive_integral<HermitianMatrix>(
        [&](double g) {
          HermitianMatrix p = proj_ab(g);
          p *= 1.0 / g;
          return p;
        },
        1.0, gmax, tol, kinks);
    log_diff += pl.value;
    err += pl.error_estimate;
  }
  Matrix w = Matrix::Zero(n, n);
  if (umin < 1.0) {
    auto pw = adaptive_integral<HermitianMatrix>(proj_ba_u, umin, 1.0, tol, kinks);
    w = b.matrix() * pw.value.matrix();
    err += pw.error_estimate * operator_norm(b);
    auto pl = adaptive_integral<HermitianMatrix>(
        [&](double u) {
          HermitianMatrix p = proj_ba_u(u);
          p *= 1.0 / u;
          return p;
        },
        umin, 1.0, tol, kinks);
    log_diff -= pl.value;
    err += pl.error_estimate;
  }

  // Dlog[A](B) = int_0^{1/mu_min} {B - gA > 0} dg; kinks at 1/mu_i.
  std::vector<double> inv_kinks;
  for (double m : kinks) inv_kinks.push_back(1.0 / m);
  auto pd = adaptive_integral<HermitianMatrix>([&](double g) { return positive_projection(b - g * a); }, 0.0,
                                               1.0 / mu(n - 1), tol, inv_kinks);
  err += pd.error_estimate;

  const HermitianMatrix spectral_log_diff = matrix_log(ea) - matrix_log(eb);
  const Matrix target = a.matrix() * spectral_log_diff.matrix();
  const Matrix chain = frg.total.value.matrix() + v - w;
  return {frg.total.value,
          std::move(v),
          std::move(w),
          operator_norm(Matrix(chain - target)),
          operator_norm(log_diff - spectral_log_diff),
          operator_norm(pd.value - dlog(ea, b)),
          err};
}

/// Growth of the truncated g-form integral int_1^t for a pair with
/// range(A) not inside range(B).
struct DivergenceProbe {
  Vector witness;                  // unit x with Bx = 0, x*Ax > 0
  double witness_quadratic = 0.0;  // x*Ax
  std::vector<double> checkpoints;
  std::vector<double> quadratic_values;  // <x, I(t) x>
  std::vector<double> norms;             // ||I(t)||
  /// ||B|| / t: bound on the second piece's tail beyond t.
  std::vector<double> tail_bounds;
  /// Least-squares slope of quadratic_values against log t (needs >= 2 checkpoints).
  std::optional<double> slope;
  std::vector<double> kinks;
};

inline DivergenceProbe divergence_probe(const HermitianMatrix& a, const HermitianMatrix& b,
                                        std::span<const double> checkpoints, double tol = kDefaultQuadratureTol) {
  require_same_dim(a, b, "divergence_probe");
  require_psd(a, "divergence_probe: A");
  require_psd(b, "divergence_probe: B");
  if (checkpoints.empty()) throw InvalidArgument("divergence_probe: no checkpoints");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 1.0) || !std::isfinite(checkpoints[i]))
      throw InvalidArgument("divergence_probe: checkpoints must be finite and > 1");
    if (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))
      throw InvalidArgument("divergence_probe: checkpoints must be increasing");
  }
  const PsdOrderVerdict sup = support_relation(a, b);
  if (sup.holds) throw InvalidArgument("divergence_probe: range(A) lies in range(B); the integral is finite");

  DivergenceProbe out;
  out.witness = *sup.witness;
  out.witness_quadratic = out.witness.dot(a.matrix() * out.witness).real();
  out.checkpoints.assign(checkpoints.begin(), checkpoints.end());

  const double t_max = checkpoints.back();
  auto k1 = find_crossings(a, b, 1.0, t_max).crossings;
  auto k2 = find_crossings(b, a, 1.0, t_max).crossings;
  out.kinks = k1;
  out.kinks.insert(out.kinks.end(), k2.begin(), k2.end());
  std::sort(out.kinks.begin(), out.kinks.end());

  auto integrand = [&](double g) {
    HermitianMatrix p = positive_part(a - g * b);
    p *= 1.0 / g;
    p.add_scaled(1.0 / (g * g), positive_part(b - g * a));
    return p;
  };
  const double bnorm = operator_norm(b);
  HermitianMatrix acc = HermitianMatrix::zero(a.dim());
  double lo = 1.0;
  for (double t : checkpoints) {
    acc += adaptive_integral<HermitianMatrix>(integrand, lo, t, tol, out.kinks).value;
    lo = t;
    out.quadratic_values.push_back(out.witness.dot(acc.matrix() * out.witness).real());
    out.norms.push_back(operator_norm(acc));
    out.tail_bounds.push_back(bnorm / t);
  }
  if (checkpoints.size() >= 2) {
    const std::size_t m = checkpoints.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      mx += std::log(checkpoints[i]);
      my += out.quadratic_values[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dx = std::log(checkpoints[i]) - mx;
      sxy += dx * (out.quadratic_values[i] - my);
      sxx += dx * dx;
    }
    out.slope = sxy / sxx;
  }
  return out;
}

}  // namespace frenkel
