#pragma once

// The Hermitian pencil A - gamma B: sampled eigenvalue branches, the real
// zero-crossing set, and the Kato / Araki continuity bounds for T -> T+, |T|.

#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "frenkel/linalg.hpp"
#include "frenkel/numfmt.hpp"

namespace frenkel {

/// Row k holds the k-th largest eigenvalue of A - gamma B at each grid point.
inline RealMatrix eigencurves(const HermitianMatrix& a, const HermitianMatrix& b, std::span<const double> grid) {
  require_same_dim(a, b, "eigencurves");
  if (grid.empty()) throw InvalidArgument("eigencurves: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw InvalidArgument("eigencurves: grid must be sorted");
  RealMatrix out(a.dim(), static_cast<Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) out.col(static_cast<Index>(g)) = eigenvalues(a - grid[g] * b);
  return out;
}

inline void write_eigencurves_csv(std::ostream& os, std::span<const double> grid, const RealMatrix& curves) {
  os << "gamma";
  for (Index k = 0; k < curves.rows(); ++k) os << ",lambda_" << (k + 1);
  os << '\n';
  for (std::size_t g = 0; g < grid.size(); ++g) {
    os << fmt17(grid[g]);
    for (Index k = 0; k < curves.rows(); ++k) os << ',' << fmt17(curves(k, static_cast<Index>(g)));
    os << '\n';
  }
}

enum class CrossingMethod { Auto, GeneralizedEig, SignScan };

inline const char* to_string(CrossingMethod m) {
  switch (m) {
    case CrossingMethod::GeneralizedEig:
      return "GeneralizedEig";
    case CrossingMethod::SignScan:
      return "SignScan";
    default:
      return "Auto";
  }
}

struct PencilCrossings {
  std::vector<double> crossings;  // ascending
  CrossingMethod method = CrossingMethod::Auto;
};

namespace detail {

inline constexpr int kSignScanPoints = 256;
inline constexpr double kBisectionWidth = 1e-10;

inline std::vector<double> dedupe_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || std::abs(x - out.back()) > 1e-12 * std::max(1.0, std::abs(x))) out.push_back(x);
  return out;
}

}  // namespace detail

/// Real gamma in [lo, hi] where a nonzero eigenvalue branch of A - gamma B
/// vanishes. Definite B uses the spectrum of B^{-1/2} A B^{-1/2}; otherwise
/// the sorted branches are sign-scanned on a 256-point grid and bisected.
inline PencilCrossings find_crossings(const HermitianMatrix& a, const HermitianMatrix& b, double lo, double hi,
                                      CrossingMethod method = CrossingMethod::Auto) {
  require_same_dim(a, b, "find_crossings");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidArgument("find_crossings: interval must be finite with lo < hi");
  const SpectralDecomposition eb = eig_hermitian(b);
  if (method == CrossingMethod::Auto) {
    method = (eb.norm() > 0 && eb.min() > tol::kPsdSlack * eb.norm()) ? CrossingMethod::GeneralizedEig
                                                                      : CrossingMethod::SignScan;
  }
  PencilCrossings out;
  out.method = method;
  if (method == CrossingMethod::GeneralizedEig) {
    const RealVector mu = relative_spectrum(a, eb);
    std::vector<double> inside;
    for (Index i = 0; i < mu.size(); ++i)
      if (mu(i) >= lo && mu(i) <= hi) inside.push_back(mu(i));
    out.crossings = detail::dedupe_sorted(std::move(inside));
    return out;
  }

  const double scale = operator_norm(a) + std::max(std::abs(lo), std::abs(hi)) * eb.norm();
  const double band = tol::kZeroBand * std::max(scale, 1e-300);
  const int m = detail::kSignScanPoints;
  std::vector<double> grid(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (m - 1);
  const RealMatrix curves = eigencurves(a, b, grid);
  auto sign_of = [band](double v) { return v > band ? 1 : (v < -band ? -1 : 0); };

  std::vector<double> found;
  for (Index k = 0; k < curves.rows(); ++k) {
    int last_sign = 0;
    double last_pos = lo;
    for (int i = 0; i < m; ++i) {
      const int s = sign_of(curves(k, i));
      if (s == 0) continue;
      if (last_sign != 0 && s != last_sign) {
        double x0 = last_pos, x1 = grid[static_cast<std::size_t>(i)];
        while (x1 - x0 > detail::kBisectionWidth) {
          const double mid = 0.5 * (x0 + x1);
          const int sm = sign_of(eigenvalues(a - mid * b)(k));
          if (sm == 0) {
            x0 = x1 = mid;
            break;
          }
          (sm == last_sign ? x0 : x1) = mid;
        }
        found.push_back(0.5 * (x0 + x1));
      }
      last_sign = s;
      last_pos = grid[static_cast<std::size_t>(i)];
    }
  }
  out.crossings = detail::dedupe_sorted(std::move(found));
  return out;
}

/// min over branches of |lambda_i(A - gamma B)|; ~0 exactly at a crossing.
inline double singularity_proxy(const HermitianMatrix& a, const HermitianMatrix& b, double gamma) {
  return eigenvalues(a - gamma * b).cwiseAbs().minCoeff();
}

struct BoundPair {
  double lhs;
  double rhs;
  bool holds(double rel_slack = 1e-9) const { return lhs <= rhs * (1.0 + rel_slack); }
};

/// lhs = max(||T1+ - T2+||, ||T1- - T2-||),
/// rhs = ||T1 - T2|| / pi * ((pi + 4)/2 + log((||T1|| + ||T2||) / ||T1 - T2||)).
inline BoundPair kato_continuity_check(const HermitianMatrix& t1, const HermitianMatrix& t2) {
  require_same_dim(t1, t2, "kato_continuity_check");
  const double d = operator_norm(t1 - t2);
  if (d == 0.0) throw InvalidArgument("kato_continuity_check: T1 == T2, bound is degenerate");
  const PartsDecomposition p1 = parts(t1);
  const PartsDecomposition p2 = parts(t2);
  const double lhs = std::max(operator_norm(p1.positive_part - p2.positive_part),
                              operator_norm(p1.negative_part - p2.negative_part));
  const double pi = std::numbers::pi;
  const double rhs = d / pi * ((pi + 4.0) / 2.0 + std::log((operator_norm(t1) + operator_norm(t2)) / d));
  return {lhs, rhs};
}

/// (|| |T1| - |T2| ||_2, ||T1 - T2||_2)
inline BoundPair araki_check(const HermitianMatrix& t1, const HermitianMatrix& t2) {
  require_same_dim(t1, t2, "araki_check");
  return {(abs_value(t1) - abs_value(t2)).frobenius_norm(), (t1 - t2).frobenius_norm()};
}

/// Commutator diagnostic: the pencil is completely 1-decomposable iff AB = BA.
struct Decomposability {
  double commutator_norm;
  bool completely_decomposable;
};

inline Decomposability pencil_decomposability(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "pencil_decomposability");
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  const double norm = operator_norm(c);
  const double scale = std::max(operator_norm(a) * operator_norm(b), 1e-300);
  return {norm, norm <= 1e-12 * scale};
}

}  // namespace frenkel
