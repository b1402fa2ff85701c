#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "frenkel/frenkel.hpp"

namespace fixtures {

using frenkel::Complex;
using frenkel::HermitianMatrix;
using frenkel::Index;
using frenkel::Matrix;

// Fixed 3x3 pair; reference values below were computed at 40 digits.
inline HermitianMatrix pair_a() {
  Matrix m(3, 3);
  m << Complex(2, 0), Complex(0.5, 0.25), Complex(0.1, 0),  //
      Complex(0.5, -0.25), Complex(1.5, 0), Complex(0, 0.3),  //
      Complex(0.1, 0), Complex(0, -0.3), Complex(1, 0);
  return HermitianMatrix(m);
}

inline HermitianMatrix pair_b() {
  Matrix m(3, 3);
  m << Complex(1.2, 0), Complex(-0.2, 0.1), Complex(0, 0),  //
      Complex(-0.2, -0.1), Complex(0.9, 0), Complex(0.15, 0),  //
      Complex(0, 0), Complex(0.15, 0), Complex(0.7, 0);
  return HermitianMatrix(m);
}

inline const std::vector<double> kEigA = {0.77176114840553511807, 1.3495796982044242979, 2.3786591533900405841};
inline const std::vector<double> kEigB = {0.59750007715337959, 0.8748756003176175579, 1.3276243225290027855};
inline const std::vector<double> kRelative = {0.80945983015839822808, 1.5642506200800173097,
                                              2.8193731232486163042};
inline constexpr double kTraceDivergence = 0.9890341628039477275408827;

inline Matrix hermitian_from_upper(std::initializer_list<double> diag, Complex c01, Complex c02, Complex c12) {
  const auto* d = diag.begin();
  Matrix m(3, 3);
  m << Complex(d[0], 0), c01, c02,  //
      std::conj(c01), Complex(d[1], 0), c12,  //
      std::conj(c02), std::conj(c12), Complex(d[2], 0);
  return m;
}

inline Matrix delta_reference() {
  return hermitian_from_upper({0.42197122148648679202, 0.4419209813531278504, 0.12514195996433308512},
                              Complex(0.38657082734023089988, 0.040472574238877461054),
                              Complex(-0.035469835670429249148, 0.078761458729074396682),
                              Complex(-0.067687675654958754336, 0.12306327143760318173));
}

inline Matrix dlog_reference() {
  return hermitian_from_upper({1.8068133977253275864, 1.8951425120942230448, 1.4911276636674812107},
                              Complex(0.83857535111965407991, 0.068483533163108297595),
                              Complex(0.019535743925439735017, 0.045687624518711151044),
                              Complex(-0.31953422969063533481, 0.3948574031596323494));
}

inline Matrix log_b_reference() {
  return hermitian_from_upper({0.16054124981712779931, -0.14889506996981583714, -0.37692949832264459308},
                              Complex(-0.19697221621730553493, 0.098486108108652767467),
                              Complex(0.018637327281313889799, -0.0093186636406569448997),
                              Complex(0.19432248036626385944, 0));
}

/// Number of eigenvalues of T below x, from the signs of the pivots of T - xI.
inline int count_below(const Matrix& t, double x) {
  const Index n = t.rows();
  Matrix m = t - x * Matrix::Identity(n, n);
  int neg = 0;
  for (Index k = 0; k < n; ++k) {
    double p = m(k, k).real();
    if (p == 0.0) p = -1e-300;
    if (p < 0) ++neg;
    for (Index i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) / p;
      for (Index j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return neg;
}

/// Eigenvalues (descending) by bisection on the inertia count.
inline std::vector<double> bisection_eigenvalues(const Matrix& t) {
  const Index n = t.rows();
  double r = 0.0;
  for (Index i = 0; i < n; ++i) r = std::max(r, t.row(i).cwiseAbs().sum());
  std::vector<double> out;
  for (Index k = 0; k < n; ++k) {
    // k-th largest: smallest x with count_below(x) >= n - k
    double lo = -r - 1.0, hi = r + 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(t, mid) >= n - k) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace fixtures
