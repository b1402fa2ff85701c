#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature for scalar, vector and
// matrix valued integrands. All components share one panel tree; a panel's
// local error is the norm of the Kronrod/Gauss difference.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "frenkel/linalg.hpp"
#include "frenkel/parallel.hpp"

namespace frenkel {

template <class V>
struct QuadratureTraits;

template <>
struct QuadratureTraits<double> {
  static double norm(double x) { return std::abs(x); }
  static double scaled(double x, double w) { return w * x; }
  static void add_scaled(double& acc, double w, double x) { acc += w * x; }
};

/// Component-wise max norm, so every component meets the tolerance.
template <>
struct QuadratureTraits<RealVector> {
  static double norm(const RealVector& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }
  static RealVector scaled(const RealVector& x, double w) { return w * x; }
  static void add_scaled(RealVector& acc, double w, const RealVector& x) { acc += w * x; }
};

/// Operator norm.
template <>
struct QuadratureTraits<HermitianMatrix> {
  static double norm(const HermitianMatrix& x) { return operator_norm(x); }
  static HermitianMatrix scaled(const HermitianMatrix& x, double w) { return w * x; }
  static void add_scaled(HermitianMatrix& acc, double w, const HermitianMatrix& x) { acc.add_scaled(w, x); }
};

/// Frobenius norm (an upper bound for the operator norm).
template <>
struct QuadratureTraits<Matrix> {
  static double norm(const Matrix& x) { return x.norm(); }
  static Matrix scaled(const Matrix& x, double w) { return w * x; }
  static void add_scaled(Matrix& acc, double w, const Matrix& x) { acc += w * x; }
};

struct PanelRecord {
  double lo;
  double hi;
  double error;
};

template <class V>
struct QuadratureResult {
  V value;
  double error_estimate = 0.0;
  /// Analytic bound on any part of the integral not covered by the panels.
  double tail_bound = 0.0;
  std::vector<PanelRecord> panels;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct QuadratureOptions {
  std::size_t max_panels = std::size_t{1} << 14;
  /// Evaluate the nodes of a refinement generation on the thread pool.
  bool parallel = false;
};

namespace detail {

// Kronrod abscissae (positive half, descending) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr std::size_t kNodes = 15;

/// Node k of [lo, hi]: k = 0..6 left of centre, 7 the centre, 8..14 right.
inline double gk_node(double lo, double hi, std::size_t k) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  if (k < 7) return c - h * kXgk[k];
  if (k == 7) return c;
  return c + h * kXgk[14 - k];
}

template <class V>
struct Panel {
  double lo;
  double hi;
  V value;
  double error;
};

template <class V>
Panel<V> assemble_panel(double lo, double hi, std::vector<std::optional<V>>& f, std::size_t base) {
  using T = QuadratureTraits<V>;
  const double h = 0.5 * (hi - lo);
  auto fk = [&](std::size_t k) -> const V& { return *f[base + k]; };
  V kron = T::scaled(fk(7), kWgk[7]);
  V gauss = T::scaled(fk(7), kWg[3]);
  for (std::size_t j = 0; j < 7; ++j) {
    T::add_scaled(kron, kWgk[j], fk(j));
    T::add_scaled(kron, kWgk[j], fk(14 - j));
    if (j % 2 == 1) {
      T::add_scaled(gauss, kWg[j / 2], fk(j));
      T::add_scaled(gauss, kWg[j / 2], fk(14 - j));
    }
  }
  kron = T::scaled(kron, h);
  gauss = T::scaled(gauss, h);
  V diff = kron;
  T::add_scaled(diff, -1.0, gauss);
  const double err = T::norm(diff);
  return {lo, hi, std::move(kron), err};
}

template <class V, class F>
std::vector<Panel<V>> evaluate_panels(const std::vector<std::pair<double, double>>& spans, F& f,
                                      const QuadratureOptions& opt, std::size_t& evaluations) {
  std::vector<std::optional<V>> values(spans.size() * kNodes);
  auto task = [&](std::size_t i) {
    const auto& s = spans[i / kNodes];
    values[i].emplace(f(gk_node(s.first, s.second, i % kNodes)));
  };
  parallel_for(values.size(), task, opt.parallel ? thread_budget() : 1u);
  evaluations += values.size();
  std::vector<Panel<V>> out;
  out.reserve(spans.size());
  for (std::size_t p = 0; p < spans.size(); ++p)
    out.push_back(assemble_panel<V>(spans[p].first, spans[p].second, values, p * kNodes));
  return out;
}

}  // namespace detail

/// Integrates f over [a, b] to absolute tolerance `tol`. Initial panel
/// boundaries include every kink strictly inside (a, b). Refinement bisects the
/// largest-error panels until the summed error is <= tol or the panel cap is
/// reached (then `converged` is false and the best value is returned).
template <class V, class F>
QuadratureResult<V> adaptive_integral(F&& f, double a, double b, double tol, std::span<const double> kinks = {},
                                      const QuadratureOptions& opt = {}) {
  if (!(a < b)) throw InvalidArgument("adaptive_integral: need a < b");
  if (!(tol > 0.0)) throw InvalidArgument("adaptive_integral: tolerance must be positive");
  std::vector<double> breaks{a, b};
  for (double k : kinks)
    if (k > a && k < b) breaks.push_back(k);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) spans.emplace_back(breaks[i], breaks[i + 1]);

  std::size_t evaluations = 0;
  std::vector<detail::Panel<V>> panels = detail::evaluate_panels<V>(spans, f, opt, evaluations);

  auto total_error = [&] {
    double s = 0.0;
    for (const auto& p : panels) s += p.error;
    return s;
  };
  auto splittable = [](const detail::Panel<V>& p) {
    const double mid = 0.5 * (p.lo + p.hi);
    return mid > p.lo && mid < p.hi && (p.hi - p.lo) > 1e-14 * std::max(std::abs(p.lo), std::abs(p.hi));
  };

  bool converged = false;
  while (true) {
    double err = total_error();
    if (err <= tol) {
      converged = true;
      break;
    }
    if (panels.size() >= opt.max_panels) break;
    std::vector<std::size_t> order(panels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return panels[i].error > panels[j].error; });
    std::vector<char> split(panels.size(), 0);
    std::size_t budget = opt.max_panels - panels.size();
    std::size_t chosen = 0;
    for (std::size_t idx : order) {
      if (err <= 0.5 * tol || chosen == budget) break;
      if (!splittable(panels[idx])) continue;
      split[idx] = 1;
      err -= panels[idx].error;
      ++chosen;
    }
    if (chosen == 0) break;
    std::vector<std::pair<double, double>> fresh;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (!split[i]) continue;
      const double mid = 0.5 * (panels[i].lo + panels[i].hi);
      fresh.emplace_back(panels[i].lo, mid);
      fresh.emplace_back(mid, panels[i].hi);
    }
    std::vector<detail::Panel<V>> halves = detail::evaluate_panels<V>(fresh, f, opt, evaluations);
    std::vector<detail::Panel<V>> next;
    next.reserve(panels.size() + chosen);
    std::size_t h = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (split[i]) {
        next.push_back(std::move(halves[h++]));
        next.push_back(std::move(halves[h++]));
      } else {
        next.push_back(std::move(panels[i]));
      }
    }
    panels = std::move(next);
  }

  using T = QuadratureTraits<V>;
  V value = panels.front().value;
  for (std::size_t i = 1; i < panels.size(); ++i) T::add_scaled(value, 1.0, panels[i].value);
  QuadratureResult<V> r{std::move(value)};
  r.error_estimate = total_error();
  r.converged = converged;
  r.evaluations = evaluations;
  r.panels.reserve(panels.size());
  for (const auto& p : panels) r.panels.push_back({p.lo, p.hi, p.error});
  return r;
}

}  // namespace frenkel
