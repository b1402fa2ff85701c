#pragma once

// Verification suite behind `frenkel verify`: every identity and oracle
// comparison for one pair, each as (name, residual, threshold, pass).

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "frenkel/divergence.hpp"
#include "frenkel/frechet.hpp"
#include "frenkel/integral_forms.hpp"
#include "frenkel/matrix_io.hpp"
#include "frenkel/parallel.hpp"
#include "frenkel/pencil.hpp"
#include "frenkel/resolvent.hpp"

namespace frenkel {

enum class Comparison { AtMost, AtLeast };

struct SuiteItem {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  Comparison comparison = Comparison::AtMost;
  double seconds = 0.0;

  bool pass() const {
    if (std::isnan(residual)) return false;
    return comparison == Comparison::AtMost ? residual <= threshold : residual >= threshold;
  }
};

struct SuiteOptions {
  double tol = kDefaultQuadratureTol;
  bool diagnostics = false;
  bool timings = false;
  unsigned threads = thread_budget();
  std::vector<double> probe_checkpoints{10.0, 100.0, 1000.0, 10000.0};
};

struct SuiteReport {
  Json json;
  bool all_pass = true;
};

namespace detail {

using ItemFn = std::function<std::vector<SuiteItem>()>;

inline SuiteItem at_most(std::string name, double residual, double threshold) {
  return {std::move(name), residual, threshold, Comparison::AtMost};
}

inline bool definite(const SpectralDecomposition& e) { return e.min() > tol::kPsdSlack * std::max(e.norm(), 1e-300); }

inline Json witness_json(const Vector& x) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < x.size(); ++i) {
    re.push_back(x(i).real());
    im.push_back(x(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

inline Json panels_json(const FrgResult& r) {
  Json out = Json::array();
  for (std::size_t i = 0; i < r.total.panels.size(); ++i) {
    const auto& p = r.total.panels[i];
    out.push_back({{"segment", r.panel_segments[i]}, {"lo", p.lo}, {"hi", p.hi}, {"error", p.error}});
  }
  return out;
}

/// Items for a supported pair; B may be singular (identities are then taken
/// on range(B) and compared with the regularized computation).
inline std::vector<ItemFn> finite_items(const HermitianMatrix& a, const HermitianMatrix& b, const SuiteOptions& o,
                                        const SpectralDecomposition& ea, const SpectralDecomposition& eb) {
  const double tol = o.tol;
  const double id_thr = 100.0 * tol;
  const double scale = std::max({1.0, operator_norm(a), operator_norm(b)});
  const bool a_pd = definite(ea);
  const bool b_pd = definite(eb);
  std::vector<ItemFn> items;

  items.push_back([=, &a, &b] {
    const DivergenceReport d = delta_operator(a, b);
    const FrgResult f1 = rhs_frg1(a, b, tol);
    const FrgResult f = rhs_frg(a, b, tol);
    return std::vector<SuiteItem>{
        at_most("frg1_vs_delta", operator_norm(f1.total.value - *d.delta), id_thr),
        at_most("frg_vs_frg1", operator_norm(f.total.value - f1.total.value), 2.0 * tol),
        at_most("term2_peak_vs_norm_b", f1.term2_peak_norm - f1.b_norm, 1e-10 * scale),
        at_most("trace_delta_vs_trace_divergence", std::abs(d.delta->trace() - d.trace_div), 1e-8 * scale),
    };
  });
  items.push_back([=, &a, &b] {
    return std::vector<SuiteItem>{
        at_most("frenkel_trace_vs_trace_divergence", std::abs(frenkel_trace(a, b, tol) - trace_divergence(a, b)),
                id_thr)};
  });
  items.push_back([=, &a, &b] {
    // Kato and Araki on the pencil samples T1 = A - B, T2 = A - 2B and on (A, -B).
    const HermitianMatrix t1 = a - b;
    const HermitianMatrix t2 = a - 2.0 * b;
    const HermitianMatrix t3 = -1.0 * b;
    double kato = 0.0;
    double araki = 0.0;
    for (const auto& [x, y] : {std::pair{&t1, &t2}, std::pair{&a, &t3}}) {
      if (operator_norm(*x - *y) == 0.0) continue;
      const BoundPair k = kato_continuity_check(*x, *y);
      const BoundPair r = araki_check(*x, *y);
      kato = std::max(kato, k.lhs / k.rhs);
      if (r.rhs > 0) araki = std::max(araki, r.lhs / r.rhs);
    }
    return std::vector<SuiteItem>{at_most("kato_bound_ratio", kato, 1.0 + 1e-9),
                                  at_most("araki_bound_ratio", araki, 1.0 + 1e-9)};
  });
  items.push_back([=, &a, &b] {
    const HermitianMatrix t = a - b;
    const AbsResolvent r = abs_resolvent(t, tol);
    return std::vector<SuiteItem>{at_most("abs_vs_resolvent", operator_norm(r.abs - abs_value(t)), id_thr)};
  });

  if (!b_pd) {
    items.push_back([=, &a, &b] {
      const RegularizedDelta r = regularized_delta(a, b);
      return std::vector<SuiteItem>{
          at_most("restriction_vs_regularized", operator_norm(r.extrapolated - *delta_operator(a, b).delta), 1e-5)};
    });
    items.push_back([=, &a, &b] {
      const BdlogProduct p = bdlog_product(a, b, tol);
      return std::vector<SuiteItem>{at_most("bdlog_bound_ratio", p.bound > 0 ? p.norm / p.bound : 0.0, 1.0 + 1e-6)};
    });
    return items;
  }

  items.push_back([=, &a, &b, &eb] {
    const TracePairingResiduals t = trace_pairing_check(b, a);
    return std::vector<SuiteItem>{
        at_most("trace_b_dlog_vs_trace_a", t.trace_residual, 1e-9 * std::max(1.0, std::abs(a.trace()))),
        at_most("dlog_b_of_b_vs_identity", t.identity_residual, 1e-10),
        at_most("dlog_vs_finite_difference", operator_norm(dlog(eb, a) - dlog_fd_oracle(b, a)), 1e-7 * scale),
    };
  });
  items.push_back([=, &a, &b, &eb] {
    const auto r = dlog_resolvent(b, a, tol);
    return std::vector<SuiteItem>{at_most("dlog_vs_resolvent", operator_norm(r.value - dlog(eb, a)), id_thr)};
  });
  items.push_back([=, &b, &eb] {
    const auto r = log_resolvent(b, tol);
    return std::vector<SuiteItem>{at_most("log_vs_resolvent", operator_norm(r.value - matrix_log(eb)), id_thr),
                                  at_most("log_resolvent_endpoint", r.endpoint_integrand_norm, tol)};
  });
  items.push_back([=, &a, &b, &eb] {
    const BdlogProduct p = bdlog_product(a, b, tol);
    const Matrix spectral = b.matrix() * dlog(eb, a).matrix();
    return std::vector<SuiteItem>{
        at_most("bdlog_vs_spectral", operator_norm(Matrix(p.value - spectral)), id_thr),
        at_most("bdlog_bound_ratio", p.bound > 0 ? p.norm / p.bound : 0.0, 1.0 + 1e-6),
    };
  });
  if (a_pd) {
    items.push_back([=, &a, &b, &ea, &eb] {
      const AlogdiffIntegral r = alogdiff_integral(a, b, tol);
      const Matrix spectral = x_log_x(ea).matrix() - a.matrix() * matrix_log(eb).matrix();
      std::vector<SuiteItem> out{at_most("alogdiff_vs_spectral", operator_norm(Matrix(r.value - spectral)), id_thr)};
      if (r.condition_a) out.push_back(at_most("alogdiff_bound_a_ratio", r.bound_a > 0 ? r.norm / r.bound_a : 0.0, 1.0 + 1e-6));
      if (r.condition_b) out.push_back(at_most("alogdiff_bound_b_ratio", r.bound_b > 0 ? r.norm / r.bound_b : 0.0, 1.0 + 1e-6));
      return out;
    });
    items.push_back([=, &a, &b] {
      const ProofChainResult r = proof_chain_integrals(a, b, tol);
      return std::vector<SuiteItem>{
          at_most("proof_chain_u_plus_v_minus_w", r.chain_residual, id_thr),
          at_most("proof_chain_log_difference", r.log_difference_residual, id_thr),
          at_most("proof_chain_dlog_projection", r.dlog_residual, id_thr),
      };
    });
  }
  return items;
}

inline Json items_json(const std::vector<SuiteItem>& items, bool timings) {
  Json out = Json::array();
  for (const auto& it : items) {
    Json j = {{"name", it.name},
              {"residual", json_number(it.residual)},
              {"threshold", json_number(it.threshold)},
              {"comparison", it.comparison == Comparison::AtMost ? "<=" : ">="},
              {"pass", it.pass()}};
    if (timings) j["seconds"] = it.seconds;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace detail

/// Runs every applicable item. Items execute in parallel; the report lists
/// them in a fixed order and contains no timing unless requested, so it is
/// byte-identical across thread counts.
inline SuiteReport run_verification_suite(const HermitianMatrix& a, const HermitianMatrix& b,
                                          const SuiteOptions& o = {}) {
  require_same_dim(a, b, "run_verification_suite");
  if (!(o.tol >= 1e-12 && o.tol <= 1e-2)) throw InvalidArgument("verify: tol must lie in [1e-12, 1e-2]");
  const SpectralDecomposition ea = eig_hermitian(a);
  const SpectralDecomposition eb = eig_hermitian(b);
  require_psd(ea, "verify: A");
  require_psd(eb, "verify: B");

  SuiteReport rep;
  Json& j = rep.json;
  j["schema"] = 1;
  j["dim"] = a.dim();
  j["tol"] = o.tol;
  const PairAnalysis pa = analyze_pair(a, b);
  j["dichotomy"] = to_string(pa.dichotomy());
  j["support_margin"] = json_number(pa.support.margin);

  std::vector<SuiteItem> items;
  if (!pa.restricted) {
    const DivergenceProbe pr = divergence_probe(a, b, o.probe_checkpoints, o.tol);
    const double ratio = pr.slope && pr.witness_quadratic > 0 ? *pr.slope / pr.witness_quadratic : 0.0;
    items.push_back({"probe_slope_over_xax", ratio, 0.9, Comparison::AtLeast});
    items.push_back(detail::at_most("trace_divergence_is_infinite", std::isinf(trace_divergence(a, b)) ? 0.0 : 1.0, 0.0));
    Json probe;
    probe["witness"] = detail::witness_json(pr.witness);
    probe["witness_quadratic"] = pr.witness_quadratic;
    probe["checkpoints"] = pr.checkpoints;
    probe["quadratic_values"] = pr.quadratic_values;
    probe["tail_bounds"] = pr.tail_bounds;
    probe["slope"] = pr.slope ? Json(*pr.slope) : Json(nullptr);
    j["probe"] = std::move(probe);
  } else {
    const std::vector<detail::ItemFn> fns = detail::finite_items(a, b, o, ea, eb);
    std::vector<std::vector<SuiteItem>> slots(fns.size());
    std::vector<double> secs(fns.size());
    parallel_for(
        fns.size(),
        [&](std::size_t i) {
          const auto t0 = std::chrono::steady_clock::now();
          slots[i] = fns[i]();
          secs[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        },
        o.threads);
    for (std::size_t i = 0; i < slots.size(); ++i)
      for (auto& it : slots[i]) {
        it.seconds = secs[i];
        items.push_back(std::move(it));
      }
    if (o.diagnostics) {
      const FrgResult f1 = rhs_frg1(a, b, o.tol);
      Json d;
      d["frg1_panels"] = detail::panels_json(f1);
      d["frg1_error_estimate"] = f1.total.error_estimate;
      d["frg1_evaluations"] = f1.total.evaluations;
      d["frg1_converged"] = f1.total.converged;
      d["gamma_max"] = f1.gamma_max;
      d["kinks"] = f1.kinks;
      d["u_endpoint_rule"] = "interior Gauss-Kronrod nodes; u = 0 never sampled";
      d["u_endpoint_limit"] = f1.term2_endpoint ? to_json(*f1.term2_endpoint) : Json(nullptr);
      j["diagnostics"] = std::move(d);
    }
  }
  for (const auto& it : items) rep.all_pass = rep.all_pass && it.pass();
  j["items"] = detail::items_json(items, o.timings);
  j["all_pass"] = rep.all_pass;
  return rep;
}

}  // namespace frenkel
