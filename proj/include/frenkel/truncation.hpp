#pragma once

// Finite-truncation harness: synthetic compact "master" operators, their
// coordinate compressions T_n = P_n T P_n, and the budgets / convergence
// records built on them.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "frenkel/divergence.hpp"
#include "frenkel/integral_forms.hpp"
#include "frenkel/matrix_io.hpp"
#include "frenkel/numfmt.hpp"
#include "frenkel/parallel.hpp"
#include "frenkel/random.hpp"

namespace frenkel {

enum class EigenLaw { Power, Geometric };
enum class SignPattern { Positive, Alternating, Seeded };

/// mu_i = i^{-param} (Power) or param^i (Geometric), i = 1..N, with signs.
struct CompactModel {
  Index master_dim = 256;
  EigenLaw law = EigenLaw::Power;
  double param = 2.0;
  SignPattern signs = SignPattern::Positive;
  /// 0 leaves the standard basis in place.
  std::uint64_t rotation_seed = 0;
  std::uint64_t sign_seed = 0;
  double p = 1.0;
};

inline constexpr Index kMaxMasterDim = 1024;

inline void validate(const CompactModel& m) {
  if (m.master_dim < 1 || m.master_dim > kMaxMasterDim) throw InvalidArgument("compact model: N must lie in [1, 1024]");
  if (!(m.p >= 1.0)) throw InvalidArgument("compact model: p must be >= 1");
  if (m.law == EigenLaw::Power) {
    if (!(m.param > 0.0)) throw InvalidArgument("compact model: power law needs q > 0");
    if (std::isfinite(m.p) && !(m.param * m.p > 1.0))
      throw InvalidArgument("compact model: power law is not p-summable (need q p > 1)");
  } else if (!(m.param > 0.0 && m.param < 1.0)) {
    throw InvalidArgument("compact model: geometric law needs 0 < r < 1");
  }
}

inline RealVector law_magnitudes(const CompactModel& m) {
  RealVector mu(m.master_dim);
  for (Index i = 0; i < m.master_dim; ++i) {
    const double k = static_cast<double>(i + 1);
    mu(i) = m.law == EigenLaw::Power ? std::pow(k, -m.param) : std::pow(m.param, k);
  }
  return mu;
}

inline RealVector signed_spectrum(const CompactModel& m) {
  RealVector mu = law_magnitudes(m);
  for (Index i = 0; i < mu.size(); ++i) {
    if (m.signs == SignPattern::Alternating && i % 2 == 1) mu(i) = -mu(i);
    if (m.signs == SignPattern::Seeded && (hash_combine(m.sign_seed, 0x5167, static_cast<std::uint64_t>(i)) & 1u))
      mu(i) = -mu(i);
  }
  return mu;
}

/// Bound on sum_{i > N} |mu_i|^p (for p = inf: |mu_{N+1}|).
inline double law_tail(const CompactModel& m) {
  const double n = static_cast<double>(m.master_dim);
  if (!std::isfinite(m.p)) return m.law == EigenLaw::Power ? std::pow(n + 1.0, -m.param) : std::pow(m.param, n + 1.0);
  if (m.law == EigenLaw::Power) {
    const double e = m.param * m.p;
    return std::pow(n, 1.0 - e) / (e - 1.0);
  }
  const double rp = std::pow(m.param, m.p);
  return std::pow(rp, n + 1.0) / (1.0 - rp);
}

/// Four brick layers of complex Givens rotations on neighbouring coordinates.
/// Each rotation depends only on (seed, layer, i), so the N-model is a
/// boundary perturbation of the leading block of the 2N-model.
inline Matrix model_rotation(Index n, std::uint64_t seed) {
  Matrix u = Matrix::Identity(n, n);
  if (seed == 0) return u;
  constexpr int kLayers = 4;
  for (int layer = 0; layer < kLayers; ++layer) {
    for (Index i = layer % 2; i + 1 < n; i += 2) {
      const auto ui = static_cast<std::uint64_t>(i);
      const double theta = 0.5 * std::numbers::pi * unit_from_hash(hash_combine(seed, layer, 2 * ui));
      const double phi = 2.0 * std::numbers::pi * unit_from_hash(hash_combine(seed, layer, 2 * ui + 1));
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const Complex e = std::polar(1.0, phi);
      const Eigen::RowVectorXcd r0 = u.row(i);
      const Eigen::RowVectorXcd r1 = u.row(i + 1);
      u.row(i) = c * r0 - s * e * r1;
      u.row(i + 1) = s * std::conj(e) * r0 + c * r1;
    }
  }
  return u;
}

inline HermitianMatrix synth_compact(const CompactModel& m) {
  validate(m);
  return HermitianMatrix::diagonal(signed_spectrum(m)).congruence(model_rotation(m.master_dim, m.rotation_seed));
}

/// P_n T P_n, zero padded to the size of T.
inline HermitianMatrix truncate(const HermitianMatrix& t, Index n) {
  if (n < 1 || n > t.dim()) throw InvalidArgument("truncate: n must lie in [1, dim]");
  Matrix m = Matrix::Zero(t.dim(), t.dim());
  m.topLeftCorner(n, n) = t.matrix().topLeftCorner(n, n);
  return HermitianMatrix(m);
}

namespace detail {

inline constexpr Index kHarnessJacobiLimit = 64;

/// Large harness matrices use Eigen's tridiagonal QR solver; the Jacobi
/// solver is exact enough but O(n^3) per sweep with poor locality.
inline RealVector harness_eigenvalues(const HermitianMatrix& t) {
  if (t.dim() <= kHarnessJacobiLimit) return eigenvalues(t);
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

inline SpectralDecomposition harness_eig(const HermitianMatrix& t) {
  if (t.dim() <= kHarnessJacobiLimit) return eig_hermitian(t);
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.matrix());
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

inline double part_norm(const RealVector& ev, double p, int sign, double band) {
  std::vector<double> v;
  for (Index i = 0; i < ev.size(); ++i)
    if (sign * ev(i) > band) v.push_back(sign * ev(i));
  return schatten_norm_of_values(std::span<const double>(v), p);
}

inline std::vector<Vector> sample_vectors(Index n, std::uint64_t seed, int count = 16) {
  Rng rng(seed);
  std::vector<Vector> xs;
  for (int k = 0; k < count; ++k) xs.push_back(random_unit_vector(n, rng));
  return xs;
}

inline Vector pad(const Vector& head, Index n) {
  Vector v = Vector::Zero(n);
  v.head(head.size()) = head;
  return v;
}

inline double schatten_general(const Matrix& m, double p) {
  const RealVector s = Eigen::BDCSVD<Matrix>(m).singularValues();
  return schatten_norm_of_values(s, p);
}

}  // namespace detail

/// Schatten p-norm from harness eigenvalues (fast path for large sizes).
inline double harness_schatten_norm(const HermitianMatrix& t, double p) {
  return schatten_norm_of_values(detail::harness_eigenvalues(t), p);
}

struct TruncationRecord {
  Index n = 0;
  std::vector<double> plus_norm;   // ||T_{n,+}||_p per requested p
  std::vector<double> minus_norm;  // ||T_{n,-}||_p
  double gap_to_master = 0.0;      // ||T - T_n||_2 (Frobenius)
  std::vector<double> gap_p;       // ||T - T_n||_p
  std::vector<double> strong_residuals;       // ||(T - T_n) x_k||
  std::vector<double> strong_plus_residuals;  // ||(T+ - T_{n,+}) x_k||
};

struct TruncationSeries {
  std::vector<double> ps;
  std::vector<TruncationRecord> records;  // n = 1..N
  std::vector<double> master_plus_norm;
  std::vector<double> master_minus_norm;
  std::size_t interlacing_violations = 0;
  std::size_t plus_monotone_violations = 0;
  std::size_t minus_monotone_violations = 0;
  std::size_t upper_bound_violations = 0;
  /// Frobenius gap; non-increasing by construction of P_n.
  std::size_t gap_monotone_violations = 0;
  /// Diagnostic only: ||T - T_n||_p need not be monotone for p != 2.
  std::size_t gap_p_monotone_violations = 0;
  double final_gap = 0.0;

  bool invariants_hold() const {
    return interlacing_violations == 0 && plus_monotone_violations == 0 && minus_monotone_violations == 0 &&
           upper_bound_violations == 0 && gap_monotone_violations == 0 && final_gap <= 1e-9;
  }
};

inline constexpr double kTruncationSlack = 1e-11;

inline TruncationSeries truncation_series(const HermitianMatrix& t, std::span<const double> ps,
                                          std::uint64_t sample_seed = 1) {
  if (ps.empty()) throw InvalidArgument("truncation_series: no exponents");
  for (double p : ps)
    if (!(p >= 1.0)) throw InvalidArgument("truncation_series: p must be >= 1");
  const Index big_n = t.dim();
  const double scale = std::max(1.0, operator_norm(t));
  const double slack = kTruncationSlack * scale;
  const std::size_t np = ps.size();

  TruncationSeries out;
  out.ps.assign(ps.begin(), ps.end());
  const SpectralDecomposition master = detail::harness_eig(t);
  const double master_band = tol::kZeroBand * master.norm();
  for (double p : ps) {
    out.master_plus_norm.push_back(detail::part_norm(master.eigenvalues, p, 1, master_band));
    out.master_minus_norm.push_back(detail::part_norm(master.eigenvalues, p, -1, master_band));
  }
  const Matrix t_plus = positive_part(master).matrix();
  const std::vector<Vector> xs = detail::sample_vectors(big_n, sample_seed);

  out.records.resize(static_cast<std::size_t>(big_n));
  std::vector<RealVector> block_eigs(static_cast<std::size_t>(big_n));
  parallel_for(static_cast<std::size_t>(big_n), [&](std::size_t idx) {
    const Index n = static_cast<Index>(idx) + 1;
    TruncationRecord& rec = out.records[idx];
    rec.n = n;
    const HermitianMatrix block = t.leading_block(n);
    const SpectralDecomposition e = detail::harness_eig(block);
    block_eigs[idx] = e.eigenvalues;
    const double band = tol::kZeroBand * e.norm();
    const HermitianMatrix gap = t - truncate(t, n);
    const RealVector gap_eigs = detail::harness_eigenvalues(gap);
    for (double p : ps) {
      rec.plus_norm.push_back(detail::part_norm(e.eigenvalues, p, 1, band));
      rec.minus_norm.push_back(detail::part_norm(e.eigenvalues, p, -1, band));
      rec.gap_p.push_back(schatten_norm_of_values(gap_eigs, p));
    }
    rec.gap_to_master = gap.frobenius_norm();
    const Matrix bplus = positive_part(e).matrix();
    for (const Vector& x : xs) {
      const Vector tx = t.matrix() * x;
      const Vector tnx = detail::pad(block.matrix() * x.head(n), big_n);
      rec.strong_residuals.push_back((tx - tnx).norm());
      const Vector px = t_plus * x;
      const Vector pnx = detail::pad(bplus * x.head(n), big_n);
      rec.strong_plus_residuals.push_back((px - pnx).norm());
    }
  });

  for (std::size_t i = 0; i + 1 < out.records.size(); ++i) {
    const RealVector& lo = block_eigs[i];
    const RealVector& hi = block_eigs[i + 1];
    for (Index k = 0; k < lo.size(); ++k)
      if (hi(k) < lo(k) - slack || lo(k) < hi(k + 1) - slack) ++out.interlacing_violations;
    const TruncationRecord& a = out.records[i];
    const TruncationRecord& b = out.records[i + 1];
    for (std::size_t j = 0; j < np; ++j) {
      if (a.plus_norm[j] > b.plus_norm[j] + slack) ++out.plus_monotone_violations;
      if (a.minus_norm[j] > b.minus_norm[j] + slack) ++out.minus_monotone_violations;
      if (a.gap_p[j] < b.gap_p[j] - slack) ++out.gap_p_monotone_violations;
    }
    if (a.gap_to_master < b.gap_to_master - slack) ++out.gap_monotone_violations;
  }
  for (const auto& r : out.records)
    for (std::size_t j = 0; j < np; ++j)
      if (r.plus_norm[j] > out.master_plus_norm[j] + slack || r.minus_norm[j] > out.master_minus_norm[j] + slack)
        ++out.upper_bound_violations;
  out.final_gap = out.records.back().gap_to_master;
  return out;
}

inline TruncationSeries truncation_series(const HermitianMatrix& t, double p, std::uint64_t sample_seed = 1) {
  const double ps[] = {p};
  return truncation_series(t, ps, sample_seed);
}

/// One CSV row per n; norms for the first requested exponent.
inline void write_truncation_csv(std::ostream& os, const TruncationSeries& s) {
  os << "n,plus_norm_p,minus_norm_p,gap_to_master,gap_p,strong_residual_max,strong_plus_residual_max\n";
  for (const auto& r : s.records) {
    const double sr = *std::max_element(r.strong_residuals.begin(), r.strong_residuals.end());
    const double sp = *std::max_element(r.strong_plus_residuals.begin(), r.strong_plus_residuals.end());
    os << r.n << ',' << fmt17(r.plus_norm[0]) << ',' << fmt17(r.minus_norm[0]) << ',' << fmt17(r.gap_to_master)
       << ',' << fmt17(r.gap_p[0]) << ',' << fmt17(sr) << ',' << fmt17(sp) << '\n';
  }
}

struct BudgetResult {
  std::vector<double> ps;
  std::vector<double> values;  // e_p; +inf when range(A) is not inside range(B)
  double error_estimate = 0.0;
  bool converged = true;
  /// Smallest tau with A <= tau B (finite exactly when the pair is supported).
  double domination_tau = kInf;
};

/// e_p = int_1^{g_max} g^-1 ||(A - gB)+||_p dg + int_0^1 ||(B - A/u)+||_p du,
/// for several p on one panel tree.
inline BudgetResult budget_e_p(const HermitianMatrix& a, const HermitianMatrix& b, std::span<const double> ps,
                               double tol = 1e-8) {
  require_same_dim(a, b, "budget_e_p");
  if (ps.empty()) throw InvalidArgument("budget_e_p: no exponents");
  for (double p : ps)
    if (!(p >= 1.0)) throw InvalidArgument("budget_e_p: p must be >= 1");
  BudgetResult out;
  out.ps.assign(ps.begin(), ps.end());
  const auto np = static_cast<Index>(ps.size());

  std::optional<HermitianMatrix> ab;
  std::optional<HermitianMatrix> bb;
  Eigen::LLT<Matrix> llt(b.matrix());
  if (llt.info() == Eigen::Success && (llt.matrixL().toDenseMatrix().diagonal().real().array() > 0).all()) {
    ab.emplace(a);
    bb.emplace(b);
  } else {
    const PairAnalysis pa = analyze_pair(a, b);
    if (!pa.restricted) {
      out.values.assign(ps.size(), kInf);
      out.converged = false;
      return out;
    }
    if (pa.restricted->empty()) {
      out.values.assign(ps.size(), 0.0);
      out.domination_tau = 0.0;
      return out;
    }
    ab.emplace(pa.restricted->a());
    bb.emplace(pa.restricted->b());
    llt.compute(bb->matrix());
  }
  // g_max = lambda_1(L^{-1} A L^{-*}) with B = L L*.
  const Matrix l = llt.matrixL();
  const Matrix x = l.triangularView<Eigen::Lower>().solve(ab->matrix());
  const Matrix c = l.triangularView<Eigen::Lower>().solve(x.adjoint()).adjoint();
  const RealVector mu = detail::harness_eigenvalues(HermitianMatrix(c));
  const double lam = mu(0);
  std::vector<double> kinks1, kinks2;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > 1.0) kinks1.push_back(mu(i));
    if (mu(i) > 0.0 && mu(i) < 1.0) kinks2.push_back(mu(i));
  }
  out.domination_tau = std::max(0.0, lam);
  const double gmax = std::max(1.0, lam);

  auto norms = [&](const HermitianMatrix& m) {
    const RealVector ev = detail::harness_eigenvalues(m);
    const double band = tol::kZeroBand * ev.cwiseAbs().maxCoeff();
    RealVector v(np);
    for (Index j = 0; j < np; ++j) v(j) = detail::part_norm(ev, ps[static_cast<std::size_t>(j)], 1, band);
    return v;
  };
  RealVector total = RealVector::Zero(np);
  if (gmax > 1.0) {
    auto q = adaptive_integral<RealVector>([&](double g) { return RealVector(norms(*ab - g * *bb) / g); }, 1.0,
                                           gmax, 0.5 * tol, kinks1);
    total += q.value;
    out.error_estimate += q.error_estimate;
    out.converged = out.converged && q.converged;
  }
  auto q2 = adaptive_integral<RealVector>([&](double u) { return norms(*bb - (1.0 / u) * *ab); }, 0.0, 1.0, 0.5 * tol,
                                     kinks2);
  total += q2.value;
  out.error_estimate += q2.error_estimate;
  out.converged = out.converged && q2.converged;
  out.values.assign(total.data(), total.data() + np);
  return out;
}

inline double budget_e_p(const HermitianMatrix& a, const HermitianMatrix& b, double p, double tol = 1e-8) {
  const double ps[] = {p};
  return budget_e_p(a, b, ps, tol).values[0];
}

/// Distance of the n-block divergence C_n - D_n + B_n (zero padded) to the
/// master-level Delta(A||B), for n = 1, 2, 4, ..., N.
struct ConvergenceRecord {
  Index n = 0;
  double gap_operator = 0.0;
  double gap_p = 0.0;
  double strong_residual = 0.0;  // max_k ||(Delta - Delta_n) x_k||
  /// ||rhs_frg1(A_n, B_n) - Delta_n|| for small blocks.
  std::optional<double> frg1_residual;
};

struct Theorem3Result {
  double p = 1.0;
  std::vector<ConvergenceRecord> records;
  double final_gap = 0.0;  // max(gap_operator, gap_p) at n = N
  std::size_t monotone_violations = 0;
};

inline constexpr Index kFrg1CrossCheckLimit = 16;

namespace detail {

inline std::vector<Index> dyadic_sizes(Index big_n) {
  std::vector<Index> ns;
  for (Index n = 1; n < big_n; n *= 2) ns.push_back(n);
  ns.push_back(big_n);
  return ns;
}

inline std::pair<HermitianMatrix, HermitianMatrix> model_pair(const CompactModel& am, const CompactModel& bm) {
  if (am.master_dim != bm.master_dim) throw InvalidArgument("models must share the master dimension");
  HermitianMatrix a = synth_compact(am);
  HermitianMatrix b = synth_compact(bm);
  const RealVector sb = signed_spectrum(bm);
  if (!(sb.minCoeff() > 0.0)) throw NotPositiveDefinite("B model must have a positive spectrum", sb.minCoeff());
  if (signed_spectrum(am).minCoeff() < 0.0)
    throw NotPositiveSemidefinite("A model must have a non-negative spectrum", signed_spectrum(am).minCoeff());
  return {std::move(a), std::move(b)};
}

inline Matrix pad_block(const Matrix& block, Index big_n) {
  Matrix m = Matrix::Zero(big_n, big_n);
  m.topLeftCorner(block.rows(), block.cols()) = block;
  return m;
}

}  // namespace detail

inline Theorem3Result theorem3_convergence(const CompactModel& am, const CompactModel& bm, double p,
                                           std::uint64_t sample_seed = 1) {
  const auto [a, b] = detail::model_pair(am, bm);
  const Index big_n = a.dim();
  const HermitianMatrix master = *delta_operator(a, b).delta;
  const std::vector<Index> ns = detail::dyadic_sizes(big_n);
  const std::vector<Vector> xs = detail::sample_vectors(big_n, sample_seed);

  Theorem3Result out;
  out.p = p;
  out.records.resize(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    const Index n = ns[i];
    const HermitianMatrix an = a.leading_block(n);
    const HermitianMatrix bn = b.leading_block(n);
    const HermitianMatrix dn = *delta_operator(an, bn).delta;
    const HermitianMatrix diff = master - HermitianMatrix(detail::pad_block(dn.matrix(), big_n));
    ConvergenceRecord& r = out.records[i];
    r.n = n;
    const RealVector ev = detail::harness_eigenvalues(diff);
    r.gap_operator = ev.cwiseAbs().maxCoeff();
    r.gap_p = schatten_norm_of_values(ev, p);
    for (const Vector& x : xs) r.strong_residual = std::max(r.strong_residual, (diff.matrix() * x).norm());
    if (n <= kFrg1CrossCheckLimit) r.frg1_residual = operator_norm(rhs_frg1(an, bn).total.value - dn);
  });
  for (std::size_t i = 0; i + 1 < out.records.size(); ++i) {
    const double slack = 1e-12 * std::max(1.0, out.records[i].gap_p);
    if (out.records[i + 1].gap_p > out.records[i].gap_p + slack ||
        out.records[i + 1].gap_operator > out.records[i].gap_operator + slack)
      ++out.monotone_violations;
  }
  out.final_gap = std::max(out.records.back().gap_operator, out.records.back().gap_p);
  return out;
}

/// Open question probe: does D_n = B_n Dlog[B_n](A_n) approach B Dlog[B](A),
/// and C_n = A_n(log A_n - log B_n) approach A(log A - log B)? Data only.
struct Problem1Row {
  Index n = 0;
  double d_gap_operator = 0.0;
  double d_gap_p = 0.0;
  double d_strong = 0.0;
  double c_gap_operator = 0.0;
};

inline std::vector<Problem1Row> problem1_probe(const CompactModel& am, const CompactModel& bm,
                                               std::uint64_t sample_seed = 1) {
  const auto [a, b] = detail::model_pair(am, bm);
  const Index big_n = a.dim();
  const double p = am.p;
  auto d_of = [](const HermitianMatrix& x, const HermitianMatrix& y) {
    return Matrix(y.matrix() * dlog(y, x).matrix());
  };
  auto c_of = [](const HermitianMatrix& x, const HermitianMatrix& y) {
    return Matrix(x_log_x(eig_hermitian(x)).matrix() - x.matrix() * matrix_log(y).matrix());
  };
  const Matrix d_master = d_of(a, b);
  const Matrix c_master = c_of(a, b);
  const std::vector<Index> ns = detail::dyadic_sizes(big_n);
  const std::vector<Vector> xs = detail::sample_vectors(big_n, sample_seed);
  std::vector<Problem1Row> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t i) {
    const Index n = ns[i];
    const HermitianMatrix an = a.leading_block(n);
    const HermitianMatrix bn = b.leading_block(n);
    const Matrix dd = d_master - detail::pad_block(d_of(an, bn), big_n);
    const Matrix cd = c_master - detail::pad_block(c_of(an, bn), big_n);
    Problem1Row& r = rows[i];
    r.n = n;
    r.d_gap_operator = detail::schatten_general(dd, kInf);
    r.d_gap_p = detail::schatten_general(dd, p);
    for (const Vector& x : xs) r.d_strong = std::max(r.d_strong, (dd * x).norm());
    r.c_gap_operator = detail::schatten_general(cd, kInf);
  });
  return rows;
}

inline void write_problem1_csv(std::ostream& os, const std::vector<Problem1Row>& rows) {
  os << "n,d_gap_operator,d_gap_p,d_strong,c_gap_operator\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt17(r.d_gap_operator) << ',' << fmt17(r.d_gap_p) << ',' << fmt17(r.d_strong) << ','
       << fmt17(r.c_gap_operator) << '\n';
}

/// Experiment file: {"law": "power|geom", "param", "signs": "pos|alt|seeded", "N", "p", "seed"}.
inline CompactModel model_from_json(const Json& j) {
  try {
    CompactModel m;
    const std::string law = j.at("law").get<std::string>();
    if (law == "power") {
      m.law = EigenLaw::Power;
    } else if (law == "geom") {
      m.law = EigenLaw::Geometric;
    } else {
      throw InvalidArgument("experiment: law must be power or geom");
    }
    m.param = j.at("param").get<double>();
    const std::string signs = j.value("signs", std::string("pos"));
    if (signs == "pos") {
      m.signs = SignPattern::Positive;
    } else if (signs == "alt") {
      m.signs = SignPattern::Alternating;
    } else if (signs == "seeded") {
      m.signs = SignPattern::Seeded;
    } else {
      throw InvalidArgument("experiment: signs must be pos, alt or seeded");
    }
    m.master_dim = j.at("N").get<Index>();
    if (j.at("p").is_string()) {
      const std::string ps = j.at("p").get<std::string>();
      if (ps != "inf") throw InvalidArgument("experiment: p must be a number or \"inf\"");
      m.p = kInf;
    } else {
      m.p = j.at("p").get<double>();
    }
    m.rotation_seed = j.value("seed", std::uint64_t{0});
    m.sign_seed = m.rotation_seed;
    validate(m);
    return m;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("experiment: ") + e.what());
  }
}

}  // namespace frenkel
