// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "frenkel/frenkel.hpp"

namespace {

using namespace frenkel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3e", x); }

std::pair<HermitianMatrix, HermitianMatrix> pair_for(std::uint64_t seed, Index n, bool singular_b = false,
                                                     bool unsupported = false, double cond = 10.0) {
  GeneratorOptions g;
  g.seed = seed;
  g.dim = n;
  g.singular_b = singular_b;
  g.unsupported = unsupported;
  g.condition_target = cond;
  return generate_pair(g);
}

// Criteria 1-3 share one sweep: 200 seeded definite pairs for each n = 1..8.
struct Sweep {
  double frg1_vs_delta = 0.0;
  double frg_vs_frg1 = 0.0;
  double frenkel_vs_d = 0.0;
  double trace_delta_vs_d = 0.0;
  double frg1_seconds = 0.0;
  std::size_t unconverged = 0;
};

Sweep main_sweep() {
  Sweep s;
  for (Index n = 1; n <= 8; ++n) {
    for (std::uint64_t k = 0; k < 200; ++k) {
      const auto [a, b] = pair_for(1'000'000 + 1000 * static_cast<std::uint64_t>(n) + k, n);
      const DivergenceReport d = delta_operator(a, b);
      const auto t0 = Clock::now();
      const FrgResult f1 = rhs_frg1(a, b, 1e-8);
      s.frg1_seconds += seconds_since(t0);
      const FrgResult f = rhs_frg(a, b, 1e-8);
      if (!f1.total.converged || !f.total.converged) ++s.unconverged;
      s.frg1_vs_delta = std::max(s.frg1_vs_delta, operator_norm(f1.total.value - *d.delta));
      s.frg_vs_frg1 = std::max(s.frg_vs_frg1, operator_norm(f.total.value - f1.total.value));
      s.frenkel_vs_d = std::max(s.frenkel_vs_d, std::abs(frenkel_trace(a, b, 1e-8) - d.trace_div));
      s.trace_delta_vs_d = std::max(s.trace_delta_vs_d, std::abs(d.delta->trace() - d.trace_div));
    }
  }
  return s;
}

Outcome criterion4() {
  double worst_trace = 0.0, worst_identity = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const Index n = 1 + static_cast<Index>(k % 8);
    const double cond = k % 2 ? 10.0 : 1000.0;
    const auto [a, b] = pair_for(2'000'000 + k, n, false, false, cond);
    const TracePairingResiduals r = trace_pairing_check(b, a);
    const double scale = std::max(1.0, schatten_norm(a, 1.0));
    worst_trace = std::max(worst_trace, r.trace_residual / scale);
    worst_identity = std::max(worst_identity, r.identity_residual);
  }
  return {worst_trace <= 1e-9 && worst_identity <= 1e-10,
          "1000 pairs, max trace residual/scale " + sci(worst_trace) + " (<= 1e-9), max ||Dlog[B](B) - I|| " +
              sci(worst_identity) + " (<= 1e-10)"};
}

Outcome criterion5() {
  double fd = 0.0, dres = 0.0, lres = 0.0, absres = 0.0, bdres = 0.0, alres = 0.0;
  std::size_t bound_violations = 0, bound_checks = 0;
  for (std::uint64_t k = 0; k < 120; ++k) {
    const Index n = 1 + static_cast<Index>(k % 8);
    const bool singular = k % 4 == 3 && n >= 2;
    const auto [a, b] = pair_for(3'000'000 + k, n, singular);
    absres = std::max(absres, operator_norm(abs_resolvent(a - b).abs - abs_value(a - b)));
    const BdlogProduct bd = bdlog_product(a, b);
    ++bound_checks;
    if (!bd.bound_holds) ++bound_violations;
    if (singular) continue;
    const HermitianMatrix dl = dlog(b, a);
    fd = std::max(fd, operator_norm(dlog_fd_oracle(b, a) - dl));
    dres = std::max(dres, operator_norm(dlog_resolvent(b, a).value - dl));
    lres = std::max(lres, operator_norm(log_resolvent(b).value - matrix_log(b)));
    bdres = std::max(bdres, operator_norm(Matrix(bd.value - b.matrix() * dl.matrix())));
    const AlogdiffIntegral al = alogdiff_integral(a, b);
    alres = std::max(alres, operator_norm(Matrix(al.value - a.matrix() * (matrix_log(a) - matrix_log(b)).matrix())));
    if (al.condition_a) {
      ++bound_checks;
      if (!al.bound_a_holds) ++bound_violations;
    }
    if (al.condition_b) {
      ++bound_checks;
      if (!al.bound_b_holds) ++bound_violations;
    }
  }
  const bool ok = fd <= 1e-7 && dres <= 1e-6 && lres <= 1e-6 && absres <= 1e-6 && bdres <= 1e-6 && alres <= 1e-6 &&
                  bound_violations == 0;
  return {ok, "fd " + sci(fd) + ", dlog resolvent " + sci(dres) + ", log resolvent " + sci(lres) + ", |A| " +
                  sci(absres) + ", B Dlog " + sci(bdres) + ", A(logA - logB) " + sci(alres) + ", bound violations " +
                  std::to_string(bound_violations) + "/" + std::to_string(bound_checks)};
}

Outcome criterion6() {
  const double cps[] = {10.0, 100.0, 1000.0, 10000.0};
  double worst_ratio = kInf;
  for (std::uint64_t k = 0; k < 40; ++k) {
    const auto [a, b] = pair_for(4'000'000 + k, 2 + static_cast<Index>(k % 7), false, true);
    const DivergenceProbe p = divergence_probe(a, b, cps, 1e-8);
    worst_ratio = std::min(worst_ratio, p.slope ? *p.slope / p.witness_quadratic : 0.0);
  }
  double worst_reg = 0.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto [a, b] = pair_for(4'100'000 + k, 2 + static_cast<Index>(k % 7), true);
    const RegularizedDelta r = regularized_delta(a, b, 1e-6, 1e-8);
    worst_reg = std::max(worst_reg, operator_norm(r.extrapolated - *delta_operator(a, b).delta));
  }
  return {worst_ratio >= 0.9 && worst_reg <= 1e-5,
          "40 unsupported pairs, min slope/(x*Ax) " + fmt("%.4f", worst_ratio) + " (>= 0.9); 100 singular-B pairs, " +
              "max ||restricted - extrapolated|| " + sci(worst_reg) + " (<= 1e-5)"};
}

Outcome criterion7() {
  Rng rng(5'000'000);
  std::size_t kato = 0, araki = 0;
  double kato_ratio = 0.0, araki_ratio = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Index n = 2 + k % 5;
    HermitianMatrix t1 = random_hermitian(n, rng);
    HermitianMatrix t2 = random_hermitian(n, rng);
    if (k % 3 == 1) t2 = t1 + 1e-4 * t2;
    if (k % 3 == 2) {
      // A - B against A - 2B for a seeded PSD pair
      const auto [a, b] = pair_for(5'100'000 + static_cast<std::uint64_t>(k), n);
      t1 = a - b;
      t2 = a - 2.0 * b;
    }
    const BoundPair kb = kato_continuity_check(t1, t2);
    const BoundPair ab = araki_check(t1, t2);
    if (!kb.holds()) ++kato;
    if (!ab.holds()) ++araki;
    kato_ratio = std::max(kato_ratio, kb.lhs / kb.rhs);
    araki_ratio = std::max(araki_ratio, ab.lhs / ab.rhs);
  }
  return {kato == 0 && araki == 0, "1000 pairs, Kato violations " + std::to_string(kato) + " (max lhs/rhs " +
                                       fmt("%.4f", kato_ratio) + "), Araki violations " + std::to_string(araki) +
                                       " (max lhs/rhs " + fmt("%.4f", araki_ratio) + ")"};
}

Outcome criterion8() {
  Matrix am = Matrix::Zero(3, 3);
  am(0, 1) = am(1, 0) = 1.0;
  Matrix bm = Matrix::Zero(3, 3);
  bm(0, 2) = bm(2, 0) = -1.0;  // A + zB written as A - z(-B)
  const HermitianMatrix a(am), minus_b(bm);
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(-2.0 + 0.01 * i);
  const RealMatrix c = eigencurves(a, minus_b, grid);
  double branch = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double r = std::sqrt(1.0 + grid[g] * grid[g]);
    const auto j = static_cast<Index>(g);
    branch = std::max({branch, std::abs(c(0, j) - r), std::abs(c(1, j)), std::abs(c(2, j) + r)});
  }
  const std::size_t crossings = find_crossings(a, minus_b, -10.0, 10.0).crossings.size();
  Matrix proj = Matrix::Zero(3, 3);
  proj(0, 0) = proj(0, 1) = proj(1, 0) = proj(1, 1) = 0.5;
  const double plus = operator_norm(Matrix(positive_part(a).matrix() - proj));
  return {branch <= 1e-9 && crossings == 0 && plus <= 1e-10,
          "max branch error " + sci(branch) + " (<= 1e-9), real crossings on [-10,10]: " + std::to_string(crossings) +
              ", ||H(0)+ - P|| " + sci(plus) + " (<= 1e-10)"};
}

CompactModel rotated(EigenLaw law, double param, SignPattern signs, std::uint64_t seed, Index n, double p) {
  CompactModel m;
  m.master_dim = n;
  m.law = law;
  m.param = param;
  m.signs = signs;
  m.rotation_seed = seed;
  m.sign_seed = seed;
  m.p = p;
  return m;
}

Outcome criterion9() {
  const double ps[] = {1.0, 2.0, 4.0, kInf};
  std::size_t violations = 0;
  double final_gap = 0.0;
  const CompactModel models[] = {
      rotated(EigenLaw::Power, 1.5, SignPattern::Alternating, 3, 128, 1.0),
      rotated(EigenLaw::Power, 2.0, SignPattern::Seeded, 7, 128, 1.0),
      rotated(EigenLaw::Geometric, 0.9, SignPattern::Positive, 11, 128, 1.0),
  };
  for (const CompactModel& m : models) {
    const TruncationSeries s = truncation_series(synth_compact(m), ps);
    violations += s.interlacing_violations + s.plus_monotone_violations + s.minus_monotone_violations +
                  s.upper_bound_violations + s.gap_monotone_violations;
    final_gap = std::max(final_gap, s.final_gap);
  }

  const CompactModel am = rotated(EigenLaw::Power, 4.0, SignPattern::Positive, 21, 128, 1.0);
  const CompactModel bm = rotated(EigenLaw::Power, 3.0, SignPattern::Positive, 22, 128, 1.0);
  double t3_gap = 0.0, t3_half = 0.0;
  for (double p : ps) {
    const Theorem3Result r = theorem3_convergence(am, bm, p);
    t3_gap = std::max(t3_gap, r.final_gap);
    const ConvergenceRecord& half = r.records[r.records.size() - 2];
    t3_half = std::max({t3_half, half.gap_operator, half.gap_p});
  }

  CompactModel am2 = am, bm2 = bm;
  am2.master_dim = bm2.master_dim = 256;
  const BudgetResult e1 = budget_e_p(synth_compact(am), synth_compact(bm), ps, 1e-8);
  const BudgetResult e2 = budget_e_p(synth_compact(am2), synth_compact(bm2), ps, 1e-8);
  double drift = 0.0;
  for (std::size_t j = 0; j < e1.values.size(); ++j)
    drift = std::max(drift, std::abs(e2.values[j] - e1.values[j]) / std::abs(e2.values[j]));

  return {violations == 0 && final_gap <= 1e-9 && t3_gap <= 1e-6 && drift <= 1e-3,
          "truncation violations " + std::to_string(violations) + " over 3 models x p in {1,2,4,inf}, final gap " +
              sci(final_gap) + "; block convergence gap " + sci(t3_half) + " at n = 64, " +
              sci(t3_gap) + " at n = 128 (<= 1e-6); e_p drift N 128 -> 256 " +
              sci(drift) + " (<= 1e-3)"};
}

int run_cli(const std::string& args, const char* threads) {
  const std::string cmd = "FRENKEL_THREADS=" + std::string(threads) + " " + FRENKEL_CLI + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion10() {
  const fs::path dir = fs::temp_directory_path() / "frenkel_acceptance";
  fs::create_directories(dir);
  struct Case {
    const char* flags;
    int dim;
  };
  const Case cases[] = {{"", 6}, {"--singular-b", 5}, {"--unsupported", 4}, {"--commuting", 3}};
  std::size_t mismatches = 0, failures = 0, runs = 0;
  for (std::size_t i = 0; i < std::size(cases); ++i) {
    const std::string pair = (dir / ("pair" + std::to_string(i) + ".json")).string();
    if (run_cli("gen --seed " + std::to_string(60 + i) + " --dim " + std::to_string(cases[i].dim) + " " +
                    cases[i].flags + " -o " + pair,
                "1") != 0)
      ++failures;
    std::string reference;
    for (const char* threads : {"1", "8", "1", "8"}) {
      const std::string out = (dir / ("rep" + std::to_string(runs++) + ".json")).string();
      if (run_cli("verify -i " + pair + " --tol 1e-8 -o " + out, threads) != 0) ++failures;
      const std::string text = slurp(out);
      if (reference.empty()) reference = text;
      else if (text != reference) ++mismatches;
    }
  }
  return {mismatches == 0 && failures == 0, std::to_string(runs) + " verify runs over 4 pairs with FRENKEL_THREADS in {1,8}, " +
                                                std::to_string(mismatches) + " byte mismatches, " +
                                                std::to_string(failures) + " non-zero exits"};
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const Outcome& o, double secs) {
    all = all && o.pass;
    std::printf("criterion %2d: %s  %s  [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  auto t0 = Clock::now();
  const Sweep s = main_sweep();
  const double sweep_secs = seconds_since(t0);
  report(1,
         {s.frg1_vs_delta <= 1e-6 && s.frg1_seconds <= 120.0 && s.unconverged == 0,
          "1600 pairs (200 per n = 1..8), max ||frg1 - Delta|| " + sci(s.frg1_vs_delta) + " (<= 1e-6), frg1 time " +
              fmt("%.1fs", s.frg1_seconds) + " (<= 120s), unconverged " + std::to_string(s.unconverged)},
         sweep_secs);
  report(2, {s.frg_vs_frg1 <= 2e-8, "max ||frg - frg1|| " + sci(s.frg_vs_frg1) + " (<= 2e-8)"}, 0.0);
  report(3,
         {s.frenkel_vs_d <= 1e-6 && s.trace_delta_vs_d <= 1e-8,
          "max |Fr - D| " + sci(s.frenkel_vs_d) + " (<= 1e-6), max |tr Delta - D| " + sci(s.trace_delta_vs_d) +
              " (<= 1e-8)"},
         0.0);

  const std::vector<std::pair<int, std::function<Outcome()>>> rest = {
      {4, criterion4}, {5, criterion5}, {6, criterion6}, {7, criterion7},
      {8, criterion8}, {9, criterion9}, {10, criterion10}};
  for (const auto& [id, fn] : rest) {
    t0 = Clock::now();
    const Outcome o = fn();
    report(id, o, seconds_since(t0));
  }
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
