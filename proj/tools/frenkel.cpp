// frenkel: batch front end for generation, verification, pencil export,
// truncation experiments and divergence probes.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frenkel/frenkel.hpp"

namespace {

using namespace frenkel;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int cmd_gen(const GeneratorOptions& g, const std::string& out) {
  const auto [a, b] = generate_pair(g);
  write_pair(out, a, b);
  return kExitPass;
}

int cmd_verify(const std::string& in, const std::string& out, const SuiteOptions& opt) {
  const auto [a, b] = read_pair(in);
  const SuiteReport rep = run_verification_suite(a, b, opt);
  write_text_file(out, rep.json.dump(2) + "\n");
  return rep.all_pass ? kExitPass : kExitFail;
}

int cmd_pencil(const std::string& in, const std::string& out, double from, double to, int points) {
  if (points < 2) throw InvalidArgument("pencil: need at least 2 points");
  if (!(from < to)) throw InvalidArgument("pencil: need --from < --to");
  const auto [a, b] = read_pair(in);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = from + (to - from) * i / (points - 1);
  const RealMatrix curves = eigencurves(a, b, grid);
  std::ostringstream os;
  write_eigencurves_csv(os, grid, curves);
  write_text_file(out, os.str());
  return kExitPass;
}

int cmd_truncate(const std::string& config, const std::string& out) {
  const CompactModel m = model_from_json(read_json_file(config));
  const TruncationSeries s = truncation_series(synth_compact(m), m.p);
  std::ostringstream os;
  write_truncation_csv(os, s);
  write_text_file(out, os.str());
  std::printf("interlacing_violations=%zu plus_monotone_violations=%zu minus_monotone_violations=%zu "
              "upper_bound_violations=%zu gap_monotone_violations=%zu final_gap=%s\n",
              s.interlacing_violations, s.plus_monotone_violations, s.minus_monotone_violations,
              s.upper_bound_violations, s.gap_monotone_violations, fmt17(s.final_gap).c_str());
  return s.invariants_hold() ? kExitPass : kExitFail;
}

int cmd_probe(const std::string& in, const std::string& out, const std::vector<double>& checkpoints, double tol) {
  const auto [a, b] = read_pair(in);
  const DivergenceProbe p = divergence_probe(a, b, checkpoints, tol);
  std::ostringstream os;
  os << "t,witness_quadratic_value,norm,tail_bound\n";
  for (std::size_t i = 0; i < p.checkpoints.size(); ++i)
    os << fmt17(p.checkpoints[i]) << ',' << fmt17(p.quadratic_values[i]) << ',' << fmt17(p.norms[i]) << ','
       << fmt17(p.tail_bounds[i]) << '\n';
  write_text_file(out, os.str());
  std::printf("witness_quadratic=%s slope=%s\n", fmt17(p.witness_quadratic).c_str(),
              p.slope ? fmt17(*p.slope).c_str() : "none");
  if (!p.slope) return kExitPass;
  return *p.slope >= 0.9 * p.witness_quadratic ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence operator toolkit"};
  app.require_subcommand(1);

  GeneratorOptions gen;
  std::string gen_out;
  auto* g = app.add_subcommand("gen", "generate a seeded PSD pair");
  g->add_option("--seed", gen.seed, "random seed")->required();
  g->add_option("--dim", gen.dim, "matrix dimension")->required();
  g->add_flag("--commuting", gen.commuting, "simultaneously diagonal pair");
  g->add_flag("--singular-b", gen.singular_b, "rank-deficient B with range(A) inside range(B)");
  g->add_flag("--unsupported", gen.unsupported, "rank-deficient B with definite A");
  g->add_option("--cond", gen.condition_target, "eigenvalue spread of each matrix");
  g->add_option("-o,--output", gen_out, "pair file")->required();

  std::string v_in, v_out;
  SuiteOptions sopt;
  auto* v = app.add_subcommand("verify", "run the identity and oracle suite on a pair");
  v->add_option("-i,--input", v_in, "pair file")->required();
  v->add_option("--tol", sopt.tol, "quadrature tolerance");
  v->add_option("-o,--output", v_out, "report file")->required();
  v->add_flag("--diagnostics", sopt.diagnostics, "include panel logs");
  v->add_flag("--timings", sopt.timings, "include wall-clock seconds per item (breaks byte identity)");

  std::string p_in, p_out;
  double p_from = -2.0, p_to = 2.0;
  int p_points = 401;
  auto* pc = app.add_subcommand("pencil", "sample eigenvalue branches of A - gamma B");
  pc->add_option("-i,--input", p_in, "pair file")->required();
  pc->add_option("--from", p_from, "first gamma");
  pc->add_option("--to", p_to, "last gamma");
  pc->add_option("--points", p_points, "number of grid points");
  pc->add_option("-o,--output", p_out, "CSV file")->required();

  std::string t_cfg, t_out;
  auto* tr = app.add_subcommand("truncate", "truncation series of a synthetic compact operator");
  tr->add_option("--config", t_cfg, "experiment JSON")->required();
  tr->add_option("-o,--output", t_out, "CSV file")->required();

  std::string pr_in, pr_out, pr_cps = "10,100,1000,10000";
  double pr_tol = kDefaultQuadratureTol;
  auto* pr = app.add_subcommand("probe", "growth of the truncated integral for an unsupported pair");
  pr->add_option("-i,--input", pr_in, "pair file")->required();
  pr->add_option("--checkpoints", pr_cps, "comma separated t values");
  pr->add_option("--tol", pr_tol, "quadrature tolerance");
  pr->add_option("-o,--output", pr_out, "CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen, gen_out);
    if (*v) return cmd_verify(v_in, v_out, sopt);
    if (*pc) return cmd_pencil(p_in, p_out, p_from, p_to, p_points);
    if (*tr) return cmd_truncate(t_cfg, t_out);
    if (*pr) {
      std::vector<double> cps;
      std::stringstream ss(pr_cps);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          cps.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw InvalidArgument("probe: bad checkpoint '" + tok + "'");
        }
      }
      return cmd_probe(pr_in, pr_out, cps, pr_tol);
    }
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NotPositiveSemidefinite& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NotPositiveDefinite& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
