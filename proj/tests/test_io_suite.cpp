#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"

using namespace frenkel;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "frenkel_io_suite";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRENKEL_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const Json* find_item(const Json& report, const std::string& name) {
  for (const auto& it : report.at("items"))
    if (it.at("name") == name) return &it;
  return nullptr;
}

}  // namespace

TEST_CASE("matrix JSON round trip is exact") {
  const Json j = pair_to_json(fixtures::pair_a(), fixtures::pair_b());
  CHECK(j.at("schema") == 1);
  const auto [a, b] = pair_from_json(Json::parse(j.dump()));
  CHECK(a.matrix() == fixtures::pair_a().matrix());
  CHECK(b.matrix() == fixtures::pair_b().matrix());
}

TEST_CASE("malformed matrix JSON is rejected") {
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"re":[[1]]})")), InvalidArgument);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"n":2,"re":[[1,0]]})")), InvalidArgument);
  CHECK_THROWS_AS(hermitian_from_json(Json::parse(R"({"n":2,"re":[[1,2],[3,1]]})")), InvalidArgument);
  CHECK_THROWS_AS(pair_from_json(Json::parse(R"({"schema":2,"A":{"n":1,"re":[[1]]},"B":{"n":1,"re":[[1]]}})")),
                  InvalidArgument);
  CHECK_THROWS_AS(pair_from_json(Json::parse(R"({"A":{"n":1,"re":[[1]]},"B":{"n":2,"re":[[1,0],[0,1]]}})")),
                  DimensionMismatch);
  CHECK_THROWS_AS(read_pair((scratch() / "missing.json").string()), IoError);
  CHECK(json_number(kInf) == "inf");
  CHECK(json_number(-kInf) == "-inf");
}

TEST_CASE("generator options") {
  GeneratorOptions g;
  g.seed = 12;
  g.dim = 5;
  g.commuting = true;
  const auto [a, b] = generate_pair(g);
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  CHECK(operator_norm(c) <= 1e-12 * operator_norm(a) * operator_norm(b));

  g.commuting = false;
  g.singular_b = true;
  const auto [sa, sb] = generate_pair(g);
  CHECK(support_relation(sa, sb).holds);
  CHECK(split_range(eig_hermitian(sb)).rank() < 5);

  g.singular_b = false;
  g.unsupported = true;
  const auto [ua, ub] = generate_pair(g);
  CHECK_FALSE(support_relation(ua, ub).holds);

  g.dim = 0;
  CHECK_THROWS_AS(generate_pair(g), InvalidArgument);
}

TEST_CASE("suite on A = B = I: every residual at rounding level") {
  const HermitianMatrix id = HermitianMatrix::identity(3);
  const SuiteReport r = run_verification_suite(id, id);
  CHECK(r.all_pass);
  for (const auto& it : r.json.at("items")) {
    const std::string name = it.at("name");
    // Bound ratios are not residuals; the central difference carries its own O(t^2) error.
    if (name.ends_with("_ratio") || name == "dlog_vs_finite_difference") continue;
    INFO(name);
    CHECK(it.at("residual").get<double>() <= 1e-12);
  }
  CHECK(find_item(r.json, "dlog_vs_finite_difference")->at("residual").get<double>() <= 1e-10);
}

TEST_CASE("suite on a seeded definite 6x6 pair") {
  GeneratorOptions g;
  g.seed = 3;
  g.dim = 6;
  const auto [a, b] = generate_pair(g);
  const SuiteReport r = run_verification_suite(a, b);
  CHECK(r.all_pass);
  CHECK(r.json.at("dichotomy") == "Finite");
  for (const char* name : {"frg1_vs_delta", "frg_vs_frg1", "frenkel_trace_vs_trace_divergence", "dlog_vs_resolvent",
                           "alogdiff_vs_spectral", "proof_chain_u_plus_v_minus_w"}) {
    const Json* it = find_item(r.json, name);
    REQUIRE(it);
    CHECK(it->at("residual").get<double>() <= 1e-6);
  }
  CHECK_FALSE(r.json.at("items")[0].contains("seconds"));
}

TEST_CASE("suite on an unsupported pair reports the probe") {
  GeneratorOptions g;
  g.seed = 8;
  g.dim = 4;
  g.unsupported = true;
  const auto [a, b] = generate_pair(g);
  const SuiteReport r = run_verification_suite(a, b);
  CHECK(r.json.at("dichotomy") == "Divergent");
  REQUIRE(r.json.contains("probe"));
  CHECK(r.json.at("probe").contains("witness"));
  CHECK(r.json.at("probe").at("slope").is_number());
  CHECK(r.all_pass);
}

TEST_CASE("suite input validation") {
  const HermitianMatrix id = HermitianMatrix::identity(2);
  SuiteOptions o;
  o.tol = 1.0;
  CHECK_THROWS_AS(run_verification_suite(id, id, o), InvalidArgument);
  CHECK_THROWS_AS(run_verification_suite(HermitianMatrix::diagonal({1.0, -1.0}), id), NotPositiveSemidefinite);
}

TEST_CASE("suite report does not depend on the thread count") {
  GeneratorOptions g;
  g.seed = 19;
  g.dim = 4;
  g.singular_b = true;
  const auto [a, b] = generate_pair(g);
  SuiteOptions one;
  one.threads = 1;
  SuiteOptions four;
  four.threads = 4;
  CHECK(run_verification_suite(a, b, one).json.dump(2) == run_verification_suite(a, b, four).json.dump(2));
}

TEST_CASE("CLI: gen is byte-identical for a fixed seed") {
  const fs::path d = scratch();
  REQUIRE(run_cli("gen --seed 5 --dim 4 -o " + (d / "g1.json").string()) == 0);
  REQUIRE(run_cli("gen --seed 5 --dim 4 -o " + (d / "g2.json").string()) == 0);
  CHECK(slurp(d / "g1.json") == slurp(d / "g2.json"));
  REQUIRE(run_cli("gen --seed 6 --dim 4 -o " + (d / "g3.json").string()) == 0);
  CHECK(slurp(d / "g1.json") != slurp(d / "g3.json"));
}

TEST_CASE("CLI: exit codes") {
  const fs::path d = scratch();
  const std::string pair = (d / "pair.json").string();
  REQUIRE(run_cli("gen --seed 2 --dim 3 -o " + pair) == 0);
  CHECK(run_cli("verify -i " + pair + " -o " + (d / "rep.json").string()) == 0);
  CHECK(run_cli("verify -i " + pair + " --tol 1 -o " + (d / "rep.json").string()) == 2);
  CHECK(run_cli("verify -i " + (d / "nope.json").string() + " -o " + (d / "rep.json").string()) == 2);
  CHECK(run_cli("verify -o " + (d / "rep.json").string()) == 2);
  CHECK(run_cli("gen --seed 1 --dim 0 -o " + (d / "x.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);

  std::ofstream(d / "neg.json") << R"({"schema":1,"A":{"n":1,"re":[[-1]]},"B":{"n":1,"re":[[1]]}})";
  CHECK(run_cli("verify -i " + (d / "neg.json").string() + " -o " + (d / "rep.json").string()) == 2);
  std::ofstream(d / "garbage.json") << "{not json";
  CHECK(run_cli("verify -i " + (d / "garbage.json").string() + " -o " + (d / "rep.json").string()) == 2);
}

TEST_CASE("CLI: pencil, truncate and probe outputs") {
  const fs::path d = scratch();
  const std::string pair = (d / "pp.json").string();
  REQUIRE(run_cli("gen --seed 4 --dim 2 -o " + pair) == 0);
  REQUIRE(run_cli("pencil -i " + pair + " --from -1 --to 1 --points 5 -o " + (d / "c.csv").string()) == 0);
  const std::string curves = slurp(d / "c.csv");
  CHECK(curves.rfind("gamma,lambda_1,lambda_2\n-1,", 0) == 0);
  CHECK(std::count(curves.begin(), curves.end(), '\n') == 6);
  CHECK(run_cli("pencil -i " + pair + " --from 1 --to -1 -o " + (d / "c.csv").string()) == 2);

  std::ofstream(d / "exp.json") << R"({"law":"power","param":2,"signs":"alt","N":24,"p":1,"seed":2})";
  CHECK(run_cli("truncate --config " + (d / "exp.json").string() + " -o " + (d / "t.csv").string()) == 0);
  std::ofstream(d / "bad_exp.json") << R"({"law":"power","param":0.5,"N":24,"p":1})";
  CHECK(run_cli("truncate --config " + (d / "bad_exp.json").string() + " -o " + (d / "t.csv").string()) == 2);

  const std::string up = (d / "up.json").string();
  REQUIRE(run_cli("gen --seed 4 --dim 3 --unsupported -o " + up) == 0);
  CHECK(run_cli("probe -i " + up + " -o " + (d / "g.csv").string()) == 0);
  CHECK(slurp(d / "g.csv").rfind("t,witness_quadratic_value,norm,tail_bound\n10,", 0) == 0);
  CHECK(run_cli("probe -i " + pair + " -o " + (d / "g.csv").string()) == 2);
  CHECK(run_cli("probe -i " + up + " --checkpoints 10,abc -o " + (d / "g.csv").string()) == 2);
}
