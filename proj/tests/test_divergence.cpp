#include <catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace frenkel;
using Catch::Approx;

TEST_CASE("scalar divergence") {
  const auto one = [](double x) { return HermitianMatrix::diagonal({x}); };
  const DivergenceReport r = delta_operator(one(2.0), one(1.0));
  REQUIRE(r.delta);
  CHECK((*r.delta)(0, 0).real() == Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-15));
  CHECK(r.trace_div == Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-15));
  CHECK(trace_divergence(one(1.0), one(2.0)) == Approx(1.0 - std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("fixed pair matches the reference Delta and D") {
  const DivergenceReport r = delta_operator(fixtures::pair_a(), fixtures::pair_b());
  REQUIRE(r.dichotomy == Dichotomy::Finite);
  CHECK(fixtures::max_abs(r.delta->matrix() - fixtures::delta_reference()) < 1e-13);
  CHECK(std::abs(r.trace_div - fixtures::kTraceDivergence) < 1e-13);
  CHECK(std::abs(trace_divergence(fixtures::pair_a(), fixtures::pair_b()) - fixtures::kTraceDivergence) < 1e-13);
  CHECK(r.residual_trace_consistency < 1e-13);
}

TEST_CASE("Delta vanishes at A = B") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix b = random_pd(1 + trial % 6, rng);
    const DivergenceReport r = delta_operator(b, b);
    CHECK(operator_norm(*r.delta) < 1e-12);
    CHECK(std::abs(r.trace_div) < 1e-12);
  }
  const DivergenceReport z = delta_operator(HermitianMatrix::zero(3), HermitianMatrix::zero(3));
  CHECK(z.dichotomy == Dichotomy::Finite);
  CHECK(z.trace_div == 0.0);
}

TEST_CASE("dichotomy follows range containment") {
  const HermitianMatrix b = HermitianMatrix::diagonal({1.0, 0.0});
  const DivergenceReport fin = delta_operator(HermitianMatrix::diagonal({3.0, 0.0}), b);
  CHECK(fin.dichotomy == Dichotomy::Finite);
  CHECK((*fin.delta)(0, 0).real() == Approx(3.0 * std::log(3.0) - 2.0));
  CHECK(std::abs((*fin.delta)(1, 1)) < 1e-15);

  const DivergenceReport div = delta_operator(HermitianMatrix::diagonal({1.0, 1.0}), b);
  CHECK(div.dichotomy == Dichotomy::Divergent);
  CHECK_FALSE(div.delta);
  CHECK(std::isinf(div.trace_div));
  REQUIRE(div.witness);
  CHECK(std::abs((*div.witness)(1)) == Approx(1.0));
  CHECK(std::isinf(trace_divergence(HermitianMatrix::diagonal({1.0, 1.0}), b)));
}

TEST_CASE("generated pairs: Delta is PSD, trace consistent and zero only at A = B") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorOptions g;
    g.seed = seed;
    g.dim = 1 + static_cast<Index>(seed % 8);
    g.singular_b = seed % 3 == 1 && g.dim >= 2;
    g.commuting = seed % 5 == 0;
    const auto [a, b] = generate_pair(g);
    const DivergenceReport r = delta_operator(a, b);
    REQUIRE(r.dichotomy == Dichotomy::Finite);
    const double scale = std::max(1.0, operator_norm(a) + operator_norm(b));
    CHECK(r.min_eigenvalue >= -1e-12 * scale);
    CHECK(r.residual_trace_consistency <= 1e-12 * scale);
    CHECK(r.trace_div >= -1e-12 * scale);
    CHECK(r.hermiticity_defect <= 1e-10 * scale);
  }
}

TEST_CASE("commuting pairs reduce to scalar divergences") {
  const RealVector da = (RealVector(3) << 0.5, 2.0, 1.0).finished();
  const RealVector db = (RealVector(3) << 1.0, 0.25, 3.0).finished();
  Rng rng(3);
  const Matrix u = random_unitary(3, rng);
  const HermitianMatrix a = HermitianMatrix::diagonal(da).congruence(u);
  const HermitianMatrix b = HermitianMatrix::diagonal(db).congruence(u);
  RealVector ref(3);
  for (int i = 0; i < 3; ++i) ref(i) = da(i) * std::log(da(i) / db(i)) - da(i) + db(i);
  const HermitianMatrix expect = HermitianMatrix::diagonal(ref).congruence(u);
  CHECK(operator_norm(*delta_operator(a, b).delta - expect) < 1e-13);
}

TEST_CASE("unitary covariance") {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + trial % 4;
    const HermitianMatrix a = random_pd(n, rng);
    const HermitianMatrix b = random_pd(n, rng);
    const Matrix u = random_unitary(n, rng);
    const HermitianMatrix lhs = *delta_operator(a.congruence(u), b.congruence(u)).delta;
    const HermitianMatrix rhs = delta_operator(a, b).delta->congruence(u);
    CHECK(operator_norm(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("minimal tau") {
  CHECK(*minimal_tau(HermitianMatrix::diagonal({2.0, 1.0}), HermitianMatrix::identity(2)) == Approx(2.0));
  CHECK(*minimal_tau(fixtures::pair_a(), fixtures::pair_b()) == Approx(fixtures::kRelative[2]).epsilon(1e-13));
  CHECK_FALSE(minimal_tau(HermitianMatrix::identity(2), HermitianMatrix::diagonal({1.0, 0.0})));
}

TEST_CASE("regularization recovers the restricted Delta") {
  GeneratorOptions g;
  g.seed = 4;
  g.dim = 5;
  g.singular_b = true;
  const auto [a, b] = generate_pair(g);
  const RegularizedDelta r = regularized_delta(a, b);
  CHECK(operator_norm(r.extrapolated - *delta_operator(a, b).delta) <= 1e-5);
  CHECK_THROWS_AS(regularized_delta(a, b, 1e-6, 1e-6), InvalidArgument);
}

TEST_CASE("o_gamma is the positive part of A - gamma B") {
  const HermitianMatrix o = o_gamma(HermitianMatrix::diagonal({3.0, 1.0}), HermitianMatrix::identity(2), 2.0);
  CHECK(fixtures::max_abs(o.matrix() - HermitianMatrix::diagonal({1.0, 0.0}).matrix()) < 1e-15);
}
