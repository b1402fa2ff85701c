// Delta(A||B) by the spectral route and by both integral forms for a seeded pair.

#include <cstdio>

#include "frenkel/divergence.hpp"
#include "frenkel/integral_forms.hpp"
#include "frenkel/random.hpp"

int main() {
  using namespace frenkel;
  GeneratorOptions g;
  g.seed = 7;
  g.dim = 4;
  const auto [a, b] = generate_pair(g);

  const DivergenceReport d = delta_operator(a, b);
  const FrgResult f1 = rhs_frg1(a, b);
  const FrgResult f = rhs_frg(a, b);
  std::printf("D(A||B)                 = %.12f\n", d.trace_div);
  std::printf("trace formula           = %.12f\n", frenkel_trace(a, b));
  std::printf("||gamma-form - Delta||  = %.3e  (%zu evaluations)\n", operator_norm(f1.total.value - *d.delta),
              f1.total.evaluations);
  std::printf("||t-form - gamma-form|| = %.3e\n", operator_norm(f.total.value - f1.total.value));

  g.unsupported = true;
  const auto [a2, b2] = generate_pair(g);
  const double cps[] = {10.0, 100.0, 1000.0, 10000.0};
  const DivergenceProbe p = divergence_probe(a2, b2, cps);
  std::printf("unsupported pair: D = %g, growth slope %.4f vs x*Ax = %.4f\n", trace_divergence(a2, b2), *p.slope,
              p.witness_quadratic);
}
