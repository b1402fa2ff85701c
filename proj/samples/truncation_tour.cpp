// Truncation series and budgets for a rotated power-law model.

#include <cstdio>

#include "frenkel/truncation.hpp"

int main() {
  using namespace frenkel;
  CompactModel m;
  m.master_dim = 64;
  m.law = EigenLaw::Power;
  m.param = 1.5;
  m.signs = SignPattern::Alternating;
  m.rotation_seed = 11;
  const HermitianMatrix t = synth_compact(m);
  const double ps[] = {1.0, 2.0, 4.0, kInf};
  const TruncationSeries s = truncation_series(t, ps);
  std::printf("interlacing violations %zu, monotone violations %zu/%zu, final gap %.2e\n", s.interlacing_violations,
              s.plus_monotone_violations, s.minus_monotone_violations, s.final_gap);
  for (std::size_t j = 0; j < s.ps.size(); ++j)
    std::printf("p=%-4g ||T_{N,+}||_p = %.6f  ||T_+||_p = %.6f\n", s.ps[j], s.records.back().plus_norm[j],
                s.master_plus_norm[j]);

  CompactModel am = m, bm = m;
  am.signs = bm.signs = SignPattern::Positive;
  bm.param = 1.0;
  bm.p = 2.0;
  bm.rotation_seed = 12;
  const BudgetResult e = budget_e_p(synth_compact(am), synth_compact(bm), ps, 1e-7);
  for (std::size_t j = 0; j < e.ps.size(); ++j) std::printf("e_%g = %.8f\n", e.ps[j], e.values[j]);
}
