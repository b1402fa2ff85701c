// Eigenvalue branches of the pencil A + zB with A = [[0,1,0],[1,0,0],[0,0,0]]
// and B = [[0,0,1],[0,0,0],[1,0,0]], written as CSV to stdout.

#include <iostream>
#include <vector>

#include "frenkel/pencil.hpp"

int main() {
  using namespace frenkel;
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  Matrix b = Matrix::Zero(3, 3);
  b(0, 2) = b(2, 0) = 1.0;
  const HermitianMatrix ha(a);
  const HermitianMatrix minus_b(-b);  // A + zB = A - z(-B)

  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(-2.0 + 0.1 * i);
  write_eigencurves_csv(std::cout, grid, eigencurves(ha, minus_b, grid));
  std::cerr << "real crossings on [-10, 10]: " << find_crossings(ha, minus_b, -10.0, 10.0).crossings.size() << "\n";
}
