// Prox and level proximal subdifferential of the zero "norm" around the
// hard-thresholding boundary sqrt(2 lambda).

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "levprox/levprox.hpp"

int main(int argc, char** argv) {
  using namespace levprox;
  const double lambda = argc > 1 ? std::atof(argv[1]) : 2.0;
  const auto f = catalog::zero_norm();
  const double t = std::sqrt(2.0 * lambda);

  std::printf("lambda = %g, threshold = %g\n\n", lambda, t);
  std::printf("%10s  %-20s %-20s\n", "x", "prox (grid)", "prox (closed)");
  for (double x : {0.0, 0.5 * t, t - 0.01, t, t + 0.01, 2.0 * t}) {
    std::ostringstream grid;
    grid << prox_brute(f, lambda, x).argmin;
    std::cout << std::setw(10) << x << "  " << std::setw(20) << std::left << grid.str() << " " << std::right
              << f.closed_prox(lambda, x) << "\n";
  }

  std::printf("\nlevel proximal subdifferential at 0 by lambda:\n");
  for (double l : {0.5, 1.0, 2.0, 8.0}) std::cout << "  " << l << ": " << levprox_interval(f, l, 0.0) << "\n";

  // The resolvent of the subdifferential reproduces prox at the boundary.
  std::cout << "\nresolvent at the boundary: " << level_proximal_resolvent(f, lambda, t) << "\n";
  return 0;
}
