// Parses a DSL file and runs the property suites that apply to a single
// function, then reports whether it is hypoconvex at the chosen lambda.

#include <fstream>
#include <iostream>
#include <sstream>

#include "levprox/levprox.hpp"

int main(int argc, char** argv) {
  using namespace levprox;
  if (argc < 2) {
    std::cerr << "usage: dsl_check FILE [lambda]\n";
    return 1;
  }
  std::ifstream in(argv[1]);
  if (!in) {
    std::cerr << "cannot read " << argv[1] << "\n";
    return 1;
  }
  std::stringstream src;
  src << in.rdbuf();

  dsl::ParsedFunction parsed;
  try {
    parsed = dsl::parse(src.str());
  } catch (const dsl::DslError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  std::cout << "parsed: " << dsl::render(parsed) << "\n";
  const double lambda = argc > 2 ? std::atof(argv[2]) : std::min(1.0, 0.8 * parsed.lambda_f);
  const auto f = dsl::to_catalog(parsed, argv[1]);

  suites::SuiteOptions opt;
  opt.lambdas = {lambda};
  int failed = 0;
  for (const char* suite : {"identity", "hypomono"}) {
    for (const auto& r : suites::run(suite, {f}, opt)) {
      std::cout << (r.passed ? "pass " : "FAIL ") << r.name << " (lambda " << lambda << ", " << r.probes << " probes)\n";
      failed += r.passed ? 0 : 1;
    }
  }
  auto h = check_hypoconvex(f, lambda, GridSpec{-5.0, 5.0, 1e-2});
  std::cout << "f + x^2/(2 lambda) is " << (h.passed ? "" : "not ") << "convex on [-5, 5]\n";
  return failed == 0 ? 0 : 4;
}
