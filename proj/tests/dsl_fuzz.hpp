#pragma once

#include <random>
#include <string>
#include <vector>

#include "levprox/dsl.hpp"

namespace fuzz {

struct Tally {
  int parsed = 0;
  int rejected = 0;
};

// Random token soup on even rounds, random edits of valid sources on odd
// rounds. Anything other than a parse or a DslError escapes to the caller.
inline Tally run_dsl_fuzz(int rounds, std::uint64_t seed) {
  const std::vector<std::string> atoms = {"piece", "at",  "domain", "x",   "true", "false", "inf", "and", "or",
                                          "abs",   "min", "max",    "(",   ")",    ",",     ":",   ";",   "\n",
                                          "<",     "<=",  ">",      ">=",  "==",   "!=",    "+",   "-",   "*",
                                          "/",     "^",   "0",      "1",   "2.5",  "1e308", "-1",  "#c",  "?"};
  const std::vector<std::string> seeds = {"piece x <= 0: 0; piece x > 0: 1", "piece x != 0: 1; at 0: 0",
                                          "domain x == -1 or x == 1; piece true: 0", "piece true: x^2 / 2",
                                          "piece -1 <= x <= 1: abs(x); piece x < -1 or x > 1: 1"};
  std::mt19937_64 rng(seed);
  Tally t;
  for (int n = 0; n < rounds; ++n) {
    std::string src;
    if (n % 2 == 0) {
      const int len = static_cast<int>(rng() % 12);
      for (int k = 0; k < len; ++k) src += atoms[rng() % atoms.size()] + " ";
    } else {
      src = seeds[rng() % seeds.size()];
      const int edits = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < edits && !src.empty(); ++k) {
        const std::size_t pos = rng() % src.size();
        switch (rng() % 3) {
          case 0: src.erase(pos, 1); break;
          case 1: src.insert(pos, atoms[rng() % atoms.size()]); break;
          default: src[pos] = static_cast<char>(rng() % 128);
        }
      }
    }
    try {
      auto f = levprox::dsl::parse(src);
      (void)f(0.0);
      (void)f(1.5);
      ++t.parsed;
    } catch (const levprox::dsl::DslError&) {
      ++t.rejected;
    }
  }
  return t;
}

}  // namespace fuzz
