#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "levprox/catalog.hpp"
#include "levprox/dsl.hpp"
#include "levprox/prox_engine.hpp"
#include "dsl_fuzz.hpp"

using namespace levprox;

namespace {

const char* kStep = "piece x <= 0: 0; piece x > 0: 1";
const char* kZeroNorm = "piece x != 0: 1; at 0: 0";
const char* kIndicator = "domain x == -1 or x == 1; piece true: 0";

std::vector<std::pair<std::string, std::string>> renditions() {
  return {{"zero-norm", kZeroNorm},          {"step", kStep},
          {"indicator-pm1", kIndicator},         {"abs", "piece true: abs(x)"},
          {"quad", "piece true: x^2 / 2"},   {"neg-norm", "piece true: -abs(x)"}};
}

// Includes the breakpoints 0 and +-1 exactly.
std::vector<double> grid_10k() {
  std::vector<double> xs;
  for (int i = -5000; i < 5000; ++i) xs.push_back(i / 1000.0);
  return xs;
}

}  // namespace

TEST(DslParse, StepExample) {
  auto f = dsl::parse(kStep);
  EXPECT_EQ(f(-3.0), 0.0);
  EXPECT_EQ(f(1.0), 1.0);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_TRUE(f.lsc_certified);
}

TEST(DslParse, ZeroNormOverride) {
  auto f = dsl::parse(kZeroNorm);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f(1e-12), 1.0);
}

TEST(DslParse, AbsPiece) { EXPECT_EQ(dsl::parse("piece true: abs(x)")(-2.0), 2.0); }

TEST(DslParse, MalformedGuardReportsColumn) {
  try {
    dsl::parse("piece x <: 1");
    FAIL() << "expected SyntaxError";
  } catch (const dsl::SyntaxError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 11);
    ASSERT_FALSE(e.expected().empty());
    EXPECT_NE(std::string(e.what()).find("expected"), std::string::npos);
  }
}

TEST(DslParse, Diagnostics) {
  EXPECT_THROW(dsl::parse("piece x < 0: 0"), dsl::DomainError);
  EXPECT_THROW(dsl::parse("piece x < 0: 0; piece x >= 0: 1"), dsl::LscWarning);
  EXPECT_THROW(dsl::parse("piece true: 1 / x"), dsl::DomainError);
  EXPECT_THROW(dsl::parse("piece true: -x^3"), dsl::DomainError);
  EXPECT_THROW(dsl::parse("piece true: x +"), dsl::SyntaxError);
  EXPECT_THROW(dsl::parse(""), dsl::DomainError);
  try {
    dsl::parse("piece true: 0\npiece x > 1 1");
    FAIL();
  } catch (const dsl::SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(DslParse, AllowNonLsc) {
  auto f = dsl::parse("piece x < 0: 0; piece x >= 0: 1", {.allow_non_lsc = true});
  EXPECT_FALSE(f.lsc_certified);
  EXPECT_EQ(f.warnings.size(), 1u);
}

TEST(DslParse, MinimumOnOverlap) {
  auto f = dsl::parse("piece x <= 1: 5; piece x >= 0: x");
  EXPECT_EQ(f(-1.0), 5.0);
  EXPECT_EQ(f(0.5), 0.5);
  EXPECT_EQ(f(3.0), 3.0);
}

TEST(DslParse, IndicatorIsInfiniteOffDomain) {
  auto f = dsl::parse(kIndicator);
  EXPECT_EQ(f(1.0), 0.0);
  EXPECT_EQ(f(-1.0), 0.0);
  EXPECT_EQ(f(0.0), kInf);
}

TEST(DslParse, GrowthAndThreshold) {
  EXPECT_DOUBLE_EQ(dsl::parse("piece true: -2*x^2").lambda_f, 0.25);
  auto g = dsl::parse("piece true: -abs(x) + 3").growth;
  ASSERT_TRUE(g);
  EXPECT_EQ(g->b, 1.0);
}

TEST(DslRender, RoundTripAt101Probes) {
  std::vector<std::string> sources = {kStep,
                                      kZeroNorm,
                                      kIndicator,
                                      "piece -1 <= x <= 1: abs(x); piece x < -1 or x > 1: 1",
                                      "piece true: max(x, 0) * 2 - min(x^2, 3) / 4 + 0.1",
                                      "piece x > 2: (x - 2)^2; piece x <= 2: 0"};
  for (const auto& src : sources) {
    auto f = dsl::parse(src);
    std::string text = dsl::render(f);
    auto g = dsl::parse(text);
    for (int i = 0; i <= 100; ++i) {
      const double x = -5.0 + i * 0.1;
      EXPECT_EQ(f(x), g(x)) << src << " | " << text << " x=" << x;
    }
    EXPECT_EQ(dsl::render(g), text);
  }
}

TEST(DslCatalog, ExactAgreementOn10kGrid) {
  const auto xs = grid_10k();
  for (const auto& [id, src] : renditions()) {
    auto f = dsl::parse(src);
    auto c = catalog::find(id);
    ASSERT_TRUE(c) << id;
    for (double x : xs) ASSERT_EQ(f(x), c->eval(x)) << id << " x=" << x;
  }
}

TEST(DslCatalog, ProxMatchesClosedForm) {
  for (const auto& [id, src] : renditions()) {
    auto c = *catalog::find(id);
    auto d = dsl::to_catalog(dsl::parse(src), id);
    EXPECT_FALSE(d.closed_prox);
    for (int i = 0; i <= 20; ++i) {
      const double x = -3.0 + 0.3 * i;
      IntervalSet got = prox(d, 1.0, x);
      IntervalSet want = c.closed_prox(1.0, x);
      EXPECT_LE(hausdorff_distance(got, want).value(), 2e-3) << id << " x=" << x << " " << got;
    }
  }
}

TEST(DslFuzz, NeverCrashes) {
  auto t = fuzz::run_dsl_fuzz(10000, 20240611);
  EXPECT_EQ(t.parsed + t.rejected, 10000);
  EXPECT_GT(t.parsed, 0);
  EXPECT_GT(t.rejected, 0);
}
