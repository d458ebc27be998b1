#include <gtest/gtest.h>

#include <cmath>

#include "levprox/catalog.hpp"
#include "levprox/properties.hpp"
#include "levprox/suites.hpp"

using namespace levprox;

namespace {

OperatorGraph1D graph(std::vector<std::pair<double, IntervalSet>> pairs) {
  std::vector<GraphSample> s;
  for (auto& [x, v] : pairs) s.push_back({x, v});
  return OperatorGraph1D::from_pairs(std::move(s));
}

// The closed-form graph of the level proximal subdifferential of the zero
// "norm" at the two boundary points and a few others.
OperatorGraph1D zero_norm_levprox_graph(double lambda) {
  const double t = std::sqrt(2.0 * lambda);
  const double r = std::sqrt(2.0 / lambda);
  return graph({{-2.0 * t, IntervalSet::point(0.0)},
                {-t, IntervalSet::point(0.0)},
                {0.0, IntervalSet::points({-r, r})},
                {t, IntervalSet::point(0.0)},
                {2.0 * t, IntervalSet::point(0.0)}});
}

}  // namespace

TEST(Monotone, HardThresholdGraphPasses) {
  auto g = prox_graph(catalog::zero_norm(), 1.0, GridSpec{-3.0, 3.0, 0.01});
  EXPECT_TRUE(check_monotone(g).passed);
}

TEST(Monotone, LimitingSubdiffOfZeroNormFails) {
  const double M = 3.0;
  auto g = graph({{0.0, IntervalSet::points({-M, M})}, {1.0, IntervalSet::point(0.0)}});
  auto r = check_monotone(g);
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  // (0 - 1)(M - 0) = -M.
  EXPECT_DOUBLE_EQ(r.witness->margin, -M);
}

TEST(Monotone, ConstantGraphPasses) {
  std::vector<std::pair<double, IntervalSet>> p;
  for (int i = -10; i <= 10; ++i) p.push_back({i * 0.3, IntervalSet::point(2.5)});
  EXPECT_TRUE(check_monotone(graph(p)).passed);
}

TEST(Hypomonotone, ZeroNormBoundaryPairHasZeroMargin) {
  // (0, sqrt(2/lambda)) against (sqrt(2 lambda), 0): product -2 = -(1/lambda) * 2 lambda.
  for (double lambda : {0.5, 1.0, 2.0}) {
    auto r = check_hypomonotone(zero_norm_levprox_graph(lambda), 1.0 / lambda);
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.margin, 0.0, 1e-9);
  }
}

TEST(Hypomonotone, SmallerModulusFailsAtBoundaryPair) {
  const double lambda = 1.0;
  auto r = check_hypomonotone(zero_norm_levprox_graph(lambda), 1.0 / (4.0 * lambda));
  ASSERT_FALSE(r.passed);
  // Worst pair is (0, sqrt(2/lambda)) against (2 sqrt(2 lambda), 0):
  // -4 + (1/(4 lambda)) * 8 lambda = -2.
  EXPECT_NEAR(r.margin, -2.0, 1e-12);
  ASSERT_TRUE(r.witness);
}

TEST(Hypomonotone, MonotoneGraphPassesForAnyRho) {
  auto g = prox_graph(catalog::abs(), 1.0, GridSpec{-3.0, 3.0, 0.05});
  for (double rho : {0.0, 0.5, 10.0}) EXPECT_TRUE(check_hypomonotone(g, rho).passed);
}

TEST(Hypomonotone, LargeGraphUsesSeededPairs) {
  auto g = prox_graph(catalog::neg_norm_1d(), 1.0, GridSpec{-5.0, 5.0, 0.01});
  auto t = graph_transform_T(g, 1.0);
  auto a = check_hypomonotone(t, 1.0, 1e-9, 1);
  auto b = check_hypomonotone(t, 1.0, 1e-9, 1);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.margin, b.margin);
  EXPECT_EQ(a.probes, b.probes);
}

TEST(Hypoconvex, QuadAlwaysPasses) {
  for (double lambda : {0.1, 1.0, 10.0}) EXPECT_TRUE(check_hypoconvex(catalog::quad(), lambda, GridSpec{-5, 5, 1e-2}).passed);
}

TEST(Hypoconvex, NegQuadThreshold) {
  EXPECT_TRUE(check_hypoconvex(catalog::neg_quad(2.0), 0.4, GridSpec{-5, 5, 1e-2}).passed);
  EXPECT_FALSE(check_hypoconvex(catalog::neg_quad(2.0), 0.6, GridSpec{-5, 5, 1e-2}).passed);
}

TEST(Hypoconvex, ZeroNormFailsWithSmallTriple) {
  const double lambda = 1.0;
  auto r = check_hypoconvex(catalog::zero_norm(), lambda, GridSpec{-5, 5, 1e-2});
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.witness);
  // The triple (0, t, t/2) violates midpoint convexity iff t^2 < 4 lambda.
  const auto& p = r.witness->points;
  ASSERT_EQ(p.size(), 3u);
  const bool has_zero = p[0] == 0.0 || p[1] == 0.0;
  EXPECT_TRUE(has_zero);
  const double t = std::abs(p[0] == 0.0 ? p[1] : p[0]);
  EXPECT_LT(t * t, 4.0 * lambda);
}

TEST(Hypoconvex, NegNormOnHalfLineSubset) {
  // -|x| + x^2/(2 lambda) is convex on [lambda, 2 lambda].
  const double lambda = 1.0;
  EXPECT_TRUE(check_hypoconvex(catalog::neg_norm_1d(), lambda, GridSpec{lambda, 2.0 * lambda, 1e-3}).passed);
  EXPECT_FALSE(check_hypoconvex(catalog::neg_norm_1d(), lambda, GridSpec{-1.0, 1.0, 1e-3}).passed);
}

TEST(WeakCvxEquivalence, ConvexCase) {
  auto r = check_weakcvx_equivalence(catalog::quad(), 1.0, GridSpec{-5, 5, 1e-3});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.sides, std::make_pair(true, true));
}

TEST(WeakCvxEquivalence, ZeroNormBothSidesFalse) {
  auto r = check_weakcvx_equivalence(catalog::zero_norm(), 2.0, GridSpec{-5, 5, 1e-3});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.sides, std::make_pair(false, false));
}

TEST(WeakCvxEquivalence, NegQuadHypoconvexCase) {
  auto r = check_weakcvx_equivalence(catalog::neg_quad(2.0), 0.4, GridSpec{-5, 5, 1e-3});
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.sides, std::make_pair(true, true));
}

TEST(SubdiffRelations, SpecCases) {
  std::vector<double> probes;
  for (int i = -12; i <= 12; ++i) probes.push_back(i / 4.0);
  auto abs_r = check_subdiff_relations(catalog::abs(), 1.0, probes);
  EXPECT_TRUE(abs_r.passed);
  EXPECT_EQ(abs_r.sides, std::make_pair(true, true));

  auto zn = check_subdiff_relations(catalog::zero_norm(), 1.0, probes);
  EXPECT_TRUE(zn.passed);
  EXPECT_EQ(zn.sides, std::make_pair(false, false));

  auto nn = check_subdiff_relations(catalog::neg_norm_1d(), 1.0, probes, {}, 1e-3, SubdiffVariant::Proximal);
  EXPECT_TRUE(nn.passed);
  EXPECT_EQ(nn.sides, std::make_pair(false, false));
}

TEST(SumRule, AbsPlusQuadEqualityAtZero) {
  auto r = check_sum_rule(catalog::abs(), catalog::quad(), 1.0, 1.0, 0.0);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.details["weak"].get<bool>());
  EXPECT_TRUE(r.details["equality"].get<bool>());
  IntervalSet rhs = intervalset_from_json(r.details["rhs"]);
  EXPECT_LE(hausdorff_distance(rhs, IntervalSet::closed(-1.0, 1.0)).value(), 1e-3) << rhs;
  EXPECT_DOUBLE_EQ(r.details["lambda3"].get<double>(), 0.5);
}

TEST(SumRule, EmptyLeftSideIsVacuous) {
  // dP_1 zero_norm(0.5) is empty since 0.5 < sqrt(2).
  auto r = check_sum_rule(catalog::zero_norm(), catalog::quad(), 1.0, 1.0, 0.5);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(intervalset_from_json(r.details["lhs"]).empty());
}

TEST(SumRule, GenericCallables) {
  auto f = [](double y) { return std::abs(y - 1.0); };
  auto g = [](double y) { return 0.25 * y * y; };
  for (int i = -10; i <= 10; ++i) EXPECT_TRUE(check_sum_rule(f, g, 1.0, 2.0, i / 4.0).passed) << i;
}

TEST(Nesting, ZeroNormLadder) {
  auto ladder = suites::nesting_ladder();
  auto r = check_nesting_and_intersection(catalog::zero_norm(), 0.0, ladder, 1.2e-2);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.details["strictly_nested"].get<bool>());
  const auto& sets = r.details["sets"];
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    IntervalSet s = intervalset_from_json(sets[k]["set"]);
    EXPECT_NEAR(s.max(), std::sqrt(2.0 / ladder[k]), 1e-3);
  }
}

TEST(Nesting, AbsIsConstant) {
  auto r = check_nesting_and_intersection(catalog::abs(), 0.0, std::vector<double>{1, 2, 4, 8}, 1e-3);
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.details["strictly_nested"].get<bool>());
}

TEST(Nesting, StepShrinksToZero) {
  auto r = check_nesting_and_intersection(catalog::step(), 0.0, suites::nesting_ladder(), 1.2e-2);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.details["strictly_nested"].get<bool>());
}

TEST(Nesting, RejectsNonIncreasingLadder) {
  EXPECT_THROW(check_nesting_and_intersection(catalog::abs(), 0.0, std::vector<double>{2, 1}, 1e-3), InvalidArgument);
}

TEST(Reports, JsonShape) {
  auto r = check_weakcvx_equivalence(catalog::zero_norm(), 2.0, GridSpec{-5, 5, 1e-3});
  json j = to_json(r);
  EXPECT_EQ(j["name"], "weakcvx-equivalence");
  EXPECT_EQ(j["sides"]["L"], false);
  EXPECT_EQ(j["sides"]["R"], false);
  EXPECT_TRUE(j.contains("margins"));
  EXPECT_TRUE(j.contains("probes"));
}

TEST(Suites, UnknownNameThrows) { EXPECT_THROW(suites::run("bogus", catalog::list(), {}), InvalidArgument); }

TEST(Suites, NearCriticalBand) {
  EXPECT_TRUE(suites::near_critical(catalog::neg_quad(2.0), 0.49));
  EXPECT_FALSE(suites::near_critical(catalog::neg_quad(2.0), 0.4));
  EXPECT_EQ(suites::admissible(catalog::neg_quad(2.0), {0.25, 1.0, 2.0}), std::vector<double>{0.25});
}
