#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levprox/core.hpp"
#include "levprox/json_io.hpp"
#include "oracles.hpp"

using namespace levprox;

TEST(Interval, RejectsMalformed) {
  EXPECT_THROW(Interval::make(1.0, 0.0, true, true), InvalidArgument);
  EXPECT_THROW(Interval::make(std::nan(""), 0.0, true, true), InvalidArgument);
  EXPECT_THROW(Interval::make(1.0, 1.0, false, true), InvalidArgument);
  EXPECT_THROW(Interval::make(kInf, kInf, false, false), InvalidArgument);
}

TEST(Interval, InfiniteEndpointsAreOpen) {
  Interval iv = Interval::make(-kInf, 2.0, true, true);
  EXPECT_FALSE(iv.lo_closed);
  EXPECT_TRUE(iv.hi_closed);
}

TEST(IntervalSet, NormalizesOverlapsAndTouchingEnds) {
  IntervalSet s{Interval::closed(2.0, 3.0), Interval::closed(0.0, 1.0), Interval::make(1.0, 2.0, false, false)};
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.min(), 0.0);
  EXPECT_EQ(s.max(), 3.0);

  // (0,1) and (1,2) share an endpoint that neither contains.
  IntervalSet gap{Interval::make(0.0, 1.0, false, false), Interval::make(1.0, 2.0, false, false)};
  EXPECT_EQ(gap.size(), 2u);
  EXPECT_FALSE(gap.contains(1.0));
}

TEST(IntervalSet, UnionIntersectionComplement) {
  IntervalSet a = IntervalSet::closed(0.0, 2.0);
  IntervalSet b = IntervalSet::closed(1.0, 3.0);
  EXPECT_EQ(a.unite(b), IntervalSet::closed(0.0, 3.0));
  EXPECT_EQ(a.intersect(b), IntervalSet::closed(1.0, 2.0));

  IntervalSet c = a.complement();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c.contains(0.0));
  EXPECT_TRUE(c.contains(-1e-12));
  EXPECT_EQ(c.complement(), a);
  EXPECT_TRUE(IntervalSet{}.complement() == IntervalSet::real_line());
}

TEST(IntervalSet, MinkowskiSumAndTranslate) {
  IntervalSet pm = IntervalSet::points({-1.0, 1.0});
  IntervalSet s = pm.minkowski_sum(IntervalSet::closed(0.0, 0.5));
  EXPECT_EQ(s, IntervalSet({Interval::closed(-1.0, -0.5), Interval::closed(1.0, 1.5)}));
  EXPECT_EQ(pm.translate(2.0), IntervalSet::points({1.0, 3.0}));
}

TEST(Hausdorff, KnownValues) {
  EXPECT_EQ(hausdorff_distance(IntervalSet{}, IntervalSet{}).value(), 0.0);
  EXPECT_TRUE(hausdorff_distance(IntervalSet{}, IntervalSet::point(0.0)).is_pos_inf());
  EXPECT_DOUBLE_EQ(hausdorff_distance(IntervalSet::point(0.0), IntervalSet::points({0.0, 2.0})).value(), 2.0);
  // An interval bridging a gap: the gap midpoint is the farthest point.
  EXPECT_DOUBLE_EQ(hausdorff_distance(IntervalSet::closed(0.0, 4.0), IntervalSet::points({0.0, 4.0})).value(), 2.0);
  EXPECT_TRUE(hausdorff_distance(IntervalSet::at_least(0.0), IntervalSet::closed(0.0, 1.0)).is_pos_inf());
  EXPECT_EQ(hausdorff_distance(IntervalSet::at_least(0.0), IntervalSet::at_least(0.5)).value(), 0.5);
}

// Random finite unions of points compared with the brute-force endpoint formula.
TEST(Hausdorff, AgreesWithBruteForceOnPointSets) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(1 + trial % 4), b(1 + (trial / 4) % 4);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    IntervalSet sa = IntervalSet::points(a);
    IntervalSet sb = IntervalSet::points(b);
    EXPECT_NEAR(hausdorff_distance(sa, sb).value(), oracle::hausdorff_endpoints(sa, sb), 1e-12);
  }
}

TEST(Subset, RespectsOpenEndpointsAndSlack) {
  IntervalSet open{Interval::make(0.0, 1.0, false, false)};
  EXPECT_TRUE(is_subset(open, IntervalSet::closed(0.0, 1.0)));
  EXPECT_FALSE(is_subset(IntervalSet::closed(0.0, 1.0), open));
  EXPECT_TRUE(is_subset(IntervalSet::closed(0.0, 1.0), open, 1e-9));
  EXPECT_TRUE(is_subset(IntervalSet{}, IntervalSet{}));
}

TEST(Lattice, HitsDecimalsExactly) {
  Lattice lat(1e-3);
  auto pts = lat.points(1.985, 2.015);
  EXPECT_NE(std::find(pts.begin(), pts.end(), 1.99), pts.end());
  EXPECT_NE(std::find(pts.begin(), pts.end(), 2.0), pts.end());
  EXPECT_NE(std::find(pts.begin(), pts.end(), 2.01), pts.end());
  EXPECT_EQ(pts.size(), 31u);
}

TEST(GridSpec, ValidatesSizeCap) {
  GridSpec g{-5.0, 5.0, 1e-3};
  EXPECT_NO_THROW(g.validate());
  EXPECT_THROW(g.validate(100), InvalidArgument);
  EXPECT_THROW((GridSpec{1.0, 0.0, 1e-3}.validate()), InvalidArgument);
  EXPECT_THROW((GridSpec{0.0, 1.0, 0.0}.validate()), InvalidArgument);
}

TEST(Tolerances, SetToleranceFollowsStep) {
  Tolerances t;
  EXPECT_EQ(t.set_tolerance(1e-3), 2e-3);
  EXPECT_EQ(t.set_tolerance(1e-4), 1e-3);
}

TEST(OperatorGraph, FromPairsMergesAndSorts) {
  auto g = OperatorGraph1D::from_pairs({{1.0, IntervalSet::point(0.0)}, {0.0, IntervalSet::point(1.0)},
                                        {1.0, IntervalSet::point(2.0)}});
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.samples()[1].value, IntervalSet::points({0.0, 2.0}));
  ASSERT_NE(g.find(1.0), nullptr);
  EXPECT_EQ(g.find(0.5), nullptr);
  OperatorGraph1D h;
  h.push_back(0.0, {});
  EXPECT_THROW(h.push_back(0.0, {}), InvalidArgument);
}

TEST(ClusterPoints, CollapsesNarrowRunsAndKeepsWideOnes) {
  const double step = 1e-3;
  std::vector<double> pts = {0.0, 0.001, 0.002, 1.0, 1.001, 1.002, 1.003, 1.004, 1.005};
  IntervalSet s = cluster_points(pts, {}, step);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.intervals()[0].is_point());
  EXPECT_NEAR(s.intervals()[0].lo, 0.001, 1e-15);
  EXPECT_EQ(s.intervals()[1], Interval::closed(1.0, 1.005));
}

TEST(Json, RoundTripsExtendedEndpoints) {
  IntervalSet s{Interval::make(-kInf, -1.0, false, true), Interval::make(0.0, 2.0, false, true), Interval::point(5.0)};
  json j = to_json(s);
  EXPECT_EQ(j["intervals"][0]["lo"], "-inf");
  EXPECT_EQ(intervalset_from_json(j), s);
}
