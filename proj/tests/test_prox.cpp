#include <gtest/gtest.h>

#include <cmath>

#include "levprox/catalog.hpp"
#include "levprox/prox_engine.hpp"
#include "oracles.hpp"

using namespace levprox;

TEST(ProxBrute, HardThresholdAroundBoundary) {
  auto f = catalog::zero_norm();
  EXPECT_EQ(prox_brute(f, 2.0, 1.99).argmin, IntervalSet::point(0.0));
  EXPECT_EQ(prox_brute(f, 2.0, 2.0).argmin, IntervalSet::points({0.0, 2.0}));
  EXPECT_EQ(prox_brute(f, 2.0, 2.01).argmin, IntervalSet::point(2.01));
}

TEST(ProxBrute, StepBelowThreshold) {
  IntervalSet p = prox_brute(catalog::step(), 2.0, 1.0).argmin;
  ASSERT_EQ(p.size(), 1u);
  EXPECT_LE(hausdorff_distance(p, IntervalSet::point(0.0)).value(), 1e-3) << p;
}

TEST(ProxBrute, QuadMinimizer) {
  // d/dy [y^2/2 + (y - 2)^2/2] = 0 at y = 1.
  IntervalSet p = prox_brute(catalog::quad(), 1.0, 2.0).argmin;
  EXPECT_LE(hausdorff_distance(p, IntervalSet::point(1.0)).value(), 1e-3);
}

TEST(ProxBrute, IndicatorSignAndTie) {
  auto f = catalog::indicator_pm1();
  EXPECT_EQ(prox_brute(f, 1.0, 0.0).argmin, IntervalSet::points({-1.0, 1.0}));
  EXPECT_EQ(prox_brute(f, 1.0, 0.3).argmin, IntervalSet::point(1.0));
}

TEST(ProxBrute, ZeroIsIdentity) {
  IntervalSet p = prox_brute(catalog::zero(), 5.0, -7.0).argmin;
  EXPECT_LE(hausdorff_distance(p, IntervalSet::point(-7.0)).value(), 1e-3) << p;
}

TEST(ProxBrute, AgreesWithDirectScanAcrossCatalog) {
  for (const auto& f : catalog::list()) {
    for (double lambda : {0.25, 1.0, 2.0}) {
      if (!(lambda < f.lambda_f)) continue;
      for (int i = -40; i <= 40; i += 3) {
        const double x = i / 8.0;
        IntervalSet got = prox_brute(f, lambda, x).argmin;
        IntervalSet ref = oracle::prox_scan(f.eval, lambda, x, x - 30.0, x + 30.0, 1e-3);
        EXPECT_LE(hausdorff_distance(got, ref).value(), 2e-3) << f.id << " lambda=" << lambda << " x=" << x;
      }
    }
  }
}

TEST(ProxBrute, ExplicitGridDoesNotExpand) {
  // x = 3 with the window [-1, 1]: the minimizer is clipped to the edge.
  IntervalSet p = prox_brute(catalog::zero(), 1.0, 3.0, GridSpec{-1.0, 1.0, 1e-3}).argmin;
  EXPECT_LE(hausdorff_distance(p, IntervalSet::point(1.0)).value(), 1e-3) << p;
}

TEST(ProxBrute, CertificateWithinGap) {
  auto r = prox_brute(catalog::abs(), 1.0, 0.5);
  ASSERT_FALSE(r.certificate.empty());
  for (double y : r.certificate) {
    double obj = std::abs(y) + (y - 0.5) * (y - 0.5) / 2.0;
    EXPECT_LE(obj, r.optimal_value + r.gap + 1e-15);
  }
  EXPECT_LE(r.window_lo, -0.5);
  EXPECT_GE(r.window_hi, 1.5);
}

TEST(ProxBrute, ThrowsUnboundedAboveThreshold) {
  EXPECT_THROW(prox_brute(catalog::neg_quad(2.0), 1.0, 0.0), Unbounded);
  // At the threshold the objective -2y + 1 is linear for x = 1.
  EXPECT_THROW(prox_brute(catalog::neg_quad(2.0), 0.5, 1.0, 1e-2), Unbounded);
  EXPECT_NO_THROW(prox_brute(catalog::neg_quad(2.0), 0.25, 1.0));
}

TEST(ProxBrute, RejectsBadInput) {
  EXPECT_THROW(prox_brute(catalog::abs(), 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(prox_brute(catalog::abs(), 1.0, kInf), InvalidArgument);
}

TEST(Envelope, KnownValues) {
  // Objective value at the closed-form minimizer.
  EXPECT_NEAR(moreau_envelope_brute(catalog::zero_norm(), 2.0, 1.0), 0.25, 1e-12);
  EXPECT_NEAR(moreau_envelope_brute(catalog::zero(), 3.0, 3.0), 0.0, 1e-12);
  EXPECT_NEAR(moreau_envelope_brute(catalog::neg_norm_1d(), 1.0, 2.0), -2.5, 1e-9);
  // Huber function of abs: x^2/(2 lambda) inside, |x| - lambda/2 outside.
  EXPECT_NEAR(moreau_envelope_brute(catalog::abs(), 1.0, 0.5), 0.125, 1e-9);
  EXPECT_NEAR(moreau_envelope_brute(catalog::abs(), 1.0, 3.0), 2.5, 1e-9);
}

TEST(ProxDispatch, UsesClosedFormsAndChecksThreshold) {
  EXPECT_EQ(prox(catalog::zero_norm(), 2.0, 2.0), IntervalSet::points({0.0, 2.0}));
  EXPECT_THROW(prox(catalog::neg_quad(2.0), 0.5, 0.0), Unbounded);
}

TEST(ProxGraph, HardThresholdGraph) {
  auto g = prox_graph(catalog::zero_norm(), 0.5, GridSpec{-2.0, 2.0, 1.0});
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.samples()[0].value, IntervalSet::point(-2.0));
  EXPECT_EQ(g.samples()[1].value, IntervalSet::points({-1.0, 0.0}));
  EXPECT_EQ(g.samples()[2].value, IntervalSet::point(0.0));
  EXPECT_EQ(g.samples()[3].value, IntervalSet::points({0.0, 1.0}));
  EXPECT_EQ(g.samples()[4].value, IntervalSet::point(2.0));

  auto b = prox_graph_brute(catalog::zero_norm(), 0.5, GridSpec{-2.0, 2.0, 1.0});
  EXPECT_EQ(b, g);
}

TEST(ProxGraph, ZeroIsIdentity) {
  auto g = prox_graph(catalog::zero(), 1.0, GridSpec{-1.0, 1.0, 0.5});
  for (const auto& s : g.samples()) EXPECT_EQ(s.value, IntervalSet::point(s.x));
}

TEST(LambdaThreshold, Estimates) {
  std::vector<double> ladder;
  for (int k = 1; k <= 40; ++k) ladder.push_back(0.025 * k);
  ExtReal est = estimate_lambda_f(catalog::neg_quad(2.0), ladder);
  EXPECT_GE(est.value(), 0.45);
  EXPECT_LE(est.value(), 0.5);
  EXPECT_TRUE(estimate_lambda_f(catalog::zero_norm(), ladder).is_pos_inf());
  EXPECT_TRUE(estimate_lambda_f(catalog::neg_norm_1d(), ladder).is_pos_inf());
}

TEST(Prox2D, MatchesRadialClosedForm) {
  auto f = catalog::neg_norm_nd(2);
  auto closed = f.closed_prox(1.0, {3.0, 4.0});
  ASSERT_TRUE(std::holds_alternative<Singleton>(closed));
  EXPECT_NEAR(std::get<Singleton>(closed).point[0], 3.6, 1e-12);
  EXPECT_NEAR(std::get<Singleton>(closed).point[1], 4.8, 1e-12);
  auto r = prox_brute_2d(f, 1.0, {3.0, 4.0}, 0.01, 2.0, 1e-9);
  ASSERT_FALSE(r.argmin.empty());
  for (const auto& p : r.argmin) EXPECT_LE(distance(closed, p), 0.02);

  auto at0 = f.closed_prox(1.0, {0.0, 0.0});
  ASSERT_TRUE(std::holds_alternative<Sphere>(at0));
  EXPECT_EQ(std::get<Sphere>(at0).radius, 1.0);
  auto r0 = prox_brute_2d(f, 1.0, {0.0, 0.0}, 0.01, 2.0, 1e-3);
  ASSERT_FALSE(r0.argmin.empty());
  for (const auto& p : r0.argmin) EXPECT_LE(distance(at0, p), 0.05);
}

TEST(Determinism, RepeatedCallsAreIdentical) {
  auto f = catalog::step();
  for (double x : {0.3, 2.0, -1.0}) {
    auto a = prox_brute(f, 2.0, x);
    auto b = prox_brute(f, 2.0, x);
    EXPECT_EQ(a.argmin, b.argmin);
    EXPECT_EQ(a.certificate, b.certificate);
  }
}
