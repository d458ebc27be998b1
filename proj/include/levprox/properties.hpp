// Sampled verification of monotonicity, hypomonotonicity, hypoconvexity,
// the hypoconvex equivalences, the subdifferential relations, the sum rules
// and nesting of dP_lambda f along increasing lambda.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"
#include "levprox/json_io.hpp"
#include "levprox/prox_engine.hpp"
#include "levprox/resolvent.hpp"
#include "levprox/subdiff.hpp"

namespace levprox {

struct Witness {
  std::vector<double> points;
  std::vector<double> values;
  /// Signed margin of the defining inequality; negative for a violation.
  double margin = 0.0;
  std::string note;
};

struct PropertyReport {
  std::string name;
  bool passed = true;
  std::optional<Witness> witness;
  std::size_t probes = 0;
  /// Smallest margin observed over all probes.
  double margin = kInf;
  /// The two sides of a biconditional, when the check is one.
  std::optional<std::pair<bool, bool>> sides;
  json details = json::object();
};

inline json to_json(const PropertyReport& r) {
  json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  if (r.witness) {
    json pts = json::array();
    for (double p : r.witness->points) pts.push_back(endpoint_to_json(p));
    json vals = json::array();
    for (double v : r.witness->values) vals.push_back(endpoint_to_json(v));
    j["witness"] = {{"points", pts}, {"values", vals}, {"margin", endpoint_to_json(r.witness->margin)},
                    {"note", r.witness->note}};
  } else {
    j["witness"] = nullptr;
  }
  j["probes"] = r.probes;
  j["margins"] = endpoint_to_json(r.margin);
  if (r.sides) j["sides"] = {{"L", r.sides->first}, {"R", r.sides->second}};
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

inline constexpr std::uint64_t kPropertySeed = 0x5EED;
inline constexpr std::size_t kPairCap = 200;

// ---------------------------------------------------------------------------
// Monotonicity of sampled graphs
// ---------------------------------------------------------------------------

/// (x - y)(u - v) + rho (x - y)^2; pairs with x == y contribute 0.
inline double hypomonotone_margin(double x, double u, double y, double v, double rho) {
  if (x == y) return 0.0;
  double d = x - y;
  double m = d * (u - v);
  if (std::isnan(m)) return 0.0;
  return m + rho * d * d;
}

namespace detail {

struct GraphPoint {
  double x;
  double u;
};

// Finite graph points plus the infinite endpoints of unbounded values.
inline std::vector<GraphPoint> graph_points(const OperatorGraph1D& g) {
  std::vector<GraphPoint> out;
  for (const auto& s : g.samples()) {
    for (const auto& iv : s.value.intervals()) {
      out.push_back({s.x, iv.lo});
      if (iv.hi != iv.lo) out.push_back({s.x, iv.hi});
    }
  }
  return out;
}

inline std::vector<std::size_t> strided(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (n <= cap) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  for (std::size_t k = 0; k < cap; ++k) idx.push_back(k * (n - 1) / (cap - 1));
  return idx;
}

}  // namespace detail

/// (x - y)(u - v) >= -rho (x - y)^2 - slack over sampled pairs. Up to 200
/// points every pair is checked; larger graphs use 200 strided points, seeded
/// random pairs and a sweep against the running maximum of u + rho x.
inline PropertyReport check_hypomonotone(const OperatorGraph1D& g, double rho, double slack = 1e-9,
                                         std::uint64_t seed = kPropertySeed) {
  if (!(rho >= 0.0)) throw InvalidArgument("check_hypomonotone: rho must be nonnegative");
  PropertyReport r;
  r.name = rho == 0.0 ? "monotone" : "hypomonotone";
  r.details["rho"] = endpoint_to_json(rho);
  r.details["slack"] = slack;
  const auto pts = detail::graph_points(g);
  const std::size_t n = pts.size();

  auto visit = [&](std::size_t i, std::size_t j) {
    ++r.probes;
    double m = hypomonotone_margin(pts[i].x, pts[i].u, pts[j].x, pts[j].u, rho);
    if (m < r.margin) {
      r.margin = m;
      if (m < -slack) {
        r.passed = false;
        r.witness = Witness{{pts[i].x, pts[j].x}, {pts[i].u, pts[j].u}, m, "(x - y)(u - v) + rho (x - y)^2"};
      }
    }
  };

  const auto idx = detail::strided(n, kPairCap);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) visit(idx[a], idx[b]);

  if (n > kPairCap) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t extra = std::min<std::size_t>(20 * n, 1'000'000);
    for (std::size_t k = 0; k < extra; ++k) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (i != j) visit(i, j);
    }
    // Samples are sorted by x; the worst partner of j among earlier points is
    // the one with the largest u + rho x.
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
      visit(best, j);
      if (pts[j].u + rho * pts[j].x > pts[best].u + rho * pts[best].x) best = j;
    }
  }
  if (r.passed) r.witness.reset();
  return r;
}

inline PropertyReport check_monotone(const OperatorGraph1D& g, double slack = 1e-9, std::uint64_t seed = kPropertySeed) {
  return check_hypomonotone(g, 0.0, slack, seed);
}

/// Samples (x, dP_lambda f(x)) as T(gph P_lambda f) of the grid prox oracle.
template <ScalarFunction F>
OperatorGraph1D sample_levprox_graph(const F& f, double lambda, const GridSpec& xs, double step = 1e-3,
                                     const Tolerances& tol = {}) {
  return graph_transform_T(prox_graph_brute(f, lambda, xs, step, tol), lambda);
}

// ---------------------------------------------------------------------------
// Hypoconvexity
// ---------------------------------------------------------------------------

/// Midpoint convexity of g = f + x^2/(2 lambda) on grid triples (x, y, (x+y)/2).
/// A midpoint outside dom f with both ends inside counts as a violation. The
/// grid is thinned to at most 401 points.
template <ScalarFunction F>
PropertyReport check_hypoconvex(const F& f, double lambda, const GridSpec& grid, double slack = 1e-9) {
  if (!(lambda > 0.0)) throw InvalidArgument("check_hypoconvex: lambda must be positive");
  grid.validate();
  PropertyReport r;
  r.name = "hypoconvex";
  r.details["lambda"] = endpoint_to_json(lambda);

  const double span = grid.hi - grid.lo;
  const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / grid.step / 400.0)));
  const auto xs = Lattice(grid.step * static_cast<double>(stride)).points(grid.lo, grid.hi);
  std::vector<double> gv(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double fv = f(xs[i]);
    gv[i] = std::isinf(lambda) ? fv : (fv == kInf ? kInf : fv + xs[i] * xs[i] / (2.0 * lambda));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (gv[i] == kInf) continue;
    for (std::size_t j = i + 2; j < xs.size(); j += 2) {
      if (gv[j] == kInf) continue;
      const std::size_t k = (i + j) / 2;
      ++r.probes;
      const double avg = 0.5 * (gv[i] + gv[j]);
      const double m = avg - gv[k];
      const double scale = 1e-12 * std::max({1.0, std::abs(gv[i]), std::abs(gv[j])});
      if (m < r.margin) {
        r.margin = m;
        if (m < -slack - scale) {
          r.passed = false;
          r.witness = Witness{{xs[i], xs[j], xs[k]}, {gv[i], gv[j], gv[k]}, m, "(g(x) + g(y))/2 - g((x+y)/2)"};
        }
      }
    }
  }
  if (r.passed) r.witness.reset();
  return r;
}

// ---------------------------------------------------------------------------
// Biconditionals
// ---------------------------------------------------------------------------

/// Probe abscissae k * spacing in [lo, hi].
inline std::vector<double> probe_points(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count < 2) return {0.5 * (lo + hi)};
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

/// L: prox equals the resolvent of the limiting subdifferential at every
/// probe. R: f is 1/lambda-hypoconvex. Passed iff L <=> R.
inline PropertyReport check_weakcvx_equivalence(const CatalogFunction& f, double lambda, const GridSpec& grid,
                                                const Tolerances& tol = {}) {
  if (!f.closed_limiting_subdiff) throw NotAvailable(f.id + ": no closed form for the limiting subdifferential");
  if (!(lambda < f.lambda_f)) throw Unbounded(f.id + ": lambda at or above the prox threshold");
  PropertyReport r;
  r.name = "weakcvx-equivalence";
  r.details["function"] = f.id;
  r.details["lambda"] = lambda;
  const double step = grid.step;
  const double h_tol = tol.set_tolerance(step);
  const auto xs = probe_points(grid.lo, grid.hi, 41);

  bool L = true;
  std::optional<Witness> lw;
  for (double x : xs) {
    ++r.probes;
    IntervalSet p = prox_brute(f, lambda, x, step, tol).argmin;
    IntervalSet res = limiting_resolvent(f, lambda, x, step);
    ExtReal d = hausdorff_distance(p, res);
    if (!(d <= ExtReal(h_tol))) {
      L = false;
      if (!lw) lw = Witness{{x}, {d.value()}, -d.value(), "hausdorff(prox, limiting resolvent) at x"};
    }
  }
  PropertyReport hc = check_hypoconvex(f, lambda, grid);
  const bool R = hc.passed;
  r.sides = {L, R};
  r.passed = (L == R);
  r.margin = hc.margin;
  if (!r.passed) r.witness = L ? hc.witness : lw;
  r.details["L_witness_x"] = lw ? json(lw->points[0]) : json(nullptr);
  return r;
}

enum class SubdiffVariant { Limiting, Proximal };

/// L: dP_lambda f equals the chosen closed-form subdifferential at every probe
/// in dom f. R: f is 1/lambda-hypoconvex. Passed iff L <=> R.
inline PropertyReport check_subdiff_relations(const CatalogFunction& f, double lambda, std::span<const double> probes,
                                              const Tolerances& tol = {}, double step = 1e-3,
                                              SubdiffVariant variant = SubdiffVariant::Limiting,
                                              const GridSpec& hypoconvex_grid = {}) {
  const auto& closed = variant == SubdiffVariant::Limiting ? f.closed_limiting_subdiff : f.closed_proximal_subdiff;
  if (!closed) throw NotAvailable(f.id + ": no closed-form subdifferential for this variant");
  PropertyReport r;
  r.name = variant == SubdiffVariant::Limiting ? "subdiff-relations-limiting" : "subdiff-relations-proximal";
  r.details["function"] = f.id;
  r.details["lambda"] = lambda;
  const double h_tol = tol.hausdorff_tol + 2.0 * step / lambda;

  bool L = true;
  std::optional<Witness> lw;
  for (double x : probes) {
    if (!std::isfinite(f(x))) continue;
    ++r.probes;
    IntervalSet a = levprox_interval(f, lambda, x, step, tol);
    IntervalSet b = closed(x);
    ExtReal d = hausdorff_distance(a, b);
    if (!(d <= ExtReal(h_tol))) {
      L = false;
      if (!lw) lw = Witness{{x}, {d.value()}, -d.value(), "hausdorff(level proximal, closed form) at x"};
    }
  }
  PropertyReport hc = check_hypoconvex(f, lambda, hypoconvex_grid);
  const bool R = hc.passed;
  r.sides = {L, R};
  r.passed = (L == R);
  r.margin = hc.margin;
  if (!r.passed) r.witness = L ? hc.witness : lw;
  return r;
}

// ---------------------------------------------------------------------------
// Sum rules
// ---------------------------------------------------------------------------

struct SumRuleOptions {
  /// Gradient of g and its Lipschitz constant; enables the strong rule when
  /// the constant is at most 1/lambda2.
  std::function<double(double)> grad_g;
  double grad_lipschitz = kInf;
  /// Whether f is 1/lambda1-hypoconvex; enables the equality check.
  bool f_hypoconvex = false;
  double step = 1e-3;
};

template <ScalarFunction F, ScalarFunction G>
PropertyReport check_sum_rule(const F& f, const G& g, double lambda1, double lambda2, double x,
                              const Tolerances& tol = {}, const SumRuleOptions& opt = {}) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("check_sum_rule: lambdas must be positive");
  PropertyReport r;
  r.name = "sum-rule";
  const double lambda3 = lambda1 * lambda2 / (lambda1 + lambda2);
  r.details["x"] = x;
  r.details["lambda3"] = lambda3;
  auto h = [&](double y) {
    double a = f(y);
    double b = g(y);
    return (a == kInf || b == kInf) ? kInf : a + b;
  };
  if (!std::isfinite(h(x))) throw InvalidArgument("check_sum_rule: (f + g)(x) must be finite");
  const double step = opt.step;
  const double slack = tol.set_tolerance(step) + 2.0 * step / lambda3;

  IntervalSet df = levprox_interval(f, lambda1, x, step, tol);
  IntervalSet dg = levprox_interval(g, lambda2, x, step, tol);
  IntervalSet lhs = df.minkowski_sum(dg);
  IntervalSet rhs = levprox_interval(h, lambda3, x, step, tol);
  r.probes = 1;
  r.details["lhs"] = to_json(lhs);
  r.details["rhs"] = to_json(rhs);
  const bool weak = is_subset(lhs, rhs, slack);
  r.details["weak"] = weak;
  if (!weak) {
    r.passed = false;
    r.witness = Witness{{x}, {}, -slack, "sum of level proximal subdifferentials not inside that of f + g"};
  }

  if (opt.grad_g && opt.grad_lipschitz <= 1.0 / lambda2) {
    const double lambda3_hat = lambda2 * lambda3 / (lambda2 + lambda3);
    r.details["lambda3_hat"] = lambda3_hat;
    IntervalSet other = levprox_interval(f, lambda3_hat, x, step, tol).translate(opt.grad_g(x));
    const bool strong = is_subset(rhs, other, slack);
    r.details["strong"] = strong;
    if (!strong && r.passed) {
      r.passed = false;
      r.witness = Witness{{x}, {}, -slack, "level proximal subdifferential of f + g not inside the shifted one of f"};
    }
    if (opt.f_hypoconvex) {
      ExtReal d = hausdorff_distance(df.translate(opt.grad_g(x)), rhs);
      const bool eq = d <= ExtReal(slack);
      r.details["equality"] = eq;
      r.details["equality_distance"] = endpoint_to_json(d.value());
      if (!eq && r.passed) {
        r.passed = false;
        r.witness = Witness{{x}, {d.value()}, -d.value(), "sum rule equality"};
      }
    }
  }
  r.margin = r.passed ? 0.0 : (r.witness ? r.witness->margin : -kInf);
  return r;
}

/// Catalog overload: the strong rule and equality are enabled from metadata.
inline PropertyReport check_sum_rule(const CatalogFunction& f, const CatalogFunction& g, double lambda1, double lambda2,
                                     double x, const Tolerances& tol = {}, double step = 1e-3) {
  SumRuleOptions opt;
  opt.step = step;
  if (g.gradient) {
    opt.grad_g = g.gradient;
    opt.grad_lipschitz = g.gradient_lipschitz;
  }
  opt.f_hypoconvex = f.hypoconvex_at(lambda1);
  PropertyReport r = check_sum_rule(f, g, lambda1, lambda2, x, tol, opt);
  r.details["f"] = f.id;
  r.details["g"] = g.id;
  return r;
}

// ---------------------------------------------------------------------------
// Nesting and intersection
// ---------------------------------------------------------------------------

/// Along an increasing lambda ladder the sets dP_lambda f(x) must shrink, and
/// the last one must be within tol of the Fenchel subdifferential when both
/// are bounded. details.strictly_nested records strict shrinkage.
template <ScalarFunction F>
PropertyReport check_nesting_and_intersection(const F& f, double x, std::span<const double> ladder, double tol,
                                              const Tolerances& tols = {}, double step = 1e-3) {
  PropertyReport r;
  r.name = "nesting";
  if (!std::isfinite(f(x))) throw InvalidArgument("check_nesting_and_intersection: f(x) must be finite");
  for (std::size_t k = 1; k < ladder.size(); ++k)
    if (!(ladder[k] > ladder[k - 1])) throw InvalidArgument("check_nesting_and_intersection: ladder must increase");

  json sets = json::array();
  std::vector<IntervalSet> s;
  for (double lambda : ladder) {
    s.push_back(levprox_interval(f, lambda, x, step, tols));
    sets.push_back({{"lambda", lambda}, {"set", to_json(s.back())}});
  }
  r.details["sets"] = sets;
  bool strict = true;
  for (std::size_t k = 1; k < s.size(); ++k) {
    ++r.probes;
    const double slack = tols.bisection_tol * 10.0 + 1e-12;
    if (!is_subset(s[k], s[k - 1], slack)) {
      r.passed = false;
      if (!r.witness) r.witness = Witness{{x, ladder[k - 1], ladder[k]}, {}, -1.0, "set at larger lambda not inside"};
    }
    // Endpoints at a kink drift by about sqrt(2 slack / lambda), so shrinkage
    // below that drift does not count.
    const double drift = 2.0 * std::sqrt(2.0 * tols.membership_slack / ladder[k - 1]) + slack;
    if (s[k] == s[k - 1] || is_subset(s[k - 1], s[k], drift)) strict = false;
  }
  r.details["strictly_nested"] = strict;

  if (!s.empty()) {
    IntervalSet fen = fenchel_subdiff(f, x, step, tols);
    r.details["fenchel"] = to_json(fen);
    const IntervalSet& last = s.back();
    if (last.bounded() && fen.bounded()) {
      ExtReal d = hausdorff_distance(last, fen);
      r.details["final_distance"] = endpoint_to_json(d.value());
      r.margin = tol - d.value();
      if (!(d <= ExtReal(tol)) && r.passed) {
        r.passed = false;
        r.witness = Witness{{x, ladder.back()}, {d.value()}, tol - d.value(), "hausdorff(last set, Fenchel)"};
      }
    }
  }
  return r;
}

}  // namespace levprox
