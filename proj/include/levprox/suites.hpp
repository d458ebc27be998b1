// Property suites over catalog functions, shared by the command line `verify`
// subcommand and the test programs.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"
#include "levprox/properties.hpp"
#include "levprox/prox_engine.hpp"
#include "levprox/resolvent.hpp"
#include "levprox/subdiff.hpp"

namespace levprox::suites {

struct SuiteOptions {
  double step = 1e-3;
  Tolerances tol;
  /// Empty means each suite's own default ladder.
  std::vector<double> lambdas;
  std::uint64_t seed = kPropertySeed;
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> v = {"identity", "equivalence", "relations", "sumrule", "nesting", "hypomono"};
  return v;
}

/// True when lambda sits within 5% of the prox threshold or the hypoconvexity
/// threshold, where sampled biconditionals are numerically fragile.
inline bool near_critical(const CatalogFunction& f, double lambda) {
  std::vector<double> crit;
  if (std::isfinite(f.lambda_f)) crit.push_back(f.lambda_f);
  if (f.hypoconvex_modulus && std::isfinite(*f.hypoconvex_modulus) && *f.hypoconvex_modulus > 0.0)
    crit.push_back(1.0 / *f.hypoconvex_modulus);
  for (double c : crit)
    if (std::abs(lambda - c) < 0.05 * c) return true;
  return false;
}

/// Members of `ladder` below the prox threshold and away from critical values.
inline std::vector<double> admissible(const CatalogFunction& f, const std::vector<double>& ladder) {
  std::vector<double> out;
  for (double l : ladder)
    if (l < f.lambda_f && !near_critical(f, l)) out.push_back(l);
  return out;
}

/// Probe abscissae i/20 for i = -100..100.
inline std::vector<double> default_probes() {
  std::vector<double> xs;
  for (int i = -100; i <= 100; ++i) xs.push_back(static_cast<double>(i) / 20.0);
  return xs;
}

/// Resolvent of the level proximal subdifferential against prox at every probe.
inline PropertyReport identity_report(const CatalogFunction& f, double lambda, const std::vector<double>& xs,
                                      const SuiteOptions& o) {
  PropertyReport r;
  r.name = "identity";
  r.details["function"] = f.id;
  r.details["lambda"] = lambda;
  const double h_tol = o.tol.set_tolerance(o.step);
  auto [lo, hi] = level_prox_oracle_range(lambda, xs.front(), xs.back());
  LevelProxMembership<const CatalogFunction&> member(f, lambda, lo, hi, o.step, o.tol);
  double worst = 0.0;
  for (double x : xs) {
    ++r.probes;
    IntervalSet res = resolvent_from_membership(member, lambda, x, o.step);
    IntervalSet p = prox(f, lambda, x, o.step, o.tol);
    ExtReal d = hausdorff_distance(res, p);
    worst = std::max(worst, d.value());
    if (!(d <= ExtReal(h_tol)) && r.passed) {
      r.passed = false;
      r.witness = Witness{{x}, {d.value()}, h_tol - d.value(), "hausdorff(resolvent, prox) at x"};
    }
  }
  r.margin = h_tol - worst;
  r.details["max_distance"] = endpoint_to_json(worst);
  return r;
}

inline std::vector<PropertyReport> identity(const std::vector<CatalogFunction>& fs, const SuiteOptions& o) {
  std::vector<PropertyReport> out;
  const auto ladder = o.lambdas.empty() ? std::vector<double>{0.25, 1.0, 2.0} : o.lambdas;
  for (const auto& f : fs)
    for (double l : admissible(f, ladder)) out.push_back(identity_report(f, l, default_probes(), o));
  return out;
}

/// Default lambda for the biconditional suites: 1, or 0.8 of a finite threshold.
inline double default_lambda(const CatalogFunction& f) { return std::isfinite(f.lambda_f) ? std::min(1.0, 0.8 * f.lambda_f) : 1.0; }

inline std::vector<PropertyReport> equivalence(const std::vector<CatalogFunction>& fs, const SuiteOptions& o) {
  std::vector<PropertyReport> out;
  for (const auto& f : fs) {
    const auto ladder = o.lambdas.empty() ? std::vector<double>{default_lambda(f)} : o.lambdas;
    for (double l : admissible(f, ladder)) out.push_back(check_weakcvx_equivalence(f, l, GridSpec{-5.0, 5.0, o.step}, o.tol));
  }
  return out;
}

inline std::vector<PropertyReport> relations(const std::vector<CatalogFunction>& fs, const SuiteOptions& o) {
  std::vector<PropertyReport> out;
  std::vector<double> probes;
  for (int i = -12; i <= 12; ++i) probes.push_back(static_cast<double>(i) / 4.0);
  for (const auto& f : fs) {
    const auto ladder = o.lambdas.empty() ? std::vector<double>{0.5, 1.0, 2.0} : o.lambdas;
    for (double l : admissible(f, ladder)) {
      for (auto v : {SubdiffVariant::Limiting, SubdiffVariant::Proximal}) {
        const auto& cf = v == SubdiffVariant::Limiting ? f.closed_limiting_subdiff : f.closed_proximal_subdiff;
        if (!cf) continue;
        out.push_back(check_subdiff_relations(f, l, probes, o.tol, o.step, v));
      }
    }
  }
  return out;
}

/// Five fixed pairs at 21 probes each; probes outside dom(f + g) are skipped.
inline std::vector<PropertyReport> sumrule(const SuiteOptions& o) {
  using namespace catalog;
  const std::vector<std::pair<CatalogFunction, CatalogFunction>> pairs = {
      {abs(), quad()}, {zero_norm(), quad()}, {step(), abs()}, {neg_norm_1d(), quad()}, {zero_norm(), abs()}};
  std::vector<PropertyReport> out;
  for (const auto& [f, g] : pairs) {
    PropertyReport agg;
    agg.name = "sum-rule";
    agg.details["f"] = f.id;
    agg.details["g"] = g.id;
    agg.margin = 0.0;
    for (int i = -10; i <= 10; ++i) {
      const double x = static_cast<double>(i) / 4.0;
      if (!std::isfinite(f(x) + g(x))) continue;
      PropertyReport r = check_sum_rule(f, g, 1.0, 1.0, x, o.tol, o.step);
      ++agg.probes;
      if (!r.passed && agg.passed) {
        agg.passed = false;
        agg.witness = r.witness;
        agg.margin = r.margin;
        agg.details["failing"] = r.details;
      }
    }
    out.push_back(agg);
  }
  return out;
}

inline std::vector<double> nesting_ladder() {
  std::vector<double> l;
  for (int k = 0; k <= 14; ++k) l.push_back(std::ldexp(1.0, k));
  return l;
}

inline std::vector<PropertyReport> nesting(const std::vector<CatalogFunction>& fs, const SuiteOptions& o) {
  std::vector<PropertyReport> out;
  const auto ladder = nesting_ladder();
  for (const auto& f : fs) {
    if (!std::isinf(f.lambda_f)) continue;
    const double x = std::isfinite(f(0.0)) ? 0.0 : 1.0;
    PropertyReport r = check_nesting_and_intersection(f, x, ladder, 1.2e-2, o.tol, o.step);
    r.details["function"] = f.id;
    out.push_back(r);
  }
  return out;
}

inline std::vector<PropertyReport> hypomono(const std::vector<CatalogFunction>& fs, const SuiteOptions& o) {
  std::vector<PropertyReport> out;
  const auto ladder = o.lambdas.empty() ? std::vector<double>{0.25, 1.0, 2.0} : o.lambdas;
  const GridSpec xs{-5.0, 5.0, 0.05};
  for (const auto& f : fs) {
    for (double l : admissible(f, ladder)) {
      OperatorGraph1D pg = prox_graph_brute(f, l, xs, o.step, o.tol);
      PropertyReport h = check_hypomonotone(graph_transform_T(pg, l), 1.0 / l, 1e-9, o.seed);
      h.details["function"] = f.id;
      h.details["lambda"] = l;
      out.push_back(h);
      PropertyReport m = check_monotone(pg, 1e-9, o.seed);
      m.details["function"] = f.id;
      m.details["lambda"] = l;
      out.push_back(m);
    }
  }
  return out;
}

/// Runs one suite by name, or every suite for "all".
inline std::vector<PropertyReport> run(const std::string& name, const std::vector<CatalogFunction>& fs,
                                       const SuiteOptions& o) {
  if (name == "all") {
    std::vector<PropertyReport> out;
    for (const auto& n : names()) {
      auto part = run(n, fs, o);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (name == "identity") return identity(fs, o);
  if (name == "equivalence") return equivalence(fs, o);
  if (name == "relations") return relations(fs, o);
  if (name == "sumrule") return sumrule(o);
  if (name == "nesting") return nesting(fs, o);
  if (name == "hypomono") return hypomono(fs, o);
  throw InvalidArgument("unknown suite '" + name + "'");
}

}  // namespace levprox::suites
