// Resolvents (Id + lambda A)^{-1} of set-valued maps given by membership
// oracles, the linear graph transform
//
//   T(x, p) = (p, (x - p) / lambda),   T^{-1}(v, u) = (v + lambda u, v),
//
// which carries gph P_lambda f onto gph dP_lambda f, and a sampled
// outer-semicontinuity check of the proximal mapping.
#pragma once

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"
#include "levprox/prox_engine.hpp"
#include "levprox/subdiff.hpp"

namespace levprox {

/// A membership oracle for gph A: returns bool, or a margin (member iff >= 0)
/// that ranks near-solutions.
template <class M>
concept GraphMembership = std::is_invocable_r_v<bool, const M&, double, double> ||
                          std::is_invocable_r_v<double, const M&, double, double>;

namespace detail {

template <class M>
double membership_margin(const M& member, double v, double w) {
  using R = std::invoke_result_t<const M&, double, double>;
  if constexpr (std::is_same_v<R, bool>) {
    return member(v, w) ? 0.0 : -1.0;
  } else {
    return static_cast<double>(member(v, w));
  }
}

// Keeps, inside each run of adjacent lattice members, the points whose margin
// ties the run maximum; then clusters what is left.
inline IntervalSet collapse_runs(const std::vector<double>& vs, const std::vector<double>& margins, double step) {
  std::vector<double> keep;
  std::size_t i = 0;
  while (i < vs.size()) {
    std::size_t j = i;
    while (j + 1 < vs.size() && vs[j + 1] - vs[j] < 1.5 * step) ++j;
    double best = *std::max_element(margins.begin() + static_cast<std::ptrdiff_t>(i),
                                    margins.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    double tie = 1e-12 * std::max(1.0, std::abs(best));
    for (std::size_t k = i; k <= j; ++k)
      if (margins[k] >= best - tie) keep.push_back(vs[k]);
    i = j + 1;
  }
  return cluster_points(keep, {}, step);
}

template <GraphMembership M>
IntervalSet resolvent_scan(const M& member, double lambda, double x, double lo, double hi, double step,
                           bool* touches_edge) {
  std::vector<double> vs;
  std::vector<double> margins;
  for (double v : Lattice(step).points(lo, hi)) {
    double m = membership_margin(member, v, (x - v) / lambda);
    if (m >= 0.0) {
      vs.push_back(v);
      margins.push_back(m);
    }
  }
  if (touches_edge)
    *touches_edge = !vs.empty() && (vs.front() - lo < 2.5 * step || hi - vs.back() < 2.5 * step);
  return collapse_runs(vs, margins, step);
}

}  // namespace detail

/// { v on the lattice : (v, (x - v)/lambda) in gph A }, scanned over the prox
/// search window around x, which is doubled while the result is empty or
/// touches the window edge.
template <GraphMembership M>
IntervalSet resolvent_from_membership(const M& member, double lambda, double x, double step = 1e-3,
                                      double max_half_width = kMaxHalfWidth) {
  if (!(lambda > 0.0)) throw InvalidArgument("resolvent: lambda must be positive");
  double h = default_half_width(lambda);
  for (;;) {
    bool edge = false;
    IntervalSet r = detail::resolvent_scan(member, lambda, x, x - h, x + h, step, &edge);
    if ((!r.empty() && !edge) || h >= max_half_width) return r;
    h = std::min(2.0 * h, max_half_width);
  }
}

/// Same scan over an explicit grid for v.
template <GraphMembership M>
IntervalSet resolvent_from_membership(const M& member, double lambda, double x, const GridSpec& grid) {
  if (!(lambda > 0.0)) throw InvalidArgument("resolvent: lambda must be positive");
  grid.validate();
  return detail::resolvent_scan(member, lambda, x, grid.lo, grid.hi, grid.step, nullptr);
}

/// Membership in gph dP_lambda f backed by one convex-hull oracle over [lo, hi].
template <ScalarFunction F>
class LevelProxMembership {
 public:
  LevelProxMembership(F f, double lambda, double lo, double hi, double step, const Tolerances& tol = {})
      : f_(std::move(f)), oracle_(f_, lambda, lo, hi, step), slack_(tol.membership_slack) {}

  /// Margin: slack minus the largest sampled violation.
  double operator()(double v, double u) const {
    double fv = f_(v);
    if (!std::isfinite(fv)) return -kInf;
    return slack_ - oracle_.worst_violation(fv, v, u).violation;
  }

  const MinorantOracle& oracle() const { return oracle_; }

 private:
  F f_;
  MinorantOracle oracle_;
  double slack_;
};

/// y-range that the level-proximal membership oracle must cover so that every
/// probe x in [x_lo, x_hi] is answered with the full minorant window.
inline std::pair<double, double> level_prox_oracle_range(double lambda, double x_lo, double x_hi,
                                                         double max_half_width = kMaxHalfWidth) {
  double h = default_half_width(lambda);
  double u = h / lambda;
  double w = std::min(std::max(8.0 * lambda * (1.0 + u), 64.0), max_half_width);
  return {x_lo - h - w, x_hi + h + w};
}

/// (Id + lambda dP_lambda f)^{-1}(x) computed from the minorant inequality alone.
template <ScalarFunction F>
IntervalSet level_proximal_resolvent(const F& f, double lambda, double x, double step = 1e-3,
                                     const Tolerances& tol = {}) {
  auto [lo, hi] = level_prox_oracle_range(lambda, x, x);
  LevelProxMembership<const F&> member(f, lambda, lo, hi, step, tol);
  return resolvent_from_membership(member, lambda, x, step);
}

/// Membership in gph of a catalog closed-form subdifferential. The margin is
/// a slope slack minus dist(u, A(v)); the slack covers the lattice offset of v.
struct ClosedFormMembership {
  CatalogFunction::PointMap subdiff;
  double slack = 0.0;

  double operator()(double v, double u) const { return slack - subdiff(v).distance(u); }
};

inline ClosedFormMembership limiting_membership(const CatalogFunction& f, double lambda, double step) {
  if (!f.closed_limiting_subdiff) throw NotAvailable(f.id + ": no closed form for the limiting subdifferential");
  double lip = std::isfinite(f.gradient_lipschitz) ? f.gradient_lipschitz : 0.0;
  return {f.closed_limiting_subdiff, 2.0 * step * (1.0 / lambda + lip)};
}

inline ClosedFormMembership proximal_membership(const CatalogFunction& f, double lambda, double step) {
  if (!f.closed_proximal_subdiff) throw NotAvailable(f.id + ": no closed form for the proximal subdifferential");
  double lip = std::isfinite(f.gradient_lipschitz) ? f.gradient_lipschitz : 0.0;
  return {f.closed_proximal_subdiff, 2.0 * step * (1.0 / lambda + lip)};
}

/// (Id + lambda df)^{-1}(x) for the limiting subdifferential, scanned numerically.
inline IntervalSet limiting_resolvent(const CatalogFunction& f, double lambda, double x, double step = 1e-3) {
  return resolvent_from_membership(limiting_membership(f, lambda, step), lambda, x, step);
}

// ---------------------------------------------------------------------------
// Graph transform
// ---------------------------------------------------------------------------

class GraphTransform {
 public:
  explicit GraphTransform(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("GraphTransform: lambda must be positive");
  }

  double lambda() const { return lambda_; }

  /// (x, p) -> (p, (x - p)/lambda)
  std::pair<double, double> forward(double x, double p) const { return {p, (x - p) / lambda_}; }
  /// (v, u) -> (v + lambda u, v)
  std::pair<double, double> inverse(double v, double u) const { return {v + lambda_ * u, v}; }

 private:
  double lambda_;
};

namespace detail {

// Finite representatives of a value set: isolated points, and the finite
// endpoints of proper intervals.
inline std::vector<double> representatives(const IntervalSet& s) {
  std::vector<double> out;
  for (const auto& iv : s.intervals()) {
    if (std::isfinite(iv.lo)) out.push_back(iv.lo);
    if (iv.hi != iv.lo && std::isfinite(iv.hi)) out.push_back(iv.hi);
  }
  return out;
}

}  // namespace detail

/// Maps a sampled gph P_lambda f to the corresponding sample of gph dP_lambda f.
/// Output abscissae that agree to floating-point precision are merged.
inline OperatorGraph1D graph_transform_T(const OperatorGraph1D& prox_graph, double lambda) {
  GraphTransform t(lambda);
  std::vector<GraphSample> pairs;
  for (const auto& s : prox_graph.samples()) {
    for (double p : detail::representatives(s.value)) {
      auto [a, u] = t.forward(s.x, p);
      pairs.push_back({a, IntervalSet::point(u)});
    }
  }
  return OperatorGraph1D::from_pairs(std::move(pairs));
}

inline OperatorGraph1D graph_transform_T_inv(const OperatorGraph1D& subdiff_graph, double lambda) {
  GraphTransform t(lambda);
  std::vector<GraphSample> pairs;
  for (const auto& s : subdiff_graph.samples()) {
    for (double u : detail::representatives(s.value)) {
      auto [x, v] = t.inverse(s.x, u);
      pairs.push_back({x, IntervalSet::point(v)});
    }
  }
  return OperatorGraph1D::from_pairs(std::move(pairs));
}

/// Sampled outer-semicontinuity: every point of P_{lambda_k} f(x_k) along the
/// tail of the sequence lies within tol of P_lambda f(x).
inline bool graphical_limit_check(const CatalogFunction& f, double lambda, double x,
                                  const std::vector<std::pair<double, double>>& perturbations, double tol,
                                  double step = 1e-3) {
  IntervalSet limit = prox(f, lambda, x, step);
  std::size_t start = perturbations.size() / 2;
  for (std::size_t k = start; k < perturbations.size(); ++k) {
    auto [xk, lk] = perturbations[k];
    IntervalSet vk = prox(f, lk, xk, step);
    for (double v : detail::representatives(vk))
      if (limit.distance(v) > tol) return false;
  }
  return true;
}

}  // namespace levprox
