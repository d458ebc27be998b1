// Membership oracles for the lambda-level proximal subdifferential
//
//   u in dP_lambda f(x)  <=>  f(y) >= f(x) + u (y - x) - (y - x)^2 / (2 lambda)  for all y,
//
// the Fenchel subdifferential (the same inequality without the quadratic
// term), the proximal subdifferential as a union over a lambda ladder, and the
// catalog-only limiting subdifferential.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"
#include "levprox/prox_engine.hpp"

namespace levprox {

struct MembershipWitness {
  double y = 0.0;
  /// Amount by which the minorant exceeds f at y.
  double violation = 0.0;
};

struct MembershipVerdict {
  bool member = false;
  std::optional<MembershipWitness> witness;
};

namespace detail {

/// Half width of the y-window for a membership test at slope u. Outside it the
/// quadratic term dominates any function with at most linear decay.
inline double minorant_window(double lambda, double u, double fx, double x, const std::optional<GrowthBound>& gb,
                              double max_half_width) {
  double w = std::max(8.0 * lambda * (1.0 + std::abs(u)), 64.0);
  if (gb && std::isfinite(fx)) {
    double c = std::abs(fx) + gb->a + gb->b * std::abs(x);
    w = std::max(w, 2.0 * lambda * (gb->b + std::abs(u)) + std::sqrt(2.0 * lambda * c) + 1.0);
  }
  return std::min(w, max_half_width);
}

/// Points close to x, below lattice resolution, where smooth functions reveal
/// the tightest violations.
inline std::vector<double> refinement_points(double x, double step) {
  std::vector<double> out;
  for (int k = 1; k <= 30; ++k) {
    double t = std::ldexp(step, -k);
    out.push_back(x - t);
    out.push_back(x + t);
  }
  return out;
}

inline constexpr double kFineRadius = 64.0;
inline constexpr double kCoarseStep = 1.0 / 64.0;

/// Samples for wide windows: the lattice of `step` within kFineRadius of x,
/// the coarser dyadic lattice beyond, plus `extra`.
inline std::vector<double> multires_points(double x, double lo, double hi, double step, std::span<const double> extra) {
  std::vector<double> ys = Lattice(step).points(std::max(lo, x - kFineRadius), std::min(hi, x + kFineRadius));
  if (lo < x - kFineRadius || hi > x + kFineRadius) {
    for (double y : Lattice(std::max(step, kCoarseStep)).points(lo, hi))
      if (std::abs(y - x) > kFineRadius) ys.push_back(y);
  }
  ys.insert(ys.end(), extra.begin(), extra.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  return ys;
}

inline double minorant_violation(double fx, double fy, double x, double y, double u, double lambda) {
  if (fy == kInf) return -kInf;
  double d = y - x;
  double quad = std::isinf(lambda) ? 0.0 : d * d / (2.0 * lambda);
  return fx + u * d - quad - fy;
}

}  // namespace detail

/// Direct scan of the defining inequality over a lattice window around x, refined
/// near x. Non-members come with the worst sampled y.
template <ScalarFunction F>
MembershipVerdict levprox_member(const F& f, double lambda, double x, double u, double step = 1e-3,
                                 const Tolerances& tol = {}, double max_half_width = kMaxHalfWidth) {
  if (!(lambda > 0.0)) throw InvalidArgument("levprox_member: lambda must be positive");
  const double fx = f(x);
  if (!std::isfinite(fx)) return {false, MembershipWitness{x, kInf}};
  const double w = detail::minorant_window(lambda, u, fx, x, growth_bound_of(f), max_half_width);
  Lattice lat(step);

  MembershipWitness worst{x, 0.0};
  auto visit = [&](double y) {
    double v = detail::minorant_violation(fx, f(y), x, y, u, lambda);
    if (v > worst.violation) worst = {y, v};
  };
  const std::int64_t k0 = lat.ceil_index(x - w);
  const std::int64_t k1 = lat.floor_index(x + w);
  for (std::int64_t k = k0; k <= k1; ++k) visit(lat.at(k));
  for (double y : detail::refinement_points(x, step)) visit(y);
  if (std::abs(lambda * u) <= w) visit(x + lambda * u);

  if (worst.violation > tol.membership_slack) return {false, worst};
  return {true, std::nullopt};
}

/// Lower convex hull of y -> f(y) + y^2/(2 lambda) over a sample set. A single
/// hull answers the minorant inequality for every (x, u) in O(log n):
///   max_y violation = [g(x) - s x] - min_y [g(y) - s y],  s = u + x/lambda.
/// lambda = +inf gives the Fenchel inequality.
class MinorantOracle {
 public:
  template <ScalarFunction F>
  MinorantOracle(const F& f, double lambda, double lo, double hi, double step, std::span<const double> extra = {})
      : lambda_(lambda), lo_(lo), hi_(hi) {
    if (!(lambda > 0.0)) throw InvalidArgument("MinorantOracle: lambda must be positive");
    std::vector<double> ys = Lattice(step).points(lo, hi);
    ys.insert(ys.end(), extra.begin(), extra.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    build(f, ys);
  }

  /// Oracle over explicit, sorted and unique samples.
  template <ScalarFunction F>
  MinorantOracle(const F& f, double lambda, const std::vector<double>& sorted_ys)
      : lambda_(lambda), lo_(sorted_ys.empty() ? 0.0 : sorted_ys.front()), hi_(sorted_ys.empty() ? 0.0 : sorted_ys.back()) {
    if (!(lambda > 0.0)) throw InvalidArgument("MinorantOracle: lambda must be positive");
    build(f, sorted_ys);
  }

  double lambda() const { return lambda_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool has_points() const { return !hy_.empty(); }

  double shifted(double fy, double y) const { return std::isinf(lambda_) ? fy : fy + y * y / (2.0 * lambda_); }

  /// min over samples of g(y) - s y, with the minimizing sample.
  std::pair<double, double> support(double s) const {
    if (hy_.empty()) return {kInf, 0.0};
    auto it = std::lower_bound(slopes_.begin(), slopes_.end(), s);
    std::size_t k = static_cast<std::size_t>(it - slopes_.begin());
    return {hg_[k] - s * hy_[k], hy_[k]};
  }

  /// Largest sampled violation of the minorant inequality at (x, u) given f(x).
  MembershipWitness worst_violation(double fx, double x, double u) const {
    if (!std::isfinite(fx)) return {x, kInf};
    double s = std::isinf(lambda_) ? u : u + x / lambda_;
    auto [m, y] = support(s);
    double lhs = shifted(fx, x) - s * x;
    return {y, lhs - m};
  }

  template <ScalarFunction F>
  bool member(const F& f, double x, double u, double slack) const {
    return worst_violation(f(x), x, u).violation <= slack;
  }

 private:
  template <ScalarFunction F>
  void build(const F& f, const std::vector<double>& ys) {
    for (double y : ys) {
      double fy = f(y);
      if (fy == kInf) continue;
      double g = shifted(fy, y);
      while (hy_.size() >= 2) {
        std::size_t n = hy_.size();
        double cross = (hy_[n - 1] - hy_[n - 2]) * (g - hg_[n - 2]) - (hg_[n - 1] - hg_[n - 2]) * (y - hy_[n - 2]);
        if (cross > 0.0) break;
        hy_.pop_back();
        hg_.pop_back();
      }
      hy_.push_back(y);
      hg_.push_back(g);
    }
    for (std::size_t k = 0; k + 1 < hy_.size(); ++k) slopes_.push_back((hg_[k + 1] - hg_[k]) / (hy_[k + 1] - hy_[k]));
  }

  double lambda_;
  double lo_;
  double hi_;
  std::vector<double> hy_;
  std::vector<double> hg_;
  std::vector<double> slopes_;
};

namespace detail {

/// Slopes worth probing: central and one-sided differences at several scales.
template <ScalarFunction F>
std::vector<double> critical_slopes(const F& f, double x, double step) {
  std::vector<double> out{0.0};
  const double fx = f(x);
  for (int k : {0, 5, 10}) {
    double h = std::ldexp(step, -k);
    double fp = f(x + h);
    double fm = f(x - h);
    if (std::isfinite(fp) && std::isfinite(fm)) out.push_back((fp - fm) / (2.0 * h));
    if (std::isfinite(fp)) out.push_back((fp - fx) / h);
    if (std::isfinite(fm)) out.push_back((fx - fm) / h);
  }
  return out;
}

template <ScalarFunction F>
double slope_bound(const F& f, double x) {
  const double fx = f(x);
  double b = 0.0;
  for (double d : {1.0, 2.0, 4.0}) {
    for (double y : {x - d, x + d}) {
      double fy = f(y);
      if (std::isfinite(fy)) b = std::max(b, std::abs(fy - fx) / d);
    }
  }
  return b;
}

/// Recovers an interval {u : member(u)} from a coarse scan followed by
/// bisection on both endpoints. Endpoints that stay members up to u_max are
/// reported as infinite.
template <class Member>
IntervalSet interval_by_bisection(const Member& member, double u0, double u_max, std::span<const double> seeds,
                                  double bisection_tol) {
  constexpr int kScan = 401;
  std::vector<std::pair<double, bool>> probes;
  probes.reserve(kScan + seeds.size());
  for (int k = 0; k < kScan; ++k) {
    double u = -u0 + 2.0 * u0 * k / (kScan - 1);
    probes.emplace_back(u, member(u));
  }
  for (double u : seeds)
    if (std::isfinite(u)) probes.emplace_back(u, member(u));
  std::sort(probes.begin(), probes.end());

  double in_lo = kInf;
  double in_hi = -kInf;
  for (auto& [u, m] : probes) {
    if (m) {
      in_lo = std::min(in_lo, u);
      in_hi = std::max(in_hi, u);
    }
  }
  if (in_lo == kInf) return {};

  auto refine = [&](double inside, double direction) -> double {
    double outside = std::nan("");
    for (auto& [u, m] : probes) {
      if (m) continue;
      if (direction < 0 && u < inside && (std::isnan(outside) || u > outside)) outside = u;
      if (direction > 0 && u > inside && (std::isnan(outside) || u < outside)) outside = u;
    }
    if (std::isnan(outside)) {
      double span = std::max(u0, std::abs(inside));
      for (;;) {
        span *= 2.0;
        if (span > u_max) return direction * kInf;
        double u = inside + direction * span;
        if (!member(u)) {
          outside = u;
          break;
        }
        inside = u;
      }
    }
    while (std::abs(outside - inside) > bisection_tol * std::max(1.0, std::abs(inside))) {
      double mid = 0.5 * (inside + outside);
      if (mid == inside || mid == outside) break;
      if (member(mid)) inside = mid;
      else outside = mid;
    }
    return inside;
  };

  double lo = refine(in_lo, -1.0);
  double hi = refine(in_hi, +1.0);
  if (lo == hi) return IntervalSet::point(lo);
  return IntervalSet({Interval::make(lo, hi, std::isfinite(lo), std::isfinite(hi))});
}

}  // namespace detail

/// dP_lambda f(x) as a single (possibly empty or unbounded) interval.
template <ScalarFunction F>
IntervalSet levprox_interval(const F& f, double lambda, double x, double step = 1e-3, const Tolerances& tol = {},
                             double max_half_width = kMaxHalfWidth) {
  if (!(lambda > 0.0)) throw InvalidArgument("levprox_interval: lambda must be positive");
  const double fx = f(x);
  if (!std::isfinite(fx)) return {};
  const auto gb = growth_bound_of(f);
  const double u0 = 4.0 * (1.0 + std::abs(x) / lambda + detail::slope_bound(f, x));
  const auto refine = detail::refinement_points(x, step);

  // Narrow oracle sized for the scan range; the full window is built lazily
  // for expansion towards unbounded endpoints.
  const double w_narrow = detail::minorant_window(lambda, 2.0 * u0, fx, x, gb, max_half_width);
  MinorantOracle narrow(f, lambda, detail::multires_points(x, x - w_narrow, x + w_narrow, step, refine));
  std::optional<MinorantOracle> full;
  const double u_narrow = w_narrow >= max_half_width ? kInf : 2.0 * u0;

  auto member = [&](double u) {
    const MinorantOracle* o = &narrow;
    if (std::abs(u) > u_narrow) {
      if (!full) full.emplace(f, lambda, detail::multires_points(x, x - max_half_width, x + max_half_width, step, refine));
      o = &*full;
    }
    return o->worst_violation(fx, x, u).violation <= tol.membership_slack;
  };
  const double u_max = std::max(max_half_width / (8.0 * lambda) - 1.0, 2.0 * u0);
  auto seeds = detail::critical_slopes(f, x, step);
  return detail::interval_by_bisection(member, u0, u_max, seeds, tol.bisection_tol);
}

/// Fenchel (convex-analysis) subdifferential: affine minorants through (x, f(x)).
template <ScalarFunction F>
IntervalSet fenchel_subdiff(const F& f, double x, double step = 1e-3, const Tolerances& tol = {},
                            double half_width = kMaxHalfWidth) {
  const double fx = f(x);
  if (!std::isfinite(fx)) return {};
  MinorantOracle oracle(f, kInf, detail::multires_points(x, x - half_width, x + half_width, step, detail::refinement_points(x, step)));
  auto member = [&](double u) { return oracle.worst_violation(fx, x, u).violation <= tol.membership_slack; };
  const double u0 = 4.0 * (1.0 + detail::slope_bound(f, x));
  auto seeds = detail::critical_slopes(f, x, step);
  return detail::interval_by_bisection(member, u0, 1e6, seeds, tol.bisection_tol);
}

/// u in dP_lambda f(x)  <=>  x in P_lambda f(x + lambda u).
inline bool levprox_member_via_prox(const CatalogFunction& f, double lambda, double x, double u, double step = 1e-3,
                                    const Tolerances& tol = {}) {
  if (!std::isfinite(f(x))) return false;
  return prox(f, lambda, x + lambda * u, step, tol).contains(x, 2.0 * step);
}

template <ScalarFunction F>
bool levprox_member_via_prox_brute(const F& f, double lambda, double x, double u, double step = 1e-3,
                                   const Tolerances& tol = {}) {
  if (!std::isfinite(f(x))) return false;
  return prox_brute(f, lambda, x + lambda * u, step, tol).argmin.contains(x, 2.0 * step);
}

/// Smallest lambda-level at which u was found to be a proximal subgradient,
/// scanning the ladder in order. nullopt means "not found at the probed
/// levels", which does not prove non-membership.
template <ScalarFunction F>
std::optional<double> proximal_member_level(const F& f, double x, double u, std::span<const double> lambda_ladder,
                                            double step = 1e-3, const Tolerances& tol = {}) {
  for (double lambda : lambda_ladder)
    if (levprox_member(f, lambda, x, u, step, tol).member) return lambda;
  return std::nullopt;
}

template <ScalarFunction F>
bool proximal_member(const F& f, double x, double u, std::span<const double> lambda_ladder, double step = 1e-3,
                     const Tolerances& tol = {}) {
  return proximal_member_level(f, x, u, lambda_ladder, step, tol).has_value();
}

/// Default ladder 2^0, 2^-1, ..., 2^-20.
inline std::vector<double> default_proximal_ladder() {
  std::vector<double> out;
  for (int k = 0; k <= 20; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

inline IntervalSet limiting_subdiff(const CatalogFunction& f, double x) {
  if (!f.closed_limiting_subdiff) throw NotAvailable(f.id + ": no closed form for the limiting subdifferential");
  return f.closed_limiting_subdiff(x);
}

inline IntervalSet proximal_subdiff(const CatalogFunction& f, double x) {
  if (!f.closed_proximal_subdiff) throw NotAvailable(f.id + ": no closed form for the proximal subdifferential");
  return f.closed_proximal_subdiff(x);
}

}  // namespace levprox
