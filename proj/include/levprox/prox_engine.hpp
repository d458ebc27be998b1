// Grid oracle for the proximal mapping
//
//   P_lambda f(x) = argmin_y { f(y) + (1/(2 lambda)) (y - x)^2 }
//
// and the Moreau envelope (the minimum value), plus a dispatcher that prefers
// catalog closed forms and a probe for the prox-boundedness threshold.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"

namespace levprox {

struct ProxResult {
  IntervalSet argmin;
  double optimal_value = kInf;
  /// Grid points whose objective is within `gap` of `optimal_value`.
  std::vector<double> certificate;
  double gap = 0.0;
  /// Window actually scanned.
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// Initial half width of the automatic search window around x.
inline double default_half_width(double lambda) { return 8.0 * lambda + 8.0; }
inline constexpr double kMaxHalfWidth = 1024.0;

namespace detail {

inline double prox_objective(double fy, double y, double x, double lambda) {
  if (fy == kInf) return kInf;
  double d = y - x;
  return fy + d * d / (2.0 * lambda);
}

struct Scan {
  std::vector<double> ys;
  std::vector<double> obj;
};

template <ScalarFunction F>
Scan scan_objective(const F& f, double lambda, double x, double lo, double hi, const Lattice& lat) {
  Scan s;
  s.ys = lat.points(lo, hi);
  s.obj.resize(s.ys.size());
  for (std::size_t i = 0; i < s.ys.size(); ++i) s.obj[i] = prox_objective(f(s.ys[i]), s.ys[i], x, lambda);
  return s;
}

// Objective decreasing into the window edge: the minimum lies outside.
inline bool minimum_at_edge(const std::vector<double>& obj) {
  const std::size_t n = obj.size();
  if (n < 6) return true;
  double edge = std::min({obj[0], obj[1], obj[n - 2], obj[n - 1]});
  double interior = *std::min_element(obj.begin() + 2, obj.end() - 2);
  if (edge == kInf) return false;
  if (interior == kInf) return true;
  return edge < interior - 1e-12 * std::max(1.0, std::abs(interior));
}

inline ProxResult select_argmin(const Scan& s, double lambda, double x, double step, const Tolerances& tol) {
  ProxResult r;
  const auto& obj = s.obj;
  auto it = std::min_element(obj.begin(), obj.end());
  if (it == obj.end() || *it == kInf) throw InvalidArgument("prox: no point of dom f inside the scanned window");
  const std::size_t m = static_cast<std::size_t>(it - obj.begin());
  const double best = *it;

  const std::size_t n = obj.size();

  // One-sided finite-difference slopes at a run of lattice minimizers [a, b]
  // bound how much lower the continuous minimum can sit between lattice
  // points. Jumps are capped by the slope of the quadratic term.
  auto local_gap = [&](std::size_t a, std::size_t b) {
    double s_left = a > 0 ? (obj[a - 1] - obj[a]) / step : kInf;
    double s_right = b + 1 < n ? (obj[b + 1] - obj[b]) / step : kInf;
    double cap = 1.0 + std::abs(x - s.ys[a]) / lambda;
    return tol.argmin_gap + step * std::min({s_left, s_right, cap});
  };
  r.gap = local_gap(m, m);
  r.optimal_value = best;

  // Basins whose discrete minimum ties the global one within the gap; each
  // contributes the points within its own local gap.
  std::vector<double> pts;
  std::vector<double> weights;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && obj[j + 1] == obj[i]) ++j;
    const bool left_ok = i == 0 || obj[i - 1] > obj[i];
    const bool right_ok = j + 1 == n || obj[j + 1] > obj[j];
    if (left_ok && right_ok && obj[i] <= best + r.gap && obj[i] != kInf) {
      const double level = obj[i] + local_gap(i, j);
      std::size_t a = i;
      std::size_t b = j;
      while (a > 0 && obj[a - 1] <= level) --a;
      while (b + 1 < n && obj[b + 1] <= level) ++b;
      for (std::size_t k = a; k <= b; ++k) {
        if (!pts.empty() && s.ys[k] <= pts.back()) continue;
        pts.push_back(s.ys[k]);
        weights.push_back(level - obj[k] + 1e-300);
      }
    }
    i = j + 1;
  }
  r.certificate = pts;
  r.argmin = cluster_points(pts, weights, step);
  r.window_lo = s.ys.front();
  r.window_hi = s.ys.back();
  return r;
}

template <ScalarFunction F>
ProxResult prox_scan_auto(const F& f, double lambda, double x, double step, const Tolerances& tol,
                          double max_half_width) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("prox: lambda must be positive and finite");
  if (!std::isfinite(x)) throw InvalidArgument("prox: x must be finite");
  Lattice lat(step);
  double h = default_half_width(lambda);
  for (;;) {
    Scan s = scan_objective(f, lambda, x, x - h, x + h, lat);
    bool all_inf = std::all_of(s.obj.begin(), s.obj.end(), [](double v) { return v == kInf; });
    if (!all_inf && !minimum_at_edge(s.obj)) return select_argmin(s, lambda, x, step, tol);
    if (h >= max_half_width) {
      if (all_inf) throw InvalidArgument("prox: no point of dom f inside the largest window");
      throw Unbounded("prox objective decreases to the edge of the largest window; lambda is at or above the prox threshold");
    }
    h = std::min(2.0 * h, max_half_width);
  }
}

}  // namespace detail

/// Brute-force proximal mapping on an automatically expanded lattice window.
template <ScalarFunction F>
ProxResult prox_brute(const F& f, double lambda, double x, double step = 1e-3, const Tolerances& tol = {},
                      double max_half_width = kMaxHalfWidth) {
  return detail::prox_scan_auto(f, lambda, x, step, tol, max_half_width);
}

/// Brute-force proximal mapping over an explicit grid (no expansion).
template <ScalarFunction F>
ProxResult prox_brute(const F& f, double lambda, double x, const GridSpec& grid, const Tolerances& tol = {}) {
  if (!(lambda > 0.0)) throw InvalidArgument("prox: lambda must be positive");
  grid.validate();
  auto s = detail::scan_objective(f, lambda, x, grid.lo, grid.hi, Lattice(grid.step));
  return detail::select_argmin(s, lambda, x, grid.step, tol);
}

/// min over the lattice window of f(y) + (y - x)^2 / (2 lambda).
template <ScalarFunction F>
double moreau_envelope_brute(const F& f, double lambda, double x, double step = 1e-3,
                             double max_half_width = kMaxHalfWidth) {
  return detail::prox_scan_auto(f, lambda, x, step, Tolerances{}, max_half_width).optimal_value;
}

/// Closed form when the catalog provides one, otherwise the grid oracle.
/// Throws Unbounded for lambda at or above the prox threshold.
inline IntervalSet prox(const CatalogFunction& f, double lambda, double x, double step = 1e-3,
                        const Tolerances& tol = {}) {
  if (!(lambda > 0.0)) throw InvalidArgument("prox: lambda must be positive");
  if (lambda >= f.lambda_f) throw Unbounded(f.id + ": lambda >= prox threshold " + std::to_string(f.lambda_f));
  if (f.closed_prox) return f.closed_prox(lambda, x);
  return prox_brute(f, lambda, x, step, tol).argmin;
}

/// Samples (x, P_lambda f(x)) over the abscissae of `xs`.
inline OperatorGraph1D prox_graph(const CatalogFunction& f, double lambda, const GridSpec& xs, double step = 1e-3,
                                  const Tolerances& tol = {}) {
  OperatorGraph1D g;
  for (double x : xs.points()) g.push_back(x, prox(f, lambda, x, step, tol));
  return g;
}

template <ScalarFunction F>
OperatorGraph1D prox_graph_brute(const F& f, double lambda, const GridSpec& xs, double step = 1e-3,
                                 const Tolerances& tol = {}) {
  OperatorGraph1D g;
  for (double x : xs.points()) g.push_back(x, prox_brute(f, lambda, x, step, tol).argmin);
  return g;
}

/// Largest probed lambda for which f + |.|^2/(2 lambda) stays bounded below on
/// the expanding window; +inf when every probe is bounded.
template <ScalarFunction F>
ExtReal estimate_lambda_f(const F& f, std::span<const double> ladder, double step = 1e-2,
                          double max_half_width = kMaxHalfWidth) {
  double best = 0.0;
  bool all_bounded = true;
  for (double lambda : ladder) {
    try {
      detail::prox_scan_auto(f, lambda, 0.0, step, Tolerances{}, max_half_width);
      best = std::max(best, lambda);
    } catch (const Unbounded&) {
      all_bounded = false;
    }
  }
  if (all_bounded) return ExtReal::pos_inf();
  return best;
}

// ---------------------------------------------------------------------------
// Two-dimensional grid oracle, used to cross-check the radial closed forms.
// ---------------------------------------------------------------------------

struct ProxResult2D {
  std::vector<Vec> argmin;
  double optimal_value = kInf;
};

inline ProxResult2D prox_brute_2d(const NDFunction& f, double lambda, const Vec& x, double step, double half_width,
                                  double gap) {
  if (f.dimension != 2 || x.size() != 2) throw InvalidArgument("prox_brute_2d: two-dimensional input required");
  Lattice lat(step);
  auto xs = lat.points(x[0] - half_width, x[0] + half_width);
  auto ys = lat.points(x[1] - half_width, x[1] + half_width);
  std::vector<double> obj(xs.size() * ys.size());
  double best = kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      Vec p{xs[i], ys[j]};
      double fv = f(p);
      double d0 = p[0] - x[0];
      double d1 = p[1] - x[1];
      double v = fv == kInf ? kInf : fv + (d0 * d0 + d1 * d1) / (2.0 * lambda);
      obj[i * ys.size() + j] = v;
      best = std::min(best, v);
    }
  }
  ProxResult2D r;
  r.optimal_value = best;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      if (obj[i * ys.size() + j] <= best + gap) r.argmin.push_back({xs[i], ys[j]});
  return r;
}

}  // namespace levprox
