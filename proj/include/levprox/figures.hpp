// Resolvent branches plotted in the reference figures, sampled from explicit
// branch formulas (no grid search):
//
//   1a/1b  indicator of {-1, 1}: resolvents of the limiting and level-proximal subdifferentials
//   2a/2b  zero "norm", same pair
//   3a/3b  step function, same pair
//   4a/4b/4c  -|x|: limiting, proximal and level-proximal subdifferentials
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"

namespace levprox::figures {

struct Branch {
  std::string id;
  IntervalSet domain;
  std::function<double(double x)> value;
};

struct Figure {
  std::string id;
  std::string title;
  /// Half-range of the plot is 2 * scale.
  double scale = 1.0;
  std::vector<double> critical;
  std::vector<Branch> branches;
  /// The catalog closed form the branches must reproduce.
  std::function<IntervalSet(double x)> closed_form;
};

struct FigureRow {
  double x;
  double lo;
  double hi;
  std::string branch;
};

inline const std::vector<std::string>& ids() {
  static const std::vector<std::string> v = {"1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b", "4c"};
  return v;
}

namespace detail {

inline IntervalSet open_above(double a) { return IntervalSet({Interval::make(a, kInf, false, false)}); }
inline IntervalSet open_below(double b) { return IntervalSet({Interval::make(-kInf, b, false, false)}); }

}  // namespace detail

/// Branch description of figure `id` for the given lambda; nullopt for an unknown id.
inline std::optional<Figure> make_figure(const std::string& id, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("figure: lambda must be positive");
  const double t = std::sqrt(2.0 * lambda);
  const IntervalSet all = IntervalSet::real_line();
  auto konst = [](double c) { return [c](double) { return c; }; };
  auto ident = [](double x) { return x; };
  auto shift = [](double d) { return [d](double x) { return x + d; }; };
  Figure f;
  f.id = id;
  if (id == "1a" || id == "1b") {
    auto c = catalog::indicator_pm1();
    f.scale = 1.0;
    f.critical = {-1.0, 0.0, 1.0};
    if (id == "1a") {
      f.title = "indicator of {-1,1}: resolvent of the limiting subdifferential";
      f.branches = {{"-1", all, konst(-1.0)}, {"1", all, konst(1.0)}};
      f.closed_form = [c, lambda](double x) { return c.closed_limiting_resolvent(lambda, x); };
    } else {
      f.title = "indicator of {-1,1}: resolvent of the level proximal subdifferential";
      f.branches = {{"-1", IntervalSet::at_most(0.0), konst(-1.0)}, {"1", IntervalSet::at_least(0.0), konst(1.0)}};
      f.closed_form = [c, lambda](double x) { return c.closed_prox(lambda, x); };
    }
  } else if (id == "2a" || id == "2b") {
    auto c = catalog::zero_norm();
    f.scale = t;
    f.critical = {-t, 0.0, t};
    if (id == "2a") {
      f.title = "zero norm: resolvent of the limiting subdifferential";
      f.branches = {{"0", all, konst(0.0)}, {"x", all, ident}};
      f.closed_form = [c, lambda](double x) { return c.closed_limiting_resolvent(lambda, x); };
    } else {
      f.title = "zero norm: resolvent of the level proximal subdifferential";
      f.branches = {{"0", IntervalSet::closed(-t, t), konst(0.0)},
                    {"x", IntervalSet::at_most(-t).unite(IntervalSet::at_least(t)), ident}};
      f.closed_form = [c, lambda](double x) { return c.closed_prox(lambda, x); };
    }
  } else if (id == "3a" || id == "3b") {
    auto c = catalog::step();
    f.scale = t;
    f.critical = {0.0, t};
    if (id == "3a") {
      f.title = "step: resolvent of the limiting subdifferential";
      f.branches = {{"x", all, ident}, {"0", IntervalSet::at_least(0.0), konst(0.0)}};
      f.closed_form = [c, lambda](double x) { return c.closed_limiting_resolvent(lambda, x); };
    } else {
      f.title = "step: resolvent of the level proximal subdifferential";
      f.branches = {{"x", IntervalSet::at_most(0.0).unite(IntervalSet::at_least(t)), ident},
                    {"0", IntervalSet({Interval::make(0.0, t, false, true)}), konst(0.0)}};
      f.closed_form = [c, lambda](double x) { return c.closed_prox(lambda, x); };
    }
  } else if (id == "4a" || id == "4b" || id == "4c") {
    auto c = catalog::neg_norm_1d();
    f.scale = lambda;
    f.critical = {-lambda, 0.0, lambda};
    if (id == "4a") {
      f.title = "-|x|: resolvent of the limiting subdifferential";
      f.branches = {{"x+lambda", IntervalSet::at_least(-lambda), shift(lambda)},
                    {"x-lambda", IntervalSet::at_most(lambda), shift(-lambda)}};
      f.closed_form = [c, lambda](double x) { return c.closed_limiting_resolvent(lambda, x); };
    } else if (id == "4b") {
      f.title = "-|x|: resolvent of the proximal subdifferential";
      f.branches = {{"x+lambda", detail::open_above(-lambda), shift(lambda)},
                    {"x-lambda", detail::open_below(lambda), shift(-lambda)}};
      f.closed_form = [c, lambda](double x) { return c.closed_proximal_resolvent(lambda, x); };
    } else {
      f.title = "-|x|: resolvent of the level proximal subdifferential";
      f.branches = {{"x+lambda", IntervalSet::at_least(0.0), shift(lambda)},
                    {"x-lambda", IntervalSet::at_most(0.0), shift(-lambda)}};
      f.closed_form = [c, lambda](double x) { return c.closed_prox(lambda, x); };
    }
  } else {
    return std::nullopt;
  }
  return f;
}

/// 401 evenly spaced abscissae over [-2 scale, 2 scale] plus the critical points.
inline std::vector<double> sample_points(const Figure& f) {
  std::vector<double> xs;
  const double s = f.scale;
  for (int i = 0; i <= 400; ++i) xs.push_back(-2.0 * s + 4.0 * s * static_cast<double>(i) / 400.0);
  xs.insert(xs.end(), f.critical.begin(), f.critical.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// One row per (x, active branch).
inline std::vector<FigureRow> rows(const Figure& f) {
  std::vector<FigureRow> out;
  for (double x : sample_points(f))
    for (const auto& b : f.branches)
      if (b.domain.contains(x)) {
        double v = b.value(x);
        out.push_back({x, v, v, b.id});
      }
  return out;
}

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

/// CSV with a commented header recording the run parameters.
inline std::string to_csv(const Figure& f, const std::vector<FigureRow>& rs, double lambda) {
  std::string s = "# figure=" + f.id + " lambda=" + format_exact(lambda) + " samples=401+critical source=closed-form\n";
  s += "# " + f.title + "\n";
  s += "x,branch_lo,branch_hi,branch_id\n";
  for (const auto& r : rs) s += format_exact(r.x) + "," + format_exact(r.lo) + "," + format_exact(r.hi) + "," + r.branch + "\n";
  return s;
}

/// Minimal static rendering: one polyline per contiguous run of a branch.
inline std::string to_svg(const Figure& f, const std::vector<FigureRow>& rs, double lambda) {
  const double W = 480.0;
  const double H = 480.0;
  const double pad = 30.0;
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& r : rs) {
    xmin = std::min(xmin, r.x);
    xmax = std::max(xmax, r.x);
    ymin = std::min(ymin, r.lo);
    ymax = std::max(ymax, r.hi);
  }
  if (rs.empty()) xmin = ymin = -1.0, xmax = ymax = 1.0;
  if (ymax - ymin < 1e-12) ymin -= 1.0, ymax += 1.0;
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  s += "<!-- figure " + f.id + ", lambda=" + format_exact(lambda) + " -->\n";
  s += "<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
  char buf[160];
  if (xmin <= 0.0 && xmax >= 0.0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#999\"/>\n", px(0), pad, px(0), H - pad);
    s += buf;
  }
  if (ymin <= 0.0 && ymax >= 0.0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#999\"/>\n", pad, py(0), W - pad, py(0));
    s += buf;
  }
  const auto xs = sample_points(f);
  for (std::size_t b = 0; b < f.branches.size(); ++b) {
    const auto& br = f.branches[b];
    std::string pts;
    auto flush = [&]() {
      if (!pts.empty())
        s += "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" + std::string(colors[b % 4]) + "\" points=\"" + pts + "\"/>\n";
      pts.clear();
    };
    for (double x : xs) {
      if (!br.domain.contains(x)) {
        flush();
        continue;
      }
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", pts.empty() ? "" : " ", px(x), py(br.value(x)));
      pts += buf;
    }
    flush();
  }
  s += "</svg>\n";
  return s;
}

}  // namespace levprox::figures
