// Reference functions with hand-derived closed forms for their proximal
// mappings, level proximal / proximal / limiting subdifferentials and the
// resolvents of the latter two.
#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "levprox/core.hpp"

namespace levprox {

struct CatalogFunction {
  using LambdaMap = std::function<IntervalSet(double lambda, double x)>;
  using PointMap = std::function<IntervalSet(double x)>;

  std::string id;
  std::function<double(double)> eval;
  /// Prox-boundedness threshold.
  double lambda_f = kInf;

  LambdaMap closed_prox;
  LambdaMap closed_levprox;
  PointMap closed_proximal_subdiff;
  PointMap closed_limiting_subdiff;
  /// (Id + lambda * limiting subdifferential)^{-1}
  LambdaMap closed_limiting_resolvent;
  /// (Id + lambda * proximal subdifferential)^{-1}
  LambdaMap closed_proximal_resolvent;

  /// Smallest rho with f + (rho/2)|.|^2 convex; +inf when no such rho exists.
  std::optional<double> hypoconvex_modulus;
  std::optional<GrowthBound> growth;

  /// Set for functions with a Lipschitz derivative.
  std::function<double(double)> gradient;
  double gradient_lipschitz = kInf;

  double operator()(double x) const { return eval(x); }
  std::optional<GrowthBound> growth_bound() const { return growth; }

  /// True when f + (1/(2 lambda))|.|^2 is convex according to the modulus.
  bool hypoconvex_at(double lambda) const {
    return hypoconvex_modulus && *hypoconvex_modulus <= 1.0 / lambda;
  }
};

namespace detail {

inline double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace detail

namespace catalog {

/// Indicator of {-1, 1}.
inline CatalogFunction indicator_pm1() {
  CatalogFunction f;
  f.id = "indicator-pm1";
  f.eval = [](double x) { return (x == 1.0 || x == -1.0) ? 0.0 : kInf; };
  f.closed_prox = [](double, double x) {
    if (x == 0.0) return IntervalSet::points({-1.0, 1.0});
    return IntervalSet::point(detail::sgn(x));
  };
  f.closed_levprox = [](double lambda, double x) {
    if (x == 1.0) return IntervalSet::at_least(-1.0 / lambda);
    if (x == -1.0) return IntervalSet::at_most(1.0 / lambda);
    return IntervalSet{};
  };
  auto sub = [](double x) { return (x == 1.0 || x == -1.0) ? IntervalSet::real_line() : IntervalSet{}; };
  f.closed_proximal_subdiff = sub;
  f.closed_limiting_subdiff = sub;
  auto res = [](double, double) { return IntervalSet::points({-1.0, 1.0}); };
  f.closed_limiting_resolvent = res;
  f.closed_proximal_resolvent = res;
  f.hypoconvex_modulus = kInf;
  f.growth = GrowthBound{0.0, 0.0};
  return f;
}

/// f(0) = 0, f(x) = 1 elsewhere. Its prox is hard thresholding.
inline CatalogFunction zero_norm() {
  CatalogFunction f;
  f.id = "zero-norm";
  f.eval = [](double x) { return x == 0.0 ? 0.0 : 1.0; };
  f.closed_prox = [](double lambda, double x) {
    double t = std::sqrt(2.0 * lambda);
    double ax = std::abs(x);
    if (ax < t) return IntervalSet::point(0.0);
    if (ax == t) return IntervalSet::points({0.0, x});
    return IntervalSet::point(x);
  };
  f.closed_levprox = [](double lambda, double x) {
    if (x == 0.0) {
      double r = std::sqrt(2.0 / lambda);
      return IntervalSet::closed(-r, r);
    }
    if (std::abs(x) < std::sqrt(2.0 * lambda)) return IntervalSet{};
    return IntervalSet::point(0.0);
  };
  auto sub = [](double x) { return x == 0.0 ? IntervalSet::real_line() : IntervalSet::point(0.0); };
  f.closed_proximal_subdiff = sub;
  f.closed_limiting_subdiff = sub;
  auto res = [](double, double x) { return IntervalSet::points({0.0, x}); };
  f.closed_limiting_resolvent = res;
  f.closed_proximal_resolvent = res;
  f.hypoconvex_modulus = kInf;
  f.growth = GrowthBound{0.0, 0.0};
  return f;
}

/// f = 0 on x <= 0 and 1 on x > 0.
inline CatalogFunction step() {
  CatalogFunction f;
  f.id = "step";
  f.eval = [](double x) { return x <= 0.0 ? 0.0 : 1.0; };
  f.closed_prox = [](double lambda, double x) {
    double t = std::sqrt(2.0 * lambda);
    if (x <= 0.0 || x > t) return IntervalSet::point(x);
    if (x < t) return IntervalSet::point(0.0);
    return IntervalSet::points({0.0, t});
  };
  f.closed_levprox = [](double lambda, double x) {
    if (x == 0.0) return IntervalSet::closed(0.0, std::sqrt(2.0 / lambda));
    if (x > 0.0 && x < std::sqrt(2.0 * lambda)) return IntervalSet{};
    return IntervalSet::point(0.0);
  };
  auto sub = [](double x) { return x == 0.0 ? IntervalSet::at_least(0.0) : IntervalSet::point(0.0); };
  f.closed_proximal_subdiff = sub;
  f.closed_limiting_subdiff = sub;
  auto res = [](double, double x) { return x >= 0.0 ? IntervalSet::points({0.0, x}) : IntervalSet::point(x); };
  f.closed_limiting_resolvent = res;
  f.closed_proximal_resolvent = res;
  f.hypoconvex_modulus = kInf;
  f.growth = GrowthBound{0.0, 0.0};
  return f;
}

/// f = -|x|, the one-dimensional slice of the negative Euclidean norm.
inline CatalogFunction neg_norm_1d() {
  CatalogFunction f;
  f.id = "neg-norm";
  f.eval = [](double x) { return -std::abs(x); };
  f.closed_prox = [](double lambda, double x) {
    if (x == 0.0) return IntervalSet::points({-lambda, lambda});
    return IntervalSet::point(x + lambda * detail::sgn(x));
  };
  f.closed_levprox = [](double lambda, double x) {
    // At x = 0 the set is empty: it sits inside the (empty) proximal
    // subdifferential there.
    if (std::abs(x) >= lambda) return IntervalSet::point(-detail::sgn(x));
    return IntervalSet{};
  };
  f.closed_proximal_subdiff = [](double x) {
    return x == 0.0 ? IntervalSet{} : IntervalSet::point(-detail::sgn(x));
  };
  f.closed_limiting_subdiff = [](double x) {
    return x == 0.0 ? IntervalSet::points({-1.0, 1.0}) : IntervalSet::point(-detail::sgn(x));
  };
  f.closed_limiting_resolvent = [](double lambda, double x) {
    if (x == 0.0) return IntervalSet::points({-lambda, lambda});
    double s = detail::sgn(x);
    if (std::abs(x) <= lambda) return IntervalSet::points({x + lambda * s, x - lambda * s});
    return IntervalSet::point(x + lambda * s);
  };
  f.closed_proximal_resolvent = [](double lambda, double x) {
    if (x == 0.0) return IntervalSet::points({-lambda, lambda});
    double s = detail::sgn(x);
    if (std::abs(x) < lambda) return IntervalSet::points({x + lambda * s, x - lambda * s});
    return IntervalSet::point(x + lambda * s);
  };
  f.hypoconvex_modulus = kInf;
  f.growth = GrowthBound{0.0, 1.0};
  return f;
}

inline CatalogFunction zero() {
  CatalogFunction f;
  f.id = "zero";
  f.eval = [](double) { return 0.0; };
  f.closed_prox = [](double, double x) { return IntervalSet::point(x); };
  f.closed_levprox = [](double, double) { return IntervalSet::point(0.0); };
  f.closed_proximal_subdiff = [](double) { return IntervalSet::point(0.0); };
  f.closed_limiting_subdiff = f.closed_proximal_subdiff;
  f.closed_limiting_resolvent = f.closed_prox;
  f.closed_proximal_resolvent = f.closed_prox;
  f.hypoconvex_modulus = 0.0;
  f.growth = GrowthBound{0.0, 0.0};
  f.gradient = [](double) { return 0.0; };
  f.gradient_lipschitz = 0.0;
  return f;
}

inline CatalogFunction abs() {
  CatalogFunction f;
  f.id = "abs";
  f.eval = [](double x) { return std::abs(x); };
  f.closed_prox = [](double lambda, double x) {
    return IntervalSet::point(detail::sgn(x) * std::max(std::abs(x) - lambda, 0.0));
  };
  auto sub = [](double x) { return x == 0.0 ? IntervalSet::closed(-1.0, 1.0) : IntervalSet::point(detail::sgn(x)); };
  f.closed_levprox = [sub](double, double x) { return sub(x); };
  f.closed_proximal_subdiff = sub;
  f.closed_limiting_subdiff = sub;
  f.closed_limiting_resolvent = f.closed_prox;
  f.closed_proximal_resolvent = f.closed_prox;
  f.hypoconvex_modulus = 0.0;
  f.growth = GrowthBound{0.0, 0.0};
  return f;
}

/// f = x^2 / 2
inline CatalogFunction quad() {
  CatalogFunction f;
  f.id = "quad";
  f.eval = [](double x) { return 0.5 * x * x; };
  f.closed_prox = [](double lambda, double x) { return IntervalSet::point(x / (1.0 + lambda)); };
  f.closed_levprox = [](double, double x) { return IntervalSet::point(x); };
  f.closed_proximal_subdiff = [](double x) { return IntervalSet::point(x); };
  f.closed_limiting_subdiff = f.closed_proximal_subdiff;
  f.closed_limiting_resolvent = f.closed_prox;
  f.closed_proximal_resolvent = f.closed_prox;
  f.hypoconvex_modulus = 0.0;
  f.growth = GrowthBound{0.0, 0.0};
  f.gradient = [](double x) { return x; };
  f.gradient_lipschitz = 1.0;
  return f;
}

/// f = -(alpha/2) x^2, prox-bounded with threshold 1/alpha.
inline CatalogFunction neg_quad(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("neg-quad: alpha must be positive");
  CatalogFunction f;
  f.id = "neg-quad:" + detail::format_number(alpha);
  f.eval = [alpha](double x) { return -0.5 * alpha * x * x; };
  f.lambda_f = 1.0 / alpha;
  auto prox = [alpha](double lambda, double x) {
    if (!(lambda * alpha < 1.0)) return IntervalSet{};
    return IntervalSet::point(x / (1.0 - alpha * lambda));
  };
  f.closed_prox = prox;
  f.closed_levprox = [alpha](double lambda, double x) {
    if (lambda * alpha > 1.0) return IntervalSet{};
    return IntervalSet::point(-alpha * x);
  };
  f.closed_proximal_subdiff = [alpha](double x) { return IntervalSet::point(-alpha * x); };
  f.closed_limiting_subdiff = f.closed_proximal_subdiff;
  f.closed_limiting_resolvent = prox;
  f.closed_proximal_resolvent = prox;
  f.hypoconvex_modulus = alpha;
  f.gradient = [alpha](double x) { return -alpha * x; };
  f.gradient_lipschitz = alpha;
  return f;
}

/// The eight one-dimensional reference functions; neg-quad uses alpha = 2.
inline std::vector<CatalogFunction> list() {
  return {indicator_pm1(), zero_norm(), step(), neg_norm_1d(), zero(), abs(), quad(), neg_quad(2.0)};
}

/// Looks up an id such as "zero-norm", "neg_norm_1d" or "neg-quad:3".
inline std::optional<CatalogFunction> find(std::string id) {
  for (auto& c : id)
    if (c == '_') c = '-';
  if (id == "neg-norm-1d") id = "neg-norm";
  if (id.rfind("neg-quad", 0) == 0) {
    double alpha = 2.0;
    if (id.size() > 8) {
      if (id[8] != ':' && id[8] != '-') return std::nullopt;
      try {
        std::size_t used = 0;
        alpha = std::stod(id.substr(9), &used);
        if (used != id.size() - 9) return std::nullopt;
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) return std::nullopt;
    return neg_quad(alpha);
  }
  for (auto& f : list())
    if (f.id == id) return f;
  return std::nullopt;
}

}  // namespace catalog

// ---------------------------------------------------------------------------
// n-dimensional values
// ---------------------------------------------------------------------------

using Vec = std::vector<double>;

inline double norm(const Vec& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

struct EmptySet {
  friend bool operator==(const EmptySet&, const EmptySet&) = default;
};
struct Singleton {
  Vec point;
  friend bool operator==(const Singleton&, const Singleton&) = default;
};
struct FiniteSet {
  std::vector<Vec> points;
  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
};
struct Sphere {
  Vec center;
  double radius = 0.0;
  friend bool operator==(const Sphere&, const Sphere&) = default;
};

using SetND = std::variant<EmptySet, Singleton, FiniteSet, Sphere>;

inline double distance(const SetND& s, const Vec& p) {
  auto dist = [&](const Vec& q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
    return std::sqrt(acc);
  };
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EmptySet>) {
          return kInf;
        } else if constexpr (std::is_same_v<T, Singleton>) {
          return dist(v.point);
        } else if constexpr (std::is_same_v<T, FiniteSet>) {
          double d = kInf;
          for (const auto& q : v.points) d = std::min(d, dist(q));
          return d;
        } else {
          return std::abs(dist(v.center) - v.radius);
        }
      },
      s);
}

struct NDFunction {
  std::string id;
  std::size_t dimension = 1;
  std::function<double(const Vec&)> eval;
  std::function<SetND(double lambda, const Vec& x)> closed_prox;
  std::function<SetND(double lambda, const Vec& x)> closed_levprox;
  double lambda_f = kInf;

  double operator()(const Vec& x) const { return eval(x); }
};

namespace catalog {

/// f(x) = -||x|| on R^n.
inline NDFunction neg_norm_nd(std::size_t n) {
  if (n == 0) throw InvalidArgument("neg-norm: dimension must be >= 1");
  NDFunction f;
  f.id = "neg-norm";
  f.dimension = n;
  f.eval = [](const Vec& x) { return -norm(x); };
  f.closed_prox = [n](double lambda, const Vec& x) -> SetND {
    double r = norm(x);
    if (r == 0.0) return Sphere{Vec(n, 0.0), lambda};
    Vec p = x;
    for (auto& c : p) c += lambda * c / r;
    return Singleton{p};
  };
  f.closed_levprox = [](double lambda, const Vec& x) -> SetND {
    double r = norm(x);
    if (r < lambda) return EmptySet{};
    Vec u = x;
    for (auto& c : u) c = -c / r;
    return Singleton{u};
  };
  return f;
}

inline std::vector<NDFunction> list_nd() { return {neg_norm_nd(1), neg_norm_nd(2), neg_norm_nd(3)}; }

}  // namespace catalog

}  // namespace levprox
