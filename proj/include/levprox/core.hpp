// Extended reals, closed/open interval sets, sampled operator graphs and the
// grid/tolerance configuration shared by every oracle in the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace levprox {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Raised when the prox objective is not bounded below on the largest
/// admissible window (the parameter is at or above the prox threshold).
class Unbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a catalog entry lacks the closed form an operation needs.
class NotAvailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// ExtReal
// ---------------------------------------------------------------------------

/// A point of the extended real line: finite, -inf or +inf. NaN is rejected.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v)) throw InvalidArgument("ExtReal: NaN is not an extended real");
  }

  static ExtReal pos_inf() { return ExtReal(kInf); }
  static ExtReal neg_inf() { return ExtReal(-kInf); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == kInf; }
  bool is_neg_inf() const { return v_ == -kInf; }
  double value() const { return v_; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend std::partial_ordering operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

// ---------------------------------------------------------------------------
// Interval / IntervalSet
// ---------------------------------------------------------------------------

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval point(double t) { return {t, t, true, true}; }
  static Interval closed(double a, double b) { return make(a, b, true, true); }

  /// Validating constructor. Infinite endpoints are forced open.
  static Interval make(double a, double b, bool a_closed, bool b_closed) {
    if (std::isnan(a) || std::isnan(b)) throw InvalidArgument("Interval: NaN endpoint");
    if (a > b) throw InvalidArgument("Interval: lo > hi");
    if (a == b && (!a_closed || !b_closed)) throw InvalidArgument("Interval: degenerate interval must be closed");
    if (std::isinf(a) && a == b) throw InvalidArgument("Interval: infinite point");
    Interval iv{a, b, a_closed, b_closed};
    if (std::isinf(a)) iv.lo_closed = false;
    if (std::isinf(b)) iv.hi_closed = false;
    return iv;
  }

  bool is_point() const { return lo == hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

  bool contains(double t) const {
    if (t < lo || t > hi) return false;
    if (t == lo && !lo_closed) return false;
    if (t == hi && !hi_closed) return false;
    return true;
  }

  /// Distance from t to the closure of the interval.
  double distance(double t) const {
    if (t < lo) return lo - t;
    if (t > hi) return t - hi;
    return 0.0;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of pairwise-disjoint, non-adjacent intervals sorted by lower
/// endpoint. The empty list is the empty set.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> ivs) : ivs_(std::move(ivs)) { normalize(); }
  IntervalSet(std::initializer_list<Interval> ivs) : ivs_(ivs) { normalize(); }

  static IntervalSet empty_set() { return {}; }
  static IntervalSet point(double t) { return IntervalSet({Interval::point(t)}); }
  static IntervalSet points(std::span<const double> ts) {
    std::vector<Interval> v;
    v.reserve(ts.size());
    for (double t : ts) v.push_back(Interval::point(t));
    return IntervalSet(std::move(v));
  }
  static IntervalSet points(std::initializer_list<double> ts) {
    return points(std::span<const double>(ts.begin(), ts.size()));
  }
  static IntervalSet closed(double a, double b) { return IntervalSet({Interval::closed(a, b)}); }
  static IntervalSet real_line() { return IntervalSet({Interval::make(-kInf, kInf, false, false)}); }
  /// [a, +inf)
  static IntervalSet at_least(double a) { return IntervalSet({Interval::make(a, kInf, true, false)}); }
  /// (-inf, b]
  static IntervalSet at_most(double b) { return IntervalSet({Interval::make(-kInf, b, false, true)}); }

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool empty() const { return ivs_.empty(); }
  std::size_t size() const { return ivs_.size(); }

  bool bounded() const {
    return empty() || (std::isfinite(ivs_.front().lo) && std::isfinite(ivs_.back().hi));
  }
  bool bounded_below() const { return empty() || std::isfinite(ivs_.front().lo); }
  bool bounded_above() const { return empty() || std::isfinite(ivs_.back().hi); }
  bool is_finite_set() const {
    return std::all_of(ivs_.begin(), ivs_.end(), [](const Interval& i) { return i.is_point(); });
  }
  double min() const { return ivs_.front().lo; }
  double max() const { return ivs_.back().hi; }

  /// All isolated points, in increasing order (only meaningful for finite sets).
  std::vector<double> point_values() const {
    std::vector<double> out;
    for (const auto& iv : ivs_)
      if (iv.is_point()) out.push_back(iv.lo);
    return out;
  }

  /// Distance from t to the closure; +inf for the empty set.
  double distance(double t) const {
    double d = kInf;
    for (const auto& iv : ivs_) d = std::min(d, iv.distance(t));
    return d;
  }

  /// dist(t, S) <= slack. With zero slack the open/closed status is honored.
  bool contains(double t, double slack = 0.0) const {
    if (slack <= 0.0) {
      return std::any_of(ivs_.begin(), ivs_.end(), [t](const Interval& iv) { return iv.contains(t); });
    }
    return distance(t) <= slack;
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<Interval> v = ivs_;
    v.insert(v.end(), other.ivs_.begin(), other.ivs_.end());
    return IntervalSet(std::move(v));
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    for (const auto& a : ivs_) {
      for (const auto& b : other.ivs_) {
        double lo;
        bool lo_c;
        if (a.lo > b.lo) { lo = a.lo; lo_c = a.lo_closed; }
        else if (b.lo > a.lo) { lo = b.lo; lo_c = b.lo_closed; }
        else { lo = a.lo; lo_c = a.lo_closed && b.lo_closed; }
        double hi;
        bool hi_c;
        if (a.hi < b.hi) { hi = a.hi; hi_c = a.hi_closed; }
        else if (b.hi < a.hi) { hi = b.hi; hi_c = b.hi_closed; }
        else { hi = a.hi; hi_c = a.hi_closed && b.hi_closed; }
        if (lo > hi) continue;
        if (lo == hi && !(lo_c && hi_c)) continue;
        out.push_back(Interval::make(lo, hi, lo_c, hi_c));
      }
    }
    return IntervalSet(std::move(out));
  }

  /// Complement within the real line.
  IntervalSet complement() const {
    std::vector<Interval> out;
    double cur = -kInf;
    bool cur_closed = false;
    for (const auto& iv : ivs_) {
      if (iv.lo > cur || (iv.lo == cur && cur_closed && !iv.lo_closed)) {
        bool hi_c = !iv.lo_closed;
        if (cur < iv.lo || (cur_closed && hi_c)) out.push_back(Interval::make(cur, iv.lo, cur_closed, hi_c));
      }
      cur = iv.hi;
      cur_closed = !iv.hi_closed;
    }
    if (cur < kInf) out.push_back(Interval::make(cur, kInf, cur_closed, false));
    return IntervalSet(std::move(out));
  }

  /// Minkowski sum. The empty set absorbs.
  IntervalSet minkowski_sum(const IntervalSet& other) const {
    if (empty() || other.empty()) return {};
    std::vector<Interval> out;
    for (const auto& a : ivs_) {
      for (const auto& b : other.ivs_) {
        double lo = a.lo + b.lo;
        double hi = a.hi + b.hi;
        out.push_back(Interval::make(lo, hi, a.lo_closed && b.lo_closed, a.hi_closed && b.hi_closed));
      }
    }
    return IntervalSet(std::move(out));
  }

  IntervalSet translate(double d) const {
    std::vector<Interval> out = ivs_;
    for (auto& iv : out) {
      iv.lo += d;
      iv.hi += d;
    }
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize() {
    for (auto& iv : ivs_) iv = Interval::make(iv.lo, iv.hi, iv.lo_closed, iv.hi_closed);
    std::sort(ivs_.begin(), ivs_.end(), [](const Interval& a, const Interval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_closed && !b.lo_closed;
    });
    std::vector<Interval> merged;
    for (const auto& iv : ivs_) {
      if (!merged.empty()) {
        Interval& last = merged.back();
        bool touches = iv.lo < last.hi || (iv.lo == last.hi && (last.hi_closed || iv.lo_closed));
        if (touches) {
          if (iv.hi > last.hi) {
            last.hi = iv.hi;
            last.hi_closed = iv.hi_closed;
          } else if (iv.hi == last.hi) {
            last.hi_closed = last.hi_closed || iv.hi_closed;
          }
          if (iv.lo == last.lo) last.lo_closed = last.lo_closed || iv.lo_closed;
          continue;
        }
      }
      merged.push_back(iv);
    }
    ivs_ = std::move(merged);
  }

  std::vector<Interval> ivs_;
};

namespace detail {

// sup over a in A of dist(a, B), using closures.
inline double directed_hausdorff(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return kInf;
  if (!a.bounded_above() && b.bounded_above()) return kInf;
  if (!a.bounded_below() && b.bounded_below()) return kInf;
  double worst = 0.0;
  const auto& bs = b.intervals();
  for (const auto& iv : a.intervals()) {
    if (std::isfinite(iv.lo)) worst = std::max(worst, b.distance(iv.lo));
    if (std::isfinite(iv.hi)) worst = std::max(worst, b.distance(iv.hi));
    // Interior maxima sit at midpoints of the gaps of B.
    for (std::size_t k = 0; k + 1 < bs.size(); ++k) {
      double g0 = bs[k].hi;
      double g1 = bs[k + 1].lo;
      double mid = 0.5 * (g0 + g1);
      if (mid >= iv.lo && mid <= iv.hi) worst = std::max(worst, 0.5 * (g1 - g0));
    }
  }
  return worst;
}

}  // namespace detail

/// Symmetric Hausdorff distance between the closures. Both empty gives 0;
/// exactly one empty or a boundedness mismatch gives +inf.
inline ExtReal hausdorff_distance(const IntervalSet& a, const IntervalSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() != b.empty()) return ExtReal::pos_inf();
  return std::max(detail::directed_hausdorff(a, b), detail::directed_hausdorff(b, a));
}

/// Every point of `a` lies within `slack` of `b`. With zero slack the test is
/// exact containment, respecting open endpoints.
inline bool is_subset(const IntervalSet& a, const IntervalSet& b, double slack = 0.0) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  if (slack > 0.0) return detail::directed_hausdorff(a, b) <= slack;
  for (const auto& ia : a.intervals()) {
    bool inside = std::any_of(b.intervals().begin(), b.intervals().end(), [&](const Interval& ib) {
      bool lo_ok = ia.lo > ib.lo || (ia.lo == ib.lo && (ib.lo_closed || !ia.lo_closed));
      bool hi_ok = ia.hi < ib.hi || (ia.hi == ib.hi && (ib.hi_closed || !ia.hi_closed));
      return lo_ok && hi_ok;
    });
    if (!inside) return false;
  }
  return true;
}

/// Interval notation such as "[-1, 1] U {2}"; the empty set prints as "{}".
inline std::ostream& operator<<(std::ostream& os, const IntervalSet& s) {
  if (s.empty()) return os << "{}";
  bool first = true;
  for (const auto& iv : s.intervals()) {
    if (!first) os << " U ";
    first = false;
    if (iv.is_point()) os << "{" << iv.lo << "}";
    else os << (iv.lo_closed ? "[" : "(") << iv.lo << ", " << iv.hi << (iv.hi_closed ? "]" : ")");
  }
  return os;
}

inline bool intervalset_contains(const IntervalSet& s, double t, double slack = 0.0) {
  return s.contains(t, slack);
}

// ---------------------------------------------------------------------------
// Lattice, GridSpec, Tolerances
// ---------------------------------------------------------------------------

/// The points k*step, k integer. When 1/step is an integer the points are
/// computed as k/n so decimal abscissae such as 1.99 or -1 are hit exactly.
class Lattice {
 public:
  explicit Lattice(double step) : step_(step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("lattice step must be positive");
    double inv = 1.0 / step;
    double r = std::round(inv);
    if (r >= 1.0 && r < 1e15 && std::abs(inv - r) <= 1e-9 * r) inv_ = static_cast<std::int64_t>(r);
  }

  double step() const { return step_; }
  double at(std::int64_t k) const {
    return inv_ ? static_cast<double>(k) / static_cast<double>(inv_) : static_cast<double>(k) * step_;
  }
  std::int64_t ceil_index(double y) const { return static_cast<std::int64_t>(std::ceil(y / step_ - 1e-9)); }
  std::int64_t floor_index(double y) const { return static_cast<std::int64_t>(std::floor(y / step_ + 1e-9)); }
  std::int64_t nearest_index(double y) const { return static_cast<std::int64_t>(std::llround(y / step_)); }

  /// Lattice points inside [lo, hi].
  std::vector<double> points(double lo, double hi) const {
    std::vector<double> out;
    std::int64_t k0 = ceil_index(lo);
    std::int64_t k1 = floor_index(hi);
    if (k1 >= k0) out.reserve(static_cast<std::size_t>(k1 - k0 + 1));
    for (std::int64_t k = k0; k <= k1; ++k) out.push_back(at(k));
    return out;
  }

 private:
  double step_;
  std::int64_t inv_ = 0;
};

inline constexpr std::size_t kDefaultMaxGridPoints = 10'000'000;

/// Discretization window. Sample points are the lattice points k*step that
/// fall inside [lo, hi].
struct GridSpec {
  double lo = -5.0;
  double hi = 5.0;
  double step = 1e-3;

  void validate(std::size_t max_points = kDefaultMaxGridPoints) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw InvalidArgument("grid: need finite lo < hi");
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("grid: step must be positive");
    if ((hi - lo) / step > static_cast<double>(max_points))
      throw InvalidArgument("grid: too many points (" + std::to_string((hi - lo) / step) + ")");
  }

  std::vector<double> points() const {
    validate();
    return Lattice(step).points(lo, hi);
  }
};

struct Tolerances {
  /// Base near-optimality gap; the prox oracle adds a local discretization term.
  double argmin_gap = 1e-9;
  /// Slack allowed in the quadratic-minorant inequality (floating-point noise).
  double membership_slack = 1e-9;
  /// Set comparisons pass at max(2*step, hausdorff_tol).
  double hausdorff_tol = 1e-3;
  double bisection_tol = 1e-9;

  void validate() const {
    if (!(argmin_gap > 0.0) || !(hausdorff_tol > 0.0) || !(bisection_tol > 0.0) || !(membership_slack >= 0.0))
      throw InvalidArgument("tolerances: gap, hausdorff and bisection tolerances must be positive");
  }

  double set_tolerance(double step) const { return std::max(2.0 * step, hausdorff_tol); }
};

// ---------------------------------------------------------------------------
// OperatorGraph1D
// ---------------------------------------------------------------------------

struct GraphSample {
  double x = 0.0;
  IntervalSet value;
  friend bool operator==(const GraphSample&, const GraphSample&) = default;
};

/// Finite sample of the graph of a set-valued map on the line, with strictly
/// increasing abscissae.
class OperatorGraph1D {
 public:
  OperatorGraph1D() = default;

  /// Builds a graph from arbitrary (x, value) pairs. Abscissae closer than
  /// `merge_tol * max(1, |x|)` land in one bucket and their values are united.
  static OperatorGraph1D from_pairs(std::vector<GraphSample> pairs, double merge_tol = 1e-12) {
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    OperatorGraph1D g;
    for (auto& p : pairs) {
      if (!g.samples_.empty()) {
        auto& last = g.samples_.back();
        if (std::abs(p.x - last.x) <= merge_tol * std::max(1.0, std::abs(last.x))) {
          last.value = last.value.unite(p.value);
          continue;
        }
      }
      g.samples_.push_back(std::move(p));
    }
    return g;
  }

  void push_back(double x, IntervalSet value) {
    if (!samples_.empty() && !(x > samples_.back().x))
      throw InvalidArgument("OperatorGraph1D: abscissae must be strictly increasing");
    samples_.push_back({x, std::move(value)});
  }

  const std::vector<GraphSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  const IntervalSet* find(double x, double tol = 1e-12) const {
    auto it = std::lower_bound(samples_.begin(), samples_.end(), x - tol * std::max(1.0, std::abs(x)),
                               [](const GraphSample& s, double v) { return s.x < v; });
    if (it != samples_.end() && std::abs(it->x - x) <= tol * std::max(1.0, std::abs(x))) return &it->value;
    return nullptr;
  }

  friend bool operator==(const OperatorGraph1D&, const OperatorGraph1D&) = default;

 private:
  std::vector<GraphSample> samples_;
};

// ---------------------------------------------------------------------------
// Function concept
// ---------------------------------------------------------------------------

/// Anything callable as double -> double, returning +inf outside the domain.
template <class F>
concept ScalarFunction = std::is_invocable_r_v<double, const F&, double>;

/// Optional lower growth bound f(y) >= -a - b|y| on dom f, used to size the
/// window over which the global minorant inequality is sampled.
struct GrowthBound {
  double a = 0.0;
  double b = 0.0;
};

template <class F>
std::optional<GrowthBound> growth_bound_of(const F& f) {
  if constexpr (requires { f.growth_bound(); }) {
    return f.growth_bound();
  } else {
    return std::nullopt;
  }
}

/// Clusters sorted points: consecutive points closer than 1.5*step form one
/// cluster. Clusters no wider than 3*step collapse to their weighted mean;
/// wider clusters become closed intervals.
inline IntervalSet cluster_points(std::span<const double> pts, std::span<const double> weights, double step) {
  std::vector<Interval> out;
  std::size_t i = 0;
  while (i < pts.size()) {
    std::size_t j = i;
    while (j + 1 < pts.size() && pts[j + 1] - pts[j] < 1.5 * step) ++j;
    double a = pts[i];
    double b = pts[j];
    if (b - a <= 3.0 * step + 1e-12 * std::max(1.0, std::abs(b))) {
      double sw = 0.0;
      double sx = 0.0;
      for (std::size_t k = i; k <= j; ++k) {
        double w = weights.empty() ? 1.0 : weights[k];
        sw += w;
        sx += w * pts[k];
      }
      double rep = sw > 0.0 ? sx / sw : 0.5 * (a + b);
      if (i == j) rep = a;
      rep = std::clamp(rep, a, b);
      out.push_back(Interval::point(rep));
    } else {
      out.push_back(Interval::closed(a, b));
    }
    i = j + 1;
  }
  return IntervalSet(std::move(out));
}

}  // namespace levprox
