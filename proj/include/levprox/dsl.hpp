// A small language for piecewise functions of one variable.
//
//   # zero "norm"
//   piece x != 0: 1
//   at 0: 0
//
// Statements are separated by newlines or ';'. Overlapping pieces combine by
// pointwise minimum, `at c: e` adds a point value, `domain <guard>` restricts
// the domain (+inf outside). The grammar is in docs/dsl_grammar.md.
#pragma once

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "levprox/catalog.hpp"
#include "levprox/core.hpp"

namespace levprox::dsl {

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Any rejected source. line and column are 1-based; 0 when not positional.
class DslError : public InvalidArgument {
 public:
  DslError(const std::string& kind, const std::string& msg, int line = 0, int column = 0)
      : InvalidArgument(format(kind, msg, line, column)), line_(line), column_(column), message_(msg) {}
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  static std::string format(const std::string& kind, const std::string& msg, int line, int column) {
    if (line > 0) return kind + " at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
    return kind + ": " + msg;
  }
  int line_;
  int column_;
  std::string message_;
};

class SyntaxError : public DslError {
 public:
  SyntaxError(const std::string& msg, int line, int column, std::vector<std::string> expected)
      : DslError("syntax error", msg, line, column), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class DomainError : public DslError {
 public:
  explicit DomainError(const std::string& msg) : DslError("domain error", msg) {}
};

class LscWarning : public DslError {
 public:
  LscWarning(const std::string& msg, double at) : DslError("lsc warning", msg), at_(at) {}
  double at() const { return at_; }

 private:
  double at_;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class Op { Const, X, Neg, Add, Sub, Mul, Div, Pow, Abs, Min, Max };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  double value = 0.0;  // Const
  int power = 0;       // Pow
  std::vector<NodePtr> args;
};

inline NodePtr make_node(Op op, std::vector<NodePtr> args = {}, double value = 0.0, int power = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  n->power = power;
  return n;
}

// Repeated multiplication, so x^2 is exactly x * x.
inline double ipow(double b, int p) {
  if (p < 0) return 1.0 / ipow(b, -p);
  double r = 1.0;
  for (; p > 0; p >>= 1, b *= b)
    if (p & 1) r *= b;
  return r;
}

inline double eval_node(const Node& n, double x) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::X: return x;
    case Op::Neg: return -eval_node(*n.args[0], x);
    case Op::Add: return eval_node(*n.args[0], x) + eval_node(*n.args[1], x);
    case Op::Sub: return eval_node(*n.args[0], x) - eval_node(*n.args[1], x);
    case Op::Mul: return eval_node(*n.args[0], x) * eval_node(*n.args[1], x);
    case Op::Div: return eval_node(*n.args[0], x) / eval_node(*n.args[1], x);
    case Op::Pow: return ipow(eval_node(*n.args[0], x), n.power);
    case Op::Abs: return std::abs(eval_node(*n.args[0], x));
    case Op::Min: {
      double v = eval_node(*n.args[0], x);
      for (std::size_t i = 1; i < n.args.size(); ++i) v = std::min(v, eval_node(*n.args[i], x));
      return v;
    }
    case Op::Max: {
      double v = eval_node(*n.args[0], x);
      for (std::size_t i = 1; i < n.args.size(); ++i) v = std::max(v, eval_node(*n.args[i], x));
      return v;
    }
  }
  return std::nan("");
}

inline bool depends_on_x(const Node& n) {
  if (n.op == Op::X) return true;
  return std::any_of(n.args.begin(), n.args.end(), [](const NodePtr& a) { return depends_on_x(*a); });
}

inline std::string render_number(double v) {
  if (v == kInf) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string render_node(const Node& n) {
  auto bin = [&](const char* op) { return "(" + render_node(*n.args[0]) + " " + op + " " + render_node(*n.args[1]) + ")"; };
  auto call = [&](const char* name) {
    std::string s = std::string(name) + "(";
    for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? ", " : "") + render_node(*n.args[i]);
    return s + ")";
  };
  switch (n.op) {
    case Op::Const: return n.value < 0 ? "(" + render_number(n.value) + ")" : render_number(n.value);
    case Op::X: return "x";
    case Op::Neg: return "(-" + render_node(*n.args[0]) + ")";
    case Op::Add: return bin("+");
    case Op::Sub: return bin("-");
    case Op::Mul: return bin("*");
    case Op::Div: return bin("/");
    case Op::Pow: return "(" + render_node(*n.args[0]) + " ^ " + std::to_string(n.power) + ")";
    case Op::Abs: return call("abs");
    case Op::Min: return call("min");
    case Op::Max: return call("max");
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Program
// ---------------------------------------------------------------------------

struct Piece {
  IntervalSet guard;
  /// nullptr encodes the body `inf`.
  NodePtr body;
};

struct Override {
  double at = 0.0;
  NodePtr body;
};

struct PiecewiseExpr {
  std::vector<Piece> pieces;
  std::vector<Override> overrides;
  IntervalSet domain = IntervalSet::real_line();
};

class ParsedFunction {
 public:
  PiecewiseExpr expr;
  std::optional<GrowthBound> growth;
  double lambda_f = kInf;
  bool lsc_certified = true;
  std::vector<std::string> warnings;
  /// Finite guard endpoints and override points.
  std::vector<double> breakpoints;

  double operator()(double x) const {
    if (!expr.domain.contains(x)) return kInf;
    double v = kInf;
    for (const auto& p : expr.pieces)
      if (p.guard.contains(x)) v = std::min(v, p.body ? eval_node(*p.body, x) : kInf);
    for (const auto& o : expr.overrides)
      if (o.at == x) v = std::min(v, o.body ? eval_node(*o.body, x) : kInf);
    return v;
  }

  std::optional<GrowthBound> growth_bound() const { return growth; }
};

inline ExtReal eval_parsed(const ParsedFunction& f, double x) { return ExtReal(f(x)); }

namespace detail {

inline std::string render_interval(const Interval& iv) {
  const bool lo_inf = !std::isfinite(iv.lo);
  const bool hi_inf = !std::isfinite(iv.hi);
  if (lo_inf && hi_inf) return "true";
  if (iv.is_point()) return "x == " + render_number(iv.lo);
  if (lo_inf) return std::string("x ") + (iv.hi_closed ? "<=" : "<") + " " + render_number(iv.hi);
  if (hi_inf) return std::string("x ") + (iv.lo_closed ? ">=" : ">") + " " + render_number(iv.lo);
  return render_number(iv.lo) + (iv.lo_closed ? " <= " : " < ") + "x" + (iv.hi_closed ? " <= " : " < ") +
         render_number(iv.hi);
}

inline std::string render_guard(const IntervalSet& g) {
  if (g.empty()) return "false";
  std::string s;
  for (const auto& iv : g.intervals()) s += (s.empty() ? "" : " or ") + render_interval(iv);
  return s;
}

}  // namespace detail

/// Canonical source text; parse(render(f)) evaluates identically to f.
inline std::string render(const ParsedFunction& f) {
  std::string s;
  if (!(f.expr.domain == IntervalSet::real_line())) s += "domain " + detail::render_guard(f.expr.domain) + "\n";
  for (const auto& p : f.expr.pieces)
    s += "piece " + detail::render_guard(p.guard) + ": " + (p.body ? render_node(*p.body) : "inf") + "\n";
  for (const auto& o : f.expr.overrides)
    s += "at " + render_number(o.at) + ": " + (o.body ? render_node(*o.body) : "inf") + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Lexer and parser
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok { Number, Ident, Punct, Newline, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, int c, double num = 0.0) { out.push_back({k, std::move(text), num, line, c}); };
  while (i < src.size()) {
    const unsigned char ch = static_cast<unsigned char>(src[i]);
    if (ch == '\n') {
      push(Tok::Newline, "newline", col);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const int start = col;
    if (std::isdigit(ch) || (ch == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      std::string text(src.substr(i, j - i));
      double v = std::strtod(text.c_str(), nullptr);
      if (!std::isfinite(v)) throw SyntaxError("number out of range", line, start, {"number"});
      push(Tok::Number, text, start, v);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(ch) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      push(Tok::Ident, std::string(src.substr(i, j - i)), start);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    static const char* two[] = {"<=", ">=", "==", "!="};
    bool matched = false;
    for (const char* t : two) {
      if (src.substr(i, 2) == t) {
        push(Tok::Punct, t, start);
        i += 2;
        col += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*/^(),:;<>").find(static_cast<char>(ch)) != std::string_view::npos) {
      push(Tok::Punct, std::string(1, static_cast<char>(ch)), start);
      ++i;
      ++col;
      continue;
    }
    std::string shown = ch < 0x80 && std::isprint(ch) ? std::string(1, static_cast<char>(ch)) : "non-ASCII byte";
    throw SyntaxError("unexpected character '" + shown + "'", line, start, {"token"});
  }
  out.push_back({Tok::End, "end of input", 0.0, line, col});
  return out;
}

inline bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {"piece", "at", "domain", "true", "false", "and", "or",
                                           "x",     "inf", "abs",   "min",  "max"};
  return kw.count(s) > 0;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  PiecewiseExpr program() {
    PiecewiseExpr e;
    bool any_domain = false;
    skip_separators();
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_ident("piece")) {
        next();
        IntervalSet g = guard();
        expect(":", {"':'"});
        e.pieces.push_back({g, body()});
      } else if (is_ident("at")) {
        next();
        NodePtr c = expression();
        if (depends_on_x(*c)) fail_at(t, "point of 'at' must be a constant", {"constant expression"});
        double at = eval_node(*c, 0.0);
        if (!std::isfinite(at)) fail_at(t, "point of 'at' must be finite", {"constant expression"});
        expect(":", {"':'"});
        e.overrides.push_back({at, body()});
      } else if (is_ident("domain")) {
        next();
        IntervalSet g = guard();
        e.domain = any_domain ? e.domain.intersect(g) : g;
        any_domain = true;
      } else {
        fail("expected a statement", {"'piece'", "'at'", "'domain'"});
      }
      if (peek().kind != Tok::End) {
        if (!(peek().kind == Tok::Newline || is_punct(";"))) fail("expected end of statement", {"';'", "newline"});
        skip_separators();
      }
    }
    if (e.pieces.empty() && e.overrides.empty()) throw DomainError("no pieces defined");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_punct(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_ident(const char* p) const { return peek().kind == Tok::Ident && peek().text == p; }

  void skip_separators() {
    while (peek().kind == Tok::Newline || is_punct(";")) next();
  }

  // Column reported just past the offending token.
  [[noreturn]] void fail_at(const Token& t, const std::string& msg, std::vector<std::string> expected) const {
    int width = t.kind == Tok::End || t.kind == Tok::Newline ? 0 : static_cast<int>(t.text.size());
    throw SyntaxError(msg + ", found " + describe(t), t.line, t.column + width, std::move(expected));
  }
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    fail_at(peek(), msg, std::move(expected));
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    if (t.kind == Tok::Newline) return "end of line";
    return "'" + t.text + "'";
  }

  void expect(const char* p, std::vector<std::string> expected) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'", std::move(expected));
    next();
  }

  NodePtr body() {
    if (is_ident("inf")) {
      next();
      return nullptr;
    }
    return expression();
  }

  // guard := conj { 'or' conj } ; conj := cond { 'and' cond }
  IntervalSet guard() {
    IntervalSet g = conjunction();
    while (is_ident("or")) {
      next();
      g = g.unite(conjunction());
    }
    return g;
  }

  IntervalSet conjunction() {
    IntervalSet g = condition();
    while (is_ident("and")) {
      next();
      g = g.intersect(condition());
    }
    return g;
  }

  static bool is_relop(const Token& t) {
    return t.kind == Tok::Punct &&
           (t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" || t.text == "==" || t.text == "!=");
  }

  // Set of x with `x op c`.
  static IntervalSet relation(const std::string& op, double c) {
    if (op == "<") return IntervalSet({Interval::make(-kInf, c, false, false)});
    if (op == "<=") return IntervalSet::at_most(c);
    if (op == ">") return IntervalSet({Interval::make(c, kInf, false, false)});
    if (op == ">=") return IntervalSet::at_least(c);
    if (op == "==") return IntervalSet::point(c);
    return IntervalSet::point(c).complement();
  }
  static std::string mirror(const std::string& op) {
    if (op == "<") return ">";
    if (op == "<=") return ">=";
    if (op == ">") return "<";
    if (op == ">=") return "<=";
    return op;
  }

  double constant(const NodePtr& n, const Token& at) const {
    if (depends_on_x(*n)) fail_at(at, "expected a constant bound", {"constant expression"});
    double v = eval_node(*n, 0.0);
    if (std::isnan(v)) fail_at(at, "bound is undefined", {"constant expression"});
    return v;
  }

  // cond := 'true' | 'false' | '(' guard ')' | e relop e [relop e]
  IntervalSet condition() {
    if (is_ident("true")) {
      next();
      return IntervalSet::real_line();
    }
    if (is_ident("false")) {
      next();
      return {};
    }
    const Token& first = peek();
    NodePtr a = expression();
    if (!is_relop(peek())) fail("expected a comparison", {"'<'", "'<='", "'>'", "'>='", "'=='", "'!='"});
    std::string op1 = next().text;
    const Token& second = peek();
    NodePtr b = expression();
    const bool ax = a->op == Op::X;
    const bool bx = b->op == Op::X;
    if (ax && !depends_on_x(*b)) {
      if (is_relop(peek())) fail("chained comparison must have x in the middle", {"'and'", "'or'", "':'"});
      return relation(op1, constant(b, second));
    }
    if (bx && !depends_on_x(*a)) {
      IntervalSet g = relation(mirror(op1), constant(a, first));
      if (is_relop(peek())) {
        std::string op2 = next().text;
        const Token& third = peek();
        NodePtr c = expression();
        g = g.intersect(relation(op2, constant(c, third)));
      }
      return g;
    }
    fail_at(first, "a comparison must relate x to a constant", {"'x'", "constant expression"});
  }

  // expr := term { ('+'|'-') term }
  NodePtr expression() {
    NodePtr n = term();
    while (is_punct("+") || is_punct("-")) {
      Op op = next().text == "+" ? Op::Add : Op::Sub;
      n = make_node(op, {n, term()});
    }
    return n;
  }

  // term := unary { ('*'|'/') unary }
  NodePtr term() {
    NodePtr n = unary();
    while (is_punct("*") || is_punct("/")) {
      Op op = next().text == "*" ? Op::Mul : Op::Div;
      n = make_node(op, {n, unary()});
    }
    return n;
  }

  // unary := ('-'|'+') unary | power
  NodePtr unary() {
    if (is_punct("-")) {
      next();
      NodePtr a = unary();
      if (a->op == Op::Const) return make_node(Op::Const, {}, -a->value);
      return make_node(Op::Neg, {a});
    }
    if (is_punct("+")) {
      next();
      return unary();
    }
    return power();
  }

  // power := primary [ '^' ['-'] integer ]
  NodePtr power() {
    NodePtr base = primary();
    if (!is_punct("^")) return base;
    next();
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_of(".eE") != std::string::npos || t.number > 64)
      fail("exponent must be an integer between -64 and 64", {"integer"});
    next();
    int n = static_cast<int>(t.number);
    return make_node(Op::Pow, {base}, 0.0, neg ? -n : n);
  }

  // primary := number | 'x' | '(' expr ')' | ('abs'|'min'|'max') '(' expr {',' expr} ')'
  NodePtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return make_node(Op::Const, {}, t.number);
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      next();
      if (++depth_ > 200) fail("expression nested too deeply", {"expression"});
      NodePtr n = expression();
      --depth_;
      expect(")", {"')'"});
      return n;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "x") {
        next();
        return make_node(Op::X);
      }
      if (t.text == "inf") fail("'inf' is only allowed as a whole body", {"expression"});
      if (t.text == "abs" || t.text == "min" || t.text == "max") {
        next();
        expect("(", {"'('"});
        if (++depth_ > 200) fail("expression nested too deeply", {"expression"});
        std::vector<NodePtr> args{expression()};
        while (is_punct(",")) {
          next();
          args.push_back(expression());
        }
        --depth_;
        expect(")", {"')'", "','"});
        if (t.text == "abs" && args.size() != 1) fail_at(t, "abs takes one argument", {"expression"});
        if (t.text != "abs" && args.size() < 2) fail_at(t, t.text + " takes at least two arguments", {"','"});
        Op op = t.text == "abs" ? Op::Abs : (t.text == "min" ? Op::Min : Op::Max);
        return make_node(op, std::move(args));
      }
    }
    fail("expected expression", {"number", "'x'", "'('", "'abs'", "'min'", "'max'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Interval enclosures, used for the division check
// ---------------------------------------------------------------------------

struct Enclosure {
  double lo;
  double hi;
  bool lo_in;  // whether lo is attained
  bool hi_in;
};

inline double mul0(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

inline Enclosure enc_mul(const Enclosure& a, const Enclosure& b) {
  struct C {
    double v;
    bool in;
  };
  C cs[4] = {{mul0(a.lo, b.lo), a.lo_in && b.lo_in},
             {mul0(a.lo, b.hi), a.lo_in && b.hi_in},
             {mul0(a.hi, b.lo), a.hi_in && b.lo_in},
             {mul0(a.hi, b.hi), a.hi_in && b.hi_in}};
  Enclosure r{kInf, -kInf, false, false};
  for (const C& c : cs) {
    if (c.v < r.lo) r = {c.v, r.hi, c.in, r.hi_in};
    else if (c.v == r.lo) r.lo_in = r.lo_in || c.in;
    if (c.v > r.hi) r = {r.lo, c.v, r.lo_in, c.in};
    else if (c.v == r.hi) r.hi_in = r.hi_in || c.in;
  }
  return r;
}

class DivisionCheck {
 public:
  explicit DivisionCheck(std::string where) : where_(std::move(where)) {}

  Enclosure operator()(const Node& n, const Enclosure& x) const {
    switch (n.op) {
      case Op::Const: return {n.value, n.value, true, true};
      case Op::X: return x;
      case Op::Neg: {
        Enclosure a = (*this)(*n.args[0], x);
        return {-a.hi, -a.lo, a.hi_in, a.lo_in};
      }
      case Op::Add:
      case Op::Sub: {
        Enclosure a = (*this)(*n.args[0], x);
        Enclosure b = (*this)(*n.args[1], x);
        if (n.op == Op::Sub) b = {-b.hi, -b.lo, b.hi_in, b.lo_in};
        return {a.lo + b.lo, a.hi + b.hi, a.lo_in && b.lo_in, a.hi_in && b.hi_in};
      }
      case Op::Mul: return enc_mul((*this)(*n.args[0], x), (*this)(*n.args[1], x));
      case Op::Div: return divide((*this)(*n.args[0], x), (*this)(*n.args[1], x));
      case Op::Pow: {
        Enclosure a = (*this)(*n.args[0], x);
        Enclosure r{1.0, 1.0, true, true};
        for (int k = 0; k < std::abs(n.power); ++k) r = enc_mul(r, a);
        return n.power < 0 ? divide({1.0, 1.0, true, true}, r) : r;
      }
      case Op::Abs: {
        Enclosure a = (*this)(*n.args[0], x);
        if (a.lo >= 0.0) return a;
        if (a.hi <= 0.0) return {-a.hi, -a.lo, a.hi_in, a.lo_in};
        if (-a.lo > a.hi) return {0.0, -a.lo, true, a.lo_in};
        if (-a.lo < a.hi) return {0.0, a.hi, true, a.hi_in};
        return {0.0, a.hi, true, a.lo_in || a.hi_in};
      }
      case Op::Min:
      case Op::Max: {
        Enclosure r = (*this)(*n.args[0], x);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
          Enclosure b = (*this)(*n.args[i], x);
          if (n.op == Op::Min) {
            r = {std::min(r.lo, b.lo), std::min(r.hi, b.hi), r.lo < b.lo ? r.lo_in : (b.lo < r.lo ? b.lo_in : r.lo_in || b.lo_in),
                 r.hi < b.hi ? r.hi_in : (b.hi < r.hi ? b.hi_in : r.hi_in || b.hi_in)};
          } else {
            r = {std::max(r.lo, b.lo), std::max(r.hi, b.hi), r.lo > b.lo ? r.lo_in : (b.lo > r.lo ? b.lo_in : r.lo_in || b.lo_in),
                 r.hi > b.hi ? r.hi_in : (b.hi > r.hi ? b.hi_in : r.hi_in || b.hi_in)};
          }
        }
        return r;
      }
    }
    return {-kInf, kInf, false, false};
  }

 private:
  Enclosure divide(const Enclosure& a, const Enclosure& b) const {
    const bool zero = (b.lo < 0.0 && b.hi > 0.0) || (b.lo == 0.0 && b.lo_in) || (b.hi == 0.0 && b.hi_in) ||
                      std::isnan(b.lo) || std::isnan(b.hi);
    if (zero) throw DomainError("possible division by zero in " + where_);
    Enclosure inv{1.0 / b.hi, 1.0 / b.lo, b.hi_in, b.lo_in};
    if (b.hi == 0.0) inv.lo = -kInf;
    if (b.lo == 0.0) inv.hi = kInf;
    return enc_mul(a, inv);
  }

  std::string where_;
};

// ---------------------------------------------------------------------------
// Asymptotic growth on x -> s * inf
// ---------------------------------------------------------------------------

// value ~ coef * |x|^deg; Zero for the zero function, Unknown when the leading
// terms cancel inside a non-polynomial expression.
struct Asym {
  enum Kind { Zero, Term, Unknown } kind = Zero;
  int deg = 0;
  double coef = 0.0;
};

using Poly = std::vector<double>;

inline Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  return p;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(r);
}

inline std::optional<Poly> poly_of(const Node& n) {
  auto sum = [](Poly a, const Poly& b, double sign) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
    return poly_trim(a);
  };
  switch (n.op) {
    case Op::Const: return poly_trim({n.value});
    case Op::X: return Poly{0.0, 1.0};
    case Op::Neg: {
      auto a = poly_of(*n.args[0]);
      if (!a) return std::nullopt;
      for (double& c : *a) c = -c;
      return a;
    }
    case Op::Add:
    case Op::Sub: {
      auto a = poly_of(*n.args[0]);
      auto b = poly_of(*n.args[1]);
      if (!a || !b) return std::nullopt;
      return sum(*a, *b, n.op == Op::Add ? 1.0 : -1.0);
    }
    case Op::Mul: {
      auto a = poly_of(*n.args[0]);
      auto b = poly_of(*n.args[1]);
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b);
    }
    case Op::Div: {
      auto a = poly_of(*n.args[0]);
      auto b = poly_of(*n.args[1]);
      if (!a || !b || b->size() != 1) return std::nullopt;
      for (double& c : *a) c /= (*b)[0];
      return a;
    }
    case Op::Pow: {
      if (n.power < 0) return std::nullopt;
      auto a = poly_of(*n.args[0]);
      if (!a) return std::nullopt;
      Poly r{1.0};
      for (int k = 0; k < n.power; ++k) r = poly_mul(r, *a);
      return r;
    }
    default: return std::nullopt;
  }
}

inline Asym asym_of_poly(const Poly& p, double s) {
  if (p.empty()) return {};
  int d = static_cast<int>(p.size()) - 1;
  return {Asym::Term, d, p.back() * ((d % 2 == 1) ? s : 1.0)};
}

// a < b eventually
inline bool asym_less(const Asym& a, const Asym& b) {
  auto lead = [](const Asym& t) { return t.kind == Asym::Zero ? std::pair<int, double>{INT_MIN / 2, 0.0} : std::pair{t.deg, t.coef}; };
  auto [da, ca] = lead(a);
  auto [db, cb] = lead(b);
  if (da == db) return ca < cb;
  return da > db ? ca < 0.0 : cb > 0.0;
}

inline Asym asym_add(const Asym& a, const Asym& b) {
  if (a.kind == Asym::Unknown || b.kind == Asym::Unknown) return {Asym::Unknown};
  if (a.kind == Asym::Zero) return b;
  if (b.kind == Asym::Zero) return a;
  if (a.deg != b.deg) return a.deg > b.deg ? a : b;
  double c = a.coef + b.coef;
  if (c == 0.0) return {Asym::Unknown};
  return {Asym::Term, a.deg, c};
}

inline Asym asym_of(const Node& n, double s) {
  if (auto p = poly_of(n)) return asym_of_poly(*p, s);
  auto neg = [](Asym a) {
    if (a.kind == Asym::Term) a.coef = -a.coef;
    return a;
  };
  switch (n.op) {
    case Op::Neg: return neg(asym_of(*n.args[0], s));
    case Op::Add: return asym_add(asym_of(*n.args[0], s), asym_of(*n.args[1], s));
    case Op::Sub: return asym_add(asym_of(*n.args[0], s), neg(asym_of(*n.args[1], s)));
    case Op::Mul:
    case Op::Div: {
      Asym a = asym_of(*n.args[0], s);
      Asym b = asym_of(*n.args[1], s);
      if (a.kind == Asym::Unknown || b.kind == Asym::Unknown) return {Asym::Unknown};
      if (n.op == Op::Div && b.kind == Asym::Zero) return {Asym::Unknown};
      if (a.kind == Asym::Zero) return {};
      if (b.kind == Asym::Zero) return {};
      if (n.op == Op::Mul) return {Asym::Term, a.deg + b.deg, a.coef * b.coef};
      return {Asym::Term, a.deg - b.deg, a.coef / b.coef};
    }
    case Op::Pow: {
      Asym a = asym_of(*n.args[0], s);
      if (n.power == 0) return {Asym::Term, 0, 1.0};
      if (a.kind != Asym::Term) return n.power > 0 ? a : Asym{Asym::Unknown};
      return {Asym::Term, a.deg * n.power, std::pow(a.coef, n.power)};
    }
    case Op::Abs: {
      Asym a = asym_of(*n.args[0], s);
      if (a.kind == Asym::Term) a.coef = std::abs(a.coef);
      return a;
    }
    case Op::Min:
    case Op::Max: {
      Asym r = asym_of(*n.args[0], s);
      for (std::size_t i = 1; i < n.args.size(); ++i) {
        Asym b = asym_of(*n.args[i], s);
        if (r.kind == Asym::Unknown || b.kind == Asym::Unknown) return {Asym::Unknown};
        bool b_less = asym_less(b, r);
        if (n.op == Op::Min ? b_less : asym_less(r, b)) r = b;
      }
      return r;
    }
    default: return {Asym::Unknown};
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

struct ParseOptions {
  /// Accept functions whose point values exceed a one-sided limit.
  bool allow_non_lsc = false;
};

namespace detail {

inline void check_divisions(const PiecewiseExpr& e) {
  for (std::size_t i = 0; i < e.pieces.size(); ++i) {
    const auto& p = e.pieces[i];
    if (!p.body) continue;
    DivisionCheck check("piece " + std::to_string(i + 1));
    const IntervalSet set = p.guard.intersect(e.domain);
    for (const auto& iv : set.intervals()) check(*p.body, {iv.lo, iv.hi, iv.lo_closed, iv.hi_closed});
  }
  for (std::size_t i = 0; i < e.overrides.size(); ++i) {
    const auto& o = e.overrides[i];
    if (!o.body) continue;
    DivisionCheck check("point value " + std::to_string(i + 1));
    check(*o.body, {o.at, o.at, true, true});
  }
}

inline void check_coverage(const PiecewiseExpr& e) {
  IntervalSet covered;
  for (const auto& p : e.pieces) covered = covered.unite(p.guard);
  for (const auto& o : e.overrides) covered = covered.unite(IntervalSet::point(o.at));
  IntervalSet missing = e.domain.intersect(covered.complement());
  if (!missing.empty()) {
    std::string where;
    for (const auto& iv : missing.intervals()) where += (where.empty() ? "" : " or ") + render_interval(iv);
    throw DomainError("pieces do not cover the domain; uncovered: " + where);
  }
}

// Limit of the function at c from side s (+1 right, -1 left), using the
// continuity of each body inside its guard.
inline double one_sided_limit(const PiecewiseExpr& e, double c, double s) {
  auto has_side = [&](const IntervalSet& set) {
    for (const auto& iv : set.intervals())
      if (s > 0 ? (iv.lo <= c && iv.hi > c) : (iv.lo < c && iv.hi >= c)) return true;
    return false;
  };
  if (!has_side(e.domain)) return kInf;
  double v = kInf;
  for (const auto& p : e.pieces) {
    if (!has_side(p.guard)) continue;
    if (!p.body) continue;
    double b = eval_node(*p.body, c);
    if (!std::isfinite(b)) {
      double probe = eval_node(*p.body, c + s * 1e-12 * std::max(1.0, std::abs(c)));
      b = probe > 0 ? kInf : -kInf;
    }
    v = std::min(v, b);
  }
  return v;
}

}  // namespace detail

/// Parses and analyses a DSL source. Throws SyntaxError, DomainError, or
/// LscWarning (unless opt.allow_non_lsc).
inline ParsedFunction parse(std::string_view text, const ParseOptions& opt = {}) {
  ParsedFunction f;
  f.expr = detail::Parser(text).program();
  const auto& e = f.expr;
  detail::check_coverage(e);
  detail::check_divisions(e);

  std::set<double> bps;
  for (const auto& p : e.pieces) {
    const IntervalSet set = p.guard.intersect(e.domain);
    for (const auto& iv : set.intervals()) {
      if (std::isfinite(iv.lo)) bps.insert(iv.lo);
      if (std::isfinite(iv.hi)) bps.insert(iv.hi);
    }
  }
  for (const auto& iv : e.domain.intervals()) {
    if (std::isfinite(iv.lo)) bps.insert(iv.lo);
    if (std::isfinite(iv.hi)) bps.insert(iv.hi);
  }
  for (const auto& o : e.overrides)
    if (e.domain.contains(o.at)) bps.insert(o.at);
  f.breakpoints.assign(bps.begin(), bps.end());

  // Growth on the two tails.
  double linear = 0.0;
  double quad = 0.0;
  for (double s : {-1.0, 1.0}) {
    for (const auto& p : e.pieces) {
      if (!p.body) continue;
      IntervalSet set = p.guard.intersect(e.domain);
      if (set.empty() || (s > 0 ? set.bounded_above() : set.bounded_below())) continue;
      detail::Asym a = detail::asym_of(*p.body, s);
      const char* side = s > 0 ? "+inf" : "-inf";
      if (a.kind == detail::Asym::Unknown)
        throw DomainError(std::string("cannot bound the growth of a piece towards ") + side + "; split it with a bounded guard");
      if (a.kind == detail::Asym::Zero || a.deg <= 0 || a.coef > 0.0) continue;
      if (a.deg == 1) linear = std::max(linear, -a.coef);
      else if (a.deg == 2) quad = std::max(quad, -a.coef);
      else throw DomainError(std::string("piece decreases faster than quadratically towards ") + side + "; not prox-bounded");
    }
  }
  if (quad > 0.0) f.lambda_f = 1.0 / (2.0 * quad);

  // Values near finite breakpoints must not run off to -inf.
  for (double c : f.breakpoints)
    for (double s : {-1.0, 1.0})
      if (detail::one_sided_limit(e, c, s) == -kInf)
        throw DomainError("function is unbounded below near x = " + render_number(c));

  if (quad == 0.0) {
    // f >= -a - b|y| with b the steepest descending tail slope; a from a scan
    // that covers every breakpoint and the prox search window.
    double a = 0.0;
    auto visit = [&](double y) {
      double v = f(y);
      if (std::isfinite(v)) a = std::max(a, -v - linear * std::abs(y));
    };
    for (int k = -16384; k <= 16384; ++k) visit(k / 8.0);
    for (double c : f.breakpoints) {
      visit(c);
      for (double d : {1e-9, 1e-6, 1e-3}) {
        visit(c - d * std::max(1.0, std::abs(c)));
        visit(c + d * std::max(1.0, std::abs(c)));
      }
    }
    f.growth = GrowthBound{a == 0.0 ? 0.0 : a * (1.0 + 1e-9) + 1e-9, linear};
  }

  // Lower semicontinuity at breakpoints.
  for (double c : f.breakpoints) {
    double v = f(c);
    double lim = std::min(detail::one_sided_limit(e, c, -1.0), detail::one_sided_limit(e, c, 1.0));
    if (v > lim + 1e-12 * std::max(1.0, std::abs(lim))) {
      std::string msg = "value " + render_number(v) + " at x = " + render_number(c) + " exceeds the one-sided limit " +
                        render_number(lim);
      f.lsc_certified = false;
      f.warnings.push_back(msg);
      if (!opt.allow_non_lsc) throw LscWarning(msg + " (lower semicontinuity fails)", c);
    }
  }
  return f;
}

/// A catalog entry without closed forms, so every oracle falls back to grids.
inline CatalogFunction to_catalog(const ParsedFunction& f, std::string id = "dsl") {
  CatalogFunction c;
  c.id = std::move(id);
  auto shared = std::make_shared<const ParsedFunction>(f);
  c.eval = [shared](double x) { return (*shared)(x); };
  c.lambda_f = f.lambda_f;
  c.growth = f.growth;
  return c;
}

}  // namespace levprox::dsl
