// levprox: command-line front end for the prox, subdifferential and resolvent
// oracles, the property suites and the figure data.
//
// Exit codes: 0 success, 1 usage error, 2 unbounded (lambda >= prox
// threshold), 3 closed form not available.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "levprox/levprox.hpp"

namespace lp = levprox;
using lp::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::string fn;
  std::string expr;
  double lambda = 1.0;
  std::optional<double> x;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  double grid_step = 1e-3;
  int samples = 201;
  std::optional<double> tol;
  std::string format;
  std::string out;
  std::string suite = "all";
  std::uint64_t seed = lp::kPropertySeed;
  bool allow_non_lsc = false;
  bool lambda_given = false;
  std::string method = "auto";
  std::string of = "prox";
  std::string op = "levprox";
  std::string figure;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::size_t max_grid_points() {
  if (const char* env = std::getenv("LEVPROX_MAX_GRID_POINTS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw UsageError("LEVPROX_MAX_GRID_POINTS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return lp::kDefaultMaxGridPoints;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lp::CatalogFunction resolve_function(const RunConfig& c) {
  if (!c.fn.empty() && !c.expr.empty()) throw UsageError("give either --fn or --expr, not both");
  lp::dsl::ParseOptions po;
  po.allow_non_lsc = c.allow_non_lsc;
  if (!c.expr.empty()) return lp::dsl::to_catalog(lp::dsl::parse(c.expr, po), "expr");
  if (c.fn.rfind("dsl:", 0) == 0) {
    std::string path = c.fn.substr(4);
    return lp::dsl::to_catalog(lp::dsl::parse(read_file(path), po), c.fn);
  }
  if (c.fn.empty()) throw UsageError("missing --fn or --expr");
  auto f = lp::catalog::find(c.fn);
  if (!f) throw UsageError("unknown function '" + c.fn + "'");
  return *f;
}

lp::Tolerances tolerances(const RunConfig& c) {
  lp::Tolerances t;
  if (c.tol) t.hausdorff_tol = *c.tol;
  t.validate();
  return t;
}

void check_lattice(const RunConfig& c) {
  if (!(c.grid_step > 0.0) || !std::isfinite(c.grid_step)) throw UsageError("--grid-step must be positive");
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) throw UsageError("--lambda must be positive and finite");
  const double initial = 2.0 * lp::default_half_width(c.lambda) / c.grid_step;
  if (initial > static_cast<double>(max_grid_points()))
    throw UsageError("grid step too fine: the search window exceeds LEVPROX_MAX_GRID_POINTS");
}

std::optional<lp::GridSpec> explicit_grid(const RunConfig& c) {
  if (!c.grid_min && !c.grid_max) return std::nullopt;
  if (!c.grid_min || !c.grid_max) throw UsageError("--grid-min and --grid-max go together");
  lp::GridSpec g{*c.grid_min, *c.grid_max, c.grid_step};
  g.validate(max_grid_points());
  return g;
}

json meta(const RunConfig& c, const std::string& fn_id) {
  json m;
  m["subcommand"] = c.subcommand;
  if (!fn_id.empty()) m["fn"] = fn_id;
  m["lambda"] = c.lambda;
  if (c.x) m["x"] = *c.x;
  m["grid_step"] = c.grid_step;
  if (c.grid_min && c.grid_max) m["window"] = json::array({*c.grid_min, *c.grid_max});
  else m["window"] = "auto";
  m["tol"] = tolerances(c).hausdorff_tol;
  m["method"] = c.method;
  return m;
}

// Writes through a temporary file and a rename so readers never see a
// partial artifact.
void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const std::string tmp = c.out + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw UsageError("cannot write " + c.out);
    o << text;
    if (!o.flush()) throw UsageError("cannot write " + c.out);
  }
  if (std::rename(tmp.c_str(), c.out.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw UsageError("cannot move output into " + c.out);
  }
}

std::string fmt(double v) { return lp::figures::format_exact(v); }

std::string header_line(const json& m) {
  std::string s = "#";
  for (auto it = m.begin(); it != m.end(); ++it) s += " " + it.key() + "=" + (it->is_string() ? it->get<std::string>() : it->dump());
  return s + "\n";
}

std::string set_output(const RunConfig& c, const lp::IntervalSet& s, const json& m) {
  if (c.format == "json") {
    json j = lp::to_json(s);
    j["meta"] = m;
    return j.dump(2) + "\n";
  }
  if (c.format == "csv") {
    std::string out = header_line(m) + "lo,hi,lo_closed,hi_closed\n";
    for (const auto& iv : s.intervals())
      out += fmt(iv.lo) + "," + fmt(iv.hi) + "," + (iv.lo_closed ? "true" : "false") + "," + (iv.hi_closed ? "true" : "false") + "\n";
    return out;
  }
  throw UsageError("format '" + c.format + "' is not available for a single set; use json or csv");
}

std::string graph_svg(const lp::OperatorGraph1D& g, const json& m) {
  double xmin = lp::kInf, xmax = -lp::kInf, ymin = lp::kInf, ymax = -lp::kInf;
  for (const auto& s : g.samples()) {
    xmin = std::min(xmin, s.x);
    xmax = std::max(xmax, s.x);
    for (const auto& iv : s.value.intervals()) {
      if (std::isfinite(iv.lo)) ymin = std::min(ymin, iv.lo), ymax = std::max(ymax, iv.lo);
      if (std::isfinite(iv.hi)) ymin = std::min(ymin, iv.hi), ymax = std::max(ymax, iv.hi);
    }
  }
  if (!(xmax > xmin)) xmin -= 1.0, xmax += 1.0;
  if (!(ymax > ymin)) ymin = (std::isfinite(ymin) ? ymin : 0.0) - 1.0, ymax = ymin + 2.0;
  const double W = 480, H = 480, pad = 30;
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
  auto py = [&](double y) {
    y = std::clamp(y, ymin, ymax);
    return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad);
  };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  s += "<!-- " + m.dump() + " -->\n<rect width=\"480\" height=\"480\" fill=\"white\"/>\n";
  char buf[200];
  for (const auto& smp : g.samples()) {
    for (const auto& iv : smp.value.intervals()) {
      if (iv.is_point()) {
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\" fill=\"#1f77b4\"/>\n", px(smp.x), py(iv.lo));
      } else {
        std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#d62728\"/>\n", px(smp.x),
                      py(iv.lo), px(smp.x), py(iv.hi));
      }
      s += buf;
    }
  }
  return s + "</svg>\n";
}

std::string graph_output(const RunConfig& c, const lp::OperatorGraph1D& g, const json& m) {
  if (c.format == "json") {
    json j = lp::to_json(g, c.lambda);
    j["meta"] = m;
    return j.dump(2) + "\n";
  }
  if (c.format == "csv") {
    std::string out = header_line(m) + "x,lo,hi,lo_closed,hi_closed\n";
    for (const auto& s : g.samples())
      for (const auto& iv : s.value.intervals())
        out += fmt(s.x) + "," + fmt(iv.lo) + "," + fmt(iv.hi) + "," + (iv.lo_closed ? "true" : "false") + "," +
               (iv.hi_closed ? "true" : "false") + "\n";
    return out;
  }
  return graph_svg(g, m);
}

lp::IntervalSet prox_at(const RunConfig& c, const lp::CatalogFunction& f, double x) {
  const auto tol = tolerances(c);
  if (!(c.lambda < f.lambda_f)) throw lp::Unbounded(f.id + ": lambda >= prox threshold " + fmt(f.lambda_f));
  if (c.method == "closed") {
    if (!f.closed_prox) throw lp::NotAvailable(f.id + ": no closed-form prox");
    return f.closed_prox(c.lambda, x);
  }
  if (auto g = explicit_grid(c)) return lp::prox_brute(f, c.lambda, x, *g, tol).argmin;
  if (c.method == "brute") return lp::prox_brute(f, c.lambda, x, c.grid_step, tol).argmin;
  return lp::prox(f, c.lambda, x, c.grid_step, tol);
}

lp::IntervalSet levprox_at(const RunConfig& c, const lp::CatalogFunction& f, double x) {
  const auto tol = tolerances(c);
  if (c.method == "closed" || (c.method == "auto" && f.closed_levprox)) {
    if (!f.closed_levprox) throw lp::NotAvailable(f.id + ": no closed-form level proximal subdifferential");
    return f.closed_levprox(c.lambda, x);
  }
  return lp::levprox_interval(f, c.lambda, x, c.grid_step, tol);
}

lp::IntervalSet resolvent_at(const RunConfig& c, const lp::CatalogFunction& f, double x) {
  const auto tol = tolerances(c);
  if (c.op == "levprox") return lp::level_proximal_resolvent(f, c.lambda, x, c.grid_step, tol);
  if (c.op == "limiting") return lp::limiting_resolvent(f, c.lambda, x, c.grid_step);
  if (c.op == "proximal")
    return lp::resolvent_from_membership(lp::proximal_membership(f, c.lambda, c.grid_step), c.lambda, x, c.grid_step);
  throw UsageError("--operator must be levprox, limiting or proximal");
}

lp::GridSpec sample_grid(const RunConfig& c) {
  const double lo = c.grid_min.value_or(-5.0);
  const double hi = c.grid_max.value_or(5.0);
  if (c.samples < 2) throw UsageError("--samples must be at least 2");
  if (!(hi > lo)) throw UsageError("--grid-max must exceed --grid-min");
  return lp::GridSpec{lo, hi, (hi - lo) / static_cast<double>(c.samples - 1)};
}

int run(RunConfig c) {
  if (c.format.empty()) c.format = c.subcommand == "figure" ? "csv" : "json";
  if (c.format != "json" && c.format != "csv" && c.format != "svg") throw UsageError("--format must be json, csv or svg");

  if (c.subcommand == "figure") {
    if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) throw UsageError("--lambda must be positive and finite");
    auto fig = lp::figures::make_figure(c.figure, c.lambda);
    if (!fig) throw UsageError("unknown figure id '" + c.figure + "'");
    auto rows = lp::figures::rows(*fig);
    if (c.format == "csv") {
      emit(c, lp::figures::to_csv(*fig, rows, c.lambda));
    } else if (c.format == "svg") {
      emit(c, lp::figures::to_svg(*fig, rows, c.lambda));
    } else {
      json j;
      j["meta"] = {{"subcommand", "figure"}, {"id", fig->id}, {"lambda", c.lambda}, {"title", fig->title}};
      json arr = json::array();
      for (const auto& r : rows) arr.push_back({{"x", r.x}, {"branch_lo", r.lo}, {"branch_hi", r.hi}, {"branch_id", r.branch}});
      j["rows"] = arr;
      emit(c, j.dump(2) + "\n");
    }
    return 0;
  }

  if (c.subcommand == "verify") {
    lp::suites::SuiteOptions o;
    o.step = c.grid_step;
    o.tol = tolerances(c);
    o.seed = c.seed;
    if (c.x) throw UsageError("verify does not take --x");
    std::vector<lp::CatalogFunction> fs;
    if (!c.fn.empty() || !c.expr.empty()) fs.push_back(resolve_function(c));
    else fs = lp::catalog::list();
    if (c.suite != "all") {
      bool known = false;
      for (const auto& n : lp::suites::names()) known = known || n == c.suite;
      if (!known) throw UsageError("unknown suite '" + c.suite + "'");
    }
    if (c.lambda_given) o.lambdas = {c.lambda};
    auto reports = lp::suites::run(c.suite, fs, o);
    bool ok = true;
    json arr = json::array();
    for (const auto& r : reports) {
      ok = ok && r.passed;
      arr.push_back(lp::to_json(r));
    }
    json m = {{"subcommand", "verify"}, {"suite", c.suite}, {"grid_step", c.grid_step}, {"window", "auto"},
              {"tol", o.tol.hausdorff_tol}, {"seed", c.seed}};
    if (c.format != "json") throw UsageError("verify writes json only");
    emit(c, json{{"meta", m}, {"passed", ok}, {"reports", arr}}.dump(2) + "\n");
    return ok ? 0 : 4;
  }

  check_lattice(c);
  const lp::CatalogFunction f = resolve_function(c);
  const json m = meta(c, f.id);

  if (c.subcommand == "eval") {
    if (!c.x) throw UsageError("eval needs --x");
    double v = f(*c.x);
    if (c.format == "json") emit(c, json{{"x", *c.x}, {"value", lp::endpoint_to_json(v)}, {"meta", m}}.dump(2) + "\n");
    else if (c.format == "csv") emit(c, header_line(m) + "x,value\n" + fmt(*c.x) + "," + fmt(v) + "\n");
    else throw UsageError("eval writes json or csv");
    return 0;
  }
  if (c.subcommand == "envelope") {
    if (!c.x) throw UsageError("envelope needs --x");
    if (!(c.lambda < f.lambda_f)) throw lp::Unbounded(f.id + ": lambda >= prox threshold " + fmt(f.lambda_f));
    double e;
    if (auto g = explicit_grid(c)) e = lp::prox_brute(f, c.lambda, *c.x, *g, tolerances(c)).optimal_value;
    else e = lp::moreau_envelope_brute(f, c.lambda, *c.x, c.grid_step);
    if (c.format == "json") emit(c, json{{"x", *c.x}, {"value", lp::endpoint_to_json(e)}, {"meta", m}}.dump(2) + "\n");
    else if (c.format == "csv") emit(c, header_line(m) + "x,value\n" + fmt(*c.x) + "," + fmt(e) + "\n");
    else throw UsageError("envelope writes json or csv");
    return 0;
  }

  std::string which = c.subcommand;
  if (which == "graph") which = c.of;
  auto point = [&](double x) {
    if (which == "prox") return prox_at(c, f, x);
    if (which == "levprox") return levprox_at(c, f, x);
    if (which == "resolvent") return resolvent_at(c, f, x);
    throw UsageError("--of must be prox, levprox or resolvent");
  };
  if (which != "prox" && which != "levprox" && which != "resolvent") throw UsageError("--of must be prox, levprox or resolvent");

  if (c.subcommand != "graph" && c.x) {
    emit(c, set_output(c, point(*c.x), m));
    return 0;
  }
  if (c.subcommand != "graph" && !c.x) throw UsageError(c.subcommand + " needs --x (use graph for a sampled graph)");
  lp::OperatorGraph1D g;
  RunConfig pc = c;
  pc.grid_min.reset();
  pc.grid_max.reset();
  for (double x : sample_grid(c).points()) {
    lp::IntervalSet v = which == "prox" ? prox_at(pc, f, x) : which == "levprox" ? levprox_at(pc, f, x) : resolvent_at(pc, f, x);
    g.push_back(x, v);
  }
  json gm = m;
  gm["of"] = which;
  gm["samples"] = c.samples;
  emit(c, graph_output(c, g, gm));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level proximal subdifferential toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* s, bool needs_fn) {
    if (needs_fn) {
      s->add_option("--fn", cfg.fn, "catalog id (e.g. zero-norm, neg-quad:2) or dsl:<file>");
      s->add_option("--expr", cfg.expr, "inline DSL source");
      s->add_flag("--allow-non-lsc", cfg.allow_non_lsc, "accept DSL functions that fail lower semicontinuity");
    }
    s->add_option("--lambda", cfg.lambda, "prox parameter (default 1)");
    s->add_option("--grid-step", cfg.grid_step, "lattice step of the grid oracles (default 1e-3)");
    s->add_option("--tol", cfg.tol, "Hausdorff tolerance (default max(2 step, 1e-3))");
    s->add_option("--format", cfg.format, "json | csv | svg");
    s->add_option("--out", cfg.out, "output file (default stdout)");
    s->add_option("--seed", cfg.seed, "seed for randomized pair sampling");
  };

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"eval", "evaluate f at x"},
                      {"prox", "proximal mapping P_lambda f(x)"},
                      {"envelope", "Moreau envelope at x"},
                      {"levprox", "level proximal subdifferential at x"},
                      {"resolvent", "(Id + lambda A)^{-1}(x)"},
                      {"graph", "sampled graph of prox, levprox or a resolvent"},
                      {"verify", "run property suites"},
                      {"figure", "figure data from closed forms"}};
  for (const auto& sd : subs) {
    CLI::App* s = app.add_subcommand(sd.name, sd.help);
    const std::string n = sd.name;
    common(s, n != "figure");
    s->callback([&cfg, n]() { cfg.subcommand = n; });
    if (n != "figure" && n != "verify") {
      s->add_option("--x", cfg.x, "point");
      s->add_option("--grid-min", cfg.grid_min, "lower end of an explicit grid");
      s->add_option("--grid-max", cfg.grid_max, "upper end of an explicit grid");
      s->add_option("--method", cfg.method, "auto | closed | brute")->check(CLI::IsMember({"auto", "closed", "brute"}));
    }
    if (n == "graph") {
      s->add_option("--of", cfg.of, "prox | levprox | resolvent")->check(CLI::IsMember({"prox", "levprox", "resolvent"}));
      s->add_option("--samples", cfg.samples, "number of sample abscissae (default 201)");
    }
    if (n == "resolvent" || n == "graph")
      s->add_option("--operator", cfg.op, "levprox | limiting | proximal")->check(CLI::IsMember({"levprox", "limiting", "proximal"}));
    if (n == "verify") s->add_option("--suite", cfg.suite, "identity | equivalence | relations | sumrule | nesting | hypomono | all");
    if (n == "figure") s->add_option("--id", cfg.figure, "1a 1b 2a 2b 3a 3b 4a 4b 4c")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  for (auto* s : app.get_subcommands())
    if (auto* o = s->get_option_no_throw("--lambda")) cfg.lambda_given = o->count() > 0;

  try {
    return run(cfg);
  } catch (const lp::Unbounded& e) {
    std::cerr << "unbounded: " << e.what() << "\n";
    return 2;
  } catch (const lp::NotAvailable& e) {
    std::cerr << "not available: " << e.what() << "\n";
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
