#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

// stdout only; stderr goes to /dev/null.
Run run(const std::string& args) {
  std::string cmd = std::string(LEVPROX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) { return std::string(LEVPROX_SAMPLES_DIR) + "/dsl/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("levprox_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::pair<double, double>> intervals(const json& j) {
  std::vector<std::pair<double, double>> v;
  for (const auto& iv : j["intervals"]) v.push_back({iv["lo"].get<double>(), iv["hi"].get<double>()});
  return v;
}

}  // namespace

TEST(Cli, ProxHardThreshold) {
  auto r = run("prox --fn zero-norm --lambda 2 --x 1");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(intervals(j), (std::vector<std::pair<double, double>>{{0.0, 0.0}}));
  EXPECT_EQ(j["meta"]["fn"], "zero-norm");
  EXPECT_EQ(j["meta"]["lambda"], 2.0);

  auto tie = json::parse(run("prox --fn zero-norm --lambda 2 --x 2").out);
  EXPECT_EQ(intervals(tie), (std::vector<std::pair<double, double>>{{0.0, 0.0}, {2.0, 2.0}}));
}

TEST(Cli, LevproxCsv) {
  auto r = run("levprox --fn step --lambda 2 --x 0 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n0,1,true,true\n"), std::string::npos) << r.out;
}

TEST(Cli, EvalAndEnvelope) {
  EXPECT_EQ(json::parse(run("eval --fn step --x 0").out)["value"], 0.0);
  EXPECT_EQ(json::parse(run("eval --fn step --x 0.5").out)["value"], 1.0);
  EXPECT_NEAR(json::parse(run("envelope --fn abs --lambda 1 --x 0.5").out)["value"].get<double>(), 0.125, 1e-9);
}

TEST(Cli, ResolventOperators) {
  auto lim = json::parse(run("resolvent --fn zero-norm --lambda 2 --x 1 --operator limiting").out);
  EXPECT_EQ(intervals(lim), (std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 1.0}}));
  auto lev = json::parse(run("resolvent --fn zero-norm --lambda 2 --x 1 --operator levprox").out);
  EXPECT_EQ(intervals(lev), (std::vector<std::pair<double, double>>{{0.0, 0.0}}));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("prox --fn neg-quad:2 --lambda 1 --x 1").code, 2);
  EXPECT_EQ(run("prox --fn nothing --lambda 1 --x 1").code, 1);
  EXPECT_EQ(run("prox --fn abs --lambda 1 --x 1 --bogus").code, 1);
  EXPECT_EQ(run("prox --fn abs --lambda -1 --x 1").code, 1);
  EXPECT_EQ(run("figure --id 9z").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("prox --expr \"piece x <: 1\" --lambda 1 --x 0").code, 1);
  EXPECT_EQ(run("prox --fn dsl:" + sample("missing.dsl") + " --lambda 1 --x 0").code, 1);
}

TEST(Cli, DslFilesMatchCatalog) {
  for (const auto& [file, id] : std::vector<std::pair<std::string, std::string>>{
           {"zero_norm.dsl", "zero-norm"}, {"step.dsl", "step"}, {"indicator_pm1.dsl", "indicator-pm1"},
           {"abs.dsl", "abs"}, {"neg_norm.dsl", "neg-norm"}}) {
    for (const char* x : {"-1.7", "0", "0.6", "2.5"}) {
      auto a = run("prox --fn dsl:" + sample(file) + " --lambda 1 --x " + x);
      auto b = run("prox --fn " + id + " --lambda 1 --x " + x);
      ASSERT_EQ(a.code, 0) << file;
      ASSERT_EQ(b.code, 0) << id;
      auto ia = intervals(json::parse(a.out));
      auto ib = intervals(json::parse(b.out));
      ASSERT_EQ(ia.size(), ib.size()) << file << " x=" << x;
      for (std::size_t k = 0; k < ia.size(); ++k) {
        EXPECT_NEAR(ia[k].first, ib[k].first, 2e-3) << file << " x=" << x;
        EXPECT_NEAR(ia[k].second, ib[k].second, 2e-3) << file << " x=" << x;
      }
    }
  }
}

TEST(Cli, NonLscNeedsFlag) {
  EXPECT_EQ(run("eval --fn dsl:" + sample("not_lsc.dsl") + " --x 0").code, 1);
  auto r = run("eval --fn dsl:" + sample("not_lsc.dsl") + " --x 0 --allow-non-lsc");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"], 1.0);
}

TEST(Cli, InlineExpression) {
  auto r = run("prox --expr \"piece true: abs(x)\" --lambda 1 --x 3");
  ASSERT_EQ(r.code, 0);
  auto iv = intervals(json::parse(r.out));
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_NEAR(iv[0].first, 2.0, 2e-3);
}

TEST(Cli, Deterministic) {
  for (const std::string args : {"graph --fn step --lambda 2 --grid-min -3 --grid-max 3 --format csv",
                                 "levprox --fn zero-norm --lambda 0.5 --x 0",
                                 "verify --suite hypomono --fn neg-norm --lambda 1 --seed 7",
                                 "figure --id 3b --lambda 2 --format svg"}) {
    auto a = run(args);
    auto b = run(args);
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
}

TEST(Cli, OutFileIsWrittenWhole) {
  auto dir = scratch_dir("out");
  fs::path target = dir / "fig.csv";
  ASSERT_EQ(run("figure --id 2b --lambda 1 --out " + target.string()).code, 0);
  EXPECT_EQ(slurp(target), slurp(fs::path(LEVPROX_SAMPLES_DIR) / ".." / "tests" / "golden" / "figure_2b.csv"));
  // No temporary left behind.
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
}

TEST(Cli, FailedRunLeavesExistingFileAlone) {
  auto dir = scratch_dir("keep");
  fs::path target = dir / "prox.json";
  { std::ofstream(target) << "previous"; }
  EXPECT_EQ(run("prox --fn neg-quad:2 --lambda 1 --x 1 --out " + target.string()).code, 2);
  EXPECT_EQ(slurp(target), "previous");
}

TEST(Cli, VerifySuites) {
  auto r = run("verify --suite equivalence --fn zero-norm --lambda 2");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  ASSERT_FALSE(j["reports"].empty());
  EXPECT_EQ(j["reports"][0]["sides"]["L"], false);
  EXPECT_EQ(j["reports"][0]["sides"]["R"], false);
}

TEST(Cli, GraphOfLevprox) {
  auto r = run("graph --fn zero-norm --lambda 2 --of levprox --grid-min -1 --grid-max 1 --samples 5 --format csv");
  ASSERT_EQ(r.code, 0);
  // x = 0 carries [-1, 1]; x = +-0.5 and +-1 carry the empty set.
  EXPECT_NE(r.out.find("\n0,-1"), std::string::npos) << r.out;
}
