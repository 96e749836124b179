#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crteq/cli.hpp"
#include "crteq/config.hpp"

using namespace crteq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("crteq_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("config echo round trip") {
  ExperimentConfig c;
  c.system.kind = "veronese";
  c.system.poly = "-2,0,0,1";
  c.ladder = {100, 2000, 30000};
  c.k = 2;
  c.theorem = 3;
  c.weighting = Weighting::rho;
  c.H = 17;
  c.alpha = 0.1;
  c.epsilon = 0.1;
  c.profile = {0.25, 0.5, 0.25};
  c.h_set = {-3, 1, 4};
  c.threads = 5;
  std::istringstream in(echo_config(c, true));
  CHECK(parse_config(in, "echo") == c);
  std::istringstream defaults(echo_config(ExperimentConfig{}, true));
  CHECK(parse_config(defaults, "echo") == ExperimentConfig{});
}

TEST_CASE("config parse errors") {
  std::istringstream dup("seed = 1\n# note\nseed = 2\n");
  CHECK_THROWS_WITH_AS(parse_config(dup, "c.txt"), doctest::Contains("c.txt:3: duplicate key 'seed'"), ConfigError);
  std::istringstream unknown("bogus = 1\n");
  CHECK_THROWS_WITH_AS(parse_config(unknown, "c.txt"), doctest::Contains("bogus"), ConfigError);
  std::istringstream bad("theorem = 7\n");
  CHECK_THROWS_AS(parse_config(bad, "c.txt"), ConfigError);
  std::istringstream noeq("seed 3\n");
  CHECK_THROWS_AS(parse_config(noeq, "c.txt"), ConfigError);
  std::istringstream sci("max_work = 1e6\nx = 2e4\n");
  const ExperimentConfig c = parse_config(sci, "c.txt");
  CHECK(c.x == 20000);
  CHECK(c.max_work == 1e6);
}

TEST_CASE("command line overrides the config file") {
  const fs::path dir = scratch("override");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "seed = 5\nx = 500\npoly = 1,0,1\n";
  }
  REQUIRE(run({"primes", "--config", (dir / "run.cfg").string(), "--seed", "9", "--out", (dir / "o").string()}) == 0);
  const std::string echo = slurp(dir / "o" / "config.echo.txt");
  CHECK(echo.find("seed = 9\n") != std::string::npos);
  CHECK(echo.find("x = 500\n") != std::string::npos);
  REQUIRE(run({"primes", "--config", (dir / "run.cfg").string(), "--set", "x=700", "--out", (dir / "p").string()}) == 0);
  CHECK(slurp(dir / "p" / "config.echo.txt").find("x = 700\n") != std::string::npos);
  CHECK(fs::exists(dir / "p" / "report.json"));
  CHECK(fs::exists(dir / "p" / "primes.csv"));
  CHECK(fs::exists(dir / "p" / "manifest.json"));
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  const std::string out = (dir / "o").string();
  std::string err;
  CHECK(run({}, &err) == kExitUsage);
  CHECK(run({"frobnicate"}) == kExitUsage);
  CHECK(run({"table", "--config", (dir / "missing.cfg").string(), "--out", out}, &err) == kExitUsage);
  CHECK(err.find("missing.cfg") != std::string::npos);
  CHECK(run({"table", "--set", "bogus=1", "--out", out}) == kExitUsage);
  CHECK(run({"table", "--set", "x", "--out", out}) == kExitUsage);
  CHECK(run({"sweep", "--theorem", "9", "--out", out}) == kExitUsage);
  CHECK(run({"table", "--pseudo", "f9", "--out", out}) == kExitUsage);
  CHECK(run({"ffield", "--set", "ffield_curve=1,0,0", "--set", "ffield_primes=101", "--out", out}) == kExitCompute);
  CHECK(run({"table", "--pseudo", "f1", "--x", "2000", "--out", out}) == kExitOk);
  CHECK(run({"table", "--help"}) == kExitOk);
}

TEST_CASE("reports do not depend on the thread count") {
  const fs::path dir = scratch("threads");
  for (const char* sub : {"sweep", "table", "primes", "disc"}) {
    std::vector<std::string> base{sub, "--ladder", "200,600", "--x", "3000", "--q", "0"};
    std::vector<std::string> a = base, b = base;
    a.insert(a.end(), {"--threads", "1", "--out", (dir / "a").string()});
    b.insert(b.end(), {"--threads", "8", "--out", (dir / "b").string()});
    if (std::string(sub) == "disc") {
      a.back() = (dir / "a").string();
      for (auto* v : {&a, &b}) {
        v->push_back("--set");
        v->push_back("system=veronese");
        v->push_back("--set");
        v->push_back("x=300");
      }
    }
    REQUIRE(run(a) == 0);
    REQUIRE(run(b) == 0);
    CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
  }
}
