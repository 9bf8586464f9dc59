#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef LEVYLAB_CLI_PATH
#error "LEVYLAB_CLI_PATH must name the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const bool merged = args.find("2>&1") != std::string::npos;
  const std::string cmd = std::string("'") + LEVYLAB_CLI_PATH + "' " + args + (merged ? "" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto d = fs::temp_directory_path() / ("levylab_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

const std::string kCauchy = R"('{"variant":"stable","beta":1,"c":1}')";

}  // namespace

TEST_CASE("moments report") {
  const auto r = run(R"(moments --measure '{"variant":"symmetric_stable","b":1,"beta":0.5}' --xi 1)");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"value\": \"8\"") != std::string::npos);
}

TEST_CASE("divergent moments exit with 3") {
  CHECK(run(R"(moments --measure '{"variant":"symmetric_stable","b":1,"beta":0.5}' --xi 0.3)").code == 3);
}

TEST_CASE("validation errors exit with 2 and name the path") {
  const auto r = run(R"(bg-index --measure '{"variant":"generic_density","terms":[{"b":1,"beta":0.7,"lambda":-1}]}' 2>&1)");
  CHECK(r.code == 2);
  CHECK(r.out.find("$.measure.terms[0].lambda") != std::string::npos);
  const auto g = run("psi --function '{\"variant\":\"indicator\",\"K\":0}' --process " + kCauchy + " --t-grid 0.5,1.5 2>&1");
  CHECK(g.code == 2);
  CHECK(g.out.find("$.budget.t_grid[1]") != std::string::npos);
  const auto v = run("d12 --function '{\"variant\":\"bogus\"}' --process " + kCauchy + " 2>&1");
  CHECK(v.code == 2);
  CHECK(v.out.find("$.function.variant") != std::string::npos);
  CHECK(run("moments --measure '{oops'").code == 2);
  CHECK(run("no-such-command").code == 2);
}

TEST_CASE("d12 of the cauchy indicator diverges") {
  CHECK(run("d12 --function '{\"variant\":\"indicator\",\"K\":0}' --process " + kCauchy).code == 3);
}

TEST_CASE("reruns with the same seed are byte-identical") {
  const auto dir = scratch();
  REQUIRE(run("--seed 5 --no-timestamp --out '" + (dir / "a").string() + "' sample --process " + kCauchy + " --n 2000").code == 0);
  REQUIRE(run("--seed 5 --no-timestamp --out '" + (dir / "b").string() + "' sample --process " + kCauchy + " --n 2000").code == 0);
  const auto a = slurp(dir / "a.csv"), b = slurp(dir / "b.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == b);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  REQUIRE(run("--seed 6 --no-timestamp --out '" + (dir / "c").string() + "' sample --process " + kCauchy + " --n 2000").code == 0);
  CHECK(slurp(dir / "c.csv") != a);
  fs::remove_all(dir);
}

TEST_CASE("timestamps appear unless suppressed") {
  const auto dir = scratch();
  REQUIRE(run("--out '" + (dir / "t").string() + "' density --process " + kCauchy + " --x 0,1").code == 0);
  CHECK(slurp(dir / "t.csv").starts_with("# generated"));
  CHECK(slurp(dir / "t.json").find("generated_at") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("run executes a config file") {
  const auto dir = scratch();
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"operation":"density","process":{"variant":"stable","beta":1,"c":1},"params":{"t":1,"x":[0]}})";
  }
  const auto r = run("run --config '" + (dir / "cfg.json").string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("x,p") != std::string::npos);
  CHECK(r.out.find("0.3183098861837") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("verify subcommand") {
  const auto r = run("verify --suite AC1,AC5");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"AC1\"") != std::string::npos);
  const auto e = run("verify --suite ''");
  CHECK(e.code == 0);
  CHECK(run("verify --suite AC99").code == 2);
}
