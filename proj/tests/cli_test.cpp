#include <doctest.h>

#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("\"") + CFRAME_CLI + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scenario(const char* name) { return std::string("\"") + CFRAME_SCENARIO_DIR + "/" + name + "\""; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("passing analyses exit 0") {
  CHECK(run("analyze example1 --alpha 3").code == 0);
  CHECK(run("verify " + scenario("explicit.toml")).code == 0);
  CHECK(run("reconstruct " + scenario("random_full.toml") + " --tol 1e-10").code == 0);
  CHECK(run("dump-frame example2 --truncation 4 --format csv").code == 0);
}

TEST_CASE("input errors exit 2") {
  CHECK(run("analyze /nonexistent.toml").code == 2);
  CHECK(run("analyze example1 --alpha -1").code == 2);
  CHECK(run("analyze " + scenario("explicit.toml") + " --alpha 2").code == 2);
  CHECK(run("analyze example1 --format xml").code == 2);
  CHECK(run("suite --cases 0").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("a failed verification exits 1") {
  CHECK(run("suite --cases 6 --samples 20 --seed 20240607 --variant as-stated").code == 1);
  CHECK(run("suite --cases 6 --samples 20 --seed 20240607").code == 0);
}

TEST_CASE("same seed gives byte-identical json, a different seed does not") {
  const Run a = run("analyze example1 --format json --seed 11");
  const Run b = run("analyze example1 --format json --seed 11");
  const Run c = run("analyze example1 --format json --seed 12");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("csv output starts with its header") {
  const Run r = run("analyze example1 --format csv");
  CHECK(r.out.rfind("quantity,value\n", 0) == 0);
}

TEST_CASE("--out writes the report to a file") {
  const std::string path = "cli_test_out.json";
  std::remove(path.c_str());
  const Run r = run("analyze example1 --format json --out " + path);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  FILE* f = std::fopen(path.c_str(), "r");
  CHECK(f != nullptr);
  if (f) std::fclose(f);
  std::remove(path.c_str());
}

}
