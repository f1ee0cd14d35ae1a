#include <doctest.h>

#include <cstdlib>
#include <string>

#include "cframe/config.hpp"
#include "cframe/error.hpp"
#include "cframe/scenario.hpp"

using namespace cframe;

namespace {

ErrorCode parse_error_code(const std::string& text, std::string* message = nullptr) {
  try {
    parse_scenario(text, "t.toml");
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("scenario parsed");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("config reader handles sections, comments and nested arrays") {
  const auto doc = config::parse(
      "name = \"x # not a comment\"  # comment\n"
      "flag = true\n"
      "[sec]\n"
      "v = [1, 2.5, -3e-1]\n"
      "t = [\n"
      "  [1, 2],\n"
      "  [3, 4],\n"
      "]\n",
      "doc");
  CHECK(doc.string("", "name", "") == "x # not a comment");
  CHECK(doc.boolean("", "flag", false));
  CHECK(doc.numbers("sec", "v") == std::vector<double>{1.0, 2.5, -0.3});
  const auto t = doc.table("sec", "t");
  REQUIRE(t.size() == 2);
  CHECK(t[1][0] == 3.0);
  CHECK(doc.find("sec", "t")->line == 5);
  CHECK(doc.integer("sec", "missing", 7) == 7);
}

TEST_CASE("config type errors name the file, line and key") {
  const auto doc = config::parse("[algebra]\ndim = \"two\"\n", "f.toml");
  try {
    doc.integer("algebra", "dim", 1);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    const std::string msg = e.what();
    CHECK(msg.find("f.toml:2") != std::string::npos);
    CHECK(msg.find("algebra.dim") != std::string::npos);
  }
}

TEST_CASE("malformed syntax is a parse error") {
  CHECK_THROWS_AS(config::parse("key = [1, 2\n"), Error);
  CHECK_THROWS_AS(config::parse("[open\n"), Error);
  CHECK_THROWS_AS(config::parse("= 3\n"), Error);
  CHECK_THROWS_AS(config::parse("a = 1\na = 2\n"), Error);
}

TEST_CASE("unknown keys and sections are rejected with their location") {
  std::string msg;
  CHECK(parse_error_code("[frame]\nbuiltin = \"example1\"\n[measure]\nnodez = 3\n", &msg) == ErrorCode::ParseError);
  CHECK(msg.find("t.toml:4") != std::string::npos);
  CHECK(msg.find("measure.nodez") != std::string::npos);
  CHECK(parse_error_code("[frame]\nbuiltin = \"example1\"\n[extra]\n") == ErrorCode::ParseError);
}

TEST_CASE("invalid values are validation errors") {
  CHECK(parse_error_code("[frame]\nbuiltin = \"example1\"\nalpha = -1\n") == ErrorCode::ValidationError);
  CHECK(parse_error_code("[frame]\nbuiltin = \"example3\"\n") == ErrorCode::ValidationError);
  CHECK_THROWS_AS(builtin_scenario("example2", 1.0, 0), Error);
  CHECK_THROWS_AS(builtin_scenario("example1", 0.0), Error);
}

TEST_CASE("explicit controller must be in GL+") {
  const std::string text =
      "[algebra]\ndim = 1\n[measure]\nkind = \"counting\"\nnodes = 1\n"
      "[frame]\nsource = \"explicit\"\nvectors = [[1.0]]\n"
      "[controller]\ntype = \"explicit\"\nmatrix = [[-1.0]]\n";
  const Scenario s = parse_scenario(text, "t.toml");
  try {
    build_instance(s);
    FAIL("expected a failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInGlPlus);
    CHECK(std::string(e.what()).find("scenario 'scenario'") != std::string::npos);
  }
}

TEST_CASE("builtin scenarios") {
  const Scenario e1 = builtin_scenario("example1", 3.0);
  CHECK(e1.algebra == AlgebraDescriptor{2, Structure::Diagonal});
  CHECK(e1.measure.kind == MeasureKind::IntervalGaussLegendre);
  const Instance i1 = build_instance(e1);
  CHECK(i1.controller.eig_min() == doctest::Approx(3.0));
  const Scenario e2 = builtin_scenario("example2", 1.0, 10);
  CHECK(module_descriptor(e2).flat_size() == 10);
  CHECK(build_measure(e2).size() == 10);
}

TEST_CASE("scenario files in the repository load and build") {
  for (const char* name : {"example1.toml", "example2.toml", "random_full.toml", "explicit.toml"}) {
    CAPTURE(name);
    const Scenario s = load_scenario(std::string(CFRAME_SCENARIO_DIR) + "/" + name);
    const Instance inst = build_instance(s);
    CHECK(inst.frame.size() == build_measure(s).size());
  }
  const Scenario r = load_scenario(std::string(CFRAME_SCENARIO_DIR) + "/random_full.toml");
  CHECK(r.seed == 42);
  CHECK(r.rank == 2);
  REQUIRE(r.transform.has_value());
  CHECK(r.transform->kind == TransformKind::ControllerPolynomial);
}

TEST_CASE("random frames depend only on the seed") {
  const Scenario s = load_scenario(std::string(CFRAME_SCENARIO_DIR) + "/random_full.toml");
  const Instance a = build_instance(s);
  const Instance b = build_instance(s);
  for (std::size_t i = 0; i < a.frame.size(); ++i)
    CHECK(max_abs_diff(a.frame.vectors()[i], b.frame.vectors()[i]) == 0.0);
  Scenario t = s;
  t.seed = 43;
  CHECK(max_abs_diff(build_instance(t).frame.vectors()[0], a.frame.vectors()[0]) > 0.0);
}

TEST_CASE("missing file is an IO error") {
  try {
    load_scenario("/nonexistent/scenario.toml");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}

TEST_CASE("default seed honours CFRAME_SEED") {
  ::setenv("CFRAME_SEED", "12345", 1);
  CHECK(default_seed() == 12345u);
  ::unsetenv("CFRAME_SEED");
  CHECK(default_seed() == 20240607u);
}

}
