#include <doctest.h>

#include <sstream>
#include <string>

#include "cframe/error.hpp"
#include "cframe/property_suite.hpp"
#include "cframe/report.hpp"

using namespace cframe;

namespace {

double human_quantity(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    double value = 0.0;
    if (fields >> key >> value && key == name) return value;
  }
  FAIL("quantity " << name << " missing");
  return 0.0;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("format names") {
  CHECK(parse_format("human") == Format::Human);
  CHECK(parse_format("json") == Format::Json);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("an empty report renders as a csv header only") {
  AnalysisReport r;
  r.kind = "analysis";
  CHECK(emit(r, Format::Csv) == "quantity,value\n");
  CHECK(r.passed());
}

TEST_CASE("a failed check fails the report") {
  AnalysisReport r;
  r.checks.push_back({"a", true, ""});
  r.checks.push_back({"b", false, "broken"});
  CHECK_FALSE(r.passed());
  const std::string human = emit(r, Format::Human);
  CHECK(human.find("FAIL") != std::string::npos);
  CHECK(human.find("broken") != std::string::npos);
}

TEST_CASE("example 1 analysis: bounds agree across renderings") {
  const AnalysisReport r = run_analysis(builtin_scenario("example1", 3.0));
  CHECK(r.passed());
  const Json j = Json::parse(emit(r, Format::Json));
  CHECK(j["kind"] == "analysis");
  const double lower = j["lower_bound"].get<double>();
  const double upper = j["upper_bound"].get<double>();
  CHECK(lower == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(human_quantity(emit(r, Format::Human), "lower_bound") == doctest::Approx(lower).epsilon(1e-9));
  const std::string csv = emit(r, Format::Csv);
  CHECK(csv.rfind("quantity,value\n", 0) == 0);
  CHECK(csv.find("lower_bound,0.25\n") != std::string::npos);
  CHECK(csv.find("upper_bound,1\n") != std::string::npos);
}

TEST_CASE("json output is deterministic and excludes wall time") {
  const Scenario s = builtin_scenario("example1", 1.0);
  const std::string a = emit(run_analysis(s), Format::Json);
  const std::string b = emit(run_analysis(s), Format::Json);
  CHECK(a == b);
  CHECK(a.find("wall") == std::string::npos);
}

TEST_CASE("verification and reconstruction reports") {
  const Scenario s = builtin_scenario("example1", 0.5);
  const AnalysisReport v = run_verification(s);
  CHECK(v.passed());
  CHECK(v.kind == "verification");
  const bool has_trace = v.data.contains("reconstruction") && v.data["reconstruction"].contains("trace");
  CHECK_FALSE(has_trace);
  const AnalysisReport r = run_reconstruction(s, 1e-10);
  CHECK(r.passed());
  CHECK(r.data["reconstruction"]["relative_error"].get<double>() <= 1e-9);
  const AnalysisReport d = dump_frame(s);
  CHECK(d.kind == "frame");
}

TEST_CASE("suite rejects empty runs") {
  SuiteOptions o;
  o.cases = 0;
  CHECK_THROWS_AS(run_property_suite(o), Error);
  o.cases = 1;
  o.max_dim = 0;
  CHECK_THROWS_AS(run_property_suite(o), Error);
}

TEST_CASE("a small suite passes every property and reports each one") {
  SuiteOptions o;
  o.seed = 99;
  o.cases = 12;
  o.samples = 30;
  const AnalysisReport r = run_property_suite(o);
  CHECK(r.passed());
  CHECK(r.checks.size() == property_names().size());
  for (const auto& name : property_names()) CHECK(r.data["properties"].contains(name));
  CHECK(r.data["failures"].get<int>() == 0);
  CHECK(emit(r, Format::Json) == emit(run_property_suite(o), Format::Json));
}

TEST_CASE("the as-stated exponent yields counterexamples on planted controllers") {
  SuiteOptions o;
  o.seed = 7;
  o.cases = 10;
  o.samples = 30;
  o.variant = ExponentVariant::AsStated;
  const AnalysisReport r = run_property_suite(o);
  CHECK_FALSE(r.passed());
  REQUIRE(r.data["counterexamples"].size() > 0);
  for (const auto& c : r.data["counterexamples"]) {
    CHECK(c["property"] == "conversion_plain_to_controlled");
    CHECK(c["instance"]["inv_sqrt_norm"].get<double>() > 1.0);
  }
}

}
