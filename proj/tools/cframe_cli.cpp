// cframe-cli: scenario analysis and the randomized property suite on top of
// the C interface.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cframe/cframe.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Output {
  std::string format = "human";
  std::string path;
};

struct ScenarioArgs {
  std::string scenario;
  std::optional<double> alpha;
  std::optional<int> truncation;
  std::optional<uint64_t> seed;
};

int report_error(cframe_status status) {
  const char* message = cframe_last_error();
  std::fprintf(stderr, "error: %s\n", *message ? message : cframe_status_string(status));
  return cframe_status_is_input_error(status) ? kExitInput : kExitFail;
}

cframe_format to_format(const std::string& text) {
  if (text == "json") return CFRAME_FORMAT_JSON;
  if (text == "csv") return CFRAME_FORMAT_CSV;
  return CFRAME_FORMAT_HUMAN;
}

bool is_builtin(const std::string& name) {
  return (name == "example1" || name == "example2") && !std::filesystem::exists(name);
}

cframe_status open_scenario(const ScenarioArgs& a, cframe_scenario** out) {
  cframe_status st;
  if (is_builtin(a.scenario)) {
    st = cframe_scenario_builtin(a.scenario.c_str(), a.alpha.value_or(1.0), a.truncation.value_or(100), out);
  } else {
    st = cframe_scenario_load(a.scenario.c_str(), out);
  }
  if (st == CFRAME_OK && a.seed) st = cframe_scenario_set_seed(*out, *a.seed);
  return st;
}

// Writes the report and maps its verdict onto the exit code.
int finish(cframe_report* report, const Output& out) {
  const cframe_format format = to_format(out.format);
  cframe_status st;
  if (out.path.empty()) {
    char* text = nullptr;
    st = cframe_report_emit(report, format, &text);
    if (st == CFRAME_OK) {
      std::fputs(text, stdout);
      cframe_string_free(text);
    }
  } else {
    st = cframe_report_write(report, format, out.path.c_str());
  }
  const int passed = cframe_report_passed(report);
  cframe_report_free(report);
  if (st != CFRAME_OK) return report_error(st);
  return passed ? kExitPass : kExitFail;
}

using ScenarioVerb = std::function<cframe_status(const cframe_scenario*, cframe_report**)>;

int run_scenario_verb(const ScenarioArgs& a, const Output& out, const ScenarioVerb& verb) {
  if (!is_builtin(a.scenario) && (a.alpha || a.truncation)) {
    std::fprintf(stderr, "error: --alpha and --truncation apply to builtin scenarios only\n");
    return kExitInput;
  }
  cframe_scenario* scenario = nullptr;
  if (cframe_status st = open_scenario(a, &scenario); st != CFRAME_OK) {
    cframe_scenario_free(scenario);
    return report_error(st);
  }
  cframe_report* report = nullptr;
  const cframe_status st = verb(scenario, &report);
  cframe_scenario_free(scenario);
  if (st != CFRAME_OK) return report_error(st);
  return finish(report, out);
}

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a, Output& out) {
  cmd->add_option("scenario", a.scenario, "scenario file, or builtin name example1 / example2")->required();
  cmd->add_option("--alpha", a.alpha, "controller scale for builtin scenarios (> 0)");
  cmd->add_option("--truncation", a.truncation, "truncation N for example2 (>= 1)");
  cmd->add_option("--seed", a.seed, "override the scenario seed");
  cmd->add_option("--format", out.format, "output format")->check(CLI::IsMember({"human", "json", "csv"}));
  cmd->add_option("--out", out.path, "write the report to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled integral frames on Hilbert C*-modules: analysis and property checks"};
  app.require_subcommand(1);

  ScenarioArgs sa;
  Output out;

  auto* analyze = app.add_subcommand("analyze", "full analysis report for a scenario");
  add_scenario_options(analyze, sa, out);
  auto* verify = app.add_subcommand("verify", "run every frame check for a scenario");
  add_scenario_options(verify, sa, out);

  auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct a seeded element through S_C^-1");
  add_scenario_options(reconstruct, sa, out);
  double tol = 0.0;
  reconstruct->add_option("--tol", tol, "relative reconstruction tolerance (default: scenario's)")
      ->check(CLI::PositiveNumber);

  auto* dump = app.add_subcommand("dump-frame", "print the frame vectors at every node");
  add_scenario_options(dump, sa, out);

  cframe_suite_options so;
  cframe_suite_options_default(&so);
  std::string variant = "derived";
  auto* suite = app.add_subcommand("suite", "randomized property suite");
  suite->add_option("--seed", so.seed, "suite seed");
  suite->add_option("--cases", so.cases, "number of random instances (>= 1)");
  suite->add_option("--max-dim", so.max_dim, "largest algebra dimension n");
  suite->add_option("--max-rank", so.max_rank, "largest module rank k");
  suite->add_option("--max-nodes", so.max_nodes, "largest number of quadrature nodes");
  suite->add_option("--samples", so.samples, "sampled elements per sampled check");
  suite->add_option("--variant", variant,
                    "exponent of ||C^{-1/2}|| in the plain->controlled lower bound: derived (-2) or as-stated (+2)")
      ->check(CLI::IsMember({"derived", "as-stated"}));
  suite->add_option("--format", out.format, "output format")->check(CLI::IsMember({"human", "json", "csv"}));
  suite->add_option("--out", out.path, "write the report to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  if (*analyze) return run_scenario_verb(sa, out, cframe_analyze);
  if (*verify) return run_scenario_verb(sa, out, cframe_verify);
  if (*dump) return run_scenario_verb(sa, out, cframe_dump_frame);
  if (*reconstruct) {
    return run_scenario_verb(sa, out, [tol](const cframe_scenario* s, cframe_report** r) {
      return cframe_reconstruct(s, tol, r);
    });
  }
  so.exponent = variant == "as-stated" ? CFRAME_EXPONENT_AS_STATED : CFRAME_EXPONENT_DERIVED;
  cframe_report* report = nullptr;
  if (cframe_status st = cframe_property_suite(&so, &report); st != CFRAME_OK) return report_error(st);
  return finish(report, out);
}
