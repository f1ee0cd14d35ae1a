#include "cframe/cframe.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "cframe/error.hpp"
#include "cframe/property_suite.hpp"
#include "cframe/report.hpp"

struct cframe_scenario {
  cframe::Scenario value;
};

struct cframe_report {
  cframe::AnalysisReport value;
};

namespace {

thread_local std::string last_error;

cframe_status to_status(cframe::ErrorCode code) {
  using cframe::ErrorCode;
  switch (code) {
    case ErrorCode::DescriptorMismatch: return CFRAME_ERR_DESCRIPTOR_MISMATCH;
    case ErrorCode::InvalidArgument: return CFRAME_ERR_INVALID_ARGUMENT;
    case ErrorCode::NotPositive: return CFRAME_ERR_NOT_POSITIVE;
    case ErrorCode::NotSelfAdjoint: return CFRAME_ERR_NOT_SELF_ADJOINT;
    case ErrorCode::Singular: return CFRAME_ERR_SINGULAR;
    case ErrorCode::NotInGlPlus: return CFRAME_ERR_NOT_IN_GL_PLUS;
    case ErrorCode::MaxIterExceeded: return CFRAME_ERR_MAX_ITER_EXCEEDED;
    case ErrorCode::NotAFrame: return CFRAME_ERR_NOT_A_FRAME;
    case ErrorCode::NotSurjective: return CFRAME_ERR_NOT_SURJECTIVE;
    case ErrorCode::NonCommuting: return CFRAME_ERR_NON_COMMUTING;
    case ErrorCode::NotMultiplicationOperator: return CFRAME_ERR_NOT_MULTIPLICATION_OPERATOR;
    case ErrorCode::NotCommutative: return CFRAME_ERR_NOT_COMMUTATIVE;
    case ErrorCode::ParseError: return CFRAME_ERR_PARSE;
    case ErrorCode::ValidationError: return CFRAME_ERR_VALIDATION;
    case ErrorCode::IoError: return CFRAME_ERR_IO;
  }
  return CFRAME_ERR_INTERNAL;
}

template <class F>
cframe_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CFRAME_OK;
  } catch (const cframe::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CFRAME_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CFRAME_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CFRAME_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) cframe::fail(cframe::ErrorCode::InvalidArgument, what);
}

cframe::Format to_format(cframe_format f) {
  switch (f) {
    case CFRAME_FORMAT_HUMAN: return cframe::Format::Human;
    case CFRAME_FORMAT_JSON: return cframe::Format::Json;
    case CFRAME_FORMAT_CSV: return cframe::Format::Csv;
  }
  cframe::fail(cframe::ErrorCode::InvalidArgument, "unknown output format");
}

template <class F>
cframe_status make_report(cframe_report** out, F&& produce) {
  return guarded([&] {
    require(out != nullptr, "output handle is null");
    *out = nullptr;
    *out = new cframe_report{produce()};
  });
}

}  // namespace

extern "C" {

const char* cframe_last_error(void) { return last_error.c_str(); }

const char* cframe_status_string(cframe_status status) {
  switch (status) {
    case CFRAME_OK: return "ok";
    case CFRAME_ERR_DESCRIPTOR_MISMATCH: return "descriptor mismatch";
    case CFRAME_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CFRAME_ERR_NOT_POSITIVE: return "not positive";
    case CFRAME_ERR_NOT_SELF_ADJOINT: return "not self-adjoint";
    case CFRAME_ERR_SINGULAR: return "singular";
    case CFRAME_ERR_NOT_IN_GL_PLUS: return "not in GL+";
    case CFRAME_ERR_MAX_ITER_EXCEEDED: return "maximum iterations exceeded";
    case CFRAME_ERR_NOT_A_FRAME: return "not a frame";
    case CFRAME_ERR_NOT_SURJECTIVE: return "not surjective";
    case CFRAME_ERR_NON_COMMUTING: return "non-commuting";
    case CFRAME_ERR_NOT_MULTIPLICATION_OPERATOR: return "not a multiplication operator";
    case CFRAME_ERR_NOT_COMMUTATIVE: return "not commutative";
    case CFRAME_ERR_PARSE: return "parse error";
    case CFRAME_ERR_VALIDATION: return "validation error";
    case CFRAME_ERR_IO: return "io error";
    case CFRAME_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int cframe_status_is_input_error(cframe_status status) {
  return status == CFRAME_ERR_PARSE || status == CFRAME_ERR_VALIDATION || status == CFRAME_ERR_IO ||
         status == CFRAME_ERR_INVALID_ARGUMENT;
}

cframe_status cframe_default_seed(uint64_t* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer is null");
    *out = cframe::default_seed();
  });
}

cframe_status cframe_scenario_load(const char* path, cframe_scenario** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new cframe_scenario{cframe::load_scenario(path)};
  });
}

cframe_status cframe_scenario_parse(const char* text, const char* source_name, cframe_scenario** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new cframe_scenario{cframe::parse_scenario(text, source_name ? source_name : "<string>")};
  });
}

cframe_status cframe_scenario_builtin(const char* name, double alpha, int truncation, cframe_scenario** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new cframe_scenario{cframe::builtin_scenario(name, alpha, truncation)};
  });
}

cframe_status cframe_scenario_set_seed(cframe_scenario* scenario, uint64_t seed) {
  return guarded([&] {
    require(scenario != nullptr, "null scenario");
    scenario->value.seed = seed;
  });
}

void cframe_scenario_free(cframe_scenario* scenario) { delete scenario; }

cframe_status cframe_analyze(const cframe_scenario* scenario, cframe_report** out) {
  return make_report(out, [&] {
    require(scenario != nullptr, "null scenario");
    return cframe::run_analysis(scenario->value);
  });
}

cframe_status cframe_verify(const cframe_scenario* scenario, cframe_report** out) {
  return make_report(out, [&] {
    require(scenario != nullptr, "null scenario");
    return cframe::run_verification(scenario->value);
  });
}

cframe_status cframe_reconstruct(const cframe_scenario* scenario, double tol, cframe_report** out) {
  return make_report(out, [&] {
    require(scenario != nullptr, "null scenario");
    return cframe::run_reconstruction(scenario->value, tol > 0.0 ? std::optional<double>(tol) : std::nullopt);
  });
}

cframe_status cframe_dump_frame(const cframe_scenario* scenario, cframe_report** out) {
  return make_report(out, [&] {
    require(scenario != nullptr, "null scenario");
    return cframe::dump_frame(scenario->value);
  });
}

void cframe_suite_options_default(cframe_suite_options* options) {
  if (!options) return;
  const cframe::SuiteOptions d;
  uint64_t seed = 0;
  if (cframe_default_seed(&seed) != CFRAME_OK) seed = 0;
  *options = {seed, d.cases, d.max_dim, d.max_rank, d.max_nodes, d.samples, CFRAME_EXPONENT_DERIVED};
}

cframe_status cframe_property_suite(const cframe_suite_options* options, cframe_report** out) {
  return make_report(out, [&] {
    require(options != nullptr, "null options");
    cframe::SuiteOptions o;
    o.seed = options->seed;
    o.cases = options->cases;
    o.max_dim = options->max_dim;
    o.max_rank = options->max_rank;
    o.max_nodes = options->max_nodes;
    o.samples = options->samples;
    o.variant = options->exponent == CFRAME_EXPONENT_AS_STATED ? cframe::ExponentVariant::AsStated
                                                               : cframe::ExponentVariant::Derived;
    return cframe::run_property_suite(o);
  });
}

int cframe_report_passed(const cframe_report* report) { return report && report->value.passed() ? 1 : 0; }

size_t cframe_report_check_count(const cframe_report* report) { return report ? report->value.checks.size() : 0; }

cframe_status cframe_report_bounds(const cframe_report* report, double* lower, double* upper) {
  return guarded([&] {
    require(report != nullptr && lower != nullptr && upper != nullptr, "null argument");
    const auto& data = report->value.data;
    require(data.contains("lower_bound") && data.contains("upper_bound"), "report carries no frame bounds");
    *lower = data["lower_bound"].get<double>();
    *upper = data["upper_bound"].get<double>();
  });
}

cframe_status cframe_report_emit(const cframe_report* report, cframe_format format, char** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    const std::string text = cframe::emit(report->value, to_format(format));
    char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buffer) throw std::bad_alloc();
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    *out = buffer;
  });
}

cframe_status cframe_report_write(const cframe_report* report, cframe_format format, const char* path) {
  return guarded([&] {
    require(report != nullptr && path != nullptr, "null argument");
    const std::string text = cframe::emit(report->value, to_format(format));
    std::ofstream file(path, std::ios::binary);
    if (!file) cframe::fail(cframe::ErrorCode::IoError, std::string("cannot open '") + path + "' for writing");
    file << text;
    file.close();
    if (!file) cframe::fail(cframe::ErrorCode::IoError, std::string("failed writing '") + path + "'");
  });
}

void cframe_report_free(cframe_report* report) { delete report; }

void cframe_string_free(char* text) { std::free(text); }

}  // extern "C"
