#ifndef CFRAME_CFRAME_H
#define CFRAME_CFRAME_H

/* C interface to the controlled-frame library: load scenarios, run
 * analyses and the property suite, and render reports. Every function
 * returns a status; on failure cframe_last_error() describes it. Handles are
 * opaque and released with the matching *_free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CFRAME_BUILDING_LIBRARY)
#    define CFRAME_API __declspec(dllexport)
#  else
#    define CFRAME_API __declspec(dllimport)
#  endif
#else
#  define CFRAME_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cframe_status {
  CFRAME_OK = 0,
  CFRAME_ERR_DESCRIPTOR_MISMATCH,
  CFRAME_ERR_INVALID_ARGUMENT,
  CFRAME_ERR_NOT_POSITIVE,
  CFRAME_ERR_NOT_SELF_ADJOINT,
  CFRAME_ERR_SINGULAR,
  CFRAME_ERR_NOT_IN_GL_PLUS,
  CFRAME_ERR_MAX_ITER_EXCEEDED,
  CFRAME_ERR_NOT_A_FRAME,
  CFRAME_ERR_NOT_SURJECTIVE,
  CFRAME_ERR_NON_COMMUTING,
  CFRAME_ERR_NOT_MULTIPLICATION_OPERATOR,
  CFRAME_ERR_NOT_COMMUTATIVE,
  CFRAME_ERR_PARSE,
  CFRAME_ERR_VALIDATION,
  CFRAME_ERR_IO,
  CFRAME_ERR_INTERNAL
} cframe_status;

typedef enum cframe_format { CFRAME_FORMAT_HUMAN = 0, CFRAME_FORMAT_JSON, CFRAME_FORMAT_CSV } cframe_format;

typedef enum cframe_exponent { CFRAME_EXPONENT_DERIVED = 0, CFRAME_EXPONENT_AS_STATED } cframe_exponent;

typedef struct cframe_scenario cframe_scenario;
typedef struct cframe_report cframe_report;

typedef struct cframe_suite_options {
  uint64_t seed;
  int cases;
  int max_dim;
  int max_rank;
  int max_nodes;
  int samples;
  cframe_exponent exponent;
} cframe_suite_options;

/* Message for the last failed call on this thread; never NULL. */
CFRAME_API const char* cframe_last_error(void);
CFRAME_API const char* cframe_status_string(cframe_status status);

/* Nonzero for errors caused by the input (parse, validation, IO, bad
 * arguments) rather than by a failed computation. */
CFRAME_API int cframe_status_is_input_error(cframe_status status);

/* Seed used when a scenario does not set one (CFRAME_SEED overrides it). */
CFRAME_API cframe_status cframe_default_seed(uint64_t* out);

CFRAME_API cframe_status cframe_scenario_load(const char* path, cframe_scenario** out);
CFRAME_API cframe_status cframe_scenario_parse(const char* text, const char* source_name, cframe_scenario** out);
/* name: "example1" or "example2"; truncation is used by example2 only. */
CFRAME_API cframe_status cframe_scenario_builtin(const char* name, double alpha, int truncation,
                                                 cframe_scenario** out);
CFRAME_API cframe_status cframe_scenario_set_seed(cframe_scenario* scenario, uint64_t seed);
CFRAME_API void cframe_scenario_free(cframe_scenario* scenario);

CFRAME_API cframe_status cframe_analyze(const cframe_scenario* scenario, cframe_report** out);
CFRAME_API cframe_status cframe_verify(const cframe_scenario* scenario, cframe_report** out);
/* tol <= 0 uses the scenario's reconstruction tolerance. */
CFRAME_API cframe_status cframe_reconstruct(const cframe_scenario* scenario, double tol, cframe_report** out);
CFRAME_API cframe_status cframe_dump_frame(const cframe_scenario* scenario, cframe_report** out);

CFRAME_API void cframe_suite_options_default(cframe_suite_options* options);
CFRAME_API cframe_status cframe_property_suite(const cframe_suite_options* options, cframe_report** out);

/* 1 when every check in the report passed, 0 otherwise. */
CFRAME_API int cframe_report_passed(const cframe_report* report);
CFRAME_API size_t cframe_report_check_count(const cframe_report* report);
/* Optimal scalar frame bounds; CFRAME_ERR_INVALID_ARGUMENT for reports without them. */
CFRAME_API cframe_status cframe_report_bounds(const cframe_report* report, double* lower, double* upper);

/* Renders into a newly allocated NUL-terminated string; release it with
 * cframe_string_free. */
CFRAME_API cframe_status cframe_report_emit(const cframe_report* report, cframe_format format, char** out);
CFRAME_API cframe_status cframe_report_write(const cframe_report* report, cframe_format format, const char* path);
CFRAME_API void cframe_report_free(cframe_report* report);
CFRAME_API void cframe_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
