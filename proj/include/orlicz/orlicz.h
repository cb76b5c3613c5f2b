/* C interface to the orlicz library. All objects are opaque handles owned by
 * the caller and released with the matching *_free function. Functions
 * return an orlicz_status; on failure orlicz_last_error() describes the
 * problem (thread-local, valid until the next failing call on the thread). */
#ifndef ORLICZ_ORLICZ_H
#define ORLICZ_ORLICZ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ORLICZ_API __declspec(dllexport)
#else
#define ORLICZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum orlicz_status {
  ORLICZ_OK = 0,
  ORLICZ_INVALID_ARGUMENT = 1,
  ORLICZ_PARSE_ERROR = 2,
  ORLICZ_NUMERIC_ERROR = 3,
  ORLICZ_HYPOTHESIS_ERROR = 4,
  ORLICZ_PROPERTY_VIOLATION = 5,
  ORLICZ_DOMAIN_ERROR = 6,
  ORLICZ_STRUCTURE_ERROR = 7,
  ORLICZ_PRECONDITION_ERROR = 8,
  ORLICZ_IO_ERROR = 9,
  ORLICZ_INTERNAL_ERROR = 10
} orlicz_status;

typedef enum orlicz_tolerance {
  ORLICZ_TOL_ALL = 0,
  ORLICZ_TOL_BISECTION = 1,
  ORLICZ_TOL_GAP = 2,
  ORLICZ_TOL_FATOU = 3
} orlicz_tolerance;

typedef enum orlicz_format { ORLICZ_FORMAT_JSON = 0, ORLICZ_FORMAT_CSV = 1 } orlicz_format;

typedef struct orlicz_function orlicz_function;
typedef struct orlicz_space orlicz_space;
typedef struct orlicz_rv orlicz_rv;
typedef struct orlicz_risk orlicz_risk;
typedef struct orlicz_family orlicz_family;
typedef struct orlicz_config orlicz_config;
typedef struct orlicz_report orlicz_report;

ORLICZ_API const char* orlicz_last_error(void);
ORLICZ_API const char* orlicz_status_name(orlicz_status status);
/* Process exit code for a status: 0 ok, 2 input, 3 numeric, 4 refusal,
 * 5 property violation. */
ORLICZ_API int orlicz_exit_code(orlicz_status status);

/* Orlicz functions: "power:p=2", "scaled_power:p=2,c=0.5", "linear",
 * "exp_young", "linf_step", "custom:file=table.csv". */
ORLICZ_API orlicz_status orlicz_function_parse(const char* spec, orlicz_function** out);
ORLICZ_API void orlicz_function_free(orlicz_function* phi);
ORLICZ_API orlicz_status orlicz_function_eval(const orlicz_function* phi, double t, double* out);
ORLICZ_API orlicz_status orlicz_function_conjugate(const orlicz_function* phi, orlicz_function** out);
ORLICZ_API orlicz_status orlicz_function_conjugate_value(const orlicz_function* phi, double s, double* out);
ORLICZ_API orlicz_status orlicz_function_limit_slope(const orlicz_function* phi, double* slope, int* infinite);
/* Canonical spec string, owned by the handle. */
ORLICZ_API const char* orlicz_function_spec(const orlicz_function* phi);

/* Measure spaces. */
ORLICZ_API orlicz_status orlicz_space_load_csv(const char* path, orlicz_space** out);
ORLICZ_API orlicz_status orlicz_space_save_csv(const orlicz_space* space, const char* path);
ORLICZ_API orlicz_status orlicz_space_from_weights(const double* weights, size_t n, orlicz_space** out);
ORLICZ_API orlicz_status orlicz_space_uniform(size_t n, orlicz_space** out);
/* Atoms 1..n of the positive integers with weights 1/(k(k+1)). */
ORLICZ_API orlicz_status orlicz_space_truncated(size_t n, orlicz_space** out);
ORLICZ_API size_t orlicz_space_size(const orlicz_space* space);
ORLICZ_API void orlicz_space_free(orlicz_space* space);

/* Random variables. */
ORLICZ_API orlicz_status orlicz_rv_load_csv(const orlicz_space* space, const char* path, orlicz_rv** out);
ORLICZ_API orlicz_status orlicz_rv_save_csv(const orlicz_rv* rv, const char* path);
ORLICZ_API orlicz_status orlicz_rv_from_values(const orlicz_space* space, const double* values, size_t n,
                                               orlicz_rv** out);
ORLICZ_API size_t orlicz_rv_size(const orlicz_rv* rv);
/* Copies min(cap, size) values into out. */
ORLICZ_API orlicz_status orlicz_rv_values(const orlicz_rv* rv, double* out, size_t cap);
ORLICZ_API void orlicz_rv_free(orlicz_rv* rv);

/* Risk functionals: "entropic:beta=1", "avar:alpha=0.05", "worst_case",
 * "expectation", "control:square". */
ORLICZ_API orlicz_status orlicz_risk_parse(const char* spec, const orlicz_space* space, orlicz_risk** out);
ORLICZ_API orlicz_status orlicz_risk_eval(const orlicz_risk* risk, const orlicz_rv* f, double* out);
ORLICZ_API orlicz_status orlicz_risk_conjugate(const orlicz_risk* risk, const orlicz_rv* g, int numeric, double* out);
ORLICZ_API void orlicz_risk_free(orlicz_risk* risk);

/* Sequence families; modes "norm_convergent", "traveling_spike",
 * "order_convergent", "escaping_spike". */
ORLICZ_API orlicz_status orlicz_family_load_csv(const orlicz_space* space, const char* path, const orlicz_function* phi,
                                                orlicz_family** out);
ORLICZ_API orlicz_status orlicz_family_generate(const orlicz_space* space, const orlicz_function* phi,
                                                const orlicz_rv* f, const char* mode, size_t length, uint64_t seed,
                                                double spike_height, orlicz_family** out);
ORLICZ_API orlicz_status orlicz_family_save_csv(const orlicz_family* family, const char* path);
ORLICZ_API size_t orlicz_family_length(const orlicz_family* family);
ORLICZ_API void orlicz_family_free(orlicz_family* family);

/* Run configuration. Tolerances must be >= 0. */
ORLICZ_API orlicz_status orlicz_config_create(orlicz_config** out);
ORLICZ_API void orlicz_config_free(orlicz_config* cfg);
ORLICZ_API orlicz_status orlicz_config_set_seed(orlicz_config* cfg, uint64_t seed);
ORLICZ_API orlicz_status orlicz_config_set_tolerance(orlicz_config* cfg, orlicz_tolerance kind, double value);
ORLICZ_API orlicz_status orlicz_config_set_max_iterations(orlicz_config* cfg, int value);
ORLICZ_API orlicz_status orlicz_config_set_truncation(orlicz_config* cfg, size_t n);
ORLICZ_API orlicz_status orlicz_config_set_format(orlicz_config* cfg, orlicz_format format);
ORLICZ_API size_t orlicz_config_truncation(const orlicz_config* cfg);
ORLICZ_API uint64_t orlicz_config_seed(const orlicz_config* cfg);

/* Reports. */
/* Rendering in the config's format at creation; owned by the report. */
ORLICZ_API const char* orlicz_report_text(const orlicz_report* report);
/* 0 when the command reached its target, 3 when a numeric target was
 * missed, 5 when a property violation was found. */
ORLICZ_API int orlicz_report_exit_code(const orlicz_report* report);
ORLICZ_API orlicz_status orlicz_report_number(const orlicz_report* report, const char* key, double* out);
ORLICZ_API orlicz_status orlicz_report_flag(const orlicz_report* report, const char* key, int* out);
ORLICZ_API void orlicz_report_free(orlicz_report* report);

/* Commands. */
ORLICZ_API orlicz_status orlicz_cmd_norm(const orlicz_rv* f, const orlicz_function* phi, const orlicz_config* cfg,
                                         orlicz_report** out);
ORLICZ_API orlicz_status orlicz_cmd_represent(const orlicz_rv* f, const orlicz_risk* risk, const orlicz_function* phi,
                                              int force_numeric, const orlicz_config* cfg, orlicz_report** out);
ORLICZ_API orlicz_status orlicz_cmd_conjugate(const orlicz_function* phi, double s_max, size_t points,
                                              const orlicz_config* cfg, orlicz_report** out);
ORLICZ_API orlicz_status orlicz_cmd_classify(const orlicz_function* phi, int finite_measure, const orlicz_config* cfg,
                                             orlicz_report** out);
ORLICZ_API orlicz_status orlicz_cmd_fatou(const orlicz_risk* risk, const orlicz_family* const* families, size_t count,
                                          const orlicz_rv* limit, const orlicz_config* cfg, orlicz_report** out);
ORLICZ_API orlicz_status orlicz_cmd_extract(const orlicz_family* family, const orlicz_rv* f, const orlicz_function* phi,
                                            const orlicz_config* cfg, orlicz_report** out);
/* The vertices are passed as a family; `sequence_out` may be NULL. */
ORLICZ_API orlicz_status orlicz_cmd_closure(const orlicz_family* vertices, const orlicz_rv* f,
                                            const orlicz_function* phi, size_t length, const orlicz_config* cfg,
                                            orlicz_report** out, orlicz_family** sequence_out);
ORLICZ_API orlicz_status orlicz_cmd_verify_all(const orlicz_config* cfg, orlicz_report** out);

#ifdef __cplusplus
}
#endif

#endif
