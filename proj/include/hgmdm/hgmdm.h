#ifndef HGMDM_H
#define HGMDM_H

/* C interface to the hgmdm library. All handles are opaque; every fallible
 * call returns an hgmdm_status and records a message retrievable with
 * hgmdm_last_error() on the calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(HGMDM_BUILDING_LIBRARY)
#    define HGMDM_API __declspec(dllexport)
#  else
#    define HGMDM_API __declspec(dllimport)
#  endif
#else
#  define HGMDM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hgmdm_status {
  HGMDM_OK = 0,
  HGMDM_E_DOMAIN = 1,
  HGMDM_E_CONFIG = 2,
  HGMDM_E_DEGENERATE_REP = 3,
  HGMDM_E_UNDERRESOLVED_DOMAIN = 4,
  HGMDM_E_UNDERRESOLVED_OSCILLATION = 5,
  HGMDM_E_OUT_OF_DOMAIN = 6,
  HGMDM_E_NOT_INTEGRABLE = 7,
  HGMDM_E_INVALID_SYMBOL = 8,
  HGMDM_E_UNSUPPORTED = 9,
  HGMDM_E_TAIL_CONTAMINATION = 10,
  HGMDM_E_IO = 11,
  HGMDM_E_PARSE = 12,
  HGMDM_E_NULL_ARGUMENT = 100,
  HGMDM_E_BUFFER_TOO_SMALL = 101,
  HGMDM_E_INTERNAL = 102
} hgmdm_status;

typedef struct hgmdm_config hgmdm_config;
typedef struct hgmdm_result hgmdm_result;

typedef struct hgmdm_point {
  double x;
  double y;
  double t;
} hgmdm_point;

/* Optional overrides for hgmdm_run. Zero-initialise and set what is needed. */
typedef struct hgmdm_run_options {
  const double* k_list; /* NULL keeps the config value */
  size_t k_count;
  const char* const* symbols; /* symbol specs; NULL keeps the config value */
  size_t symbol_count;
  const char* out_dir; /* NULL keeps the config value */
  const char* variant; /* mdm variant; NULL keeps the config value */
  int strict;          /* nonzero: warnings count as failures */
  int skip_files;      /* nonzero: do not write report files */
} hgmdm_run_options;

HGMDM_API const char* hgmdm_version(void);
HGMDM_API const char* hgmdm_status_name(hgmdm_status status);
/* Message of the last failed call on this thread ("" if none). */
HGMDM_API const char* hgmdm_last_error(void);

/* Configuration. */
HGMDM_API hgmdm_status hgmdm_config_default(hgmdm_config** out);
HGMDM_API hgmdm_status hgmdm_config_load(const char* path, hgmdm_config** out);
HGMDM_API hgmdm_status hgmdm_config_from_json(const char* text, hgmdm_config** out);
/* Replaces the value at a JSON pointer (e.g. "/plancherel_grid/n_modes") with
 * the parsed json_value and revalidates. The config is unchanged on error. */
HGMDM_API hgmdm_status hgmdm_config_set(hgmdm_config* config, const char* pointer, const char* json_value);
/* Copies the resolved config as JSON into buf (NUL-terminated). Passing
 * buf = NULL with cap = 0 only queries the size. *needed
 * receives the required size including the terminator. */
HGMDM_API hgmdm_status hgmdm_config_to_json(const hgmdm_config* config, char* buf, size_t cap, size_t* needed);
HGMDM_API void hgmdm_config_free(hgmdm_config* config);

/* Runs a command: "plancherel", "rep-check", "symbol-check" or "mdm".
 * On success or tolerance failure returns HGMDM_OK; a result carrying exit
 * code 2 is still produced for configuration errors, together with the
 * matching error status. */
HGMDM_API hgmdm_status hgmdm_run(const hgmdm_config* config, const char* command, const hgmdm_run_options* options,
                                 hgmdm_result** out);
HGMDM_API int hgmdm_result_exit_code(const hgmdm_result* result);
HGMDM_API size_t hgmdm_result_failure_count(const hgmdm_result* result);
HGMDM_API const char* hgmdm_result_failure(const hgmdm_result* result, size_t index);
HGMDM_API size_t hgmdm_result_warning_count(const hgmdm_result* result);
HGMDM_API const char* hgmdm_result_warning(const hgmdm_result* result, size_t index);
HGMDM_API size_t hgmdm_result_file_count(const hgmdm_result* result);
HGMDM_API const char* hgmdm_result_file(const hgmdm_result* result, size_t index);
HGMDM_API hgmdm_status hgmdm_result_json(const hgmdm_result* result, char* buf, size_t cap, size_t* needed);
HGMDM_API void hgmdm_result_free(hgmdm_result* result);

/* Group and representation primitives. */
HGMDM_API hgmdm_status hgmdm_multiply(hgmdm_point a, hgmdm_point b, hgmdm_point* out);
HGMDM_API hgmdm_status hgmdm_dilate(double r, hgmdm_point g, hgmdm_point* out);
HGMDM_API hgmdm_status hgmdm_quasi_norm(hgmdm_point g, double* out);
/* pi_lambda(g) truncated to n_modes Hermite modes, row-major into re/im
 * arrays of n_modes * n_modes doubles. */
HGMDM_API hgmdm_status hgmdm_rep_matrix(double lambda, int n_modes, hgmdm_point g, double* re, double* im);
HGMDM_API hgmdm_status hgmdm_matrix_coefficient(double lambda, int n_modes, int mode, hgmdm_point g, double* re,
                                                double* im);
HGMDM_API hgmdm_status hgmdm_laguerre_coefficient(double lambda, int mode, hgmdm_point g, double* re, double* im);
HGMDM_API hgmdm_status hgmdm_formal_degree(double lambda, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HGMDM_H */
