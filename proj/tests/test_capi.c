#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "hgmdm/hgmdm.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

static void test_primitives(void) {
  hgmdm_point a = {1.0, 2.0, 3.0}, b = {-0.5, 1.0, 0.25}, p;
  EXPECT(hgmdm_multiply(a, b, &p) == HGMDM_OK);
  EXPECT(fabs(p.x - 0.5) < 1e-15 && fabs(p.y - 3.0) < 1e-15);
  EXPECT(fabs(p.t - (3.25 + 0.5 * (1.0 * 1.0 - (-0.5) * 2.0))) < 1e-15);

  double n = 0.0;
  hgmdm_point g = {1.0, 0.0, 0.0};
  EXPECT(hgmdm_quasi_norm(g, &n) == HGMDM_OK && fabs(n - 1.0) < 1e-15);
  EXPECT(hgmdm_dilate(2.0, a, &p) == HGMDM_OK && fabs(p.t - 12.0) < 1e-15);
  EXPECT(hgmdm_dilate(-1.0, a, &p) == HGMDM_E_DOMAIN);
  EXPECT(strlen(hgmdm_last_error()) > 0);

  double re[16], im[16];
  hgmdm_point e = {0.0, 0.0, 0.0};
  EXPECT(hgmdm_rep_matrix(1.0, 4, e, re, im) == HGMDM_OK);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      EXPECT(fabs(re[i * 4 + j] - (i == j ? 1.0 : 0.0)) < 1e-12);
      EXPECT(fabs(im[i * 4 + j]) < 1e-12);
    }
  /* Central element: pi(0, 0, t) = exp(i lambda t) I. */
  hgmdm_point c = {0.0, 0.0, 0.7};
  EXPECT(hgmdm_rep_matrix(1.0, 4, c, re, im) == HGMDM_OK);
  EXPECT(fabs(re[5] - cos(0.7)) < 1e-12 && fabs(im[5] - sin(0.7)) < 1e-12);

  double lr, li, mr, mi;
  hgmdm_point q = {0.3, -0.2, 0.1};
  EXPECT(hgmdm_laguerre_coefficient(1.0, 1, q, &lr, &li) == HGMDM_OK);
  EXPECT(hgmdm_matrix_coefficient(1.0, 24, 1, q, &mr, &mi) == HGMDM_OK);
  EXPECT(fabs(lr - mr) < 1e-8 && fabs(li - mi) < 1e-8);

  double d = 0.0;
  EXPECT(hgmdm_formal_degree(2.0, &d) == HGMDM_OK);
  EXPECT(fabs(d - 1.0 / 3.141592653589793) < 1e-14);
  EXPECT(hgmdm_formal_degree(0.0, &d) == HGMDM_E_DEGENERATE_REP);
  EXPECT(strcmp(hgmdm_status_name(HGMDM_E_NULL_ARGUMENT), "null-argument") == 0);
  EXPECT(strlen(hgmdm_status_name(HGMDM_E_DEGENERATE_REP)) > 0);
}

static void test_null_arguments(void) {
  hgmdm_point a = {0.0, 0.0, 0.0};
  EXPECT(hgmdm_multiply(a, a, NULL) == HGMDM_E_NULL_ARGUMENT);
  EXPECT(hgmdm_config_default(NULL) == HGMDM_E_NULL_ARGUMENT);
  EXPECT(hgmdm_run(NULL, "rep-check", NULL, NULL) == HGMDM_E_NULL_ARGUMENT);
  EXPECT(hgmdm_result_exit_code(NULL) == 2);
  hgmdm_config_free(NULL);
  hgmdm_result_free(NULL);
}

static void test_config(void) {
  hgmdm_config* cfg = NULL;
  EXPECT(hgmdm_config_default(&cfg) == HGMDM_OK && cfg != NULL);

  size_t needed = 0;
  EXPECT(hgmdm_config_to_json(cfg, NULL, 0, &needed) == HGMDM_OK);
  EXPECT(needed > 1);
  char small[4];
  EXPECT(hgmdm_config_to_json(cfg, small, sizeof small, NULL) == HGMDM_E_BUFFER_TOO_SMALL);
  char* buf = malloc(needed);
  EXPECT(hgmdm_config_to_json(cfg, buf, needed, &needed) == HGMDM_OK);
  EXPECT(strstr(buf, "\"plancherel_grid\"") != NULL);
  free(buf);

  EXPECT(hgmdm_config_set(cfg, "/plancherel_grid/n_modes", "24") == HGMDM_OK);
  EXPECT(hgmdm_config_set(cfg, "/plancherel_grid/n_modes", "\"many\"") == HGMDM_E_CONFIG);
  EXPECT(hgmdm_config_set(cfg, "/rep_check/lambda", "0") == HGMDM_E_CONFIG);
  EXPECT(hgmdm_config_set(cfg, "/no_such_field", "1") == HGMDM_E_CONFIG);
  EXPECT(hgmdm_config_set(cfg, "/rep_check/pairs", "{") == HGMDM_E_PARSE);
  EXPECT(hgmdm_config_to_json(cfg, NULL, 0, &needed) == HGMDM_OK);
  buf = malloc(needed);
  EXPECT(hgmdm_config_to_json(cfg, buf, needed, &needed) == HGMDM_OK);
  EXPECT(strstr(buf, "\"n_modes\": 24") != NULL);
  free(buf);
  hgmdm_config_free(cfg);

  EXPECT(hgmdm_config_from_json("{\"profiles\": 3}", &cfg) == HGMDM_E_CONFIG);
  EXPECT(hgmdm_config_load("/nonexistent/config.json", &cfg) != HGMDM_OK);
}

static void test_run(void) {
  hgmdm_config* cfg = NULL;
  EXPECT(hgmdm_config_default(&cfg) == HGMDM_OK);
  EXPECT(hgmdm_config_set(cfg, "/rep_check/pairs", "4") == HGMDM_OK);
  EXPECT(hgmdm_config_set(cfg, "/rep_check/samples", "4") == HGMDM_OK);
  EXPECT(hgmdm_config_set(cfg, "/rep_check/n_modes", "16") == HGMDM_OK);
  EXPECT(hgmdm_config_set(cfg, "/spatial_grid/counts", "[49, 49, 257]") == HGMDM_OK);

  hgmdm_run_options opt;
  memset(&opt, 0, sizeof opt);
  opt.skip_files = 1;
  hgmdm_result* res = NULL;
  EXPECT(hgmdm_run(cfg, "rep-check", &opt, &res) == HGMDM_OK);
  EXPECT(hgmdm_result_exit_code(res) == 0);
  EXPECT(hgmdm_result_failure_count(res) == 0);
  EXPECT(hgmdm_result_file_count(res) == 0);
  EXPECT(hgmdm_result_failure(res, 5) == NULL);
  size_t needed = 0;
  EXPECT(hgmdm_result_json(res, NULL, 0, &needed) == HGMDM_OK);
  char* buf = malloc(needed);
  EXPECT(hgmdm_result_json(res, buf, needed, &needed) == HGMDM_OK);
  EXPECT(strstr(buf, "\"command\": \"rep-check\"") != NULL);
  free(buf);
  hgmdm_result_free(res);

  res = NULL;
  const double ks[] = {4.0, 2.0};
  opt.k_list = ks;
  opt.k_count = 2;
  EXPECT(hgmdm_run(cfg, "mdm", &opt, &res) == HGMDM_E_CONFIG);
  EXPECT(res != NULL && hgmdm_result_exit_code(res) == 2);
  EXPECT(hgmdm_result_failure_count(res) == 1);
  hgmdm_result_free(res);
  hgmdm_config_free(cfg);
}

int main(void) {
  EXPECT(strlen(hgmdm_version()) > 0);
  test_primitives();
  test_null_arguments();
  test_config();
  test_run();
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
