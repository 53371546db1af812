/*
 * Copyright 2026 The SSCC Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


/* Exercises the C API from C. Usage: c_api_test <scratch-dir> */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "sscc/sscc.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static int near(double a, double b, double tol) { return fabs(a - b) <= tol; }

int main(int argc, char** argv) {
  const char* scratch = argc > 1 ? argv[1] : "c_api_scratch";
  EXPECT(strcmp(sscc_version(), "1.0.0") == 0);

  sscc_config* cfg = NULL;
  EXPECT(sscc_config_create(&cfg) == SSCC_OK);
  char* json = NULL;
  EXPECT(sscc_config_to_json(cfg, &json) == SSCC_OK);
  EXPECT(json && strstr(json, "\"intensity\": 0.1") != NULL);

  sscc_config* copy = NULL;
  EXPECT(sscc_config_parse(json, &copy) == SSCC_OK);
  char *h1 = NULL, *h2 = NULL;
  EXPECT(sscc_config_hash(cfg, &h1) == SSCC_OK);
  EXPECT(sscc_config_hash(copy, &h2) == SSCC_OK);
  EXPECT(h1 && h2 && strcmp(h1, h2) == 0 && strlen(h1) == 16);
  sscc_string_free(json);
  sscc_string_free(h1);
  sscc_string_free(h2);
  sscc_config_destroy(copy);

  sscc_config* bad = NULL;
  EXPECT(sscc_config_parse("{\"network\": {\"intensity\": 0}}", &bad) == SSCC_ERR_CONFIG);
  EXPECT(bad == NULL);
  EXPECT(strcmp(sscc_last_error_field(), "network.intensity") == 0);
  EXPECT(strlen(sscc_last_error()) > 0);
  EXPECT(sscc_config_load("/nonexistent/sscc.json", &bad) == SSCC_ERR_CONFIG);

  /* Failed updates leave the config untouched. */
  const double no_radii[1] = {-1.0};
  EXPECT(sscc_config_set_radii(cfg, no_radii, 1) == SSCC_ERR_CONFIG);
  EXPECT(sscc_config_set_replications(cfg, 0) == SSCC_ERR_CONFIG);
  EXPECT(sscc_config_merge_json(cfg, "{\"demand\": {\"catalog\": 3}}") == SSCC_ERR_CONFIG);
  EXPECT(strcmp(sscc_last_error_field(), "demand.catalog") == 0);
  EXPECT(sscc_config_to_json(cfg, &json) == SSCC_OK);
  EXPECT(strstr(json, "\"replications\": 200") != NULL);
  sscc_string_free(json);

  const double radii[2] = {1.0, 2.0};
  EXPECT(sscc_config_set_radii(cfg, radii, 2) == SSCC_OK);
  EXPECT(sscc_config_set_seed(cfg, 11) == SSCC_OK);
  EXPECT(sscc_config_set_output_dir(cfg, scratch) == SSCC_OK);
  EXPECT(sscc_config_merge_json(cfg, "{\"analytic\": {\"betas\": [0], \"mark_mean\": 1,"
                                     " \"r_grid\": {\"start\": 0, \"stop\": 2, \"count\": 3}}}") == SSCC_OK);
  char* table = NULL;
  EXPECT(sscc_run_analytic(cfg, &table) == SSCC_OK);
  EXPECT(table && strstr(table, "# sscc 1.0.0 seed=11 config=") == table);
  EXPECT(table && strstr(table, "beta,r,lambda_th,eta_m,eta_gm,scdf_m,scdf_gm") != NULL);
  sscc_string_free(table);
  EXPECT(sscc_run_analytic(NULL, &table) == SSCC_ERR_INVALID_ARGUMENT);

  double v = 0.0;
  EXPECT(sscc_matern2_retention(0.1, 1.0 / sqrt(0.1 * 3.14159265358979323846), &v) == SSCC_OK);
  EXPECT(near(v, 1.0 - exp(-1.0), 1e-12));
  EXPECT(sscc_thinned_intensity(0.1, 1.0, 0.0, 1.0, INFINITY, &v) == SSCC_OK);
  EXPECT(near(v, 0.1 * (1.0 - exp(-0.4 * 3.14159265358979323846)) / (0.4 * 3.14159265358979323846), 1e-8));
  double eta_m = 0.0, eta_gm = 0.0;
  EXPECT(sscc_ctpp_matern2(1.5, 2.0, 0.1, &eta_m) == SSCC_OK);
  EXPECT(sscc_ctpp_sscc(1.5, 0.1, 1.0, 0.0, &eta_gm) == SSCC_OK);
  EXPECT(near(eta_m, eta_gm, 1e-12));
  EXPECT(sscc_bernstein_bound(3.0, 3.0, 1.0, &v) == SSCC_OK && v == 1.0);
  EXPECT(sscc_bernstein_bound(3.0, 2.0, 1.0, &v) == SSCC_ERR_INVALID_ARGUMENT);
  EXPECT(sscc_solve_matern_radius(1e-9, 0.1, 10.0, &v) == SSCC_ERR_INFEASIBLE);
  EXPECT(sscc_solve_matern_radius(1.0, 0.1, 10.0, &v) == SSCC_OK && v == 0.0);
  EXPECT(sscc_matern2_retention(0.1, 1.0, NULL) == SSCC_ERR_INVALID_ARGUMENT);

  sscc_config_destroy(cfg);
  sscc_config_destroy(NULL);
  if (failures) fprintf(stderr, "%d check(s) failed\n", failures);
  else printf("c api: all checks passed\n");
  return failures ? 1 : 0;
}
