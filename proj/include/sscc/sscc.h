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


#ifndef SSCC_SSCC_H
#define SSCC_SSCC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SSCC_API __declspec(dllexport)
#else
#define SSCC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sscc_status {
  SSCC_OK = 0,
  SSCC_ERR_INVALID_ARGUMENT = 1,
  SSCC_ERR_CONFIG = 2,
  SSCC_ERR_NUMERICAL = 3,
  SSCC_ERR_INFEASIBLE = 4,
  SSCC_ERR_IO = 5,
  SSCC_ERR_INTERNAL = 6
} sscc_status;

/* Opaque experiment configuration. */
typedef struct sscc_config sscc_config;

SSCC_API const char* sscc_version(void);

/* Message and offending config field (may be empty) of the last failing
 * call on this thread. Valid until the next call on the same thread. */
SSCC_API const char* sscc_last_error(void);
SSCC_API const char* sscc_last_error_field(void);

/* Strings returned through char** are owned by the caller. */
SSCC_API void sscc_string_free(char* s);

SSCC_API sscc_status sscc_config_create(sscc_config** out);
SSCC_API sscc_status sscc_config_load(const char* path, sscc_config** out);
SSCC_API sscc_status sscc_config_parse(const char* json, sscc_config** out);
SSCC_API void sscc_config_destroy(sscc_config* config);
/* Overlays the keys present in `json`; the config is unchanged on failure. */
SSCC_API sscc_status sscc_config_merge_json(sscc_config* config, const char* json);
SSCC_API sscc_status sscc_config_to_json(const sscc_config* config, char** out_json);
SSCC_API sscc_status sscc_config_hash(const sscc_config* config, char** out_hash);
SSCC_API sscc_status sscc_config_set_seed(sscc_config* config, uint64_t seed);
SSCC_API sscc_status sscc_config_set_replications(sscc_config* config, uint64_t replications);
SSCC_API sscc_status sscc_config_set_radii(sscc_config* config, const double* radii, size_t count);
SSCC_API sscc_status sscc_config_set_output_dir(sscc_config* config, const char* directory);

/* Tradeoff sweep. Writes curve.csv and curve_summary.csv into the output
 * directory; `out_summary` (optional) receives the summary CSV text. */
SSCC_API sscc_status sscc_run_curve(const sscc_config* config, char** out_summary);

/* Oracle checks. Writes validate.csv; `out_all_passed` is 1 when every check
 * passed. `out_report` (optional) receives the report CSV text. */
SSCC_API sscc_status sscc_run_validate(const sscc_config* config, int* out_all_passed, char** out_report);

/* Analytic tables. Writes analytic.csv and analytic_bernstein.csv; `out_table`
 * receives the rendering in the configured format. */
SSCC_API sscc_status sscc_run_analytic(const sscc_config* config, char** out_table);

/* Primitives. softness = INFINITY selects the hard kernel; mark_scale = 0
 * selects degenerate marks. */
SSCC_API sscc_status sscc_thinned_intensity(double intensity, double mark_mean, double mark_scale, double p0,
                                            double softness, double* out);
SSCC_API sscc_status sscc_matern2_retention(double intensity, double delta, double* out);
SSCC_API sscc_status sscc_ctpp_matern2(double r, double delta, double intensity, double* out);
SSCC_API sscc_status sscc_ctpp_sscc(double r, double intensity, double mark_mean, double mark_scale, double* out);
SSCC_API sscc_status sscc_bernstein_bound(double expected_size, double threshold, double variance, double* out);
SSCC_API sscc_status sscc_solve_matern_radius(double retention, double intensity, double max_radius, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SSCC_SSCC_H */
