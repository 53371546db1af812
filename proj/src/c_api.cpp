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


#include "sscc/sscc.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "sscc/analytics.hpp"
#include "sscc/calibration.hpp"
#include "sscc/error.hpp"
#include "sscc/experiment.hpp"

struct sscc_config {
  sscc::ExperimentConfig value;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

sscc_status fail(sscc_status code, const std::string& message, const std::string& field = {}) {
  g_error = message;
  g_field = field;
  return code;
}

// Maps exceptions to status codes; every entry point goes through here.
template <class F>
sscc_status guarded(F&& body) {
  try {
    g_error.clear();
    g_field.clear();
    body();
    return SSCC_OK;
  } catch (const sscc::ConfigError& e) {
    return fail(SSCC_ERR_CONFIG, e.what(), e.field());
  } catch (const sscc::InvalidArgument& e) {
    return fail(SSCC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const sscc::Infeasible& e) {
    return fail(SSCC_ERR_INFEASIBLE, e.what());
  } catch (const sscc::NumericalError& e) {
    return fail(SSCC_ERR_NUMERICAL, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SSCC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SSCC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SSCC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SSCC_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void need(const void* p, const char* what) {
  if (!p) throw sscc::InvalidArgument(std::string(what) + " must not be null");
}

sscc::MarkDistribution marks_of(double mean, double scale) {
  return scale == 0.0 ? sscc::MarkDistribution::degenerate(mean) : sscc::MarkDistribution::gamma(mean, scale);
}

}  // namespace

extern "C" {

const char* sscc_version(void) { return sscc::kToolVersion; }
const char* sscc_last_error(void) { return g_error.c_str(); }
const char* sscc_last_error_field(void) { return g_field.c_str(); }
void sscc_string_free(char* s) { std::free(s); }

sscc_status sscc_config_create(sscc_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sscc_config{};
  });
}

sscc_status sscc_config_load(const char* path, sscc_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto cfg = sscc::load_config(path);
    *out = new sscc_config{std::move(cfg)};
  });
}

sscc_status sscc_config_parse(const char* json, sscc_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto cfg = sscc::parse_config(json);
    *out = new sscc_config{std::move(cfg)};
  });
}

void sscc_config_destroy(sscc_config* config) { delete config; }

sscc_status sscc_config_merge_json(sscc_config* config, const char* json) {
  return guarded([&] {
    need(config, "config");
    need(json, "json");
    config->value = sscc::merge_config(config->value, json);
  });
}

sscc_status sscc_config_to_json(const sscc_config* config, char** out_json) {
  return guarded([&] {
    need(config, "config");
    need(out_json, "out_json");
    *out_json = dup_string(sscc::config_to_json(config->value));
  });
}

sscc_status sscc_config_hash(const sscc_config* config, char** out_hash) {
  return guarded([&] {
    need(config, "config");
    need(out_hash, "out_hash");
    *out_hash = dup_string(sscc::config_hash(config->value));
  });
}

sscc_status sscc_config_set_seed(sscc_config* config, uint64_t seed) {
  return guarded([&] {
    need(config, "config");
    config->value.plan.seed = seed;
  });
}

sscc_status sscc_config_set_replications(sscc_config* config, uint64_t replications) {
  return guarded([&] {
    need(config, "config");
    auto next = config->value;
    next.plan.replications = replications;
    next.validate();
    config->value = std::move(next);
  });
}

sscc_status sscc_config_set_radii(sscc_config* config, const double* radii, size_t count) {
  return guarded([&] {
    need(config, "config");
    if (count > 0) need(radii, "radii");
    auto next = config->value;
    next.radii.assign(radii, radii + count);
    next.validate();
    config->value = std::move(next);
  });
}

sscc_status sscc_config_set_output_dir(sscc_config* config, const char* directory) {
  return guarded([&] {
    need(config, "config");
    need(directory, "directory");
    auto next = config->value;
    next.output_dir = directory;
    next.validate();
    config->value = std::move(next);
  });
}

sscc_status sscc_run_curve(const sscc_config* config, char** out_summary) {
  return guarded([&] {
    need(config, "config");
    const auto report = sscc::run_curve(config->value);
    if (out_summary) *out_summary = dup_string(slurp(report.summary_path));
  });
}

sscc_status sscc_run_validate(const sscc_config* config, int* out_all_passed, char** out_report) {
  return guarded([&] {
    need(config, "config");
    need(out_all_passed, "out_all_passed");
    const auto report = sscc::run_validate(config->value);
    *out_all_passed = report.all_passed() ? 1 : 0;
    if (out_report) *out_report = dup_string(slurp(report.csv_path));
  });
}

sscc_status sscc_run_analytic(const sscc_config* config, char** out_table) {
  return guarded([&] {
    need(config, "config");
    need(out_table, "out_table");
    *out_table = dup_string(sscc::run_analytic(config->value).rendered);
  });
}

sscc_status sscc_thinned_intensity(double intensity, double mark_mean, double mark_scale, double p0,
                                   double softness, double* out) {
  return guarded([&] {
    need(out, "out");
    sscc::SccDistributionSpec spec;
    spec.intensity = intensity;
    spec.marks = marks_of(mark_mean, mark_scale);
    spec.p0 = p0;
    spec.softness = softness;
    *out = sscc::thinned_intensity(spec).value;
  });
}

sscc_status sscc_matern2_retention(double intensity, double delta, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = sscc::matern2_retention(intensity, delta);
  });
}

sscc_status sscc_ctpp_matern2(double r, double delta, double intensity, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = sscc::ctpp_matern2(r, delta, intensity);
  });
}

sscc_status sscc_ctpp_sscc(double r, double intensity, double mark_mean, double mark_scale, double* out) {
  return guarded([&] {
    need(out, "out");
    sscc::SccDistributionSpec spec;
    spec.intensity = intensity;
    spec.marks = marks_of(mark_mean, mark_scale);
    *out = sscc::ctpp_sscc(r, spec).value;
  });
}

sscc_status sscc_bernstein_bound(double expected_size, double threshold, double variance, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = sscc::bernstein_violation_bound(expected_size, threshold, variance);
  });
}

sscc_status sscc_solve_matern_radius(double retention, double intensity, double max_radius, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = sscc::solve_matern_radius(retention, intensity, max_radius);
  });
}

}  // extern "C"
