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


#ifndef SSCC_EXPERIMENT_HPP
#define SSCC_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sscc/calibration.hpp"
#include "sscc/estimators.hpp"
#include "sscc/spatial.hpp"

namespace sscc {

inline constexpr const char* kToolVersion = "1.0.0";

struct RGrid {
  double start = 0.5;
  double stop = 10.0;
  std::size_t count = 20;
  std::vector<double> points() const;  // evenly spaced, inclusive
};

struct AnalyticSettings {
  double mark_mean = 3.0;
  std::vector<double> betas{0.1, 0.5, 1.0};
  RGrid r_grid;
  double delta = 0.0;  // Matern exclusion; 0 means twice the mark mean
  bool hard_kernel = false;
  std::string format = "csv";  // csv | text
};

struct ValidationSettings {
  double cache_budget = 3.0;
  double mark_mean = 3.0;
  std::size_t variance_samples = 4000;
  std::size_t threshold_steps = 5;
};

struct ExperimentConfig {
  double intensity = 0.1;
  double side = 100.0;
  EdgeMode edge_mode = EdgeMode::kBorderCrop;
  std::vector<double> radii{3.0, 10.0};
  std::size_t catalog_size = 100;
  double zipf_tilt = 0.1;
  std::vector<PolicyFamily> policies{PolicyFamily::kIndependent, PolicyFamily::kMatern2,
                                     PolicyFamily::kSoftCore};
  SoftCoreCalibration soft_core;  // p0 = 1, c = 10, beta = 1, mean = 0.7 r_i
  double kappa = 1.0;
  std::vector<double> scales{0.005, 0.01, 0.015, 0.02, 0.03, 0.04, 0.05, 0.07, 0.1, 0.15,
                             0.2,   0.3,  0.4,   0.5,  0.6,  0.7,  0.8,  0.9,  1.0};
  double hit_level = 0.7;
  ReplicationPlan plan;
  ValidationSettings validation;
  AnalyticSettings analytic;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Strict JSON parsing: unknown keys and type mismatches are ConfigErrors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Overlays the keys present in `json_text` onto `base`.
ExperimentConfig merge_config(const ExperimentConfig& base, const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);
/// FNV-1a over the canonical JSON without the output section, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// "%.9g"
std::string format_double(double v);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
/// "# sscc <version> seed=<seed> config=<hash>"
std::string provenance_line(const ExperimentConfig& config);

struct ExcessSummary {
  double radius = 0.0;
  std::string measure;  // mean_cache | n_req
  std::string policy;
  double cache_policy = 0.0;
  double cache_sscc = 0.0;
  double excess = 0.0;  // cache_policy / cache_sscc - 1
};

struct CurveReport {
  std::vector<TradeoffCurve> curves;
  std::vector<ExcessSummary> summary;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
};

/// Tradeoff sweep; writes curve.csv and curve_summary.csv into the output directory.
CurveReport run_curve(const ExperimentConfig& config);

struct ValidationCheck {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::filesystem::path csv_path;
  bool all_passed() const;
};

/// Cross-module oracle checks; writes validate.csv.
ValidationReport run_validate(const ExperimentConfig& config);

struct AnalyticRow {
  double beta = 0.0;
  double r = 0.0;
  double lambda_th = 0.0;
  double eta_m = 0.0;
  double eta_gm = 0.0;
  double scdf_m = 0.0;
  double scdf_gm = 0.0;
};

struct BernsteinRow {
  double threshold = 0.0;
  double expected_size = 0.0;
  double variance = 0.0;
  double bound = 0.0;
};

struct AnalyticReport {
  std::vector<AnalyticRow> rows;
  std::vector<BernsteinRow> bernstein;
  std::string rendered;  // CSV or aligned text, per the configured format
};

/// Analytic table; deterministic and simulation-free.
AnalyticReport run_analytic(const ExperimentConfig& config);

}  // namespace sscc

#endif  // SSCC_EXPERIMENT_HPP
