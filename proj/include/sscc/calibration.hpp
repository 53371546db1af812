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


#ifndef SSCC_CALIBRATION_HPP
#define SSCC_CALIBRATION_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sscc/analytics.hpp"
#include "sscc/demand.hpp"
#include "sscc/estimators.hpp"
#include "sscc/placement.hpp"
#include "sscc/spatial.hpp"

namespace sscc {

/// Exclusion radius delta with (1 - e^{-l pi d^2}) / (l pi d^2) = p.
/// Throws Infeasible when p is below the retention at max_radius.
double solve_matern_radius(double retention, double intensity, double max_radius);

/// Per-item retention p_i proportional to p_r(i)^kappa, clipped to [0, 1]
/// with the clipped mass redistributed so that sum p_i = budget.
std::vector<double> allocate_retention(const DemandModel& demand, double budget, double kappa = 1.0);

enum class PolicyFamily { kIndependent, kMatern2, kSoftCore };

/// How soft-core mark means are chosen from the retention targets.
enum class MarkMode {
  kFromMatern,  // mean = mark_ratio * (Matern radius for p_i)
  kMatched,     // mean solved so the analytic retention equals p_i
};

struct SoftCoreCalibration {
  double p0 = 1.0;
  double softness = 10.0;
  double mark_scale = 1.0;  // gamma scale; 0 gives degenerate marks
  double mark_ratio = 0.7;
  MarkMode mode = MarkMode::kFromMatern;
};

struct CalibrationTarget {
  enum class Mode { kCacheBudget, kHitTarget };
  Mode mode = Mode::kCacheBudget;
  double value = 1.0;   // N for a budget, h* for a hit target
  double kappa = 1.0;
  double radius = 10.0;  // communication radius, hit target only

  void validate(std::size_t catalog_size) const;
};

struct ItemParameters {
  PlacementPolicy policy;
  std::vector<double> target_retention;  // p_i requested per item
  std::vector<double> model_retention;   // analytic retention of the solved parameters
  std::vector<std::size_t> infeasible_items;
  double budget = 0.0;                   // sum of target_retention
};

struct CalibrationOptions {
  double max_radius = 200.0;
  SoftCoreCalibration soft_core;
  QuadratureConfig quad;
};

/// Parameters meeting a cache budget or an analytic hit target.
ItemParameters solve_item_parameters(PolicyFamily family, const DemandModel& demand,
                                     const CalibrationTarget& target, double intensity,
                                     const CalibrationOptions& options = {});

/// Analytic hit probability of calibrated parameters at `radius`.
double analytic_hit_probability(const ItemParameters& params, const DemandModel& demand,
                                double intensity, double radius, const QuadratureConfig& quad = {});

std::string family_name(PolicyFamily family);

struct TradeoffRow {
  PolicyFamily family;
  double scale = 0.0;
  double radius = 0.0;
  double budget = 0.0;  // calibrated sum of p_i
  EstimateWithCI hit;
  double mean_cache = 0.0;
  std::uint32_t n_req = 0;
  bool infeasible = false;
};

struct TradeoffCurve {
  PolicyFamily family;
  double radius = 0.0;
  std::vector<TradeoffRow> rows;  // ascending scale
  bool monotone = true;           // hit nondecreasing in mean cache size
};

struct SweepSpec {
  std::vector<PolicyFamily> families{PolicyFamily::kIndependent, PolicyFamily::kMatern2,
                                     PolicyFamily::kSoftCore};
  std::vector<double> radii{3.0, 10.0};
  std::vector<double> scales;  // fractions of the catalog, in (0, 1]
  double intensity = 0.1;
  double kappa = 1.0;
  CalibrationOptions calibration;
};

/// Calibrates every (family, scale), simulates all of them on shared mother
/// patterns and probes, and returns one curve per (family, radius).
std::vector<TradeoffCurve> sweep_tradeoff(const SweepSpec& spec, const DemandModel& demand,
                                          const Window& window, const ReplicationPlan& plan);

/// Which cache-size column to interpolate.
enum class CacheMeasure { kMean, kRequired };

/// Piecewise-linear interpolation of the cache measure at a hit level.
/// NaN when the curve never reaches the level.
double cache_at_hit(const TradeoffCurve& curve, double hit, CacheMeasure measure = CacheMeasure::kMean);

/// cache(other) / cache(reference) - 1 at the hit level.
double excess_ratio(const TradeoffCurve& other, const TradeoffCurve& reference, double hit,
                    CacheMeasure measure = CacheMeasure::kMean);

}  // namespace sscc

#endif  // SSCC_CALIBRATION_HPP
