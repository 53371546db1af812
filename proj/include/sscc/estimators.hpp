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


#ifndef SSCC_ESTIMATORS_HPP
#define SSCC_ESTIMATORS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sscc/demand.hpp"
#include "sscc/placement.hpp"
#include "sscc/spatial.hpp"

namespace sscc {

struct ReplicationPlan {
  std::size_t replications = 200;
  std::uint64_t seed = 1;
  std::size_t probes = 400;  // uniform receivers per replication
  double confidence = 0.95;

  void validate() const;
};

struct EstimateWithCI {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;

  double half_width() const { return 0.5 * (upper - lower); }
};

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

/// Normal-approximation CI for the mean of i.i.d. replication values.
EstimateWithCI mean_with_ci(std::span<const double> values, double confidence);

/// Wald CI for a proportion, clipped to [0, 1].
EstimateWithCI proportion_with_ci(std::size_t successes, std::size_t trials, double confidence);

/// Per-probe hit value F = sum_i p_r(i) 1{some retained node of item i within R}.
std::vector<double> probe_hits(const PointPattern& mother, const PlacementResult& placement,
                               const DemandModel& demand, std::span<const Point2D> probes,
                               double radius);

/// Empirical SCDF of nearest-retained-point distances from the probes.
struct ScdfEstimate {
  std::vector<double> values;  // one per r_grid entry
  bool empty_retained = false;
};
ScdfEstimate estimate_scdf(const PointPattern& mother, std::span<const std::size_t> retained,
                           std::span<const Point2D> probes, std::span<const double> r_grid);

/// Nodes whose retention decisions matter for probes in the evaluation
/// region at communication radius `radius`.
PlacementScope probe_scope(const PointPattern& mother, double radius);

/// Monte Carlo hit probability: probes in the evaluation region, CI over replication means.
EstimateWithCI estimate_hit_probability(const PlacementPolicy& policy, const DemandModel& demand,
                                        double intensity, const Window& window, double radius,
                                        const ReplicationPlan& plan);

/// C(x) for evaluated nodes inside the evaluation region.
std::vector<std::uint32_t> cache_sizes_in_region(const PointPattern& mother,
                                                 const PlacementResult& placement);

struct CacheSizeDistribution {
  std::vector<double> pmf;  // pmf[c] = P(C(x) = c)
  double mean = 0.0;
  double variance = 0.0;
  std::size_t samples = 0;
};
CacheSizeDistribution estimate_cache_size_distribution(std::span<const std::uint32_t> samples);

/// Empirical P(C(x) > threshold) with its CI.
EstimateWithCI estimate_violation_probability(std::span<const std::uint32_t> samples,
                                              double threshold, double confidence = 0.95);

/// Smallest C with empirical P(C(x) <= C) >= 1 - (1 - coverage) / 2.
std::uint32_t required_cache_size(std::span<const std::uint32_t> samples, double coverage = 0.95);

}  // namespace sscc

#endif  // SSCC_ESTIMATORS_HPP
