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


#include "sscc/estimators.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "sscc/error.hpp"

namespace sscc {
namespace {

double z_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  const boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + 0.5 * confidence);
}

}  // namespace

void ReplicationPlan::validate() const {
  if (replications < 1) throw InvalidArgument("at least one replication is required");
  if (probes < 1) throw InvalidArgument("at least one probe per replication is required");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

EstimateWithCI mean_with_ci(std::span<const double> values, double confidence) {
  if (values.empty()) throw InvalidArgument("no samples");
  const double z = z_value(confidence);
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = values.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  const double se = std::sqrt(var / n);
  return {mean, mean - z * se, mean + z * se, se, values.size()};
}

EstimateWithCI proportion_with_ci(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw InvalidArgument("no samples");
  const double z = z_value(confidence);
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return {p, std::max(0.0, p - z * se), std::min(1.0, p + z * se), se, trials};
}

std::vector<double> probe_hits(const PointPattern& mother, const PlacementResult& placement,
                               const DemandModel& demand, std::span<const Point2D> probes,
                               double radius) {
  if (placement.item_count != demand.catalog_size())
    throw InvalidArgument("placement and demand disagree on the catalog size");
  if (!(radius >= 0.0)) throw InvalidArgument("communication radius must be >= 0");
  const SpatialIndex index(mother, std::max(radius, 1e-9));
  const auto pmf = demand.pmf();
  std::vector<double> hits(probes.size(), 0.0);
  std::vector<std::size_t> near;
  std::vector<std::uint8_t> covered(placement.item_count);
  for (std::size_t j = 0; j < probes.size(); ++j) {
    near.clear();
    index.for_each_within(probes[j], radius, [&](std::size_t k, double) { near.push_back(k); });
    std::fill(covered.begin(), covered.end(), 0);
    for (std::size_t k : near) {
      if (!placement.evaluated[k]) throw InvalidArgument("probe neighbourhood contains unevaluated nodes");
      for (std::size_t i = 0; i < placement.item_count; ++i)
        covered[i] |= placement.membership[i * placement.node_count + k];
    }
    double f = 0.0;
    for (std::size_t i = 0; i < placement.item_count; ++i)
      if (covered[i]) f += pmf[i];
    hits[j] = f;
  }
  return hits;
}

ScdfEstimate estimate_scdf(const PointPattern& mother, std::span<const std::size_t> retained,
                           std::span<const Point2D> probes, std::span<const double> r_grid) {
  ScdfEstimate out;
  out.values.assign(r_grid.size(), 0.0);
  if (retained.empty()) {
    out.empty_retained = true;
    return out;
  }
  if (probes.empty()) throw InvalidArgument("SCDF needs at least one probe");
  double r_max = 0.0;
  for (double r : r_grid) {
    if (!(r >= 0.0)) throw InvalidArgument("SCDF grid radii must be >= 0");
    r_max = std::max(r_max, r);
  }
  const SpatialIndex index(mother, retained, std::max(r_max, 1e-9));
  std::vector<double> nearest(probes.size(), std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < probes.size(); ++j)
    if (auto hit = index.nearest(probes[j], r_max)) nearest[j] = hit->distance;
  std::sort(nearest.begin(), nearest.end());
  for (std::size_t g = 0; g < r_grid.size(); ++g) {
    if (r_grid[g] == 0.0) continue;  // probes sit off the retained set almost surely
    const auto upto = std::upper_bound(nearest.begin(), nearest.end(), r_grid[g]) - nearest.begin();
    out.values[g] = static_cast<double>(upto) / static_cast<double>(probes.size());
  }
  return out;
}

PlacementScope probe_scope(const PointPattern& mother, double radius) {
  const Window& w = mother.window();
  Rect region = w.evaluation_region().dilated(radius);
  if (w.edge_mode() == EdgeMode::kTorus && (region.x0 < 0 || region.x1 > w.side()))
    return {};  // wraps around: evaluate everything
  return {mother.indices_in(region)};
}

EstimateWithCI estimate_hit_probability(const PlacementPolicy& policy, const DemandModel& demand,
                                        double intensity, const Window& window, double radius,
                                        const ReplicationPlan& plan) {
  plan.validate();
  std::vector<double> per_rep(plan.replications);
  for (std::size_t rep = 0; rep < plan.replications; ++rep) {
    RngStream mrng(StreamKey{plan.seed, rep, 0, Purpose::kMotherPattern});
    RngStream prng(StreamKey{plan.seed, rep, 0, Purpose::kProbes});
    const auto mother = sample_ppp(intensity, window, mrng);
    const auto probes = sample_uniform(window.evaluation_region(), plan.probes, prng);
    const auto placement = place_all_items(mother, policy, demand, {plan.seed, rep, policy.index() + 1},
                                           probe_scope(mother, radius));
    const auto hits = probe_hits(mother, placement, demand, probes, radius);
    per_rep[rep] = pairwise_sum(hits) / static_cast<double>(hits.size());
  }
  return mean_with_ci(per_rep, plan.confidence);
}

std::vector<std::uint32_t> cache_sizes_in_region(const PointPattern& mother,
                                                 const PlacementResult& placement) {
  std::vector<std::uint32_t> out;
  for (std::size_t k : mother.indices_in(mother.window().evaluation_region())) {
    if (!placement.evaluated[k]) throw InvalidArgument("evaluation-region node was not evaluated");
    out.push_back(placement.cache_count[k]);
  }
  return out;
}

CacheSizeDistribution estimate_cache_size_distribution(std::span<const std::uint32_t> samples) {
  CacheSizeDistribution out;
  out.samples = samples.size();
  if (samples.empty()) return out;
  const auto top = *std::max_element(samples.begin(), samples.end());
  out.pmf.assign(top + 1, 0.0);
  for (auto c : samples) out.pmf[c] += 1.0;
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (std::size_t c = 0; c < out.pmf.size(); ++c) {
    out.pmf[c] /= n;
    mean += static_cast<double>(c) * out.pmf[c];
  }
  double var = 0.0;
  for (std::size_t c = 0; c < out.pmf.size(); ++c) var += (c - mean) * (c - mean) * out.pmf[c];
  out.mean = mean;
  out.variance = samples.size() > 1 ? var * n / (n - 1.0) : 0.0;
  return out;
}

EstimateWithCI estimate_violation_probability(std::span<const std::uint32_t> samples,
                                              double threshold, double confidence) {
  std::size_t above = 0;
  for (auto c : samples)
    if (static_cast<double>(c) > threshold) ++above;
  return proportion_with_ci(above, samples.size(), confidence);
}

std::uint32_t required_cache_size(std::span<const std::uint32_t> samples, double coverage) {
  if (samples.empty()) throw InvalidArgument("no cache-size samples");
  if (!(coverage > 0.0 && coverage < 1.0)) throw InvalidArgument("coverage must lie in (0, 1)");
  std::vector<std::uint32_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double level = 1.0 - 0.5 * (1.0 - coverage);
  const double n = static_cast<double>(sorted.size());
  // Smallest order statistic whose empirical CDF reaches the level.
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k]) continue;
    if (static_cast<double>(k + 1) / n >= level - 1e-12) return sorted[k];
  }
  return sorted.back();
}

}  // namespace sscc
