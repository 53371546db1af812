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


#ifndef SSCC_PLACEMENT_HPP
#define SSCC_PLACEMENT_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sscc/demand.hpp"
#include "sscc/rng.hpp"
#include "sscc/spatial.hpp"

namespace sscc {

inline constexpr double kHardKernel = std::numeric_limits<double>::infinity();

/// Exclusion-radius law of one item: degenerate at `mean`, or gamma with the
/// given mean and scale (shape = mean / scale). A zero scale or zero mean is
/// treated as degenerate.
class MarkDistribution {
 public:
  static MarkDistribution degenerate(double value);
  static MarkDistribution gamma(double mean, double scale);

  bool is_degenerate() const { return scale_ == 0.0 || mean_ == 0.0; }
  double mean() const { return mean_; }
  double scale() const { return scale_; }
  double shape() const { return is_degenerate() ? 0.0 : mean_ / scale_; }
  double variance() const { return is_degenerate() ? 0.0 : mean_ * scale_; }
  double second_moment() const { return variance() + mean_ * mean_; }

  double sample(RngStream& rng) const;

 private:
  MarkDistribution(double mean, double scale) : mean_(mean), scale_(scale) {}
  double mean_;
  double scale_;
};

/// Eq.-(6)-style soft deletion kernel: 1 inside m+n, exp(-c (r-m-n)) outside.
/// `softness` may be +inf for the hard (indicator) kernel.
double kernel_fc(double r, double m, double n, double softness);

struct SoftCoreParams {
  std::vector<MarkDistribution> marks;  // one per item
  double p0 = 1.0;
  double softness = 10.0;
  double truncation_eps = 1e-6;

  /// Pairs farther apart than m + n + this are skipped (deletion prob < eps).
  double truncation_tail() const;
  void validate() const;
};

struct IndependentPolicy {
  std::vector<double> probabilities;
};
struct HardCorePolicy {
  std::vector<double> radii;
};
struct SoftCorePolicy {
  SoftCoreParams params;
};

/// Independent(q_i) | HardCore(r_i) | SoftCore(mu_i, p0, c).
using PlacementPolicy = std::variant<IndependentPolicy, HardCorePolicy, SoftCorePolicy>;

std::size_t policy_item_count(const PlacementPolicy& policy);
std::string policy_name(const PlacementPolicy& policy);
void validate_policy(const PlacementPolicy& policy);

/// Per-item retained sets plus the node x item membership matrix.
struct PlacementResult {
  std::size_t node_count = 0;
  std::size_t item_count = 0;
  std::vector<std::vector<std::size_t>> retained;  // per item, ascending node indices
  std::vector<std::uint8_t> membership;            // item-major, item * node_count + node
  std::vector<std::uint32_t> cache_count;          // C(x)
  std::vector<std::uint8_t> evaluated;             // 0 for nodes outside the scope

  bool contains(std::size_t node, std::size_t item) const {
    return membership[item * node_count + node] != 0;
  }
};

/// Each point kept i.i.d. with probability q.
std::vector<std::size_t> thin_independent(const PointPattern& pattern, double q, RngStream& rng);

/// Matern II: draws fresh U[0,1] weights, keeps a point iff it has the lowest
/// weight among all points within distance delta.
std::vector<std::size_t> thin_matern2(const PointPattern& pattern, double delta, RngStream& rng);

/// Matern II using the weights already stored in `pattern`.
std::vector<std::size_t> matern2_survivors(const PointPattern& pattern, double delta);

/// Soft-core thinning for one item: draws marks from params.marks[item] and
/// U[0,1] weights, then applies the dependent deletion rule.
std::vector<std::size_t> thin_sscc(const PointPattern& pattern, const SoftCoreParams& params,
                                   std::size_t item, RngStream& rng);

/// Soft-core rule on a pattern whose marks and weights are already set.
/// `retention_uniforms[k]` decides point k; only `candidates` are evaluated.
std::vector<std::size_t> sscc_survivors(const PointPattern& pattern, double p0, double softness,
                                        double truncation_eps,
                                        std::span<const double> retention_uniforms,
                                        std::span<const std::size_t> candidates);

/// Conditional retention probability of point k given the marked pattern
/// (the product over lower-weight neighbours, truncated at eps).
double sscc_retention_probability(const PointPattern& pattern, std::size_t k, double p0,
                                  double softness, double truncation_eps);

/// Restricts which nodes get a retention decision. Empty = all nodes.
struct PlacementScope {
  std::vector<std::size_t> nodes;
};

/// Randomness identity of one placement run; items get independent sub-streams.
struct PlacementStreams {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::uint64_t policy_tag = 0;
};

/// Runs the per-item thinning for every item and assembles z and C(x).
PlacementResult place_all_items(const PointPattern& pattern, const PlacementPolicy& policy,
                                const DemandModel& demand, const PlacementStreams& streams,
                                const PlacementScope& scope = {});

}  // namespace sscc

#endif  // SSCC_PLACEMENT_HPP
