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


#include "sscc/placement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sscc/error.hpp"

namespace sscc {

MarkDistribution MarkDistribution::degenerate(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidArgument("mark must be >= 0");
  return MarkDistribution(value, 0.0);
}

MarkDistribution MarkDistribution::gamma(double mean, double scale) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("mark mean must be >= 0");
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw InvalidArgument("mark scale must be >= 0");
  return MarkDistribution(mean, scale);
}

double MarkDistribution::sample(RngStream& rng) const {
  if (is_degenerate()) return mean_;
  std::gamma_distribution<double> dist(shape(), scale_);
  return dist(rng);
}

double kernel_fc(double r, double m, double n, double softness) {
  if (!(r >= 0.0) || !(m >= 0.0) || !(n >= 0.0))
    throw InvalidArgument("kernel_fc: arguments must be nonnegative");
  if (!(softness > 0.0)) throw InvalidArgument("kernel_fc: softness must be positive");
  const double excess = r - (m + n);
  if (excess <= 0.0) return 1.0;
  if (std::isinf(softness)) return 0.0;
  return std::exp(-softness * excess);
}

double SoftCoreParams::truncation_tail() const {
  if (std::isinf(softness)) return 0.0;
  return std::log(1.0 / truncation_eps) / softness;
}

void SoftCoreParams::validate() const {
  if (!(p0 > 0.0 && p0 <= 1.0)) throw InvalidArgument("p0 must lie in (0, 1]");
  if (!(softness > 0.0)) throw InvalidArgument("softness c must be positive");
  if (!(truncation_eps > 0.0 && truncation_eps < 1.0))
    throw InvalidArgument("truncation eps must lie in (0, 1)");
}

std::size_t policy_item_count(const PlacementPolicy& policy) {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IndependentPolicy>) return p.probabilities.size();
        else if constexpr (std::is_same_v<T, HardCorePolicy>) return p.radii.size();
        else return p.params.marks.size();
      },
      policy);
}

std::string policy_name(const PlacementPolicy& policy) {
  switch (policy.index()) {
    case 0: return "independent";
    case 1: return "matern2";
    default: return "sscc";
  }
}

void validate_policy(const PlacementPolicy& policy) {
  if (const auto* ind = std::get_if<IndependentPolicy>(&policy)) {
    for (double q : ind->probabilities)
      if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("independent probabilities must lie in [0, 1]");
  } else if (const auto* hc = std::get_if<HardCorePolicy>(&policy)) {
    for (double r : hc->radii)
      if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("exclusion radii must be >= 0");
  } else {
    std::get<SoftCorePolicy>(policy).params.validate();
  }
}

namespace {

// Strict weight order with ties broken by index.
inline bool lighter(double wy, std::size_t y, double wx, std::size_t x) {
  return wy < wx || (wy == wx && y < x);
}

std::vector<double> draw_uniforms(std::size_t n, RngStream& rng) {
  std::vector<double> u(n);
  for (auto& v : u) v = rng.uniform();
  return u;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

// Matern II on a shared index: k survives iff no lighter point lies within delta.
std::vector<std::size_t> matern2_core(const SpatialIndex& index, std::span<const Point2D> locs,
                                      std::span<const double> weights, double delta,
                                      std::span<const std::size_t> candidates) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("exclusion radius must be >= 0");
  std::vector<std::size_t> kept;
  if (delta == 0.0) {
    kept.assign(candidates.begin(), candidates.end());
  } else {
    for (std::size_t k : candidates) {
      bool dominated = false;
      index.for_each_within(locs[k], delta, [&](std::size_t y, double) {
        dominated = y != k && lighter(weights[y], y, weights[k], k);
        return !dominated;
      });
      if (!dominated) kept.push_back(k);
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

double max_of(std::span<const double> v) {
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, x);
  return mx;
}

// p0 times the product of survival factors against lighter neighbours.
double retention_core(const SpatialIndex& index, std::span<const Point2D> locs, std::span<const double> marks,
                      std::span<const double> weights, std::size_t k, double p0, double softness,
                      double tail, double mark_max) {
  double survive = p0;
  index.for_each_within(locs[k], marks[k] + mark_max + tail, [&](std::size_t y, double d) {
    if (y == k || !lighter(weights[y], y, weights[k], k)) return true;
    const double reach = marks[k] + marks[y];
    if (d <= reach) {
      survive = 0.0;
      return false;
    }
    if (d <= reach + tail) survive *= 1.0 - std::exp(-softness * (d - reach));
    return true;
  });
  return survive;
}

std::vector<std::size_t> sscc_core(const SpatialIndex& index, std::span<const Point2D> locs,
                                   std::span<const double> marks, std::span<const double> weights,
                                   double p0, double softness, double tail,
                                   std::span<const double> uniforms, std::span<const std::size_t> candidates) {
  const double mark_max = max_of(marks);
  // Each point's deletion events are independent per neighbour pair, so its
  // survival is Bernoulli(product); one uniform per point realises it exactly.
  std::vector<std::size_t> kept;
  for (std::size_t k : candidates)
    if (uniforms[k] < retention_core(index, locs, marks, weights, k, p0, softness, tail, mark_max))
      kept.push_back(k);
  std::sort(kept.begin(), kept.end());
  return kept;
}

struct Columns {
  std::vector<Point2D> locs;
  std::vector<double> marks;
  std::vector<double> weights;
};

Columns columns_of(const PointPattern& pattern) {
  Columns c;
  for (const auto& p : pattern.points()) {
    c.locs.push_back(p.location);
    c.marks.push_back(p.mark);
    c.weights.push_back(p.weight);
  }
  return c;
}

// About one point per cell.
double cell_for(const PointPattern& pattern) {
  const double area = pattern.window().area();
  return std::sqrt(area / static_cast<double>(std::max<std::size_t>(pattern.size(), 1)));
}

}  // namespace

std::vector<std::size_t> thin_independent(const PointPattern& pattern, double q, RngStream& rng) {
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("retention probability must lie in [0, 1]");
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < pattern.size(); ++k)
    if (rng.uniform() < q) kept.push_back(k);
  return kept;
}

std::vector<std::size_t> matern2_survivors(const PointPattern& pattern, double delta) {
  const auto c = columns_of(pattern);
  const SpatialIndex index(pattern, cell_for(pattern));
  return matern2_core(index, c.locs, c.weights, delta, all_indices(pattern.size()));
}

std::vector<std::size_t> thin_matern2(const PointPattern& pattern, double delta, RngStream& rng) {
  const auto weights = draw_uniforms(pattern.size(), rng);
  const std::vector<double> marks(pattern.size(), 0.0);
  return matern2_survivors(pattern.with_marks(marks, weights), delta);
}

double sscc_retention_probability(const PointPattern& pattern, std::size_t k, double p0,
                                  double softness, double truncation_eps) {
  if (k >= pattern.size()) throw InvalidArgument("point index out of range");
  SoftCoreParams check{{}, p0, softness, truncation_eps};
  check.validate();
  const auto c = columns_of(pattern);
  const SpatialIndex index(pattern, cell_for(pattern));
  return retention_core(index, c.locs, c.marks, c.weights, k, p0, softness, check.truncation_tail(),
                        max_of(c.marks));
}

std::vector<std::size_t> sscc_survivors(const PointPattern& pattern, double p0, double softness,
                                        double truncation_eps,
                                        std::span<const double> retention_uniforms,
                                        std::span<const std::size_t> candidates) {
  SoftCoreParams check{{}, p0, softness, truncation_eps};
  check.validate();
  if (retention_uniforms.size() != pattern.size())
    throw InvalidArgument("one retention uniform per point is required");
  for (std::size_t k : candidates)
    if (k >= pattern.size()) throw InvalidArgument("candidate index out of range");
  const auto c = columns_of(pattern);
  const SpatialIndex index(pattern, cell_for(pattern));
  return sscc_core(index, c.locs, c.marks, c.weights, p0, softness, check.truncation_tail(),
                   retention_uniforms, candidates);
}

std::vector<std::size_t> thin_sscc(const PointPattern& pattern, const SoftCoreParams& params,
                                   std::size_t item, RngStream& rng) {
  params.validate();
  if (item >= params.marks.size()) throw InvalidArgument("item index out of range");
  const std::size_t n = pattern.size();
  std::vector<double> marks(n);
  for (auto& m : marks) m = params.marks[item].sample(rng);
  const auto weights = draw_uniforms(n, rng);
  const auto uniforms = draw_uniforms(n, rng);
  const auto idx = all_indices(n);
  return sscc_survivors(pattern.with_marks(marks, weights), params.p0, params.softness,
                        params.truncation_eps, uniforms, idx);
}

PlacementResult place_all_items(const PointPattern& pattern, const PlacementPolicy& policy,
                                const DemandModel& demand, const PlacementStreams& streams,
                                const PlacementScope& scope) {
  validate_policy(policy);
  const std::size_t items = policy_item_count(policy);
  if (items != demand.catalog_size())
    throw InvalidArgument("policy parameter vector length must equal the catalog size");

  const std::size_t n = pattern.size();
  PlacementResult out;
  out.node_count = n;
  out.item_count = items;
  out.retained.resize(items);
  out.membership.assign(items * n, 0);
  out.cache_count.assign(n, 0);
  out.evaluated.assign(n, scope.nodes.empty() ? 1 : 0);

  std::vector<std::size_t> candidates = scope.nodes.empty() ? all_indices(n) : scope.nodes;
  for (std::size_t k : candidates) {
    if (k >= n) throw InvalidArgument("scope node index out of range");
    out.evaluated[k] = 1;
  }

  auto key = [&](std::size_t item, Purpose purpose) {
    return StreamKey{streams.seed, streams.replication, item, purpose, streams.policy_tag};
  };
  const SpatialIndex index(pattern, cell_for(pattern));
  std::vector<Point2D> locs(n);
  for (std::size_t k = 0; k < n; ++k) locs[k] = pattern[k].location;

  for (std::size_t item = 0; item < items; ++item) {
    std::vector<std::size_t> kept;
    if (const auto* ind = std::get_if<IndependentPolicy>(&policy)) {
      RngStream rng(key(item, Purpose::kIndependent));
      const auto u = draw_uniforms(n, rng);
      const double q = ind->probabilities[item];
      for (std::size_t k : candidates)
        if (u[k] < q) kept.push_back(k);
      std::sort(kept.begin(), kept.end());
    } else if (const auto* hc = std::get_if<HardCorePolicy>(&policy)) {
      RngStream wrng(key(item, Purpose::kWeights));
      const auto weights = draw_uniforms(n, wrng);
      kept = matern2_core(index, locs, weights, hc->radii[item], candidates);
    } else {
      const auto& params = std::get<SoftCorePolicy>(policy).params;
      RngStream mrng(key(item, Purpose::kMarks));
      RngStream wrng(key(item, Purpose::kWeights));
      RngStream rrng(key(item, Purpose::kRetention));
      std::vector<double> marks(n);
      for (auto& m : marks) m = params.marks[item].sample(mrng);
      const auto weights = draw_uniforms(n, wrng);
      const auto uniforms = draw_uniforms(n, rrng);
      kept = sscc_core(index, locs, marks, weights, params.p0, params.softness, params.truncation_tail(),
                       uniforms, candidates);
    }
    for (std::size_t k : kept) {
      out.membership[item * n + k] = 1;
      ++out.cache_count[k];
    }
    out.retained[item] = std::move(kept);
  }
  return out;
}

}  // namespace sscc
