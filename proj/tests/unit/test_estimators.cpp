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


#include <boost/math/distributions/binomial.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "sscc/error.hpp"
#include "sscc/estimators.hpp"

using namespace sscc;

TEST_CASE("mean and proportion intervals") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto e = mean_with_ci(v, 0.95);
  CHECK(e.estimate == doctest::Approx(3.0));
  CHECK(e.std_error == doctest::Approx(std::sqrt(2.5 / 5.0)));
  CHECK(e.upper - e.estimate == doctest::Approx(1.959963985 * e.std_error));
  CHECK_THROWS_AS(mean_with_ci(std::vector<double>{}, 0.95), InvalidArgument);
  CHECK_THROWS_AS(mean_with_ci(v, 1.0), InvalidArgument);
  const auto p = proportion_with_ci(0, 10, 0.95);
  CHECK(p.lower == 0.0);
  CHECK(p.upper == 0.0);
  std::vector<double> many(1001, 0.1);
  CHECK(pairwise_sum(many) == doctest::Approx(100.1).epsilon(1e-13));
}

TEST_CASE("required cache size matches exact binomial quantile") {
  RngStream rng(77);
  std::vector<std::uint32_t> samples(200'000);
  for (auto& s : samples) {
    std::uint32_t c = 0;
    for (int i = 0; i < 100; ++i) c += rng.uniform() < 0.3;
    s = c;
  }
  const boost::math::binomial_distribution<double> bin(100, 0.3);
  std::uint32_t exact = 0;
  while (boost::math::cdf(bin, exact) < 0.975) ++exact;
  const auto got = required_cache_size(samples);
  CHECK(std::abs(static_cast<int>(got) - static_cast<int>(exact)) <= 1);
  const auto dist = estimate_cache_size_distribution(samples);
  CHECK(dist.mean == doctest::Approx(30.0).epsilon(0.005));
  CHECK(dist.variance == doctest::Approx(21.0).epsilon(0.02));
  CHECK(std::accumulate(dist.pmf.begin(), dist.pmf.end(), 0.0) == doctest::Approx(1.0));
  const auto viol = estimate_violation_probability(samples, exact);
  CHECK(viol.estimate == doctest::Approx(1.0 - boost::math::cdf(bin, exact)).epsilon(0.1));
  CHECK(estimate_violation_probability(samples, -1.0).estimate == 1.0);
  CHECK_THROWS_AS(required_cache_size(std::vector<std::uint32_t>{}), InvalidArgument);
}

TEST_CASE("SCDF of a full Poisson pattern") {
  const double lambda = 0.1;
  const Window w(100.0);
  const std::vector<double> grid{0.0, 1.0, 2.0, 3.0};
  std::vector<double> acc(grid.size(), 0.0);
  const int reps = 60;
  for (int rep = 0; rep < reps; ++rep) {
    RngStream m(StreamKey{4, static_cast<std::uint64_t>(rep), 0, Purpose::kMotherPattern});
    RngStream p(StreamKey{4, static_cast<std::uint64_t>(rep), 0, Purpose::kProbes});
    const auto pat = sample_ppp(lambda, w, m);
    std::vector<std::size_t> all(pat.size());
    std::iota(all.begin(), all.end(), 0);
    const auto probes = sample_uniform(w.evaluation_region(), 500, p);
    const auto est = estimate_scdf(pat, all, probes, grid);
    CHECK_FALSE(est.empty_retained);
    for (std::size_t g = 0; g < grid.size(); ++g) acc[g] += est.values[g];
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double oracle = 1.0 - std::exp(-lambda * std::numbers::pi * grid[g] * grid[g]);
    CHECK(acc[g] / reps == doctest::Approx(oracle).epsilon(0.03).scale(1.0));
  }
  RngStream p(1);
  const auto pat = sample_ppp(lambda, w, p);
  const auto probes = sample_uniform(w.evaluation_region(), 10, p);
  CHECK(estimate_scdf(pat, {}, probes, grid).empty_retained);
}

TEST_CASE("probe hits agree with brute force") {
  const Window w(30.0);
  RngStream rng(21);
  const auto pat = sample_ppp(0.3, w, rng);
  const DemandModel demand(8, 0.8);
  const PlacementPolicy policy = IndependentPolicy{std::vector<double>(8, 0.4)};
  const auto placement = place_all_items(pat, policy, demand, {1, 0, 1});
  const auto probes = sample_uniform(w.evaluation_region(), 200, rng);
  const double R = 2.5;
  const auto hits = probe_hits(pat, placement, demand, probes, R);
  for (std::size_t j = 0; j < probes.size(); ++j) {
    double f = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      bool any = false;
      for (std::size_t k = 0; k < pat.size(); ++k)
        any |= placement.contains(k, i) && distance(pat[k].location, probes[j], w) <= R;
      if (any) f += demand.probability(i);
    }
    CHECK(hits[j] == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo hit probability of independent placement") {
  const double lambda = 0.1, R = 3.0;
  const DemandModel demand(20, 0.6);
  std::vector<double> q(20);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = 0.9 / (1.0 + i);
  const PlacementPolicy policy = IndependentPolicy{q};
  ReplicationPlan plan;
  plan.replications = 40;
  plan.probes = 200;
  plan.seed = 9;
  const auto est = estimate_hit_probability(policy, demand, lambda, Window(100.0), R, plan);
  double oracle = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    oracle += demand.probability(i) * (1.0 - std::exp(-lambda * q[i] * std::numbers::pi * R * R));
  CHECK(std::abs(est.estimate - oracle) <= 3.0 * est.std_error + 1e-3);
  const auto again = estimate_hit_probability(policy, demand, lambda, Window(100.0), R, plan);
  CHECK(again.estimate == est.estimate);

  ReplicationPlan big = plan;
  big.replications = 4 * plan.replications;
  const auto wide = estimate_hit_probability(policy, demand, lambda, Window(100.0), R, big);
  CHECK(wide.half_width() <= 0.6 * est.half_width());

  plan.replications = 0;
  CHECK_THROWS_AS(estimate_hit_probability(policy, demand, lambda, Window(100.0), R, plan),
                  InvalidArgument);
}
