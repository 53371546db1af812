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


#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "sscc/calibration.hpp"
#include "sscc/error.hpp"

using namespace sscc;

TEST_CASE("Matern radius inversion") {
  const double lambda = 0.1;
  CHECK(solve_matern_radius(1.0, lambda, 200.0) == 0.0);
  const double p = -std::expm1(-1.0);
  CHECK(solve_matern_radius(p, lambda, 200.0) ==
        doctest::Approx(1.0 / std::sqrt(lambda * std::numbers::pi)).epsilon(1e-9));
  for (double target : {0.999, 0.9, 0.5, 0.1, 0.01, 1e-4}) {
    const double d = solve_matern_radius(target, lambda, 200.0);
    CHECK(std::abs(matern2_retention(lambda, d) - target) < 1e-9);
  }
  CHECK_THROWS_AS(solve_matern_radius(1e-6, lambda, 200.0), Infeasible);
  CHECK_THROWS_AS(solve_matern_radius(0.0, lambda, 200.0), InvalidArgument);
  CHECK_THROWS_AS(solve_matern_radius(0.5, 0.0, 200.0), InvalidArgument);

  // Simulated retention on a torus, free of edge effects.
  const double target = 0.4;
  const double d = solve_matern_radius(target, lambda, 200.0);
  const Window w(100.0, EdgeMode::kTorus);
  double kept = 0.0, total = 0.0;
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    RngStream m(StreamKey{2, rep, 0, Purpose::kMotherPattern});
    RngStream t(StreamKey{2, rep, 0, Purpose::kWeights});
    const auto pat = sample_ppp(lambda, w, m);
    kept += static_cast<double>(thin_matern2(pat, d, t).size());
    total += static_cast<double>(pat.size());
  }
  CHECK(kept / total == doctest::Approx(target).epsilon(0.02));
}

TEST_CASE("budget allocation") {
  const DemandModel flat(10, 0.0);
  for (double p : allocate_retention(flat, 3.0)) CHECK(p == doctest::Approx(0.3));
  CHECK(allocate_retention(DemandModel(1, 0.5), 1.0)[0] == 1.0);

  const DemandModel steep(20, 1.5);
  for (double budget : {0.5, 2.0, 7.5, 19.0, 20.0}) {
    const auto p = allocate_retention(steep, budget);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(budget).epsilon(1e-12));
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i] >= 0.0);
      CHECK(p[i] <= 1.0);
      if (i > 0) CHECK(p[i] <= p[i - 1]);
    }
  }
  const auto clipped = allocate_retention(steep, 7.5);
  CHECK(clipped[0] == 1.0);
  const auto sharp = allocate_retention(steep, 2.0, 2.0);
  CHECK(sharp[0] > allocate_retention(steep, 2.0, 1.0)[0] - 1e-12);
  CHECK_THROWS_AS(allocate_retention(steep, 0.0), InvalidArgument);
  CHECK_THROWS_AS(allocate_retention(steep, 21.0), InvalidArgument);
}

TEST_CASE("per-item parameters") {
  const double lambda = 0.1;
  CalibrationTarget t;
  t.value = 1.0;
  SUBCASE("single item at full budget") {
    const DemandModel one(1, 0.1);
    const auto ind = solve_item_parameters(PolicyFamily::kIndependent, one, t, lambda);
    CHECK(std::get<IndependentPolicy>(ind.policy).probabilities[0] == 1.0);
    const auto hc = solve_item_parameters(PolicyFamily::kMatern2, one, t, lambda);
    CHECK(std::get<HardCorePolicy>(hc.policy).radii[0] == 0.0);
  }
  const DemandModel demand(12, 0.8);
  t.value = 3.0;
  SUBCASE("hard-core round trip") {
    const auto hc = solve_item_parameters(PolicyFamily::kMatern2, demand, t, lambda);
    const auto& radii = std::get<HardCorePolicy>(hc.policy).radii;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      CHECK(std::abs(hc.model_retention[i] - hc.target_retention[i]) < 1e-9);
      if (i > 0) CHECK(radii[i] >= radii[i - 1]);
    }
    CHECK(hc.infeasible_items.empty());
  }
  SUBCASE("soft-core marks follow the Matern radii") {
    const auto hc = solve_item_parameters(PolicyFamily::kMatern2, demand, t, lambda);
    const auto sc = solve_item_parameters(PolicyFamily::kSoftCore, demand, t, lambda);
    const auto& radii = std::get<HardCorePolicy>(hc.policy).radii;
    const auto& params = std::get<SoftCorePolicy>(sc.policy).params;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      CHECK(params.marks[i].mean() == doctest::Approx(0.7 * radii[i]));
      CHECK(params.marks[i].scale() == 1.0);
      CHECK(sc.model_retention[i] < sc.target_retention[i]);
    }
  }
  SUBCASE("matched soft-core marks round trip") {
    CalibrationOptions opt;
    opt.soft_core.mode = MarkMode::kMatched;
    const auto sc = solve_item_parameters(PolicyFamily::kSoftCore, demand, t, lambda, opt);
    const auto& marks = std::get<SoftCorePolicy>(sc.policy).params.marks;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      CHECK(sc.model_retention[i] == doctest::Approx(sc.target_retention[i]).epsilon(1e-6));
      if (i > 0) CHECK(marks[i].mean() >= marks[i - 1].mean());
    }
  }
  SUBCASE("hit target") {
    CalibrationTarget h;
    h.mode = CalibrationTarget::Mode::kHitTarget;
    h.value = 0.5;
    h.radius = 3.0;
    for (auto fam : {PolicyFamily::kIndependent, PolicyFamily::kMatern2}) {
      const auto p = solve_item_parameters(fam, demand, h, lambda);
      CHECK(analytic_hit_probability(p, demand, lambda, 3.0) == doctest::Approx(0.5).epsilon(1e-6));
    }
    h.value = 0.99;
    CHECK_THROWS_AS(solve_item_parameters(PolicyFamily::kIndependent, demand, h, lambda), Infeasible);
  }
  SUBCASE("invalid targets") {
    CalibrationTarget bad;
    bad.value = 13.0;
    CHECK_THROWS_AS(solve_item_parameters(PolicyFamily::kIndependent, demand, bad, lambda), InvalidArgument);
    bad.mode = CalibrationTarget::Mode::kHitTarget;
    bad.value = 1.0;
    CHECK_THROWS_AS(solve_item_parameters(PolicyFamily::kIndependent, demand, bad, lambda), InvalidArgument);
  }
}

TEST_CASE("curve interpolation") {
  TradeoffCurve c{PolicyFamily::kIndependent, 3.0, {}, true};
  const double hits[] = {0.2, 0.5, 0.8}, caches[] = {1.0, 2.0, 4.0};
  for (int k = 0; k < 3; ++k) {
    TradeoffRow r;
    r.hit.estimate = hits[k];
    r.mean_cache = caches[k];
    r.n_req = static_cast<std::uint32_t>(2 * caches[k]);
    c.rows.push_back(r);
  }
  CHECK(cache_at_hit(c, 0.1) == doctest::Approx(0.5));
  CHECK(cache_at_hit(c, 0.7) == doctest::Approx(2.0 + 2.0 * (0.2 / 0.3)));
  CHECK(cache_at_hit(c, 0.7, CacheMeasure::kRequired) == doctest::Approx(4.0 + 4.0 * (0.2 / 0.3)));
  CHECK(std::isnan(cache_at_hit(c, 0.9)));
  TradeoffCurve half = c;
  for (auto& r : half.rows) r.mean_cache /= 2.0;
  CHECK(excess_ratio(c, half, 0.6) == doctest::Approx(1.0));
}

TEST_CASE("small tradeoff sweep") {
  SweepSpec spec;
  spec.radii = {2.0};
  spec.scales = {1.0, 0.3};
  spec.intensity = 0.2;
  const DemandModel demand(6, 0.5);
  ReplicationPlan plan;
  plan.replications = 6;
  plan.probes = 80;
  const Window w(40.0);
  const auto curves = sweep_tradeoff(spec, demand, w, plan);
  REQUIRE(curves.size() == 3);
  for (const auto& c : curves) {
    REQUIRE(c.rows.size() == 2);
    CHECK(c.rows[0].scale == 0.3);
    CHECK(c.rows[1].mean_cache > c.rows[0].mean_cache);
  }
  // Full retention is the same placement for independent and hard-core.
  const double ceiling = curves[0].rows[1].hit.estimate;
  CHECK(curves[1].rows[1].hit.estimate == ceiling);
  CHECK(curves[0].rows[1].mean_cache == 6.0);
  const auto again = sweep_tradeoff(spec, demand, w, plan);
  CHECK(again[2].rows[0].hit.estimate == curves[2].rows[0].hit.estimate);

  spec.families.clear();
  CHECK_THROWS_AS(sweep_tradeoff(spec, demand, w, plan), InvalidArgument);
}
