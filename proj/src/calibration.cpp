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


#include "sscc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "sscc/error.hpp"

namespace sscc {
namespace {

constexpr double kPi = std::numbers::pi;

// Decreasing f on [lo, hi]; returns x with f(x) = target to bisection precision.
template <class F>
double bisect_decreasing(F f, double target, double lo, double hi, double ftol) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (std::abs(v - target) < ftol || hi - lo <= 1e-15 * std::max(1.0, hi)) return mid;
    (v > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SccDistributionSpec item_spec(double intensity, const MarkDistribution& marks,
                              const SoftCoreCalibration& sc) {
  SccDistributionSpec spec;
  spec.intensity = intensity;
  spec.marks = marks;
  spec.p0 = sc.p0;
  spec.softness = sc.softness;
  return spec;
}

double soft_retention(double intensity, double mean, const SoftCoreCalibration& sc,
                      const QuadratureConfig& quad) {
  const auto spec = item_spec(intensity, MarkDistribution::gamma(mean, sc.mark_scale), sc);
  return thinned_intensity(spec, quad).value / intensity;
}

ItemParameters solve_for_budget(PolicyFamily family, const DemandModel& demand, double budget,
                                double kappa, double intensity, const CalibrationOptions& opt) {
  ItemParameters out;
  out.target_retention = allocate_retention(demand, budget, kappa);
  out.budget = budget;
  const auto& p = out.target_retention;
  const std::size_t M = p.size();
  out.model_retention.resize(M);

  auto radius_for = [&](std::size_t i) {
    try {
      return solve_matern_radius(p[i], intensity, opt.max_radius);
    } catch (const Infeasible&) {
      out.infeasible_items.push_back(i);
      return opt.max_radius;
    }
  };

  switch (family) {
    case PolicyFamily::kIndependent:
      out.model_retention = p;
      out.policy = IndependentPolicy{p};
      break;
    case PolicyFamily::kMatern2: {
      std::vector<double> radii(M);
      for (std::size_t i = 0; i < M; ++i) {
        radii[i] = radius_for(i);
        out.model_retention[i] = matern2_retention(intensity, radii[i]);
      }
      out.policy = HardCorePolicy{std::move(radii)};
      break;
    }
    case PolicyFamily::kSoftCore: {
      const auto& sc = opt.soft_core;
      SoftCoreParams params;
      params.p0 = sc.p0;
      params.softness = sc.softness;
      params.marks.reserve(M);
      double prev_mean = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        double mean = 0.0;
        if (sc.mode == MarkMode::kFromMatern) {
          mean = sc.mark_ratio * radius_for(i);
        } else {
          const double at_zero = soft_retention(intensity, 0.0, sc, opt.quad);
          if (p[i] >= at_zero) {
            if (p[i] > at_zero + 1e-9) out.infeasible_items.push_back(i);
          } else {
            double hi = 1.0;
            while (soft_retention(intensity, hi, sc, opt.quad) > p[i] && hi < opt.max_radius) hi *= 2.0;
            if (soft_retention(intensity, hi, sc, opt.quad) > p[i]) {
              out.infeasible_items.push_back(i);
              mean = hi;
            } else {
              mean = bisect_decreasing([&](double m) { return soft_retention(intensity, m, sc, opt.quad); },
                                       p[i], 0.0, hi, 1e-10);
            }
          }
        }
        // Less popular items never get smaller marks than more popular ones.
        if (i > 0 && demand.probability(i) <= demand.probability(i - 1)) mean = std::max(mean, prev_mean);
        prev_mean = mean;
        params.marks.push_back(MarkDistribution::gamma(mean, sc.mark_scale));
        out.model_retention[i] = thinned_intensity(item_spec(intensity, params.marks.back(), sc), opt.quad).value / intensity;
      }
      out.policy = SoftCorePolicy{std::move(params)};
      break;
    }
  }
  return out;
}

void validate_spec(const SweepSpec& spec) {
  if (spec.families.empty()) throw InvalidArgument("at least one placement policy is required");
  if (spec.radii.empty()) throw InvalidArgument("at least one communication radius is required");
  for (double r : spec.radii)
    if (!(r > 0.0)) throw InvalidArgument("communication radii must be positive");
  if (spec.scales.empty()) throw InvalidArgument("the scaling grid is empty");
  for (double s : spec.scales)
    if (!(s > 0.0 && s <= 1.0)) throw InvalidArgument("scaling factors must lie in (0, 1]");
  if (!(spec.intensity > 0.0)) throw InvalidArgument("intensity must be positive");
}

}  // namespace

double solve_matern_radius(double retention, double intensity, double max_radius) {
  if (!(retention > 0.0 && retention <= 1.0)) throw InvalidArgument("retention must lie in (0, 1]");
  if (!(intensity > 0.0)) throw InvalidArgument("intensity must be positive");
  if (!(max_radius > 0.0)) throw InvalidArgument("max_radius must be positive");
  if (retention == 1.0) return 0.0;
  const double x_max = intensity * kPi * max_radius * max_radius;
  if (retention < one_minus_exp_over(x_max))
    throw Infeasible("retention target below what the largest exclusion radius attains");
  // Solve in x = l pi d^2, where the map is smooth.
  const double x = bisect_decreasing([](double v) { return one_minus_exp_over(v); }, retention, 0.0,
                                     x_max, 1e-12);
  return std::sqrt(x / (intensity * kPi));
}

std::vector<double> allocate_retention(const DemandModel& demand, double budget, double kappa) {
  const std::size_t M = demand.catalog_size();
  if (!(budget > 0.0 && budget <= static_cast<double>(M)))
    throw InvalidArgument("cache budget must lie in (0, M]");
  if (!(kappa >= 0.0)) throw InvalidArgument("allocation exponent must be >= 0");
  std::vector<double> w(M);
  for (std::size_t i = 0; i < M; ++i) w[i] = std::pow(demand.probability(i), kappa);
  std::vector<std::size_t> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] > w[b]; });

  // Water-filling: the k heaviest items are clipped at 1.
  double rest = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> p(M, 1.0);
  for (std::size_t k = 0; k < M; ++k) {
    const double s = (budget - static_cast<double>(k)) / rest;
    if (s * w[order[k]] <= 1.0) {
      for (std::size_t j = k; j < M; ++j) p[order[j]] = std::min(1.0, s * w[order[j]]);
      return p;
    }
    rest -= w[order[k]];
  }
  return p;
}

void CalibrationTarget::validate(std::size_t catalog_size) const {
  if (!(kappa >= 0.0)) throw InvalidArgument("allocation exponent must be >= 0");
  if (mode == Mode::kCacheBudget) {
    if (!(value > 0.0 && value <= static_cast<double>(catalog_size)))
      throw InvalidArgument("cache budget must lie in (0, M]");
  } else {
    if (!(value > 0.0 && value < 1.0)) throw InvalidArgument("hit target must lie in (0, 1)");
    if (!(radius > 0.0)) throw InvalidArgument("communication radius must be positive");
  }
}

ItemParameters solve_item_parameters(PolicyFamily family, const DemandModel& demand,
                                     const CalibrationTarget& target, double intensity,
                                     const CalibrationOptions& options) {
  target.validate(demand.catalog_size());
  if (!(intensity > 0.0)) throw InvalidArgument("intensity must be positive");
  if (target.mode == CalibrationTarget::Mode::kCacheBudget)
    return solve_for_budget(family, demand, target.value, target.kappa, intensity, options);

  const double M = static_cast<double>(demand.catalog_size());
  auto hit_at = [&](double budget) {
    const auto params = solve_for_budget(family, demand, budget, target.kappa, intensity, options);
    return analytic_hit_probability(params, demand, intensity, target.radius, options.quad);
  };
  if (hit_at(M) < target.value) throw Infeasible("hit target exceeds the full-retention hit probability");
  double lo = 0.0, hi = M;
  for (int it = 0; it < 60 && hi - lo > 1e-9 * M; ++it) {
    const double mid = 0.5 * (lo + hi);
    (hit_at(mid) < target.value ? lo : hi) = mid;
  }
  return solve_for_budget(family, demand, hi, target.kappa, intensity, options);
}

double analytic_hit_probability(const ItemParameters& params, const DemandModel& demand,
                                double intensity, double radius, const QuadratureConfig& quad) {
  const std::size_t M = demand.catalog_size();
  std::vector<double> h(M);
  if (const auto* ind = std::get_if<IndependentPolicy>(&params.policy)) {
    for (std::size_t i = 0; i < M; ++i)
      h[i] = -std::expm1(-intensity * ind->probabilities.at(i) * kPi * radius * radius);
  } else if (const auto* hc = std::get_if<HardCorePolicy>(&params.policy)) {
    for (std::size_t i = 0; i < M; ++i) {
      const double d = hc->radii.at(i);
      h[i] = scdf_from_ctpp(radius, [&](double r) { return ctpp_matern2(r, d, intensity); }, intensity, quad).value;
    }
  } else {
    const auto& sc = std::get<SoftCorePolicy>(params.policy).params;
    for (std::size_t i = 0; i < M; ++i) {
      SccDistributionSpec spec;
      spec.intensity = intensity;
      spec.marks = sc.marks.at(i);
      spec.p0 = sc.p0;
      spec.softness = sc.softness;
      h[i] = scdf_from_ctpp(radius, [&](double r) { return sc.p0 * ctpp_sscc(r, spec, quad).value; },
                            intensity, quad).value;
    }
  }
  return hit_probability_analytic(demand, h);
}

std::string family_name(PolicyFamily family) {
  switch (family) {
    case PolicyFamily::kIndependent: return "independent";
    case PolicyFamily::kMatern2: return "matern2";
    case PolicyFamily::kSoftCore: return "sscc";
  }
  return "unknown";
}

std::vector<TradeoffCurve> sweep_tradeoff(const SweepSpec& spec, const DemandModel& demand,
                                          const Window& window, const ReplicationPlan& plan) {
  validate_spec(spec);
  plan.validate();
  std::vector<double> scales = spec.scales;
  std::sort(scales.begin(), scales.end());
  const std::size_t F = spec.families.size(), S = scales.size(), Rn = spec.radii.size();
  const double M = static_cast<double>(demand.catalog_size());
  const double r_max = *std::max_element(spec.radii.begin(), spec.radii.end());

  std::vector<ItemParameters> params;
  params.reserve(F * S);
  for (auto fam : spec.families)
    for (double s : scales) {
      CalibrationTarget t;
      t.value = s * M;
      t.kappa = spec.kappa;
      params.push_back(solve_item_parameters(fam, demand, t, spec.intensity, spec.calibration));
    }

  // hits[(f*S + s)*Rn + r][rep], cache sizes pooled per (f, s).
  std::vector<std::vector<double>> hits(F * S * Rn, std::vector<double>(plan.replications));
  std::vector<std::vector<std::uint32_t>> caches(F * S);
  for (std::size_t rep = 0; rep < plan.replications; ++rep) {
    RngStream mrng(StreamKey{plan.seed, rep, 0, Purpose::kMotherPattern});
    RngStream prng(StreamKey{plan.seed, rep, 0, Purpose::kProbes});
    const auto mother = sample_ppp(spec.intensity, window, mrng);
    const auto probes = sample_uniform(window.evaluation_region(), plan.probes, prng);
    const auto scope = probe_scope(mother, r_max);
    for (std::size_t f = 0; f < F; ++f)
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t cell = f * S + s;
        const auto placement = place_all_items(mother, params[cell].policy, demand,
                                               {plan.seed, rep, 1 + 1000 * f + s}, scope);
        const auto sizes = cache_sizes_in_region(mother, placement);
        caches[cell].insert(caches[cell].end(), sizes.begin(), sizes.end());
        for (std::size_t r = 0; r < Rn; ++r) {
          const auto h = probe_hits(mother, placement, demand, probes, spec.radii[r]);
          hits[cell * Rn + r][rep] = pairwise_sum(h) / static_cast<double>(h.size());
        }
      }
  }

  std::vector<TradeoffCurve> curves;
  for (std::size_t f = 0; f < F; ++f)
    for (std::size_t r = 0; r < Rn; ++r) {
      TradeoffCurve curve{spec.families[f], spec.radii[r], {}, true};
      for (std::size_t s = 0; s < S; ++s) {
        const std::size_t cell = f * S + s;
        TradeoffRow row;
        row.family = spec.families[f];
        row.scale = scales[s];
        row.radius = spec.radii[r];
        row.budget = params[cell].budget;
        row.hit = mean_with_ci(hits[cell * Rn + r], plan.confidence);
        const auto dist = estimate_cache_size_distribution(caches[cell]);
        row.mean_cache = dist.mean;
        row.n_req = caches[cell].empty() ? 0 : required_cache_size(caches[cell], plan.confidence);
        row.infeasible = !params[cell].infeasible_items.empty();
        if (!curve.rows.empty() && row.hit.estimate < curve.rows.back().hit.estimate) curve.monotone = false;
        curve.rows.push_back(row);
      }
      curves.push_back(std::move(curve));
    }
  return curves;
}

double cache_at_hit(const TradeoffCurve& curve, double hit, CacheMeasure measure) {
  auto value = [&](const TradeoffRow& row) {
    return measure == CacheMeasure::kMean ? row.mean_cache : static_cast<double>(row.n_req);
  };
  double h0 = 0.0, c0 = 0.0;  // nothing cached, nothing hit
  for (const auto& row : curve.rows) {
    const double h1 = row.hit.estimate, c1 = value(row);
    if (h1 >= hit && h0 <= hit) {
      if (h1 == h0) return c0;
      return c0 + (c1 - c0) * (hit - h0) / (h1 - h0);
    }
    h0 = h1;
    c0 = c1;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double excess_ratio(const TradeoffCurve& other, const TradeoffCurve& reference, double hit,
                    CacheMeasure measure) {
  return cache_at_hit(other, hit, measure) / cache_at_hit(reference, hit, measure) - 1.0;
}

}  // namespace sscc
