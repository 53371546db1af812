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


#include "sscc/analytics.hpp"

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "sscc/error.hpp"
#include "sscc/spatial.hpp"

namespace sscc {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr double kPi = std::numbers::pi;
constexpr double kTailMass = 1e-9;

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& quad) {
  if (!(b > a)) return {};
  double err = 0.0, l1 = 0.0;
  const double v = Kronrod::integrate(f, a, b, quad.max_depth, quad.rel_tol, &err, &l1);
  if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value", err);
  const double budget = std::max(quad.abs_tol, quad.rel_tol * l1);
  // Kronrod's estimate is pessimistic on smooth panels; only fail on a clear miss.
  if (err > 100.0 * budget)
    throw NumericalError("quadrature did not converge (error estimate " + std::to_string(err) + ")", err);
  return {v, err};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InvalidArgument("quadrature tolerances must be positive");
  if (max_depth == 0) throw InvalidArgument("quadrature needs at least one subdivision level");
}

void SccDistributionSpec::validate() const {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) throw InvalidArgument("intensity must be positive");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw InvalidArgument("p0 must lie in (0, 1]");
  if (!(softness > 0.0)) throw InvalidArgument("softness must be positive");
  if (weight_law && (!weight_law->cdf || !weight_law->quantile))
    throw InvalidArgument("weight law needs both a CDF and a quantile");
}

double one_minus_exp_over(double x) {
  if (x < 1e-6) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

double kernel_area(double m, double n, double softness) {
  const double s = m + n;
  double area = kPi * s * s;
  if (!std::isinf(softness)) area += 2.0 * kPi * (s / softness + 1.0 / (softness * softness));
  return area;
}

QuadratureResult expect_over_marks(const MarkDistribution& marks,
                                   const std::function<double(double)>& g,
                                   const QuadratureConfig& quad,
                                   std::span<const double> breakpoints) {
  if (marks.is_degenerate()) return {g(marks.mean()), 0.0};

  const double a = marks.shape();
  const double beta = marks.scale();
  const boost::math::gamma_distribution<double> dist(a, beta);
  const double lo = boost::math::quantile(dist, kTailMass);
  const double hi = boost::math::quantile(boost::math::complement(dist, kTailMass));
  const double q05 = boost::math::quantile(dist, 0.05);

  std::vector<double> cuts{q05, marks.mean(), boost::math::quantile(dist, 0.95)};
  for (double b : breakpoints) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  auto pdf_term = [&](double m) { return g(m) * boost::math::pdf(dist, m); };
  QuadratureResult total;
  double start = lo;
  if (a < 1.0) {
    // Density is singular at 0: integrate [0, mean] with m = mean * s^(1/a),
    // which turns m^(a-1) dm into a constant times ds.
    const double top = marks.mean();
    const double log_c = a * std::log(top) - std::log(a) - std::lgamma(a) - a * std::log(beta);
    auto sub = [&](double s) {
      const double m = top * std::pow(s, 1.0 / a);
      return g(m) * std::exp(log_c - m / beta);
    };
    double s0 = 0.0;
    auto add = [&](double s1) {
      const auto r = integrate(sub, s0, s1, quad);
      total.value += r.value;
      total.error_estimate += r.error_estimate;
      s0 = s1;
    };
    for (double b : cuts)
      if (b > 0.0 && b < top) add(std::pow(b / top, a));
    add(1.0);
    start = top;
  }
  for (double c : cuts) {
    if (c <= start || c >= hi) continue;
    const auto r = integrate(pdf_term, start, c, quad);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    start = c;
  }
  const auto r = integrate(pdf_term, start, hi, quad);
  total.value += r.value;
  total.error_estimate += r.error_estimate;
  return total;
}

double matern2_retention(double intensity, double delta) {
  if (!(intensity > 0.0)) throw InvalidArgument("intensity must be positive");
  if (!(delta >= 0.0)) throw InvalidArgument("exclusion radius must be >= 0");
  return one_minus_exp_over(intensity * kPi * delta * delta);
}

QuadratureResult thinned_intensity(const SccDistributionSpec& spec, const QuadratureConfig& quad) {
  spec.validate();
  quad.validate();
  const double lam = spec.intensity;
  const MarkDistribution& mu = spec.marks;
  const double c = spec.softness;

  if (!spec.weight_law) {
    // U[0,1] weights: the w-integral of exp(-lam w A(m)) is g(lam A(m)), and
    // E_n of the kernel area only needs the first two mark moments.
    const double n1 = mu.mean();
    const double n2 = mu.second_moment();
    auto inner = [&](double m) {
      double area = kPi * (m * m + 2.0 * m * n1 + n2);
      if (!std::isinf(c)) area += 2.0 * kPi * ((m + n1) / c + 1.0 / (c * c));
      return one_minus_exp_over(lam * area);
    };
    auto r = expect_over_marks(mu, inner, quad);
    return {lam * spec.p0 * r.value, lam * spec.p0 * r.error_estimate};
  }

  const WeightLaw& law = *spec.weight_law;
  auto per_mark = [&](double m) {
    auto per_u = [&](double u) {
      const double w = law.quantile(u, m);
      auto weighted_area = [&](double n) { return law.cdf(w, n) * kernel_area(m, n, c); };
      const double expo = expect_over_marks(mu, weighted_area, quad).value;
      return std::exp(-lam * expo);
    };
    return integrate(per_u, 0.0, 1.0, quad).value;
  };
  auto r = expect_over_marks(mu, per_mark, quad);
  return {lam * spec.p0 * r.value, lam * spec.p0 * r.error_estimate};
}

double ctpp_matern2(double r, double delta, double intensity) {
  if (!(r >= 0.0) || !(delta >= 0.0)) throw InvalidArgument("ctpp_matern2: negative radius");
  if (!(intensity > 0.0)) throw InvalidArgument("intensity must be positive");
  const double exposed = std::max(0.0, kPi * delta * delta - lens_area(r, delta));
  return one_minus_exp_over(intensity * exposed);
}

QuadratureResult ctpp_sscc(double r, const SccDistributionSpec& spec, const QuadratureConfig& quad) {
  spec.validate();
  quad.validate();
  if (!(r >= 0.0)) throw InvalidArgument("ctpp_sscc: negative radius");
  const double lam = spec.intensity;
  const MarkDistribution& mu = spec.marks;
  const double n1 = mu.mean();
  const double n2 = mu.second_moment();

  double worst_inner_err = 0.0;
  auto q_of = [&](double m) {
    const double kink = 2.0 * r - m;  // lens area is not smooth where m + n = 2r
    const double bp[] = {kink};
    const auto lens = expect_over_marks(
        mu, [&](double n) { return lens_area(r, m + n); }, quad,
        kink > 0.0 ? std::span<const double>(bp) : std::span<const double>());
    worst_inner_err = std::max(worst_inner_err, lens.error_estimate);
    const double exposed = kPi * (m * m + 2.0 * m * n1 + n2) - lens.value;
    return lam * std::max(0.0, exposed);
  };
  auto outer = expect_over_marks(mu, [&](double m) { return one_minus_exp_over(q_of(m)); }, quad);
  return {outer.value, outer.error_estimate + lam * worst_inner_err};
}

QuadratureResult scdf_from_ctpp(double radius, const std::function<double(double)>& ctpp,
                                double intensity, const QuadratureConfig& quad) {
  if (!(radius >= 0.0)) throw InvalidArgument("SCDF radius must be >= 0");
  if (!(intensity > 0.0)) throw InvalidArgument("intensity must be positive");
  quad.validate();
  if (radius == 0.0) return {0.0, 0.0};
  auto integrand = [&](double r) {
    const double eta = ctpp(r);
    if (!(eta >= 0.0 && eta <= 1.0 + 1e-12)) throw InvalidArgument("CTPP must map into [0, 1]");
    return 2.0 * kPi * r * intensity * eta;
  };
  const auto exponent = integrate(integrand, 0.0, radius, quad);
  const double h = -std::expm1(-exponent.value);
  return {std::clamp(h, 0.0, 1.0), std::exp(-exponent.value) * exponent.error_estimate};
}

std::vector<double> scdf_curve(std::span<const double> radii, const std::function<double(double)>& ctpp,
                               double intensity, const QuadratureConfig& quad) {
  if (!(intensity > 0.0)) throw InvalidArgument("intensity must be positive");
  quad.validate();
  auto integrand = [&](double r) {
    const double eta = ctpp(r);
    if (!(eta >= 0.0 && eta <= 1.0 + 1e-12)) throw InvalidArgument("CTPP must map into [0, 1]");
    return 2.0 * kPi * r * intensity * eta;
  };
  std::vector<double> out(radii.size());
  double prev = 0.0, exponent = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] >= prev)) throw InvalidArgument("SCDF radii must be ascending and >= 0");
    exponent += integrate(integrand, prev, radii[k], quad).value;
    prev = radii[k];
    out[k] = std::clamp(-std::expm1(-exponent), 0.0, 1.0);
  }
  return out;
}

double hit_probability_analytic(const DemandModel& demand, std::span<const double> scdf_at_radius) {
  if (scdf_at_radius.size() != demand.catalog_size())
    throw InvalidArgument("one SCDF value per item is required");
  double hit = 0.0;
  for (std::size_t i = 0; i < scdf_at_radius.size(); ++i) hit += demand.probability(i) * scdf_at_radius[i];
  return hit;
}

double hit_probability_analytic(const DemandModel& demand,
                                const std::vector<std::function<double(double)>>& per_item_scdf,
                                double radius) {
  if (per_item_scdf.size() != demand.catalog_size())
    throw InvalidArgument("one SCDF per item is required");
  std::vector<double> h(per_item_scdf.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = per_item_scdf[i](radius);
  return hit_probability_analytic(demand, h);
}

double hit_variance_analytic(const DemandModel& demand, std::span<const double> scdf_at_radius) {
  if (scdf_at_radius.size() != demand.catalog_size())
    throw InvalidArgument("one SCDF value per item is required");
  double var = 0.0;
  for (std::size_t i = 0; i < scdf_at_radius.size(); ++i) {
    const double h = scdf_at_radius[i];
    if (!(h >= 0.0 && h <= 1.0)) throw InvalidArgument("SCDF values must lie in [0, 1]");
    const double p = demand.probability(i);
    var += p * p * h * (1.0 - h);
  }
  return var;
}

double cache_size_variance(std::span<const double> retention) {
  double var = 0.0;
  for (double p : retention) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("retention probabilities must lie in [0, 1]");
    var += p * (1.0 - p);
  }
  return var;
}

double bernstein_violation_bound(double expected_size, double threshold, double variance) {
  if (!(variance >= 0.0)) throw InvalidArgument("variance must be >= 0");
  if (threshold < expected_size) throw InvalidArgument("threshold below the mean: the bound is vacuous");
  const double t = threshold - expected_size;
  if (t == 0.0) return 1.0;
  return std::exp(-(t * t) / (variance + t / 3.0));
}

}  // namespace sscc
