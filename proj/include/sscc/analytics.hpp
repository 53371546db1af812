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


#ifndef SSCC_ANALYTICS_HPP
#define SSCC_ANALYTICS_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sscc/demand.hpp"
#include "sscc/placement.hpp"

namespace sscc {

struct QuadratureConfig {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  unsigned max_depth = 18;  // adaptive bisection levels per panel

  void validate() const;
};

/// Value plus the quadrature's own error estimate.
struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Mark-dependent weight law (CDF and quantile in w, given the mark).
/// Only needed when weights are not U[0,1] independent of the mark.
struct WeightLaw {
  std::function<double(double w, double mark)> cdf;
  std::function<double(double u, double mark)> quantile;
};

/// Parameters of the soft-core thinned process of one item.
struct SccDistributionSpec {
  double intensity = 0.1;
  MarkDistribution marks = MarkDistribution::degenerate(0.0);
  double p0 = 1.0;
  double softness = 10.0;              // kHardKernel for the indicator kernel
  std::optional<WeightLaw> weight_law;  // empty: U[0,1], mark independent

  void validate() const;
};

/// (1 - e^{-x}) / x, with its limit 1 at x = 0.
double one_minus_exp_over(double x);

/// Integral over the plane of f_c(|x|, m, n):
/// pi (m+n)^2 + 2 pi ((m+n)/c + 1/c^2); the 1/c terms vanish for the hard kernel.
double kernel_area(double m, double n, double softness);

/// E[g(X)] for X distributed per `marks`; breakpoints mark kinks of g.
QuadratureResult expect_over_marks(const MarkDistribution& marks,
                                   const std::function<double(double)>& g,
                                   const QuadratureConfig& quad,
                                   std::span<const double> breakpoints = {});

/// Closed-form Matern II retention probability (1 - e^{-l pi d^2}) / (l pi d^2).
double matern2_retention(double intensity, double delta);

/// Intensity of the soft-core thinned process.
QuadratureResult thinned_intensity(const SccDistributionSpec& spec, const QuadratureConfig& quad = {});

/// Conditional thinning Palm probability for Matern II with exclusion delta.
double ctpp_matern2(double r, double delta, double intensity);

/// Conditional thinning Palm probability for soft-core placement. The
/// exclusion disk around a neighbour with marks (m, n) has radius m + n.
QuadratureResult ctpp_sscc(double r, const SccDistributionSpec& spec, const QuadratureConfig& quad = {});

/// H(R) = 1 - exp(-int_0^R 2 pi r lambda eta(r) dr).
QuadratureResult scdf_from_ctpp(double radius, const std::function<double(double)>& ctpp,
                                double intensity, const QuadratureConfig& quad = {});

/// H at each of the ascending radii, integrating the exponent piecewise.
std::vector<double> scdf_curve(std::span<const double> radii, const std::function<double(double)>& ctpp,
                               double intensity, const QuadratureConfig& quad = {});

/// Demand-weighted mean of per-item SCDF values at the communication radius.
double hit_probability_analytic(const DemandModel& demand, std::span<const double> scdf_at_radius);
double hit_probability_analytic(const DemandModel& demand,
                                const std::vector<std::function<double(double)>>& per_item_scdf,
                                double radius);

/// sum_i p_r(i)^2 H_i (1 - H_i).
double hit_variance_analytic(const DemandModel& demand, std::span<const double> scdf_at_radius);

/// sum_i p_i (1 - p_i) for independent per-item indicators.
double cache_size_variance(std::span<const double> retention);

/// exp(-(C - N)^2 / (Var + (C - N) / 3)).
double bernstein_violation_bound(double expected_size, double threshold, double variance);

}  // namespace sscc

#endif  // SSCC_ANALYTICS_HPP
