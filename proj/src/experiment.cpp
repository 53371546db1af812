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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sscc/analytics.hpp"
#include "sscc/error.hpp"
#include "sscc/experiment.hpp"

namespace sscc {
namespace {

constexpr double kPi = std::numbers::pi;

// Stream item ids that keep each check's randomness separate.
enum CheckStream : std::uint64_t {
  kIntensityCheck = 101,
  kIdentityCheck = 102,
  kBernsteinCheck = 103,
  kVarianceCheck = 104,
};

Window make_window(const ExperimentConfig& c) { return Window(c.side, c.edge_mode); }

SweepSpec make_sweep(const ExperimentConfig& c) {
  SweepSpec s;
  s.families = c.policies;
  s.radii = c.radii;
  s.scales = c.scales;
  s.intensity = c.intensity;
  s.kappa = c.kappa;
  s.calibration.soft_core = c.soft_core;
  s.calibration.max_radius = 2.0 * c.side;
  return s;
}

CalibrationOptions make_options(const ExperimentConfig& c) {
  CalibrationOptions o;
  o.soft_core = c.soft_core;
  o.max_radius = 2.0 * c.side;
  return o;
}

ItemParameters calibrate_budget(const ExperimentConfig& c, PolicyFamily family, const DemandModel& demand) {
  CalibrationTarget t;
  t.value = c.validation.cache_budget;
  t.kappa = c.kappa;
  return solve_item_parameters(family, demand, t, c.intensity, make_options(c));
}

MarkDistribution marks_of(double mean, double beta) {
  return beta == 0.0 ? MarkDistribution::degenerate(mean) : MarkDistribution::gamma(mean, beta);
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& s : cells) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out + '\n';
}

// ---- validation checks -------------------------------------------------

struct IntensityCase {
  std::string label;
  MarkDistribution marks;
  double p0;
  double softness;
};

ValidationCheck intensity_check(const ExperimentConfig& c, const IntensityCase& ic, std::uint64_t case_id) {
  SccDistributionSpec spec;
  spec.intensity = c.intensity;
  spec.marks = ic.marks;
  spec.p0 = ic.p0;
  spec.softness = ic.softness;
  const double analytic = thinned_intensity(spec).value;

  // Torus window: no edge effects in the retained-point count.
  const Window w(c.side, EdgeMode::kTorus);
  const double per_rep = analytic * w.area();
  const std::size_t reps = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(40000.0 / std::max(per_rep, 1e-9))), c.plan.replications, 20000);
  SoftCoreParams params;
  params.marks = {ic.marks};
  params.p0 = ic.p0;
  params.softness = ic.softness;
  double kept = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    RngStream m(StreamKey{c.plan.seed, rep, kIntensityCheck * 100 + case_id, Purpose::kMotherPattern});
    RngStream t(StreamKey{c.plan.seed, rep, kIntensityCheck * 100 + case_id, Purpose::kRetention});
    const auto pat = sample_ppp(c.intensity, w, m);
    kept += static_cast<double>(thin_sscc(pat, params, 0, t).size());
  }
  const double mc = kept / (static_cast<double>(reps) * w.area());
  ValidationCheck chk{"retained_intensity[" + ic.label + "]", analytic, mc, 0.02, false};
  chk.passed = std::abs(mc - analytic) <= 0.02 * analytic;
  return chk;
}

std::vector<ValidationCheck> intensity_checks(const ExperimentConfig& c, const DemandModel& demand) {
  const double m = c.validation.mark_mean;
  const auto& sc = c.soft_core;
  std::vector<IntensityCase> cases{
      {"beta=0", marks_of(m, 0.0), sc.p0, sc.softness},
      {"beta=0.1", marks_of(m, 0.1), sc.p0, sc.softness},
      {"beta=1", marks_of(m, 1.0), sc.p0, sc.softness},
      {"small_marks", marks_of(m / 3.0, 1.0), sc.p0, sc.softness},
      {"p0=0.5", marks_of(m, sc.mark_scale), 0.5, sc.softness},
  };
  // The calibrated mark law of the most popular item.
  const auto cal = calibrate_budget(c, PolicyFamily::kSoftCore, demand);
  const auto& cal_params = std::get<SoftCorePolicy>(cal.policy).params;
  cases.push_back({"calibrated_item_1", cal_params.marks.front(), cal_params.p0, cal_params.softness});

  std::vector<ValidationCheck> out;
  for (std::size_t k = 0; k < cases.size(); ++k) out.push_back(intensity_check(c, cases[k], k));
  return out;
}

std::vector<ValidationCheck> matern_reduction_checks(const ExperimentConfig& c) {
  const double m = c.validation.mark_mean;
  SccDistributionSpec spec;
  spec.intensity = c.intensity;
  spec.marks = MarkDistribution::degenerate(m);
  spec.softness = kHardKernel;
  const double closed = matern2_retention(c.intensity, 2.0 * m);
  const double quad = thinned_intensity(spec).value / c.intensity;
  ValidationCheck q{"matern_reduction_quadrature", closed, quad, 1e-6, std::abs(quad - closed) <= 1e-6};

  auto sim = intensity_check(c, {"", spec.marks, 1.0, kHardKernel}, 50);
  ValidationCheck s{"matern_reduction_simulation", closed, sim.observed / c.intensity, 0.02, false};
  s.passed = std::abs(s.observed - closed) <= 0.02 * closed;
  return {q, s};
}

std::vector<ValidationCheck> identity_checks(const ExperimentConfig& c, const DemandModel& demand) {
  const Window w = make_window(c);
  const double r_max = *std::max_element(c.radii.begin(), c.radii.end());
  std::vector<ValidationCheck> out;
  for (std::size_t f = 0; f < c.policies.size(); ++f) {
    const auto params = calibrate_budget(c, c.policies[f], demand);
    std::vector<std::vector<double>> diffs(c.radii.size(), std::vector<double>(c.plan.replications));
    for (std::size_t rep = 0; rep < c.plan.replications; ++rep) {
      RngStream mrng(StreamKey{c.plan.seed, rep, kIdentityCheck, Purpose::kMotherPattern});
      RngStream arng(StreamKey{c.plan.seed, rep, kIdentityCheck, Purpose::kProbes});
      RngStream brng(StreamKey{c.plan.seed, rep, kIdentityCheck, Purpose::kGeneric});
      const auto mother = sample_ppp(c.intensity, w, mrng);
      const auto probes_a = sample_uniform(w.evaluation_region(), c.plan.probes, arng);
      const auto probes_b = sample_uniform(w.evaluation_region(), c.plan.probes, brng);
      const auto placement = place_all_items(mother, params.policy, demand,
                                             {c.plan.seed, rep, kIdentityCheck * 10 + f}, probe_scope(mother, r_max));
      std::vector<std::vector<std::size_t>> retained(demand.catalog_size());
      for (std::size_t k = 0; k < placement.node_count; ++k) {
        if (!placement.evaluated[k]) continue;
        for (std::size_t i = 0; i < demand.catalog_size(); ++i)
          if (placement.contains(k, i)) retained[i].push_back(k);
      }
      for (std::size_t r = 0; r < c.radii.size(); ++r) {
        const auto hits = probe_hits(mother, placement, demand, probes_a, c.radii[r]);
        const double f_hat = pairwise_sum(hits) / static_cast<double>(hits.size());
        const double grid[] = {c.radii[r]};
        std::vector<double> h(demand.catalog_size());
        for (std::size_t i = 0; i < h.size(); ++i) h[i] = estimate_scdf(mother, retained[i], probes_b, grid).values[0];
        diffs[r][rep] = f_hat - hit_probability_analytic(demand, h);
      }
    }
    for (std::size_t r = 0; r < c.radii.size(); ++r) {
      const auto e = mean_with_ci(diffs[r], c.plan.confidence);
      ValidationCheck chk{"hit_identity[" + family_name(c.policies[f]) + ",R=" + format_double(c.radii[r]) + "]",
                          0.0, e.estimate, 3.0 * e.std_error, false};
      chk.passed = std::abs(e.estimate) <= chk.tolerance + 1e-12;
      out.push_back(chk);
    }
  }
  return out;
}

std::vector<ValidationCheck> ordering_checks(const ExperimentConfig& c) {
  const double m = c.validation.mark_mean;
  std::vector<ValidationCheck> out;
  for (double beta : {0.1, 0.5, 1.0}) {
    SccDistributionSpec spec;
    spec.intensity = c.intensity;
    spec.marks = MarkDistribution::gamma(m, beta);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 20; ++k) {
      const double r = 10.0 * k / 20.0;
      worst = std::min(worst, ctpp_sscc(r, spec).value - ctpp_matern2(r, 2.0 * m, c.intensity));
    }
    out.push_back({"ctpp_ordering[beta=" + format_double(beta) + "]", 0.0, worst, 1e-9, worst >= -1e-9});
  }
  return out;
}

std::vector<ValidationCheck> bernstein_checks(const ExperimentConfig& c, const DemandModel& demand) {
  const auto params = calibrate_budget(c, PolicyFamily::kSoftCore, demand);
  double n_model = 0.0;
  for (double p : params.model_retention) n_model += p;
  const double var = cache_size_variance(params.model_retention);
  const Window w = make_window(c);
  std::vector<std::uint32_t> sizes;
  for (std::size_t rep = 0; rep < c.plan.replications; ++rep) {
    RngStream mrng(StreamKey{c.plan.seed, rep, kBernsteinCheck, Purpose::kMotherPattern});
    const auto mother = sample_ppp(c.intensity, w, mrng);
    const auto inside = mother.indices_in(w.evaluation_region());
    if (inside.empty()) continue;
    const auto placement = place_all_items(mother, params.policy, demand, {c.plan.seed, rep, kBernsteinCheck}, {inside});
    const auto s = cache_sizes_in_region(mother, placement);
    sizes.insert(sizes.end(), s.begin(), s.end());
  }
  std::vector<ValidationCheck> out;
  const double base = std::ceil(n_model);
  for (std::size_t k = 1; k <= c.validation.threshold_steps; ++k) {
    const double threshold = base + static_cast<double>(k);
    const double bound = bernstein_violation_bound(n_model, threshold, var);
    const double empirical = estimate_violation_probability(sizes, threshold, c.plan.confidence).estimate;
    out.push_back({"bernstein_domination[C=" + format_double(threshold) + "]", bound, empirical, 0.0,
                   empirical <= bound});
  }
  return out;
}

struct ProbeSample {
  std::vector<double> f;                    // per radius
  std::vector<std::vector<double>> covered;  // per radius, per item
};

// One probe per replication: i.i.d. draws of F(Z) for every radius.
std::vector<std::vector<double>> probe_samples(const ExperimentConfig& c, const DemandModel& demand,
                                               const PlacementPolicy& policy, std::uint64_t tag,
                                               std::vector<std::vector<double>>& coverage) {
  const Window w = make_window(c);
  const std::size_t n = c.validation.variance_samples, M = demand.catalog_size(), Rn = c.radii.size();
  const double r_max = *std::max_element(c.radii.begin(), c.radii.end());
  std::vector<std::vector<double>> f(Rn, std::vector<double>(n, 0.0));
  coverage.assign(Rn, std::vector<double>(M, 0.0));
  const auto pmf = demand.pmf();
  for (std::size_t rep = 0; rep < n; ++rep) {
    RngStream mrng(StreamKey{c.plan.seed, rep, kVarianceCheck, Purpose::kMotherPattern});
    RngStream prng(StreamKey{c.plan.seed, rep, kVarianceCheck, Purpose::kProbes});
    const auto mother = sample_ppp(c.intensity, w, mrng);
    const auto probe = sample_uniform(w.evaluation_region(), 1, prng).front();
    const Rect box{probe.x - r_max, probe.y - r_max, probe.x + r_max, probe.y + r_max};
    auto near = mother.indices_in(box);
    std::vector<std::pair<std::size_t, double>> in_range;
    for (std::size_t k : near) in_range.push_back({k, distance(mother[k].location, probe, w)});
    if (in_range.empty()) continue;
    const auto placement = place_all_items(mother, policy, demand, {c.plan.seed, rep, tag}, {near});
    for (std::size_t r = 0; r < Rn; ++r)
      for (std::size_t i = 0; i < M; ++i) {
        bool hit = false;
        for (const auto& [k, d] : in_range) hit = hit || (d <= c.radii[r] && placement.contains(k, i));
        if (hit) {
          f[r][rep] += pmf[i];
          coverage[r][i] += 1.0;
        }
      }
  }
  for (auto& row : coverage)
    for (auto& v : row) v /= static_cast<double>(n);
  return f;
}

double sample_variance(const std::vector<double>& x, double* se) {
  const double n = static_cast<double>(x.size());
  const double mean = pairwise_sum(x) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  if (se) *se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  return m2 * n / (n - 1.0);
}

std::vector<ValidationCheck> variance_checks(const ExperimentConfig& c, const DemandModel& demand) {
  const auto sscc = calibrate_budget(c, PolicyFamily::kSoftCore, demand);
  std::vector<std::vector<double>> cov_s, cov_i;
  const auto f_s = probe_samples(c, demand, sscc.policy, kVarianceCheck * 10 + 1, cov_s);
  // Independent placement with the same per-item retention, hence the same mean cache size.
  const PlacementPolicy indep = IndependentPolicy{sscc.model_retention};
  const auto f_i = probe_samples(c, demand, indep, kVarianceCheck * 10 + 2, cov_i);
  std::vector<ValidationCheck> out;
  for (std::size_t r = 0; r < c.radii.size(); ++r) {
    double se = 0.0;
    const double v_s = sample_variance(f_s[r], &se);
    const double eq = hit_variance_analytic(demand, cov_s[r]);
    const std::string tag = "R=" + format_double(c.radii[r]);
    out.push_back({"hit_variance_per_item_sum[" + tag + "]", eq, v_s, 3.0 * se, std::abs(v_s - eq) <= 3.0 * se});
    const double v_i = sample_variance(f_i[r], nullptr);
    out.push_back({"hit_variance_below_independent[" + tag + "]", v_i, v_s, 0.0, v_s < v_i});
  }
  return out;
}

// ---- rendering ---------------------------------------------------------

std::string render_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t k = 0; k < header.size(); ++k) width[k] = header[k].size();
  for (const auto& row : rows)
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      out << std::string(width[k] - row[k].size(), ' ') << row[k];
      out << (k + 1 < row.size() ? "  " : "\n");
    }
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

std::string render_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + row[k];
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out;
}

}  // namespace

CurveReport run_curve(const ExperimentConfig& config) {
  config.validate();
  const DemandModel demand(config.catalog_size, config.zipf_tilt);
  CurveReport report;
  report.curves = sweep_tradeoff(make_sweep(config), demand, make_window(config), config.plan);

  auto find = [&](PolicyFamily fam, double radius) -> const TradeoffCurve* {
    for (const auto& c : report.curves)
      if (c.family == fam && c.radius == radius) return &c;
    return nullptr;
  };
  const double M = static_cast<double>(config.catalog_size);
  std::string csv = provenance_line(config) + "\n";
  csv += "policy,radius,scale,hit_mean,hit_lo,hit_hi,mean_cache,n_req,n_req_norm_M,n_req_norm_indep\n";
  for (const auto& curve : report.curves) {
    const auto* indep = find(PolicyFamily::kIndependent, curve.radius);
    for (const auto& row : curve.rows) {
      const double n_req = static_cast<double>(row.n_req);
      const double ref = indep ? cache_at_hit(*indep, row.hit.estimate, CacheMeasure::kRequired)
                               : std::numeric_limits<double>::quiet_NaN();
      csv += csv_line({family_name(curve.family), format_double(curve.radius), format_double(row.scale),
                       format_double(row.hit.estimate), format_double(row.hit.lower),
                       format_double(row.hit.upper), format_double(row.mean_cache), format_double(n_req),
                       format_double(n_req / M), format_double(n_req / ref)});
    }
  }

  std::string summary = provenance_line(config) + "\n";
  summary += "radius,hit_level,measure,policy,cache_policy,cache_sscc,excess,monotone\n";
  for (double radius : config.radii) {
    const auto* ref = find(PolicyFamily::kSoftCore, radius);
    if (!ref) continue;
    for (auto measure : {CacheMeasure::kMean, CacheMeasure::kRequired}) {
      const char* mname = measure == CacheMeasure::kMean ? "mean_cache" : "n_req";
      for (const auto& curve : report.curves) {
        if (curve.radius != radius || curve.family == PolicyFamily::kSoftCore) continue;
        ExcessSummary s;
        s.radius = radius;
        s.measure = mname;
        s.policy = family_name(curve.family);
        s.cache_policy = cache_at_hit(curve, config.hit_level, measure);
        s.cache_sscc = cache_at_hit(*ref, config.hit_level, measure);
        s.excess = s.cache_policy / s.cache_sscc - 1.0;
        report.summary.push_back(s);
        summary += csv_line({format_double(radius), format_double(config.hit_level), mname, s.policy,
                             format_double(s.cache_policy), format_double(s.cache_sscc), format_double(s.excess),
                             curve.monotone && ref->monotone ? "1" : "0"});
      }
    }
  }
  report.csv_path = config.output_dir / "curve.csv";
  report.summary_path = config.output_dir / "curve_summary.csv";
  write_file_atomic(report.csv_path, csv);
  write_file_atomic(report.summary_path, summary);
  return report;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

ValidationReport run_validate(const ExperimentConfig& config) {
  config.validate();
  const DemandModel demand(config.catalog_size, config.zipf_tilt);
  ValidationReport report;
  auto add = [&](std::vector<ValidationCheck> v) { report.checks.insert(report.checks.end(), v.begin(), v.end()); };
  add(intensity_checks(config, demand));
  add(matern_reduction_checks(config));
  add(identity_checks(config, demand));
  add(ordering_checks(config));
  add(bernstein_checks(config, demand));
  add(variance_checks(config, demand));

  std::string csv = provenance_line(config) + "\n" + "name,expected,observed,tolerance,verdict\n";
  for (const auto& chk : report.checks)
    csv += csv_line({chk.name, format_double(chk.expected), format_double(chk.observed),
                     format_double(chk.tolerance), chk.passed ? "pass" : "fail"});
  report.csv_path = config.output_dir / "validate.csv";
  write_file_atomic(report.csv_path, csv);
  return report;
}

AnalyticReport run_analytic(const ExperimentConfig& config) {
  config.validate();
  const auto& a = config.analytic;
  const double lam = config.intensity;
  const double delta = a.delta > 0.0 ? a.delta : 2.0 * a.mark_mean;
  std::vector<double> grid = a.r_grid.points();
  grid.insert(grid.end(), config.radii.begin(), config.radii.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  AnalyticReport report;
  for (double beta : a.betas) {
    SccDistributionSpec spec;
    spec.intensity = lam;
    spec.marks = marks_of(a.mark_mean, beta);
    spec.p0 = config.soft_core.p0;
    spec.softness = a.hard_kernel ? kHardKernel : config.soft_core.softness;
    const double lambda_th = thinned_intensity(spec).value;
    auto eta_gm = [&](double r) { return ctpp_sscc(r, spec).value; };
    auto eta_m = [&](double r) { return ctpp_matern2(r, delta, lam); };
    const auto h_m = scdf_curve(grid, eta_m, lam);
    const auto h_gm = scdf_curve(grid, [&](double s) { return spec.p0 * eta_gm(s); }, lam);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double r = grid[g];
      AnalyticRow row;
      row.beta = beta;
      row.r = r;
      row.lambda_th = lambda_th;
      row.eta_m = eta_m(r);
      row.eta_gm = eta_gm(r);
      row.scdf_m = h_m[g];
      row.scdf_gm = h_gm[g];
      report.rows.push_back(row);
    }
  }

  const DemandModel demand(config.catalog_size, config.zipf_tilt);
  const auto cal = calibrate_budget(config, PolicyFamily::kSoftCore, demand);
  double n_model = 0.0;
  for (double p : cal.model_retention) n_model += p;
  const double var = cache_size_variance(cal.model_retention);
  for (std::size_t k = 1; k <= config.validation.threshold_steps; ++k) {
    const double threshold = std::ceil(n_model) + static_cast<double>(k);
    report.bernstein.push_back({threshold, n_model, var, bernstein_violation_bound(n_model, threshold, var)});
  }

  const std::vector<std::string> h1{"beta", "r", "lambda_th", "eta_m", "eta_gm", "scdf_m", "scdf_gm"};
  std::vector<std::vector<std::string>> r1;
  for (const auto& row : report.rows)
    r1.push_back({format_double(row.beta), format_double(row.r), format_double(row.lambda_th),
                  format_double(row.eta_m), format_double(row.eta_gm), format_double(row.scdf_m),
                  format_double(row.scdf_gm)});
  const std::vector<std::string> h2{"threshold", "expected_size", "variance", "bound"};
  std::vector<std::vector<std::string>> r2;
  for (const auto& row : report.bernstein)
    r2.push_back({format_double(row.threshold), format_double(row.expected_size), format_double(row.variance),
                  format_double(row.bound)});

  const std::string prov = provenance_line(config) + "\n";
  const std::string csv1 = prov + render_csv(h1, r1);
  const std::string csv2 = prov + render_csv(h2, r2);
  write_file_atomic(config.output_dir / "analytic.csv", csv1);
  write_file_atomic(config.output_dir / "analytic_bernstein.csv", csv2);
  report.rendered = a.format == "csv" ? csv1 + "\n" + render_csv(h2, r2)
                                      : prov + render_text(h1, r1) + "\n" + render_text(h2, r2);
  return report;
}

}  // namespace sscc
