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


// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sscc/sscc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::vector<double> radii;
  std::string out;
};

struct AnalyticFlags {
  std::vector<double> betas;
  std::string r_grid;
  std::optional<double> mark_mean;
  std::optional<double> delta;
  bool hard_kernel = false;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON experiment config (defaults when omitted)");
  cmd->add_option("--seed", c.seed, "Override replication.seed");
  cmd->add_option("--reps", c.reps, "Override replication.replications");
  cmd->add_option("--radius", c.radii, "Override network.radii (repeat or comma-separate)")->delimiter(',');
  cmd->add_option("--out", c.out, "Override output.directory");
}

int report(sscc_status status) {
  const std::string field = sscc_last_error_field();
  std::cerr << "error: " << sscc_last_error() << "\n";
  if (status == SSCC_ERR_CONFIG || status == SSCC_ERR_INVALID_ARGUMENT) {
    if (!field.empty()) std::cerr << "offending field: " << field << "\n";
    return kExitConfig;
  }
  return kExitRuntime;
}

class Config {
 public:
  ~Config() { sscc_config_destroy(cfg_); }
  sscc_config* get() const { return cfg_; }
  sscc_config** out() { return &cfg_; }

 private:
  sscc_config* cfg_ = nullptr;
};

// "start:stop:count"
nlohmann::json parse_grid(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, n;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n) || a.empty() ||
      b.empty() || n.empty())
    throw std::invalid_argument("--r-grid expects start:stop:count");
  std::size_t pa = 0, pb = 0, pn = 0;
  const double start = std::stod(a, &pa), stop = std::stod(b, &pb);
  const long count = std::stol(n, &pn);
  if (pa != a.size() || pb != b.size() || pn != n.size() || count < 1)
    throw std::invalid_argument("--r-grid expects start:stop:count with count >= 1");
  return {{"start", start}, {"stop", stop}, {"count", count}};
}

int prepare(const Common& c, const nlohmann::json& extra, Config& cfg) {
  const sscc_status st = c.config_path.empty() ? sscc_config_create(cfg.out())
                                               : sscc_config_load(c.config_path.c_str(), cfg.out());
  if (st != SSCC_OK) return report(st);
  nlohmann::json overlay = extra;
  if (c.seed) overlay["replication"]["seed"] = *c.seed;
  if (c.reps) overlay["replication"]["replications"] = *c.reps;
  if (!c.radii.empty()) overlay["network"]["radii"] = c.radii;
  if (!c.out.empty()) overlay["output"]["directory"] = c.out;
  if (!overlay.empty()) {
    const sscc_status m = sscc_config_merge_json(cfg.get(), overlay.dump().c_str());
    if (m != SSCC_OK) return report(m);
  }
  return kExitOk;
}

void print_and_free(char* text) {
  if (text) std::fputs(text, stdout);
  sscc_string_free(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial cache placement experiments"};
  app.set_version_flag("--version", std::string(sscc_version()));
  app.require_subcommand(1);

  Common curve_opts, validate_opts, analytic_opts;
  AnalyticFlags af;
  auto* curve = app.add_subcommand("curve", "Hit probability versus cache size tradeoff sweep");
  auto* validate = app.add_subcommand("validate", "Cross-check analytic results against simulation");
  auto* analytic = app.add_subcommand("analytic", "Print analytic intensity, CTPP, SCDF and tail-bound tables");
  add_common(curve, curve_opts);
  add_common(validate, validate_opts);
  add_common(analytic, analytic_opts);
  analytic->add_option("--betas", af.betas, "Gamma mark scales (comma-separated)")->delimiter(',');
  analytic->add_option("--r-grid", af.r_grid, "Distance grid start:stop:count");
  analytic->add_option("--mark-mean", af.mark_mean, "Mean mark");
  analytic->add_option("--delta", af.delta, "Matern exclusion radius (default: twice the mean mark)");
  analytic->add_flag("--hard-kernel", af.hard_kernel, "Use the indicator interaction kernel");
  analytic->add_option("--format", af.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Config cfg;
  if (*curve) {
    if (int rc = prepare(curve_opts, nlohmann::json::object(), cfg)) return rc;
    char* summary = nullptr;
    if (sscc_status st = sscc_run_curve(cfg.get(), &summary); st != SSCC_OK) return report(st);
    print_and_free(summary);
    return kExitOk;
  }
  if (*validate) {
    if (int rc = prepare(validate_opts, nlohmann::json::object(), cfg)) return rc;
    int passed = 0;
    char* text = nullptr;
    if (sscc_status st = sscc_run_validate(cfg.get(), &passed, &text); st != SSCC_OK) return report(st);
    print_and_free(text);
    return passed ? kExitOk : kExitValidation;
  }

  nlohmann::json extra = nlohmann::json::object();
  try {
    if (!af.betas.empty()) extra["analytic"]["betas"] = af.betas;
    if (!af.r_grid.empty()) extra["analytic"]["r_grid"] = parse_grid(af.r_grid);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\noffending field: analytic.r_grid\n";
    return kExitConfig;
  }
  if (af.mark_mean) extra["analytic"]["mark_mean"] = *af.mark_mean;
  if (af.delta) extra["analytic"]["delta"] = *af.delta;
  if (af.hard_kernel) extra["analytic"]["hard_kernel"] = true;
  if (!af.format.empty()) extra["analytic"]["format"] = af.format;
  if (int rc = prepare(analytic_opts, extra, cfg)) return rc;
  char* table = nullptr;
  if (sscc_status st = sscc_run_analytic(cfg.get(), &table); st != SSCC_OK) return report(st);
  print_and_free(table);
  return kExitOk;
}
