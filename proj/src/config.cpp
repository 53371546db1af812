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


#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sscc/error.hpp"
#include "sscc/experiment.hpp"

namespace sscc {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

const json* section(const json& obj, const char* key, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  const auto it = obj.find(key);
  if (it == obj.end()) return nullptr;
  const std::string here = path.empty() ? key : path + "." + key;
  require(it->is_object(), here, "must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : it->items()) require(ok.count(k) > 0, here + "." + k, "unknown key");
  return &*it;
}

std::string join(const std::string& path, const char* key) { return path + "." + key; }

void read(const json& obj, const char* key, const std::string& path, double& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj[key];
  require(v.is_number(), join(path, key), "must be a number");
  out = v.get<double>();
}

void read(const json& obj, const char* key, const std::string& path, std::uint64_t& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj[key];
  require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0),
          join(path, key), "must be a non-negative integer");
  out = v.get<std::uint64_t>();
}

void read(const json& obj, const char* key, const std::string& path, bool& out) {
  if (!obj.contains(key)) return;
  require(obj[key].is_boolean(), join(path, key), "must be a boolean");
  out = obj[key].get<bool>();
}

void read(const json& obj, const char* key, const std::string& path, std::string& out) {
  if (!obj.contains(key)) return;
  require(obj[key].is_string(), join(path, key), "must be a string");
  out = obj[key].get<std::string>();
}

void read(const json& obj, const char* key, const std::string& path, std::vector<double>& out) {
  if (!obj.contains(key)) return;
  const auto& v = obj[key];
  require(v.is_array(), join(path, key), "must be an array of numbers");
  std::vector<double> tmp;
  for (const auto& e : v) {
    require(e.is_number(), join(path, key), "must be an array of numbers");
    tmp.push_back(e.get<double>());
  }
  out = std::move(tmp);
}

PolicyFamily parse_family(const std::string& name, const std::string& field) {
  if (name == "independent") return PolicyFamily::kIndependent;
  if (name == "matern2") return PolicyFamily::kMatern2;
  if (name == "sscc") return PolicyFamily::kSoftCore;
  throw ConfigError(field, "unknown policy '" + name + "' (independent, matern2, sscc)");
}

void apply_json(const json& root, ExperimentConfig& c) {
  require(root.is_object(), "<root>", "config must be a JSON object");
  for (const auto& [k, v] : root.items()) {
    static const std::set<std::string> top{"network", "demand", "placement", "replication",
                                           "validation", "analytic", "output"};
    require(top.count(k) > 0, k, "unknown key");
  }
  if (const auto* n = section(root, "network", "", {"intensity", "side", "edge_mode", "radii"})) {
    read(*n, "intensity", "network", c.intensity);
    read(*n, "side", "network", c.side);
    read(*n, "radii", "network", c.radii);
    if (n->contains("edge_mode")) {
      std::string mode;
      read(*n, "edge_mode", "network", mode);
      if (mode == "border_crop") c.edge_mode = EdgeMode::kBorderCrop;
      else if (mode == "torus") c.edge_mode = EdgeMode::kTorus;
      else throw ConfigError("network.edge_mode", "must be 'border_crop' or 'torus'");
    }
  }
  if (const auto* d = section(root, "demand", "", {"catalog_size", "zipf_tilt"})) {
    read(*d, "catalog_size", "demand", c.catalog_size);
    read(*d, "zipf_tilt", "demand", c.zipf_tilt);
  }
  if (const auto* p = section(root, "placement", "", {"policies", "kappa", "scales", "hit_level", "sscc"})) {
    if (p->contains("policies")) {
      const auto& v = (*p)["policies"];
      require(v.is_array(), "placement.policies", "must be an array of policy names");
      std::vector<PolicyFamily> fams;
      for (const auto& e : v) {
        require(e.is_string(), "placement.policies", "must be an array of policy names");
        fams.push_back(parse_family(e.get<std::string>(), "placement.policies"));
      }
      c.policies = std::move(fams);
    }
    read(*p, "kappa", "placement", c.kappa);
    read(*p, "scales", "placement", c.scales);
    read(*p, "hit_level", "placement", c.hit_level);
    if (const auto* s = section(*p, "sscc", "placement",
                                {"p0", "softness", "mark_scale", "mark_ratio", "mark_mode"})) {
      const std::string path = "placement.sscc";
      read(*s, "p0", path, c.soft_core.p0);
      read(*s, "softness", path, c.soft_core.softness);
      read(*s, "mark_scale", path, c.soft_core.mark_scale);
      read(*s, "mark_ratio", path, c.soft_core.mark_ratio);
      if (s->contains("mark_mode")) {
        std::string mode;
        read(*s, "mark_mode", path, mode);
        if (mode == "from_matern") c.soft_core.mode = MarkMode::kFromMatern;
        else if (mode == "matched") c.soft_core.mode = MarkMode::kMatched;
        else throw ConfigError(path + ".mark_mode", "must be 'from_matern' or 'matched'");
      }
    }
  }
  if (const auto* r = section(root, "replication", "", {"replications", "seed", "probes", "confidence"})) {
    read(*r, "replications", "replication", c.plan.replications);
    read(*r, "seed", "replication", c.plan.seed);
    read(*r, "probes", "replication", c.plan.probes);
    read(*r, "confidence", "replication", c.plan.confidence);
  }
  if (const auto* v = section(root, "validation", "",
                              {"cache_budget", "mark_mean", "variance_samples", "threshold_steps"})) {
    read(*v, "cache_budget", "validation", c.validation.cache_budget);
    read(*v, "mark_mean", "validation", c.validation.mark_mean);
    read(*v, "variance_samples", "validation", c.validation.variance_samples);
    read(*v, "threshold_steps", "validation", c.validation.threshold_steps);
  }
  if (const auto* a = section(root, "analytic", "",
                              {"mark_mean", "betas", "r_grid", "delta", "hard_kernel", "format"})) {
    read(*a, "mark_mean", "analytic", c.analytic.mark_mean);
    read(*a, "betas", "analytic", c.analytic.betas);
    read(*a, "delta", "analytic", c.analytic.delta);
    read(*a, "hard_kernel", "analytic", c.analytic.hard_kernel);
    read(*a, "format", "analytic", c.analytic.format);
    if (const auto* g = section(*a, "r_grid", "analytic", {"start", "stop", "count"})) {
      read(*g, "start", "analytic.r_grid", c.analytic.r_grid.start);
      read(*g, "stop", "analytic.r_grid", c.analytic.r_grid.stop);
      read(*g, "count", "analytic.r_grid", c.analytic.r_grid.count);
    }
  }
  if (const auto* o = section(root, "output", "", {"directory"})) {
    std::string dir = c.output_dir.string();
    read(*o, "directory", "output", dir);
    c.output_dir = dir;
  }
}

json family_list(const std::vector<PolicyFamily>& fams) {
  json out = json::array();
  for (auto f : fams) out.push_back(family_name(f));
  return out;
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::vector<double> RGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
  return out;
}

void ExperimentConfig::validate() const {
  require(finite_positive(intensity), "network.intensity", "must be positive");
  require(finite_positive(side), "network.side", "must be positive");
  require(!radii.empty(), "network.radii", "must not be empty");
  for (double r : radii) require(finite_positive(r), "network.radii", "radii must be positive");
  require(catalog_size >= 1, "demand.catalog_size", "must be at least 1");
  require(std::isfinite(zipf_tilt) && zipf_tilt >= 0.0, "demand.zipf_tilt", "must be >= 0");
  require(!policies.empty(), "placement.policies", "must list at least one policy");
  require(std::set<PolicyFamily>(policies.begin(), policies.end()).size() == policies.size(),
          "placement.policies", "must not repeat a policy");
  require(std::isfinite(kappa) && kappa >= 0.0, "placement.kappa", "must be >= 0");
  require(!scales.empty(), "placement.scales", "must not be empty");
  for (double s : scales) require(s > 0.0 && s <= 1.0, "placement.scales", "entries must lie in (0, 1]");
  require(hit_level > 0.0 && hit_level < 1.0, "placement.hit_level", "must lie in (0, 1)");
  require(soft_core.p0 > 0.0 && soft_core.p0 <= 1.0, "placement.sscc.p0", "must lie in (0, 1]");
  require(soft_core.softness > 0.0, "placement.sscc.softness", "must be positive");
  require(std::isfinite(soft_core.mark_scale) && soft_core.mark_scale >= 0.0, "placement.sscc.mark_scale",
          "must be >= 0");
  require(finite_positive(soft_core.mark_ratio), "placement.sscc.mark_ratio", "must be positive");
  require(plan.replications >= 1, "replication.replications", "must be at least 1");
  require(plan.probes >= 1, "replication.probes", "must be at least 1");
  require(plan.confidence > 0.0 && plan.confidence < 1.0, "replication.confidence", "must lie in (0, 1)");
  require(validation.cache_budget > 0.0 && validation.cache_budget <= static_cast<double>(catalog_size),
          "validation.cache_budget", "must lie in (0, catalog_size]");
  require(finite_positive(validation.mark_mean), "validation.mark_mean", "must be positive");
  require(validation.variance_samples >= 10, "validation.variance_samples", "must be at least 10");
  require(validation.threshold_steps >= 1, "validation.threshold_steps", "must be at least 1");
  require(std::isfinite(analytic.mark_mean) && analytic.mark_mean >= 0.0, "analytic.mark_mean", "must be >= 0");
  require(!analytic.betas.empty(), "analytic.betas", "must not be empty");
  for (double b : analytic.betas)
    require(std::isfinite(b) && b >= 0.0, "analytic.betas", "entries must be >= 0");
  require(analytic.r_grid.start >= 0.0 && std::isfinite(analytic.r_grid.stop) &&
              analytic.r_grid.stop >= analytic.r_grid.start,
          "analytic.r_grid", "needs 0 <= start <= stop");
  require(analytic.r_grid.count >= 1, "analytic.r_grid.count", "must be at least 1");
  require(std::isfinite(analytic.delta) && analytic.delta >= 0.0, "analytic.delta", "must be >= 0");
  require(analytic.format == "csv" || analytic.format == "text", "analytic.format", "must be 'csv' or 'text'");
  require(!output_dir.empty(), "output.directory", "must not be empty");
}

ExperimentConfig merge_config(const ExperimentConfig& base, const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  ExperimentConfig c = base;
  apply_json(root, c);
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& json_text) { return merge_config(ExperimentConfig{}, json_text); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["network"] = {{"intensity", c.intensity},
                  {"side", c.side},
                  {"edge_mode", c.edge_mode == EdgeMode::kTorus ? "torus" : "border_crop"},
                  {"radii", c.radii}};
  j["demand"] = {{"catalog_size", c.catalog_size}, {"zipf_tilt", c.zipf_tilt}};
  j["placement"] = {{"policies", family_list(c.policies)},
                    {"kappa", c.kappa},
                    {"scales", c.scales},
                    {"hit_level", c.hit_level},
                    {"sscc",
                     {{"p0", c.soft_core.p0},
                      {"softness", c.soft_core.softness},
                      {"mark_scale", c.soft_core.mark_scale},
                      {"mark_ratio", c.soft_core.mark_ratio},
                      {"mark_mode", c.soft_core.mode == MarkMode::kMatched ? "matched" : "from_matern"}}}};
  j["replication"] = {{"replications", c.plan.replications},
                      {"seed", c.plan.seed},
                      {"probes", c.plan.probes},
                      {"confidence", c.plan.confidence}};
  j["validation"] = {{"cache_budget", c.validation.cache_budget},
                     {"mark_mean", c.validation.mark_mean},
                     {"variance_samples", c.validation.variance_samples},
                     {"threshold_steps", c.validation.threshold_steps}};
  j["analytic"] = {{"mark_mean", c.analytic.mark_mean},
                   {"betas", c.analytic.betas},
                   {"r_grid",
                    {{"start", c.analytic.r_grid.start},
                     {"stop", c.analytic.r_grid.stop},
                     {"count", c.analytic.r_grid.count}}},
                   {"delta", c.analytic.delta},
                   {"hard_kernel", c.analytic.hard_kernel},
                   {"format", c.analytic.format}};
  j["output"] = {{"directory", c.output_dir.string()}};
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
  // Where results are written does not change them.
  auto j = json::parse(config_to_json(config));
  j.erase("output");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string provenance_line(const ExperimentConfig& config) {
  return std::string("# sscc ") + kToolVersion + " seed=" + std::to_string(config.plan.seed) +
         " config=" + config_hash(config);
}

}  // namespace sscc
