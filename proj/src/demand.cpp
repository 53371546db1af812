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


#include "sscc/demand.hpp"

#include <algorithm>
#include <cmath>

#include "sscc/error.hpp"

namespace sscc {

std::vector<double> zipf_pmf(std::size_t catalog_size, double tilt) {
  if (catalog_size == 0) throw InvalidArgument("catalog size must be at least 1");
  if (!(tilt >= 0.0) || !std::isfinite(tilt)) throw InvalidArgument("Zipf tilt must be >= 0");
  std::vector<double> pmf(catalog_size);
  for (std::size_t i = 0; i < catalog_size; ++i)
    pmf[i] = std::pow(static_cast<double>(i + 1), -tilt);
  // Sum smallest-first for accuracy.
  double total = 0.0;
  for (auto it = pmf.rbegin(); it != pmf.rend(); ++it) total += *it;
  for (auto& p : pmf) p /= total;
  return pmf;
}

DemandModel::DemandModel(std::size_t catalog_size, double zipf_tilt)
    : tilt_(zipf_tilt), pmf_(zipf_pmf(catalog_size, zipf_tilt)), cdf_(pmf_.size()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    acc += pmf_[i];
    cdf_[i] = acc;
  }
  cdf_.back() = 1.0;
}

std::size_t DemandModel::sample_request(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

}  // namespace sscc
