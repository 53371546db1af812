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


#ifndef SSCC_DEMAND_HPP
#define SSCC_DEMAND_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "sscc/rng.hpp"

namespace sscc {

/// Normalised Zipf pmf p(i) proportional to i^-tilt, i = 1..catalog_size.
std::vector<double> zipf_pmf(std::size_t catalog_size, double tilt);

/// Zipf demand under the independent reference model. Items are 0-based here.
class DemandModel {
 public:
  DemandModel(std::size_t catalog_size, double zipf_tilt);

  std::size_t catalog_size() const { return pmf_.size(); }
  double zipf_tilt() const { return tilt_; }
  std::span<const double> pmf() const { return pmf_; }
  double probability(std::size_t item) const { return pmf_.at(item); }

  /// Draws one request (0-based item index).
  std::size_t sample_request(RngStream& rng) const;

 private:
  double tilt_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

}  // namespace sscc

#endif  // SSCC_DEMAND_HPP
