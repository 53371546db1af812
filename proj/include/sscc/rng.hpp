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


#ifndef SSCC_RNG_HPP
#define SSCC_RNG_HPP

#include <cstdint>
#include <random>

namespace sscc {

/// What a stream is used for. Distinct tags never share draws.
enum class Purpose : std::uint32_t {
  kMotherPattern = 1,
  kProbes = 2,
  kMarks = 3,
  kWeights = 4,
  kRetention = 5,
  kIndependent = 6,
  kRequests = 7,
  kGeneric = 99,
};

/// Identifies one reproducible random stream.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::uint64_t item = 0;
  Purpose purpose = Purpose::kGeneric;
  std::uint64_t policy = 0;  // keeps policies that share a purpose apart
};

/// Deterministic stream derived from a StreamKey.
///
/// The key is folded through SplitMix64 finalizers into the engine seed, so
/// streams for different keys are statistically independent and the same key
/// always reproduces the same draws.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(const StreamKey& key);
  explicit RngStream(std::uint64_t seed) : RngStream(StreamKey{seed}) {}

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  StreamKey key() const { return key_; }

 private:
  StreamKey key_;
  std::mt19937_64 engine_;
};

}  // namespace sscc

#endif  // SSCC_RNG_HPP
