// Copyright 2026 The GBDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace gbdp {

/// SplitMix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` in `domain`, derived from the root seed only, so
/// the stream a task receives does not depend on scheduling.
inline std::uint64_t stream_seed(std::uint64_t root, std::uint64_t domain, std::uint64_t index) {
  return mix64(mix64(mix64(root) ^ domain) ^ index);
}

enum StreamDomain : std::uint64_t {
  kTrainingStream = 0x7472'6169'6e00'0001ULL,
  kSimulationStream = 0x7369'6d75'6c00'0002ULL,
};

/// 64-bit Mersenne Twister with a portable uniform in [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, count).
  std::size_t index_below(std::size_t count) {
    if (count == 0) throw std::invalid_argument("index_below: empty range");
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(count));
    return k < count ? k : count - 1;
  }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF draw over `probs` in their given order for the uniform `u`.
/// Zero-probability outcomes are never returned.
inline std::size_t sample_categorical(std::span<const double> probs, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = probs.size();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    cumulative += probs[k];
    if (u < cumulative) return k;
  }
  if (last_positive == probs.size()) throw std::invalid_argument("sample_categorical: no positive probability");
  return last_positive;
}

}  // namespace gbdp
