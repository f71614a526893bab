// Copyright 2026 The egta-ps Authors.
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

#ifndef EGTA_RNG_HPP_
#define EGTA_RNG_HPP_

#include <cmath>
#include <cstdint>

// Counter-based random streams. Every consumer addresses draws by
// (key, counter), so results never depend on the order in which other
// streams are consumed or on thread count.

namespace egta::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t Mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// i-th word of the stream keyed by `key`.
inline std::uint64_t StreamWord(std::uint64_t key, std::uint64_t i) {
  return Mix64(key + (i + 1) * kGolden);
}

// j-th Bernoulli(1/2) bit of the stream keyed by `key`.
inline bool StreamBit(std::uint64_t key, std::uint64_t j) {
  return (StreamWord(key, j >> 6) >> (j & 63)) & 1;
}

// Derives an independent child key from (key, tag).
inline std::uint64_t DeriveKey(std::uint64_t key, std::uint64_t tag) {
  return Mix64(Mix64(key + kGolden) + tag * 0xD6E8FEB86659FD93ULL);
}

// Uniform double in [0, 1) from a stream word (53 mantissa bits).
inline double ToUnit(std::uint64_t w) { return (w >> 11) * 0x1.0p-53; }

// Sequential convenience wrapper over one counter stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t NextU64() { return StreamWord(key_, counter_++); }
  double NextUnit() { return ToUnit(NextU64()); }
  double NextUniform(double lo, double hi) {
    return lo + (hi - lo) * NextUnit();
  }
  // Exponential(1); used for Dirichlet-uniform simplex draws.
  double NextExponential() { return -std::log1p(-NextUnit()); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Beta(a, b) via Johnk's rejection method. Adequate for the moderate draw
// counts used here (variance modifiers, one per utility index).
inline double BetaSample(CounterRng& rng, double a, double b) {
  for (;;) {
    const double x = std::pow(rng.NextUnit(), 1.0 / a);
    const double y = std::pow(rng.NextUnit(), 1.0 / b);
    const double s = x + y;
    if (s > 0.0 && s <= 1.0) return x / s;
  }
}

}  // namespace egta::rng

#endif  // EGTA_RNG_HPP_
