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

#ifndef EGTA_SIMULATOR_HPP_
#define EGTA_SIMULATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "egta/bounds.hpp"
#include "egta/game.hpp"

namespace egta {

enum class NoiseKind { kNone, kScaledBernoulli };

// Per-index additive noise: +/- amplitude * nu_{p,s} with equal probability
// (mean zero, variance (amplitude * nu)^2).
struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double amplitude = 0.0;
  std::vector<double> nu;  // per utility index, in [0, 1]
  std::uint64_t seed = 0;

  void Validate(std::int64_t num_indices) const;
};

// True noise variance of one utility index under `noise`.
double NoiseVariance(const NoiseModel& noise, std::int64_t index_id);

// A hidden true game plus a noise model and per-profile sample ranges.
struct SimulatorSpec {
  NormalFormGame truth;
  NoiseModel noise;
  std::vector<double> range_lo;  // a_s, per profile
  std::vector<double> range_hi;  // b_s, per profile
  double c = 0.0;                // sup_s (b_s - a_s)
  std::uint64_t master_seed = 0;

  void Validate() const;
};

// Spec with the uniform hull [lo - amplitude, hi + amplitude] at every
// profile, where [lo, hi] is the configured utility range of `truth`.
SimulatorSpec MakeSimulatorSpec(NormalFormGame truth, NoiseModel noise,
                                double utility_lo, double utility_hi,
                                std::uint64_t master_seed);

// Query accounting. profile_queries counts one query per (profile, sample)
// simulator invocation with at least one active player; index_queries is
// the per-(player, profile) sample total.
struct QueryLedger {
  std::vector<std::int64_t> index_samples;
  std::int64_t profile_queries = 0;
  std::int64_t index_queries = 0;
};

// Moments of one batch of draws for a single index.
struct BatchStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double sum_sq_dev = 0.0;

  UtilityAccumulator AsAccumulator() const {
    return UtilityAccumulator{count, mean, sum_sq_dev};
  }
};

// What the progressive-sampling loop needs from a simulator.
class UtilitySource {
 public:
  virtual ~UtilitySource() = default;

  // Draws `count` samples for each listed player at the profile, returning
  // batch moments in `out` (parallel to `players`) and updating the ledger.
  virtual void SampleBatch(std::int64_t profile_rank,
                           const std::vector<int>& players,
                           std::int64_t count,
                           std::vector<BatchStats>& out) = 0;

  virtual const QueryLedger& ledger() const = 0;
};

// Production simulator over a SimulatorSpec. Each index owns a counter-based
// noise stream keyed by (master_seed, index), so the sample sequence for an
// index does not depend on sampling order elsewhere or on thread count.
class Simulator : public UtilitySource {
 public:
  explicit Simulator(SimulatorSpec spec);

  const SimulatorSpec& spec() const { return spec_; }
  const QueryLedger& ledger() const override { return ledger_; }

  // Materialized draws, one vector of `count` samples per active player.
  std::vector<std::vector<double>> Sample(const PureProfile& profile,
                                          const std::vector<int>& players,
                                          std::int64_t count);

  void SampleBatch(std::int64_t profile_rank, const std::vector<int>& players,
                   std::int64_t count, std::vector<BatchStats>& out) override;

 private:
  void CheckActive(const std::vector<int>& players) const;
  void Account(std::int64_t profile_rank, const std::vector<int>& players,
               std::int64_t count);

  SimulatorSpec spec_;
  GameShape shape_;
  std::vector<std::uint64_t> noise_keys_;  // per index
  QueryLedger ledger_;
};

// Two-player zero-sum game with u_1 i.i.d. uniform on [lo, hi] and
// u_2 = -u_1; deterministic given seed.
NormalFormGame MakeRandomZeroSum(int actions, double lo, double hi,
                                 std::uint64_t seed);

// Scaled-Bernoulli noise with amplitude 10 and independent
// nu_{p,s} ~ Beta(1.5, 3) per index.
NoiseModel MakePaperNoise(const NormalFormGame& game, std::uint64_t seed);

NoiseModel NoNoise();

// Noise-model persistence: { "kind", "amplitude", "nu", "seed" }.
std::string NoiseToJson(const NoiseModel& noise);
NoiseModel NoiseFromJson(const std::string& text);
void SaveNoise(const NoiseModel& noise, const std::string& path);
NoiseModel LoadNoise(const std::string& path);

}  // namespace egta

#endif  // EGTA_SIMULATOR_HPP_
