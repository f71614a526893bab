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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "egta/bounds.hpp"
#include "egta/game.hpp"
#include "egta/rng.hpp"
#include "egta/simulator.hpp"

using egta::BatchStats;
using egta::MakePaperNoise;
using egta::MakeRandomZeroSum;
using egta::MakeSimulatorSpec;
using egta::NoiseFromJson;
using egta::NoiseKind;
using egta::NoiseModel;
using egta::NoiseToJson;
using egta::NoiseVariance;
using egta::NoNoise;
using egta::NormalFormGame;
using egta::Simulator;
using egta::SimulatorSpec;
using egta::UtilityAccumulator;

namespace {

NormalFormGame TinyGame(double u0, double u1) {
  // Two players, one strategy each; utilities (u0, u1).
  return NormalFormGame(2, {1, 1}, {u0, u1});
}

NoiseModel ConstantNu(const NormalFormGame& game, double nu,
                      double amplitude) {
  NoiseModel noise;
  noise.kind = NoiseKind::kScaledBernoulli;
  noise.amplitude = amplitude;
  noise.nu.assign(game.num_indices(), nu);
  return noise;
}

}  // namespace

TEST_CASE("noiseless samples equal the true utilities exactly") {
  const NormalFormGame game = MakeRandomZeroSum(3, -2.0, 2.0, 7);
  Simulator sim(MakeSimulatorSpec(game, NoNoise(), -2.0, 2.0, 99));
  const auto draws = sim.Sample({1, 2}, {0, 1}, 5);
  REQUIRE(draws.size() == 2);
  for (int p = 0; p < 2; ++p) {
    for (double d : draws[p]) CHECK(d == game.Utility(p, {1, 2}));
  }
}

TEST_CASE("zero variance modifier gives exact samples") {
  const NormalFormGame game = TinyGame(1.25, -1.25);
  Simulator sim(MakeSimulatorSpec(game, ConstantNu(game, 0.0, 10.0), -2.0,
                                  2.0, 5));
  const auto draws = sim.Sample({0, 0}, {0}, 64);
  for (double d : draws[0]) CHECK(d == 1.25);
}

TEST_CASE("two-point noise: support, mean and variance") {
  const NormalFormGame game = TinyGame(1.0, -1.0);
  const NoiseModel noise = ConstantNu(game, 0.5, 10.0);
  CHECK(NoiseVariance(noise, 0) == 25.0);  // (10 * 0.5)^2
  Simulator sim(MakeSimulatorSpec(game, noise, -2.0, 2.0, 123));

  // Samples take exactly the values 1 +/- 5.
  const auto draws = sim.Sample({0, 0}, {0}, 1000);
  for (double d : draws[0]) {
    CHECK((d == -4.0 || d == 6.0));
  }
  // Empirical mean over 10^6 draws within 3 sigma = 3 * 5 / 1000.
  std::vector<BatchStats> batch;
  sim.SampleBatch(0, {0}, 1000000, batch);
  CHECK(std::abs(batch[0].mean - 1.0) < 3.0 * 5.0 / 1000.0);
}

TEST_CASE("batch moments equal sequential accumulation of Sample draws") {
  const NormalFormGame game = MakeRandomZeroSum(2, -2.0, 2.0, 11);
  const NoiseModel noise = MakePaperNoise(game, 11);
  const SimulatorSpec spec = MakeSimulatorSpec(game, noise, -2.0, 2.0, 42);

  Simulator materialized(spec);
  Simulator batched(spec);
  std::vector<BatchStats> batch;
  for (std::int64_t rank = 0; rank < game.num_profiles(); ++rank) {
    const auto draws =
        materialized.Sample(game.shape().ProfileFromRank(rank), {0, 1}, 257);
    batched.SampleBatch(rank, {0, 1}, 257, batch);
    for (int p = 0; p < 2; ++p) {
      UtilityAccumulator acc;
      for (double d : draws[p]) acc.Add(d);
      CHECK(batch[p].count == acc.count);
      CHECK(batch[p].mean == doctest::Approx(acc.mean).epsilon(1e-12));
      CHECK(batch[p].sum_sq_dev ==
            doctest::Approx(acc.sum_sq_dev).epsilon(1e-9));
    }
  }
  CHECK(materialized.ledger().profile_queries ==
        batched.ledger().profile_queries);
}

TEST_CASE("per-index streams are independent of sampling order") {
  const NormalFormGame game = MakeRandomZeroSum(2, -2.0, 2.0, 13);
  const SimulatorSpec spec =
      MakeSimulatorSpec(game, MakePaperNoise(game, 13), -2.0, 2.0, 77);

  Simulator forward(spec);
  const auto f0 = forward.Sample({0, 0}, {0, 1}, 100);
  const auto f1 = forward.Sample({1, 1}, {0, 1}, 100);

  Simulator backward(spec);
  const auto b1 = backward.Sample({1, 1}, {0, 1}, 100);
  const auto b0 = backward.Sample({0, 0}, {0, 1}, 100);

  CHECK(f0 == b0);
  CHECK(f1 == b1);

  // Split draws continue the same stream.
  Simulator split(spec);
  auto first = split.Sample({0, 0}, {0, 1}, 60);
  const auto rest = split.Sample({0, 0}, {0, 1}, 40);
  for (int p = 0; p < 2; ++p) {
    first[p].insert(first[p].end(), rest[p].begin(), rest[p].end());
    CHECK(first[p] == f0[p]);
  }
}

TEST_CASE("every draw lies in the per-profile sample range") {
  const NormalFormGame game = MakeRandomZeroSum(3, -2.0, 2.0, 17);
  const SimulatorSpec spec =
      MakeSimulatorSpec(game, MakePaperNoise(game, 17), -2.0, 2.0, 5);
  CHECK(spec.c == 24.0);
  Simulator sim(spec);
  for (std::int64_t rank = 0; rank < game.num_profiles(); ++rank) {
    const auto draws =
        sim.Sample(game.shape().ProfileFromRank(rank), {0, 1}, 200);
    for (const auto& per_player : draws) {
      for (double d : per_player) {
        CHECK(d >= spec.range_lo[rank]);
        CHECK(d <= spec.range_hi[rank]);
      }
    }
  }
}

TEST_CASE("unbiasedness across seeded trials") {
  // |mean - truth| <= 4 * (10 nu) / sqrt(N) for N = 10^5 in >= 99% of
  // trials (4 sigma, so misses should be rare).
  const double nu = 0.7;
  int ok = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const NormalFormGame game = TinyGame(0.5, -0.5);
    Simulator sim(MakeSimulatorSpec(game, ConstantNu(game, nu, 10.0), -2.0,
                                    2.0, 1000 + t));
    std::vector<BatchStats> batch;
    sim.SampleBatch(0, {0}, 100000, batch);
    ok += std::abs(batch[0].mean - 0.5) <=
          4.0 * (10.0 * nu) / std::sqrt(100000.0);
  }
  CHECK(ok >= trials * 99 / 100);
}

TEST_CASE("query ledger accounting") {
  const NormalFormGame game = MakeRandomZeroSum(2, -1.0, 1.0, 3);
  Simulator sim(MakeSimulatorSpec(game, NoNoise(), -1.0, 1.0, 3));
  std::vector<BatchStats> batch;
  sim.SampleBatch(0, {0, 1}, 10, batch);
  sim.SampleBatch(1, {1}, 7, batch);
  const auto& ledger = sim.ledger();
  CHECK(ledger.profile_queries == 17);
  CHECK(ledger.index_queries == 27);
  CHECK(ledger.index_samples[game.shape().IndexId(0, 0)] == 10);
  CHECK(ledger.index_samples[game.shape().IndexId(1, 0)] == 10);
  CHECK(ledger.index_samples[game.shape().IndexId(0, 1)] == 0);
  CHECK(ledger.index_samples[game.shape().IndexId(1, 1)] == 7);
  CHECK_THROWS_AS(sim.SampleBatch(0, {}, 5, batch), std::invalid_argument);
  CHECK_THROWS_AS(sim.Sample({0, 0}, {0}, 0), std::invalid_argument);
}

TEST_CASE("random zero-sum games") {
  const NormalFormGame game = MakeRandomZeroSum(40, -2.0, 2.0, 21);
  CHECK(game.num_players() == 2);
  CHECK(game.num_profiles() == 1600);
  for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
    CHECK(game.UtilityAt(0, r) + game.UtilityAt(1, r) == 0.0);
    CHECK(game.UtilityAt(0, r) >= -2.0);
    CHECK(game.UtilityAt(0, r) <= 2.0);
  }
  // Same seed, same tensor; different seed, different tensor.
  const NormalFormGame again = MakeRandomZeroSum(40, -2.0, 2.0, 21);
  CHECK(again.utilities() == game.utilities());
  const NormalFormGame other = MakeRandomZeroSum(40, -2.0, 2.0, 22);
  CHECK(other.utilities() != game.utilities());
  CHECK_THROWS_AS(MakeRandomZeroSum(0, -2.0, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(MakeRandomZeroSum(2, 2.0, -2.0, 1), std::invalid_argument);
}

TEST_CASE("paper noise model: beta modifiers and c = 24") {
  const NormalFormGame game = MakeRandomZeroSum(10, -2.0, 2.0, 31);
  const NoiseModel noise = MakePaperNoise(game, 31);
  CHECK(noise.kind == NoiseKind::kScaledBernoulli);
  CHECK(noise.amplitude == 10.0);
  REQUIRE(static_cast<std::int64_t>(noise.nu.size()) == game.num_indices());
  for (double nu : noise.nu) {
    CHECK(nu >= 0.0);
    CHECK(nu <= 1.0);
  }
  for (std::int64_t i = 0; i < game.num_indices(); ++i) {
    CHECK(NoiseVariance(noise, i) ==
          doctest::Approx(100.0 * noise.nu[i] * noise.nu[i]));
  }
  const SimulatorSpec spec = MakeSimulatorSpec(game, noise, -2.0, 2.0, 1);
  CHECK(spec.c == 24.0);

  // Determinism of the modifiers.
  CHECK(MakePaperNoise(game, 31).nu == noise.nu);
}

TEST_CASE("beta(1.5, 3) sampler mean") {
  egta::rng::CounterRng rng(404);
  long double sum = 0.0L;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += egta::rng::BetaSample(rng, 1.5, 3.0);
  const double mean = static_cast<double>(sum / n);
  CHECK(std::abs(mean - 1.0 / 3.0) < 0.002);
}

TEST_CASE("noise model json round trip") {
  const NormalFormGame game = MakeRandomZeroSum(3, -2.0, 2.0, 41);
  const NoiseModel noise = MakePaperNoise(game, 41);
  const NoiseModel back = NoiseFromJson(NoiseToJson(noise));
  CHECK(back.kind == noise.kind);
  CHECK(back.amplitude == noise.amplitude);
  CHECK(back.nu == noise.nu);
  CHECK(back.seed == noise.seed);
  const NoiseModel none = NoiseFromJson(NoiseToJson(NoNoise()));
  CHECK(none.kind == NoiseKind::kNone);
  CHECK_THROWS(NoiseFromJson("{\"kind\": \"cauchy\", \"amplitude\": 1}"));
}

TEST_CASE("simulator spec validation") {
  const NormalFormGame game = TinyGame(1.0, -1.0);
  // Noise that can escape the declared range.
  SimulatorSpec spec =
      MakeSimulatorSpec(game, ConstantNu(game, 1.0, 10.0), -2.0, 2.0, 1);
  spec.range_hi.assign(1, 2.0);  // truth + 10 > 2
  CHECK_THROWS_AS(spec.Validate(), std::invalid_argument);

  NoiseModel bad_nu = ConstantNu(game, 1.5, 10.0);
  CHECK_THROWS_AS(MakeSimulatorSpec(game, bad_nu, -2.0, 2.0, 1),
                  std::invalid_argument);
}
