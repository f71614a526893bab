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

#include "egta/simulator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "egta/kernels.hpp"
#include "egta/rng.hpp"
#include "json.hpp"

namespace egta {

namespace {

// Key-derivation tags; one sub-space per purpose.
constexpr std::uint64_t kTagGame = 1;
constexpr std::uint64_t kTagNu = 2;
constexpr std::uint64_t kTagNoise = 3;

std::uint64_t NoiseKey(std::uint64_t master_seed, std::int64_t index_id) {
  return rng::DeriveKey(rng::DeriveKey(master_seed, kTagNoise),
                        static_cast<std::uint64_t>(index_id));
}

}  // namespace

void NoiseModel::Validate(std::int64_t num_indices) const {
  if (!(amplitude >= 0.0)) {
    throw std::invalid_argument("noise amplitude must be >= 0");
  }
  if (kind == NoiseKind::kScaledBernoulli) {
    if (static_cast<std::int64_t>(nu.size()) != num_indices) {
      throw std::invalid_argument("one variance modifier required per index");
    }
    for (double v : nu) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("variance modifiers must lie in [0, 1]");
      }
    }
  }
}

double NoiseVariance(const NoiseModel& noise, std::int64_t index_id) {
  if (noise.kind == NoiseKind::kNone) return 0.0;
  const double half = noise.amplitude * noise.nu[index_id];
  return half * half;
}

void SimulatorSpec::Validate() const {
  noise.Validate(truth.num_indices());
  const std::int64_t n = truth.num_profiles();
  if (static_cast<std::int64_t>(range_lo.size()) != n ||
      static_cast<std::int64_t>(range_hi.size()) != n) {
    throw std::invalid_argument("one sample range required per profile");
  }
  double width = 0.0;
  for (std::int64_t r = 0; r < n; ++r) {
    if (!(range_hi[r] >= range_lo[r])) {
      throw std::invalid_argument("profile range must satisfy b_s >= a_s");
    }
    width = std::max(width, range_hi[r] - range_lo[r]);
    for (int p = 0; p < truth.num_players(); ++p) {
      const double u = truth.UtilityAt(p, r);
      double reach = 0.0;
      if (noise.kind == NoiseKind::kScaledBernoulli) {
        reach = noise.amplitude * noise.nu[truth.shape().IndexId(p, r)];
      }
      if (u - reach < range_lo[r] - 1e-12 || u + reach > range_hi[r] + 1e-12) {
        throw std::invalid_argument(
            "realizable samples must lie within the profile range");
      }
    }
  }
  if (c + 1e-12 < width) {
    throw std::invalid_argument("c must be >= every profile range width");
  }
}

SimulatorSpec MakeSimulatorSpec(NormalFormGame truth, NoiseModel noise,
                                double utility_lo, double utility_hi,
                                std::uint64_t master_seed) {
  if (!(utility_hi >= utility_lo)) {
    throw std::invalid_argument("utility range must satisfy hi >= lo");
  }
  const double pad =
      noise.kind == NoiseKind::kScaledBernoulli ? noise.amplitude : 0.0;
  SimulatorSpec spec{std::move(truth), std::move(noise), {}, {}, 0.0,
                     master_seed};
  const std::int64_t n = spec.truth.num_profiles();
  spec.range_lo.assign(n, utility_lo - pad);
  spec.range_hi.assign(n, utility_hi + pad);
  spec.c = (utility_hi - utility_lo) + 2.0 * pad;
  spec.Validate();
  return spec;
}

Simulator::Simulator(SimulatorSpec spec)
    : spec_(std::move(spec)),
      shape_(spec_.truth.shape()) {
  spec_.Validate();
  noise_keys_.reserve(shape_.num_indices);
  for (std::int64_t i = 0; i < shape_.num_indices; ++i) {
    noise_keys_.push_back(NoiseKey(spec_.master_seed, i));
  }
  ledger_.index_samples.assign(shape_.num_indices, 0);
}

void Simulator::CheckActive(const std::vector<int>& players) const {
  if (players.empty()) {
    throw std::invalid_argument("active player set must be nonempty");
  }
  for (int p : players) shape_.ValidatePlayer(p);
}

void Simulator::Account(std::int64_t profile_rank,
                        const std::vector<int>& players, std::int64_t count) {
  ledger_.profile_queries += count;
  for (int p : players) {
    ledger_.index_samples[shape_.IndexId(p, profile_rank)] += count;
    ledger_.index_queries += count;
  }
}

std::vector<std::vector<double>> Simulator::Sample(
    const PureProfile& profile, const std::vector<int>& players,
    std::int64_t count) {
  CheckActive(players);
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  const std::int64_t rank = shape_.ProfileRank(profile);
  std::vector<std::vector<double>> out(players.size());
  for (std::size_t k = 0; k < players.size(); ++k) {
    const std::int64_t idx = shape_.IndexId(players[k], rank);
    const double truth = spec_.truth.UtilityAt(players[k], rank);
    auto& draws = out[k];
    draws.resize(count);
    if (spec_.noise.kind == NoiseKind::kNone) {
      std::fill(draws.begin(), draws.end(), truth);
    } else {
      const double half = spec_.noise.amplitude * spec_.noise.nu[idx];
      const std::uint64_t start =
          static_cast<std::uint64_t>(ledger_.index_samples[idx]);
      for (std::int64_t j = 0; j < count; ++j) {
        draws[j] = rng::StreamBit(noise_keys_[idx], start + j)
                       ? truth + half
                       : truth - half;
      }
    }
  }
  Account(rank, players, count);
  return out;
}

void Simulator::SampleBatch(std::int64_t profile_rank,
                            const std::vector<int>& players,
                            std::int64_t count, std::vector<BatchStats>& out) {
  CheckActive(players);
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  out.resize(players.size());
  for (std::size_t k = 0; k < players.size(); ++k) {
    const std::int64_t idx = shape_.IndexId(players[k], profile_rank);
    const double truth = spec_.truth.UtilityAt(players[k], profile_rank);
    if (spec_.noise.kind == NoiseKind::kNone) {
      out[k] = BatchStats{count, truth, 0.0};
      continue;
    }
    const double half = spec_.noise.amplitude * spec_.noise.nu[idx];
    const std::uint64_t start =
        static_cast<std::uint64_t>(ledger_.index_samples[idx]);
    const std::int64_t n_plus = static_cast<std::int64_t>(
        kernels::PopcountBits(noise_keys_[idx], start, start + count));
    const UtilityAccumulator batch =
        TwoPointBatch(truth, half, n_plus, count);
    out[k] = BatchStats{batch.count, batch.mean, batch.sum_sq_dev};
  }
  Account(profile_rank, players, count);
}

NormalFormGame MakeRandomZeroSum(int actions, double lo, double hi,
                                 std::uint64_t seed) {
  if (actions < 1) throw std::invalid_argument("actions must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("range must satisfy lo < hi");
  const std::uint64_t key = rng::DeriveKey(seed, kTagGame);
  const std::int64_t profiles =
      static_cast<std::int64_t>(actions) * actions;
  std::vector<double> utilities(2 * profiles);
  for (std::int64_t r = 0; r < profiles; ++r) {
    const double u =
        lo + (hi - lo) * rng::ToUnit(rng::StreamWord(key, r));
    utilities[2 * r] = u;
    utilities[2 * r + 1] = -u;
  }
  return NormalFormGame(2, {actions, actions}, std::move(utilities));
}

NoiseModel MakePaperNoise(const NormalFormGame& game, std::uint64_t seed) {
  NoiseModel noise;
  noise.kind = NoiseKind::kScaledBernoulli;
  noise.amplitude = 10.0;
  noise.seed = seed;
  noise.nu.resize(game.num_indices());
  const std::uint64_t base = rng::DeriveKey(seed, kTagNu);
  for (std::int64_t i = 0; i < game.num_indices(); ++i) {
    rng::CounterRng stream(
        rng::DeriveKey(base, static_cast<std::uint64_t>(i)));
    noise.nu[i] = rng::BetaSample(stream, 1.5, 3.0);
  }
  return noise;
}

NoiseModel NoNoise() { return NoiseModel{}; }

std::string NoiseToJson(const NoiseModel& noise) {
  nlohmann::json j;
  j["kind"] =
      noise.kind == NoiseKind::kNone ? "none" : "scaled_bernoulli";
  j["amplitude"] = noise.amplitude;
  j["nu"] = noise.nu;
  j["seed"] = noise.seed;
  return j.dump();
}

NoiseModel NoiseFromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  NoiseModel noise;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") {
    noise.kind = NoiseKind::kNone;
  } else if (kind == "scaled_bernoulli") {
    noise.kind = NoiseKind::kScaledBernoulli;
  } else {
    throw std::invalid_argument("unknown noise kind: " + kind);
  }
  noise.amplitude = j.at("amplitude").get<double>();
  if (j.contains("nu")) noise.nu = j["nu"].get<std::vector<double>>();
  if (j.contains("seed")) noise.seed = j["seed"].get<std::uint64_t>();
  return noise;
}

void SaveNoise(const NoiseModel& noise, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << NoiseToJson(noise) << "\n";
}

NoiseModel LoadNoise(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return NoiseFromJson(ss.str());
}

}  // namespace egta
