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

#include "egta/game.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace egta {

namespace {
constexpr double kMixedSumTolerance = 1e-9;
}

GameShape GameShape::Make(int num_players, std::vector<int> strategy_counts) {
  if (num_players < 1) {
    throw std::invalid_argument("game must have at least one player");
  }
  if (static_cast<int>(strategy_counts.size()) != num_players) {
    throw std::invalid_argument("one strategy count required per player");
  }
  GameShape shape;
  shape.num_players = num_players;
  shape.strategy_counts = std::move(strategy_counts);
  shape.strides.assign(num_players, 1);
  std::int64_t prod = 1;
  for (int p = num_players - 1; p >= 0; --p) {
    if (shape.strategy_counts[p] < 1) {
      throw std::invalid_argument("every player needs at least one strategy");
    }
    shape.strides[p] = prod;
    prod *= shape.strategy_counts[p];
  }
  shape.num_profiles = prod;
  shape.num_indices = prod * num_players;
  return shape;
}

std::int64_t GameShape::ProfileRank(const PureProfile& s) const {
  ValidateProfile(s);
  std::int64_t rank = 0;
  for (int p = 0; p < num_players; ++p) rank += s[p] * strides[p];
  return rank;
}

PureProfile GameShape::ProfileFromRank(std::int64_t rank) const {
  PureProfile s(num_players);
  for (int p = 0; p < num_players; ++p) {
    s[p] = static_cast<int>((rank / strides[p]) % strategy_counts[p]);
  }
  return s;
}

UtilityIndex GameShape::IndexFromId(std::int64_t index_id) const {
  UtilityIndex idx;
  idx.player = static_cast<int>(index_id % num_players);
  idx.profile = ProfileFromRank(index_id / num_players);
  return idx;
}

std::vector<std::int64_t> GameShape::AdjacentRanks(
    int player, std::int64_t rank) const {
  ValidatePlayer(player);
  const std::int64_t stride = strides[player];
  const std::int64_t own = (rank / stride) % strategy_counts[player];
  const std::int64_t base = rank - own * stride;
  std::vector<std::int64_t> out;
  out.reserve(strategy_counts[player]);
  for (int a = 0; a < strategy_counts[player]; ++a) {
    out.push_back(base + a * stride);
  }
  return out;
}

void GameShape::ValidateProfile(const PureProfile& s) const {
  if (static_cast<int>(s.size()) != num_players) {
    throw std::invalid_argument("profile has wrong number of players");
  }
  for (int p = 0; p < num_players; ++p) {
    if (s[p] < 0 || s[p] >= strategy_counts[p]) {
      throw std::invalid_argument("strategy index out of range");
    }
  }
}

void GameShape::ValidatePlayer(int player) const {
  if (player < 0 || player >= num_players) {
    throw std::invalid_argument("player id out of range");
  }
}

void GameShape::ValidateMixed(const MixedProfile& x) const {
  if (static_cast<int>(x.size()) != num_players) {
    throw std::invalid_argument("mixed profile has wrong number of players");
  }
  for (int p = 0; p < num_players; ++p) {
    if (static_cast<int>(x[p].size()) != strategy_counts[p]) {
      throw std::invalid_argument("mixed profile has wrong support size");
    }
    double sum = 0.0;
    for (double q : x[p]) {
      if (!(q >= 0.0)) {
        throw std::invalid_argument("mixed probabilities must be >= 0");
      }
      sum += q;
    }
    if (std::abs(sum - 1.0) > kMixedSumTolerance) {
      throw std::invalid_argument("mixed probabilities must sum to 1");
    }
  }
}

NormalFormGame::NormalFormGame(int num_players,
                               std::vector<int> strategy_counts,
                               std::vector<double> utilities)
    : shape_(GameShape::Make(num_players, std::move(strategy_counts))),
      utilities_(std::move(utilities)) {
  if (static_cast<std::int64_t>(utilities_.size()) != shape_.num_indices) {
    throw std::invalid_argument("utility tensor has wrong size");
  }
  for (double u : utilities_) {
    if (!std::isfinite(u)) {
      throw std::invalid_argument("utilities must be finite");
    }
  }
}

double NormalFormGame::Utility(int player, const PureProfile& s) const {
  shape_.ValidatePlayer(player);
  return UtilityAt(player, shape_.ProfileRank(s));
}

double NormalFormGame::MinUtility() const {
  return *std::min_element(utilities_.begin(), utilities_.end());
}

double NormalFormGame::MaxUtility() const {
  return *std::max_element(utilities_.begin(), utilities_.end());
}

std::vector<PureProfile> NormalFormGame::AdjacentProfiles(
    const UtilityIndex& idx) const {
  shape_.ValidatePlayer(idx.player);
  const std::int64_t rank = shape_.ProfileRank(idx.profile);
  std::vector<PureProfile> out;
  for (std::int64_t r : shape_.AdjacentRanks(idx.player, rank)) {
    out.push_back(shape_.ProfileFromRank(r));
  }
  return out;
}

double NormalFormGame::PureRegretAt(int player,
                                    std::int64_t profile_rank) const {
  const double own = UtilityAt(player, profile_rank);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t r : shape_.AdjacentRanks(player, profile_rank)) {
    best = std::max(best, UtilityAt(player, r));
  }
  return best - own;
}

double NormalFormGame::PureRegret(const UtilityIndex& idx) const {
  shape_.ValidatePlayer(idx.player);
  return PureRegretAt(idx.player, shape_.ProfileRank(idx.profile));
}

double NormalFormGame::ExpectedUtility(const MixedProfile& x,
                                       int player) const {
  shape_.ValidateMixed(x);
  shape_.ValidatePlayer(player);
  double total = 0.0;
  for (std::int64_t rank = 0; rank < shape_.num_profiles; ++rank) {
    double prob = 1.0;
    for (int p = 0; p < shape_.num_players; ++p) {
      const int sp = static_cast<int>((rank / shape_.strides[p]) %
                                      shape_.strategy_counts[p]);
      prob *= x[p][sp];
    }
    if (prob != 0.0) total += prob * UtilityAt(player, rank);
  }
  return total;
}

double NormalFormGame::MixedRegret(const MixedProfile& x, int player) const {
  shape_.ValidateMixed(x);
  shape_.ValidatePlayer(player);
  // E[u_p(s|t)] for each pure deviation t, marginalizing the opponents.
  std::vector<double> deviation_value(shape_.strategy_counts[player], 0.0);
  double own_value = 0.0;
  for (std::int64_t rank = 0; rank < shape_.num_profiles; ++rank) {
    double others = 1.0;
    for (int p = 0; p < shape_.num_players; ++p) {
      if (p == player) continue;
      const int sp = static_cast<int>((rank / shape_.strides[p]) %
                                      shape_.strategy_counts[p]);
      others *= x[p][sp];
    }
    if (others == 0.0) continue;
    const int own_strategy = static_cast<int>(
        (rank / shape_.strides[player]) % shape_.strategy_counts[player]);
    const double u = UtilityAt(player, rank);
    deviation_value[own_strategy] += others * u;
    const double own_prob = x[player][own_strategy];
    if (own_prob != 0.0) own_value += own_prob * others * u;
  }
  const double best =
      *std::max_element(deviation_value.begin(), deviation_value.end());
  return best - own_value;
}

double NormalFormGame::GameRegret(const PureProfile& s) const {
  const std::int64_t rank = shape_.ProfileRank(s);
  double worst = 0.0;
  for (int p = 0; p < shape_.num_players; ++p) {
    worst = std::max(worst, PureRegretAt(p, rank));
  }
  return worst;
}

double NormalFormGame::GameRegret(const MixedProfile& x) const {
  double worst = 0.0;
  for (int p = 0; p < shape_.num_players; ++p) {
    worst = std::max(worst, MixedRegret(x, p));
  }
  return worst;
}

std::vector<PureProfile> NormalFormGame::EpsilonPureNashSet(
    double eps) const {
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("eps must be >= 0");
  }
  std::vector<PureProfile> out;
  for (std::int64_t rank = 0; rank < shape_.num_profiles; ++rank) {
    const PureProfile s = shape_.ProfileFromRank(rank);
    if (GameRegret(s) <= eps) out.push_back(s);
  }
  return out;
}

std::string GameToJson(const NormalFormGame& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["actions"] = game.strategy_counts();
  j["utilities"] = game.utilities();
  return j.dump();
}

NormalFormGame GameFromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("players") || !j.contains("actions") ||
      !j.contains("utilities")) {
    throw std::invalid_argument("game file missing required keys");
  }
  return NormalFormGame(j["players"].get<int>(),
                        j["actions"].get<std::vector<int>>(),
                        j["utilities"].get<std::vector<double>>());
}

void SaveGame(const NormalFormGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << GameToJson(game) << "\n";
}

NormalFormGame LoadGame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return GameFromJson(ss.str());
}

}  // namespace egta
