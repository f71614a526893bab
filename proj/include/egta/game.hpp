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

#ifndef EGTA_GAME_HPP_
#define EGTA_GAME_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace egta {

// One pure strategy per player, 0-based.
using PureProfile = std::vector<int>;

// Per-player probability vectors over that player's pure strategies.
using MixedProfile = std::vector<std::vector<double>>;

// A (player, pure profile) pair; the atomic unit of estimation and pruning.
struct UtilityIndex {
  int player = 0;
  PureProfile profile;
};

// Shared profile/index arithmetic for dense row-major tensors: the last
// player's strategy varies fastest, utilities are stored profile-major and
// player-minor (index_id = profile_rank * num_players + player).
struct GameShape {
  int num_players = 0;
  std::vector<int> strategy_counts;
  std::vector<std::int64_t> strides;
  std::int64_t num_profiles = 0;
  std::int64_t num_indices = 0;

  static GameShape Make(int num_players, std::vector<int> strategy_counts);

  std::int64_t ProfileRank(const PureProfile& s) const;
  PureProfile ProfileFromRank(std::int64_t rank) const;
  std::int64_t IndexId(int player, std::int64_t profile_rank) const {
    return profile_rank * num_players + player;
  }
  std::int64_t IndexId(const UtilityIndex& idx) const {
    return IndexId(idx.player, ProfileRank(idx.profile));
  }
  UtilityIndex IndexFromId(std::int64_t index_id) const;

  // Ranks of A_{p,s}: profiles equal to `rank` except player p's strategy
  // varies over its full strategy set, ascending. Includes `rank` itself.
  std::vector<std::int64_t> AdjacentRanks(int player,
                                          std::int64_t rank) const;

  void ValidateProfile(const PureProfile& s) const;
  void ValidatePlayer(int player) const;
  void ValidateMixed(const MixedProfile& x) const;
};

class NormalFormGame {
 public:
  // `utilities` is dense: num_players * prod(strategy_counts) finite reals
  // in row-major (profile-major, player-minor) order.
  NormalFormGame(int num_players, std::vector<int> strategy_counts,
                 std::vector<double> utilities);

  const GameShape& shape() const { return shape_; }
  int num_players() const { return shape_.num_players; }
  const std::vector<int>& strategy_counts() const {
    return shape_.strategy_counts;
  }
  std::int64_t num_profiles() const { return shape_.num_profiles; }
  std::int64_t num_indices() const { return shape_.num_indices; }
  const std::vector<double>& utilities() const { return utilities_; }

  double UtilityAt(int player, std::int64_t profile_rank) const {
    return utilities_[shape_.IndexId(player, profile_rank)];
  }
  double Utility(int player, const PureProfile& s) const;

  double MinUtility() const;
  double MaxUtility() const;

  // A_{p,s} as full profiles, ascending in player p's strategy index.
  std::vector<PureProfile> AdjacentProfiles(const UtilityIndex& idx) const;

  // sup over s' in A_{p,s} of u_p(s') - u_p(s); always >= 0.
  double PureRegret(const UtilityIndex& idx) const;
  double PureRegretAt(int player, std::int64_t profile_rank) const;

  // Expected utility of a mixed profile for `player`.
  double ExpectedUtility(const MixedProfile& x, int player) const;

  // max over pure deviations t in S_p of E[u_p(s|t)] - E[u_p(s)]; >= 0.
  double MixedRegret(const MixedProfile& x, int player) const;

  // max over players of the per-player regret.
  double GameRegret(const PureProfile& s) const;
  double GameRegret(const MixedProfile& x) const;

  // E_eps(u) = { s : GameRegret(s) <= eps }. eps must be >= 0.
  std::vector<PureProfile> EpsilonPureNashSet(double eps) const;

 private:
  GameShape shape_;
  std::vector<double> utilities_;
};

// Game file format: { "players": n, "actions": [k_1..k_n],
// "utilities": [...] }. Values round-trip bit-exactly.
std::string GameToJson(const NormalFormGame& game);
NormalFormGame GameFromJson(const std::string& text);
void SaveGame(const NormalFormGame& game, const std::string& path);
NormalFormGame LoadGame(const std::string& path);

}  // namespace egta

#endif  // EGTA_GAME_HPP_
