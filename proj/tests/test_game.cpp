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
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <vector>

#include "doctest.h"
#include "egta/game.hpp"
#include "egta/rng.hpp"

using egta::GameFromJson;
using egta::GameToJson;
using egta::GameShape;
using egta::MixedProfile;
using egta::NormalFormGame;
using egta::PureProfile;
using egta::UtilityIndex;
using egta::rng::CounterRng;

namespace {

// Matching pennies, player 0 wants to match.
NormalFormGame MatchingPennies() {
  return NormalFormGame(2, {2, 2}, {1, -1, -1, 1, -1, 1, 1, -1});
}

// Prisoner's dilemma with actions (C, D).
NormalFormGame PrisonersDilemma() {
  return NormalFormGame(2, {2, 2}, {3, 3, 0, 5, 5, 0, 1, 1});
}

// The two-profile game from the ps-reg0 counterexample: player A has
// strategies a1, a2; player B has one strategy; u_A = (2, 1).
NormalFormGame CounterexampleTruth() {
  return NormalFormGame(2, {2, 1}, {2, 0, 1, 0});
}

NormalFormGame RandomGame(CounterRng& rng, int players, int max_actions,
                          bool integer_utilities = false) {
  std::vector<int> counts(players);
  for (int& k : counts) {
    k = 1 + static_cast<int>(rng.NextU64() % max_actions);
  }
  const GameShape shape = GameShape::Make(players, counts);
  std::vector<double> utils(shape.num_indices);
  for (double& u : utils) {
    u = integer_utilities
            ? static_cast<double>(static_cast<int>(rng.NextU64() % 21) - 10)
            : rng.NextUniform(-5.0, 5.0);
  }
  return NormalFormGame(players, counts, utils);
}

// Independent adjacency oracle: enumerate every profile and keep the ones
// equal to s except possibly at player p.
std::vector<PureProfile> AdjacentOracle(const NormalFormGame& game,
                                        const UtilityIndex& idx) {
  std::vector<PureProfile> out;
  for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
    const PureProfile s = game.shape().ProfileFromRank(r);
    bool same_elsewhere = true;
    for (int p = 0; p < game.num_players(); ++p) {
      if (p != idx.player && s[p] != idx.profile[p]) same_elsewhere = false;
    }
    if (same_elsewhere) out.push_back(s);
  }
  return out;
}

double PureRegretOracle(const NormalFormGame& game, const UtilityIndex& idx) {
  double best = -1e300;
  for (const PureProfile& s : AdjacentOracle(game, idx)) {
    best = std::max(best, game.Utility(idx.player, s));
  }
  return best - game.Utility(idx.player, idx.profile);
}

// Literal double-loop epsilon-Nash oracle.
std::set<PureProfile> EpsNashOracle(const NormalFormGame& game, double eps) {
  std::set<PureProfile> out;
  for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
    const PureProfile s = game.shape().ProfileFromRank(r);
    bool ok = true;
    for (int p = 0; p < game.num_players() && ok; ++p) {
      ok = PureRegretOracle(game, {p, s}) <= eps;
    }
    if (ok) out.insert(s);
  }
  return out;
}

std::set<PureProfile> AsSet(const std::vector<PureProfile>& v) {
  return {v.begin(), v.end()};
}

// Expected utility by recursive enumeration, a second code path.
double ExpectedUtilityOracle(const NormalFormGame& game,
                             const MixedProfile& x, int player) {
  double total = 0.0;
  PureProfile s(game.num_players(), 0);
  const auto recurse = [&](auto&& self, int p, double prob) -> void {
    if (prob == 0.0) return;
    if (p == game.num_players()) {
      total += prob * game.Utility(player, s);
      return;
    }
    for (int a = 0; a < game.strategy_counts()[p]; ++a) {
      s[p] = a;
      self(self, p + 1, prob * x[p][a]);
    }
  };
  recurse(recurse, 0, 1.0);
  return total;
}

double MixedRegretOracle(const NormalFormGame& game, const MixedProfile& x,
                         int player) {
  const double own = ExpectedUtilityOracle(game, x, player);
  double best = -1e300;
  for (int a = 0; a < game.strategy_counts()[player]; ++a) {
    MixedProfile dev = x;
    std::fill(dev[player].begin(), dev[player].end(), 0.0);
    dev[player][a] = 1.0;
    best = std::max(best, ExpectedUtilityOracle(game, dev, player));
  }
  return best - own;
}

MixedProfile PointMass(const NormalFormGame& game, const PureProfile& s) {
  MixedProfile x(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    x[p].assign(game.strategy_counts()[p], 0.0);
    x[p][s[p]] = 1.0;
  }
  return x;
}

// Random mixed profile with dyadic probabilities (multiples of 1/8), so
// all expectation arithmetic is exact in binary floating point.
MixedProfile DyadicMixed(const NormalFormGame& game, CounterRng& rng) {
  MixedProfile x(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const int k = game.strategy_counts()[p];
    std::vector<int> eighths(k, 0);
    for (int i = 0; i < 8; ++i) ++eighths[rng.NextU64() % k];
    x[p].resize(k);
    for (int a = 0; a < k; ++a) x[p][a] = eighths[a] / 8.0;
  }
  return x;
}

}  // namespace

TEST_CASE("adjacent profiles: two-player (2,1) game") {
  const NormalFormGame game = CounterexampleTruth();
  const auto adj = game.AdjacentProfiles({0, {1, 0}});
  REQUIRE(adj.size() == 2);
  CHECK(adj[0] == PureProfile{0, 0});
  CHECK(adj[1] == PureProfile{1, 0});
}

TEST_CASE("adjacent profiles: singleton strategy set is just {s}") {
  const NormalFormGame game = CounterexampleTruth();
  const auto adj = game.AdjacentProfiles({1, {1, 0}});
  REQUIRE(adj.size() == 1);
  CHECK(adj[0] == PureProfile{1, 0});
}

TEST_CASE("adjacent profiles: 3-player cube matches enumeration oracle") {
  const GameShape shape = GameShape::Make(3, {2, 2, 2});
  std::vector<double> utils(shape.num_indices, 0.0);
  const NormalFormGame game(3, {2, 2, 2}, utils);
  for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
    for (int p = 0; p < 3; ++p) {
      const UtilityIndex idx{p, shape.ProfileFromRank(r)};
      const auto adj = game.AdjacentProfiles(idx);
      CHECK(adj.size() == 2);
      CHECK(AsSet(adj) == AsSet(AdjacentOracle(game, idx)));
    }
  }
}

TEST_CASE("adjacent profiles rejects invalid indices") {
  const NormalFormGame game = MatchingPennies();
  CHECK_THROWS_AS(game.AdjacentProfiles({2, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(game.AdjacentProfiles({0, {0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(game.AdjacentProfiles({0, {0}}), std::invalid_argument);
}

TEST_CASE("pure regret on the counterexample game") {
  const NormalFormGame game = CounterexampleTruth();
  CHECK(game.PureRegret({0, {1, 0}}) == 1.0);  // 2 - 1
  CHECK(game.PureRegret({0, {0, 0}}) == 0.0);  // best response
  CHECK(game.PureRegret({1, {1, 0}}) == 0.0);  // singleton strategy
}

TEST_CASE("pure regret equals brute force on random 3x3 games") {
  CounterRng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalFormGame game = RandomGame(rng, 2, 3);
    for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
      for (int p = 0; p < 2; ++p) {
        const UtilityIndex idx{p, game.shape().ProfileFromRank(r)};
        CHECK(game.PureRegret(idx) == PureRegretOracle(game, idx));
      }
    }
  }
}

TEST_CASE("regret is within [0, utility range] and shift-invariant") {
  CounterRng rng(78);
  for (int trial = 0; trial < 10; ++trial) {
    const NormalFormGame game = RandomGame(rng, 3, 3);
    const double range = game.MaxUtility() - game.MinUtility();

    // Shifted copy: add a constant to one player's utilities.
    const int shifted_player = static_cast<int>(rng.NextU64() % 3);
    std::vector<double> utils = game.utilities();
    for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
      utils[game.shape().IndexId(shifted_player, r)] += 3.25;
    }
    const NormalFormGame shifted(3, game.strategy_counts(), utils);

    for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
      for (int p = 0; p < 3; ++p) {
        const UtilityIndex idx{p, game.shape().ProfileFromRank(r)};
        const double regret = game.PureRegret(idx);
        CHECK(regret >= 0.0);
        CHECK(regret <= range);
        CHECK(shifted.PureRegret(idx) == regret);
      }
    }
  }
}

TEST_CASE("mixed regret: uniform matching pennies is an equilibrium") {
  const NormalFormGame game = MatchingPennies();
  const MixedProfile uniform = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK(game.MixedRegret(uniform, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(game.MixedRegret(uniform, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(game.GameRegret(uniform) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("mixed regret at a point mass equals pure regret bit-for-bit") {
  CounterRng rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const NormalFormGame game = RandomGame(rng, 2, 4, true);
    for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
      const PureProfile s = game.shape().ProfileFromRank(r);
      const MixedProfile x = PointMass(game, s);
      for (int p = 0; p < 2; ++p) {
        CHECK(game.MixedRegret(x, p) == game.PureRegret({p, s}));
      }
      CHECK(game.GameRegret(x) == game.GameRegret(s));
    }
  }
}

TEST_CASE("mixed regret: 2x2 game against the exhaustive weighted sum") {
  const NormalFormGame game(2, {2, 2}, {4, 1, 0, 2, 3, 0, 1, 5});
  const MixedProfile x = {{0.3, 0.7}, {0.5, 0.5}};
  for (int p = 0; p < 2; ++p) {
    CHECK(game.MixedRegret(x, p) ==
          doctest::Approx(MixedRegretOracle(game, x, p)).epsilon(1e-12));
  }
}

TEST_CASE("game regret: prisoner's dilemma (D,D) is a pure equilibrium") {
  const NormalFormGame game = PrisonersDilemma();
  CHECK(game.GameRegret(PureProfile{1, 1}) == 0.0);
  CHECK(game.GameRegret(PureProfile{0, 0}) == 2.0);  // both tempted to defect
}

TEST_CASE("game regret: every pure matching-pennies profile is unstable") {
  const NormalFormGame game = MatchingPennies();
  for (std::int64_t r = 0; r < game.num_profiles(); ++r) {
    CHECK(game.GameRegret(game.shape().ProfileFromRank(r)) > 0.0);
  }
}

TEST_CASE("epsilon-Nash set basics") {
  const NormalFormGame pennies = MatchingPennies();
  CHECK(pennies.EpsilonPureNashSet(0.0).empty());
  // eps at least the utility range keeps everything.
  CHECK(pennies.EpsilonPureNashSet(2.0).size() == 4);
  CHECK_THROWS_AS(pennies.EpsilonPureNashSet(-0.1), std::invalid_argument);

  // Final empirical game of the counterexample: u_A = (1.8, 1.45).
  const NormalFormGame uhat(2, {2, 1}, {1.8, 0, 1.45, 0});
  const auto set = AsSet(uhat.EpsilonPureNashSet(0.4));
  CHECK(set.size() == 2);  // regrets 0 and 0.35, both within 0.4
  CHECK(set.count({0, 0}) == 1);
  CHECK(set.count({1, 0}) == 1);
}

TEST_CASE("epsilon-Nash set is monotone in eps and matches brute force") {
  CounterRng rng(80);
  for (int trial = 0; trial < 30; ++trial) {
    const int players = 2 + static_cast<int>(rng.NextU64() % 2);
    const NormalFormGame game = RandomGame(rng, players, 4);
    double prev_eps = 0.0;
    std::set<PureProfile> prev;
    for (double eps : {0.0, 0.5, 1.5, 4.0}) {
      const auto got = AsSet(game.EpsilonPureNashSet(eps));
      CHECK(got == EpsNashOracle(game, eps));
      if (eps > prev_eps) {
        CHECK(std::includes(got.begin(), got.end(), prev.begin(),
                            prev.end()));
      }
      prev = got;
      prev_eps = eps;
    }
  }
}

TEST_CASE("dyadic mixed profiles agree exactly with the oracle") {
  CounterRng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalFormGame game = RandomGame(rng, 2, 4, true);
    const MixedProfile x = DyadicMixed(game, rng);
    for (int p = 0; p < 2; ++p) {
      CHECK(game.MixedRegret(x, p) == MixedRegretOracle(game, x, p));
    }
  }
}

TEST_CASE("mixed profile validation") {
  const NormalFormGame game = MatchingPennies();
  CHECK_THROWS_AS(game.MixedRegret({{0.5, 0.5}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(game.MixedRegret({{0.7, 0.7}, {0.5, 0.5}}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(game.MixedRegret({{-0.1, 1.1}, {0.5, 0.5}}, 0),
                  std::invalid_argument);
  // Within the 1e-9 normalization tolerance.
  CHECK_NOTHROW(game.MixedRegret({{0.5 + 4e-10, 0.5}, {0.5, 0.5}}, 0));
}

TEST_CASE("game construction validation") {
  CHECK_THROWS_AS(NormalFormGame(0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(NormalFormGame(2, {2, 0}, {0, 0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NormalFormGame(2, {2, 1}, {1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NormalFormGame(1, {2}, {1.0, std::nan("")}),
                  std::invalid_argument);
}

TEST_CASE("game json round-trips bit-exactly") {
  CounterRng rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalFormGame game = RandomGame(rng, 2, 4);
    const NormalFormGame back = GameFromJson(GameToJson(game));
    CHECK(back.num_players() == game.num_players());
    CHECK(back.strategy_counts() == game.strategy_counts());
    REQUIRE(back.utilities().size() == game.utilities().size());
    for (std::size_t i = 0; i < game.utilities().size(); ++i) {
      CHECK(back.utilities()[i] == game.utilities()[i]);
    }
  }
  CHECK_THROWS(GameFromJson("{\"players\": 2}"));
}

TEST_CASE("game files round-trip through disk") {
  namespace fs = std::filesystem;
  CounterRng rng(83);
  const NormalFormGame game = RandomGame(rng, 3, 3);
  const fs::path path = fs::temp_directory_path() / "egta_game_test.json";
  egta::SaveGame(game, path.string());
  const NormalFormGame back = egta::LoadGame(path.string());
  CHECK(back.strategy_counts() == game.strategy_counts());
  CHECK(back.utilities() == game.utilities());
  fs::remove(path);
  CHECK_THROWS(egta::LoadGame("/nonexistent/egta_game.json"));
}

TEST_CASE("profile rank round trip uses last-player-fastest order") {
  const GameShape shape = GameShape::Make(2, {3, 2});
  CHECK(shape.ProfileRank({0, 0}) == 0);
  CHECK(shape.ProfileRank({0, 1}) == 1);
  CHECK(shape.ProfileRank({1, 0}) == 2);
  CHECK(shape.ProfileRank({2, 1}) == 5);
  for (std::int64_t r = 0; r < shape.num_profiles; ++r) {
    CHECK(shape.ProfileRank(shape.ProfileFromRank(r)) == r);
  }
}
