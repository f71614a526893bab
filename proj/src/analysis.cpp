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

#include "egta/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace egta {

namespace {
constexpr double kMixedTolerance = 1e-9;
}

ContainmentVerdict CheckPureContainment(const NormalFormGame& target,
                                        const NormalFormGame& candidate,
                                        double gamma, double slack) {
  ContainmentVerdict verdict;
  verdict.claim = "pure_containment";
  verdict.gamma = gamma;
  const GameShape& shape = candidate.shape();
  for (std::int64_t rank = 0; rank < shape.num_profiles; ++rank) {
    const PureProfile s = shape.ProfileFromRank(rank);
    const double candidate_regret = candidate.GameRegret(s);
    if (candidate_regret > gamma) continue;
    const double target_regret = target.GameRegret(s);
    if (target_regret > gamma + slack) {
      verdict.holds = false;
      verdict.witness =
          ContainmentWitness{s, candidate_regret, target_regret};
      return verdict;
    }
  }
  return verdict;
}

MixedProfile RandomMixedProfile(const GameShape& shape,
                                rng::CounterRng& rng) {
  MixedProfile x(shape.num_players);
  for (int p = 0; p < shape.num_players; ++p) {
    x[p].resize(shape.strategy_counts[p]);
    double sum = 0.0;
    for (double& q : x[p]) {
      q = rng.NextExponential();
      sum += q;
    }
    for (double& q : x[p]) q /= sum;
  }
  return x;
}

ContainmentVerdict CheckMixedContainmentSampled(
    const NormalFormGame& truth, const NormalFormGame& empirical,
    double epsilon, int num_profiles, std::uint64_t seed, MixedRule rule) {
  ContainmentVerdict verdict;
  verdict.claim = rule == MixedRule::kWellEstimated
                      ? "mixed_containment_we"
                      : "mixed_containment_middle";
  rng::CounterRng rng(rng::DeriveKey(seed, 0x4D69584544ULL));  // "MiXED"
  for (int i = 0; i < num_profiles; ++i) {
    const MixedProfile x = RandomMixedProfile(truth.shape(), rng);
    const double gamma = empirical.GameRegret(x);
    const double allowed = rule == MixedRule::kWellEstimated
                               ? 2.0 * epsilon + gamma
                               : 2.0 * epsilon + 1.5 * gamma;
    const double true_regret = truth.GameRegret(x);
    if (true_regret > allowed + kMixedTolerance) {
      verdict.holds = false;
      verdict.gamma = gamma;
      // Mixed witnesses have no pure profile; the regret pair is recorded.
      verdict.witness = ContainmentWitness{{}, gamma, true_regret};
      return verdict;
    }
  }
  return verdict;
}

bool CheckLemma6Condition(const NormalFormGame& truth,
                          const NormalFormGame& empirical, double epsilon) {
  const GameShape& shape = truth.shape();
  for (std::int64_t rank = 0; rank < shape.num_profiles; ++rank) {
    for (int p = 0; p < shape.num_players; ++p) {
      const double diff =
          std::abs(truth.UtilityAt(p, rank) - empirical.UtilityAt(p, rank));
      const double allowed =
          std::max(epsilon, empirical.PureRegretAt(p, rank) / 2.0);
      if (diff > allowed + kMixedTolerance) return false;
    }
  }
  return true;
}

EfficiencyPrediction PredictPruneSampleSize(const SimulatorSpec& spec,
                                            const BoundBudget& budget,
                                            std::int64_t index_id,
                                            const PrunerConfig& config) {
  if (config.strategy != Strategy::kRegPlus &&
      config.strategy != Strategy::kRegM) {
    throw std::invalid_argument(
        "efficiency predictions exist only for ps-reg+ and ps-reg-m");
  }
  const GameShape& shape = spec.truth.shape();
  const int player = static_cast<int>(index_id % shape.num_players);
  const std::int64_t rank = index_id / shape.num_players;

  EfficiencyPrediction pred;
  pred.index_id = index_id;
  pred.c = spec.c;
  pred.true_regret = spec.truth.PureRegretAt(player, rank);
  pred.threshold = config.strategy == Strategy::kRegPlus ? config.gamma_star
                                                         : config.epsilon;
  pred.index_variance = NoiseVariance(spec.noise, index_id);
  pred.adjacent_variance_sup = 0.0;
  for (std::int64_t r : shape.AdjacentRanks(player, rank)) {
    pred.adjacent_variance_sup =
        std::max(pred.adjacent_variance_sup,
                 NoiseVariance(spec.noise, shape.IndexId(player, r)));
  }

  const double log_term =
      std::log(3.0 * static_cast<double>(budget.index_count) *
               static_cast<double>(budget.schedule_length) / budget.delta);
  const double eps = config.epsilon;
  const double we_branch =
      2.5 * spec.c / eps + pred.index_variance / (eps * eps);

  pred.branch = PruneBranch::kWeBranch;
  double chosen = we_branch;
  const double gap = pred.true_regret - pred.threshold;
  if (gap > 0.0) {
    const double lead =
        config.strategy == Strategy::kRegPlus ? 10.0 : 12.5;
    const double regret_branch =
        lead * spec.c / gap +
        25.0 * pred.adjacent_variance_sup / (gap * gap);
    if (regret_branch < we_branch) {
      pred.branch = PruneBranch::kRegretBranch;
      chosen = regret_branch;
    }
  }
  pred.predicted_samples = 2.0 + 2.0 * log_term * chosen;
  return pred;
}

bool CheckOmegaSufficiency(const SamplingSchedule& schedule,
                           const BoundBudget& budget, double epsilon) {
  const double threshold =
      budget.c * budget.c *
      std::log(2.0 * static_cast<double>(budget.index_count) *
               static_cast<double>(budget.schedule_length) / budget.delta) /
      (2.0 * epsilon * epsilon);
  return static_cast<double>(schedule.FinalCumulative()) >= threshold;
}

}  // namespace egta
