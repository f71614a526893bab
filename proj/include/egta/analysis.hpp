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

#ifndef EGTA_ANALYSIS_HPP_
#define EGTA_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "egta/psp.hpp"
#include "egta/rng.hpp"

namespace egta {

struct ContainmentWitness {
  PureProfile profile;
  double candidate_regret = 0.0;  // regret in the game whose E_gamma we scan
  double target_regret = 0.0;     // regret in the game that must contain it
};

struct ContainmentVerdict {
  std::string claim;
  double gamma = 0.0;
  bool holds = true;
  std::optional<ContainmentWitness> witness;
};

// Brute-force check of E_gamma(candidate) subset of E_{gamma+slack}(target)
// over all pure profiles. Swap the arguments to test the reverse inclusion.
ContainmentVerdict CheckPureContainment(const NormalFormGame& target,
                                        const NormalFormGame& candidate,
                                        double gamma, double slack);

enum class MixedRule {
  kWellEstimated,  // true regret <= 2 eps + gamma
  kMiddle,         // true regret <= 2 eps + 3 gamma / 2
};

// Samples `num_profiles` Dirichlet-uniform mixed profiles; for each, sets
// gamma to the empirical-game regret and checks the rule's bound on the
// true-game regret (1e-9 additive tolerance).
ContainmentVerdict CheckMixedContainmentSampled(const NormalFormGame& truth,
                                                const NormalFormGame& empirical,
                                                double epsilon,
                                                int num_profiles,
                                                std::uint64_t seed,
                                                MixedRule rule);

// |u_p(s) - uhat_p(s)| <= max{eps, Regret_p(s; uhat) / 2} for every index.
bool CheckLemma6Condition(const NormalFormGame& truth,
                          const NormalFormGame& empirical, double epsilon);

enum class PruneBranch { kRegretBranch, kWeBranch };

struct EfficiencyPrediction {
  std::int64_t index_id = -1;
  double predicted_samples = 0.0;
  PruneBranch branch = PruneBranch::kWeBranch;
  // Inputs echoed for reporting.
  double true_regret = 0.0;
  double threshold = 0.0;  // gamma_star (ps-reg+) or epsilon (ps-reg-m)
  double c = 0.0;
  double adjacent_variance_sup = 0.0;
  double index_variance = 0.0;
};

// Upper bound on the cumulative sample size at which the index is pruned,
// per the efficiency theorems for ps-reg+ and ps-reg-m; other strategies
// are unsupported and throw.
EfficiencyPrediction PredictPruneSampleSize(const SimulatorSpec& spec,
                                            const BoundBudget& budget,
                                            std::int64_t index_id,
                                            const PrunerConfig& config);

// M_T >= c^2 ln(2|I|T/delta) / (2 eps^2).
bool CheckOmegaSufficiency(const SamplingSchedule& schedule,
                           const BoundBudget& budget, double epsilon);

// Dirichlet-uniform mixed profile (independent uniform simplex draw per
// player).
MixedProfile RandomMixedProfile(const GameShape& shape, rng::CounterRng& rng);

}  // namespace egta

#endif  // EGTA_ANALYSIS_HPP_
