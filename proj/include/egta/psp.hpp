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

#ifndef EGTA_PSP_HPP_
#define EGTA_PSP_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "egta/bounds.hpp"
#include "egta/game.hpp"
#include "egta/simulator.hpp"

namespace egta {

enum class Strategy { kWE, kReg0, kReg, kRegPlus, kRegM };
enum class BoundMode { kUniform, kNonuniform };

const char* StrategyName(Strategy s);
Strategy StrategyFromName(const std::string& name);
BoundMode BoundModeFor(Strategy s);

struct PrunerConfig {
  Strategy strategy = Strategy::kWE;
  double epsilon = 0.0;
  double gamma_star = 0.0;  // PS-REG / PS-REG+ only
  BoundMode bound_mode = BoundMode::kNonuniform;

  static PrunerConfig Make(Strategy strategy, double epsilon,
                           double gamma_star = 0.0);
  void Validate() const;
};

// Marginal sizes m_1..m_T with cumulative sizes M_t = sum_{i<=t} m_i.
struct SamplingSchedule {
  std::vector<std::int64_t> marginals;
  std::vector<std::int64_t> cumulatives;
  double beta = 0.0;
  double alpha = 0.0;        // geometric start (cumulative size)
  double alpha_prime = 0.0;  // hybrid start; equals alpha when not hybrid
  double omega = 0.0;        // sufficient final cumulative size
  bool hybrid = false;

  int T() const { return static_cast<int>(marginals.size()); }
  std::int64_t FinalCumulative() const { return cumulatives.back(); }
  void Validate() const;
};

// Geometric schedule: cumulative sizes ceil(alpha * beta^t) from alpha up to
// at least omega; T is the fixed point of T = ceil(log_beta(omega/alpha))
// with alpha, omega themselves functions of T. The budget's c, |I| and
// delta are used; its schedule_length is superseded by the built T.
SamplingSchedule BuildGeometricSchedule(const BoundBudget& budget,
                                        double epsilon, double beta);

// Hybrid schedule for the regret-pruning strategies: length 1.5x the
// geometric schedule, final two-thirds the geometric cumulative sizes,
// first third linearly increasing cumulative size from alpha' to alpha.
// Falls back to the geometric schedule when alpha' >= alpha.
SamplingSchedule BuildHybridSchedule(const BoundBudget& budget,
                                     double epsilon, double beta);

// Budget matching a built schedule.
BoundBudget BudgetFor(const SimulatorSpec& spec,
                      const SamplingSchedule& schedule, double delta);

enum class PruneReason { kWellEstimated, kRegret };
enum class TerminatedBy { kAllPruned, kScheduleExhausted };

struct PruneRecord {
  std::int64_t index_id = -1;
  PruneReason reason = PruneReason::kWellEstimated;
  int iteration = 0;
  std::int64_t samples_at_prune = 0;
  double bound_at_prune = 0.0;
  double frozen_mean = 0.0;
};

// Sample means, deviation bounds and prune state per utility index. Bounds
// of pruned indices stay frozen at their prune-time values.
struct EmpiricalGame {
  GameShape shape;
  std::vector<UtilityAccumulator> acc;
  std::vector<double> bound;
  std::vector<int> pruned_iteration;  // 0 while active

  static EmpiricalGame Make(const GameShape& shape);

  double Mean(std::int64_t index_id) const;
  bool Pruned(std::int64_t index_id) const {
    return pruned_iteration[index_id] != 0;
  }
  // The empirical game as a NormalFormGame; every index must be sampled.
  NormalFormGame MeanGame() const;
};

// Regret of `index_id` in the current empirical means (frozen where
// pruned). Throws if an adjacent index has no samples.
double EmpiricalPureRegret(const EmpiricalGame& emp, std::int64_t index_id);

// High-probability lower bound on the true regret:
//   sup_{s' in A_{p,s}} (mean(s') - bound(s')) - (mean(s) + bound(s)).
// Returns -infinity if any adjacent bound is infinite.
double RegretLowerBound(const EmpiricalGame& emp, std::int64_t index_id);

// Pruning criteria, with the exact strict/non-strict comparisons of the
// respective strategies.
bool PruneDecisionWE(double bound, double epsilon);
bool PruneDecisionReg0(double empirical_regret, double uniform_bound);
bool PruneDecisionReg(double empirical_regret, double uniform_bound,
                      double epsilon, double gamma_star);
bool PruneDecisionRegPlus(double regret_lower_bound, double index_bound,
                          double epsilon, double gamma_star);
bool PruneDecisionRegM(double regret_lower_bound, double index_bound,
                       double epsilon);

struct IterationStats {
  int iteration = 0;
  std::int64_t marginal = 0;
  std::int64_t cumulative = 0;
  int active_before = 0;
  int active_after = 0;
  double min_bound = 0.0;  // over active indices, after the update phase
  double max_bound = 0.0;  // the uniform bound in uniform mode
  int we_pruned = 0;
  int regret_pruned = 0;
};

struct RunReport {
  PrunerConfig config;
  BoundBudget budget;
  SamplingSchedule schedule;
  TerminatedBy terminated_by = TerminatedBy::kScheduleExhausted;
  int iterations_run = 0;
  std::vector<PruneRecord> prune_records;       // in prune order
  std::vector<std::int32_t> record_of_index;    // per index; -1 if never
  EmpiricalGame empirical;
  std::int64_t profile_queries = 0;
  std::int64_t index_queries = 0;
  std::vector<IterationStats> iteration_stats;

  int CountPruned(PruneReason reason) const;
};

// Test seam: lets a scripted run replace the computed deviation bound of an
// index at an iteration.
struct PspHooks {
  std::function<double(int iteration, std::int64_t index_id,
                       double computed_bound)>
      bound_override;
};

RunReport RunPsp(UtilitySource& source, const GameShape& shape,
                 const SamplingSchedule& schedule, const BoundBudget& budget,
                 const PrunerConfig& config, const PspHooks& hooks = {});

RunReport RunPsp(const SimulatorSpec& spec, const SamplingSchedule& schedule,
                 const BoundBudget& budget, const PrunerConfig& config);

std::string ReportToJson(const RunReport& report);
void WriteReportJson(const RunReport& report, const std::string& path);

}  // namespace egta

#endif  // EGTA_PSP_HPP_
