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

#include "egta/psp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace egta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1/3 + sqrt((4 + 2*sqrt(3)) / 3); the zero-variance sample-size floor of
// the empirical Bennett bound.
constexpr double kAlphaConstant = 1.9106836025229591;

double LogTerm(double factor, const BoundBudget& budget, double T) {
  return std::log(factor * static_cast<double>(budget.index_count) * T /
                  budget.delta);
}

std::int64_t CeilToInt64(double x) {
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

const char* StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kWE: return "ps-we";
    case Strategy::kReg0: return "ps-reg0";
    case Strategy::kReg: return "ps-reg";
    case Strategy::kRegPlus: return "ps-reg+";
    case Strategy::kRegM: return "ps-reg-m";
  }
  return "?";
}

Strategy StrategyFromName(const std::string& name) {
  if (name == "ps-we") return Strategy::kWE;
  if (name == "ps-reg0") return Strategy::kReg0;
  if (name == "ps-reg") return Strategy::kReg;
  if (name == "ps-reg+") return Strategy::kRegPlus;
  if (name == "ps-reg-m") return Strategy::kRegM;
  throw std::invalid_argument("unknown strategy: " + name);
}

BoundMode BoundModeFor(Strategy s) {
  switch (s) {
    case Strategy::kReg0:
    case Strategy::kReg:
      return BoundMode::kUniform;
    default:
      return BoundMode::kNonuniform;
  }
}

PrunerConfig PrunerConfig::Make(Strategy strategy, double epsilon,
                                double gamma_star) {
  PrunerConfig config{strategy, epsilon, gamma_star, BoundModeFor(strategy)};
  config.Validate();
  return config;
}

void PrunerConfig::Validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(gamma_star >= 0.0)) {
    throw std::invalid_argument("gamma_star must be >= 0");
  }
  const bool uses_gamma =
      strategy == Strategy::kReg || strategy == Strategy::kRegPlus;
  if (!uses_gamma && gamma_star != 0.0) {
    throw std::invalid_argument(
        "gamma_star applies only to ps-reg and ps-reg+");
  }
  if (bound_mode != BoundModeFor(strategy)) {
    throw std::invalid_argument("bound mode is fixed per strategy");
  }
}

void SamplingSchedule::Validate() const {
  if (marginals.empty() || marginals.size() != cumulatives.size()) {
    throw std::invalid_argument("schedule must have T >= 1 entries");
  }
  std::int64_t prev = 0;
  for (std::size_t t = 0; t < marginals.size(); ++t) {
    if (marginals[t] < 1 || cumulatives[t] != prev + marginals[t]) {
      throw std::invalid_argument("cumulative sizes must strictly increase");
    }
    prev = cumulatives[t];
  }
  if (static_cast<double>(prev) < omega) {
    throw std::invalid_argument("schedule must reach omega");
  }
}

SamplingSchedule BuildGeometricSchedule(const BoundBudget& budget,
                                        double epsilon, double beta) {
  budget.Validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(beta > 1.0)) throw std::invalid_argument("beta must be > 1");

  const double c = budget.c;
  SamplingSchedule schedule;
  schedule.beta = beta;

  if (c == 0.0) {
    // Degenerate range: any single sample is exact.
    schedule.marginals = {1};
    schedule.cumulatives = {1};
    return schedule;
  }

  // T appears inside alpha and omega only logarithmically; iterate to the
  // fixed point.
  int T = 1;
  double alpha = 0.0;
  double omega = 0.0;
  for (int round = 0; round < 64; ++round) {
    const double dT = static_cast<double>(T);
    alpha = kAlphaConstant * c * LogTerm(3.0, budget, dT) / epsilon;
    omega = c * c * LogTerm(2.0, budget, dT) / (2.0 * epsilon * epsilon);
    int next = 1;
    if (omega > alpha) {
      next = std::max(
          1, static_cast<int>(
                 std::ceil(std::log(omega / alpha) / std::log(beta))));
    }
    if (next == T) break;
    T = next;
  }
  schedule.alpha = alpha;
  schedule.alpha_prime = alpha;
  schedule.omega = omega;

  std::int64_t prev = 0;
  for (int t = 1; t <= T; ++t) {
    const std::int64_t target =
        CeilToInt64(alpha * std::pow(beta, static_cast<double>(t)));
    const std::int64_t cum = std::max(prev + 1, target);
    schedule.cumulatives.push_back(cum);
    schedule.marginals.push_back(cum - prev);
    prev = cum;
  }
  // The run's well-estimated check is min(Hoeffding, empirical Bennett)
  // with the per-evaluation budget split in half, so the final cumulative
  // size must cover the half-budget Hoeffding bound, not just omega.
  const double floor_final = std::max(
      omega, c * c * LogTerm(4.0, budget, static_cast<double>(T)) /
                 (2.0 * epsilon * epsilon));
  if (prev < CeilToInt64(floor_final)) {
    const std::int64_t last = CeilToInt64(floor_final);
    schedule.marginals.back() += last - prev;
    schedule.cumulatives.back() = last;
  }
  schedule.Validate();
  return schedule;
}

SamplingSchedule BuildHybridSchedule(const BoundBudget& budget,
                                     double epsilon, double beta) {
  SamplingSchedule geo = BuildGeometricSchedule(budget, epsilon, beta);
  if (budget.c == 0.0) return geo;

  const int t_we = geo.T();
  const int T = static_cast<int>(std::ceil(1.5 * static_cast<double>(t_we)));
  const double alpha_prime =
      kAlphaConstant * 2.0 * LogTerm(3.0, budget, static_cast<double>(T));
  if (alpha_prime >= geo.alpha) return geo;  // degenerate at large epsilon

  SamplingSchedule schedule;
  schedule.beta = beta;
  schedule.alpha = geo.alpha;
  schedule.alpha_prime = alpha_prime;
  schedule.hybrid = true;

  const int prefix = T - t_we;
  std::int64_t prev = 0;
  for (int i = 1; i <= prefix; ++i) {
    const double target =
        prefix == 1
            ? alpha_prime
            : alpha_prime + (geo.alpha - alpha_prime) *
                                static_cast<double>(i - 1) /
                                static_cast<double>(prefix - 1);
    const std::int64_t cum = std::max(prev + 1, CeilToInt64(target));
    schedule.cumulatives.push_back(cum);
    schedule.marginals.push_back(cum - prev);
    prev = cum;
  }
  for (std::int64_t g : geo.cumulatives) {
    const std::int64_t cum = std::max(prev + 1, g);
    schedule.cumulatives.push_back(cum);
    schedule.marginals.push_back(cum - prev);
    prev = cum;
  }

  const double c = budget.c;
  schedule.omega = c * c * LogTerm(2.0, budget, static_cast<double>(T)) /
                   (2.0 * epsilon * epsilon);
  const double floor_final = std::max(
      schedule.omega, c * c * LogTerm(4.0, budget, static_cast<double>(T)) /
                          (2.0 * epsilon * epsilon));
  if (prev < CeilToInt64(floor_final)) {
    const std::int64_t last = CeilToInt64(floor_final);
    schedule.marginals.back() += last - prev;
    schedule.cumulatives.back() = last;
  }
  schedule.Validate();
  return schedule;
}

BoundBudget BudgetFor(const SimulatorSpec& spec,
                      const SamplingSchedule& schedule, double delta) {
  BoundBudget budget{spec.c, spec.truth.num_indices(), schedule.T(), delta};
  budget.Validate();
  return budget;
}

EmpiricalGame EmpiricalGame::Make(const GameShape& shape) {
  EmpiricalGame emp;
  emp.shape = shape;
  emp.acc.assign(shape.num_indices, UtilityAccumulator{});
  emp.bound.assign(shape.num_indices, kInf);
  emp.pruned_iteration.assign(shape.num_indices, 0);
  return emp;
}

double EmpiricalGame::Mean(std::int64_t index_id) const {
  if (acc[index_id].count == 0) {
    throw std::invalid_argument("index has no samples");
  }
  return acc[index_id].mean;
}

NormalFormGame EmpiricalGame::MeanGame() const {
  std::vector<double> means(shape.num_indices);
  for (std::int64_t i = 0; i < shape.num_indices; ++i) means[i] = Mean(i);
  return NormalFormGame(shape.num_players, shape.strategy_counts,
                        std::move(means));
}

double EmpiricalPureRegret(const EmpiricalGame& emp, std::int64_t index_id) {
  const int player = static_cast<int>(index_id % emp.shape.num_players);
  const std::int64_t rank = index_id / emp.shape.num_players;
  const double own = emp.Mean(index_id);
  double best = -kInf;
  for (std::int64_t r : emp.shape.AdjacentRanks(player, rank)) {
    best = std::max(best, emp.Mean(emp.shape.IndexId(player, r)));
  }
  return best - own;
}

double RegretLowerBound(const EmpiricalGame& emp, std::int64_t index_id) {
  const int player = static_cast<int>(index_id % emp.shape.num_players);
  const std::int64_t rank = index_id / emp.shape.num_players;
  const double own_bound = emp.bound[index_id];
  if (std::isinf(own_bound)) return -kInf;
  double best = -kInf;
  for (std::int64_t r : emp.shape.AdjacentRanks(player, rank)) {
    const std::int64_t adj = emp.shape.IndexId(player, r);
    if (std::isinf(emp.bound[adj])) return -kInf;
    best = std::max(best, emp.Mean(adj) - emp.bound[adj]);
  }
  return best - (emp.Mean(index_id) + own_bound);
}

bool PruneDecisionWE(double bound, double epsilon) {
  return bound <= epsilon;
}

bool PruneDecisionReg0(double empirical_regret, double uniform_bound) {
  return empirical_regret >= 2.0 * uniform_bound;
}

bool PruneDecisionReg(double empirical_regret, double uniform_bound,
                      double epsilon, double gamma_star) {
  return empirical_regret >
         std::max(2.0 * uniform_bound, gamma_star + epsilon + uniform_bound);
}

bool PruneDecisionRegPlus(double regret_lower_bound, double index_bound,
                          double epsilon, double gamma_star) {
  return regret_lower_bound >
         std::max(0.0, gamma_star + epsilon - index_bound);
}

bool PruneDecisionRegM(double regret_lower_bound, double index_bound,
                       double epsilon) {
  return regret_lower_bound > epsilon + index_bound;
}

int RunReport::CountPruned(PruneReason reason) const {
  int n = 0;
  for (const PruneRecord& rec : prune_records) n += rec.reason == reason;
  return n;
}

RunReport RunPsp(UtilitySource& source, const GameShape& shape,
                 const SamplingSchedule& schedule, const BoundBudget& budget,
                 const PrunerConfig& config, const PspHooks& hooks) {
  schedule.Validate();
  budget.Validate();
  config.Validate();
  if (budget.schedule_length != schedule.T()) {
    throw std::runtime_error("budget schedule_length must match schedule T");
  }
  if (budget.index_count != shape.num_indices) {
    throw std::runtime_error("budget index_count must match the game");
  }

  RunReport report;
  report.config = config;
  report.budget = budget;
  report.schedule = schedule;
  report.empirical = EmpiricalGame::Make(shape);
  report.record_of_index.assign(shape.num_indices, -1);
  EmpiricalGame& emp = report.empirical;

  std::vector<std::uint8_t> active(shape.num_indices, 1);
  std::int64_t active_count = shape.num_indices;
  const bool uniform = config.bound_mode == BoundMode::kUniform;

  std::vector<BatchStats> batch;
  std::vector<int> players;
  std::vector<std::int64_t> we_prunes;
  std::vector<std::int64_t> regret_prunes;

  for (int t = 1; t <= schedule.T() && active_count > 0; ++t) {
    const std::int64_t m_t = schedule.marginals[t - 1];
    IterationStats stats;
    stats.iteration = t;
    stats.marginal = m_t;
    stats.cumulative = schedule.cumulatives[t - 1];
    stats.active_before = static_cast<int>(active_count);
    report.iterations_run = t;

    // Sampling phase: one simulator call per profile with active indices.
    for (std::int64_t rank = 0; rank < shape.num_profiles; ++rank) {
      players.clear();
      for (int p = 0; p < shape.num_players; ++p) {
        if (active[shape.IndexId(p, rank)]) players.push_back(p);
      }
      if (players.empty()) continue;
      source.SampleBatch(rank, players, m_t, batch);
      for (std::size_t k = 0; k < players.size(); ++k) {
        emp.acc[shape.IndexId(players[k], rank)].Merge(
            batch[k].AsAccumulator());
      }
    }

    // Bound phase: recompute deviation bounds of active indices.
    double max_bound = 0.0;
    double min_bound = kInf;
    for (std::int64_t i = 0; i < shape.num_indices; ++i) {
      if (!active[i]) continue;
      double b = CombinedBound(budget, emp.acc[i]);
      if (hooks.bound_override) b = hooks.bound_override(t, i, b);
      emp.bound[i] = b;
      max_bound = std::max(max_bound, b);
      min_bound = std::min(min_bound, b);
    }
    if (uniform) {
      for (std::int64_t i = 0; i < shape.num_indices; ++i) {
        if (active[i]) emp.bound[i] = max_bound;
      }
    }
    stats.min_bound = uniform ? max_bound : min_bound;
    stats.max_bound = max_bound;

    // Prune phase: decide against the fully updated state, then apply.
    we_prunes.clear();
    regret_prunes.clear();
    for (std::int64_t i = 0; i < shape.num_indices; ++i) {
      if (!active[i]) continue;
      const double b = emp.bound[i];
      if (PruneDecisionWE(b, config.epsilon)) {
        we_prunes.push_back(i);
        continue;
      }
      bool regret_pruned = false;
      switch (config.strategy) {
        case Strategy::kWE:
          break;
        case Strategy::kReg0:
          regret_pruned =
              PruneDecisionReg0(EmpiricalPureRegret(emp, i), max_bound);
          break;
        case Strategy::kReg:
          regret_pruned =
              PruneDecisionReg(EmpiricalPureRegret(emp, i), max_bound,
                               config.epsilon, config.gamma_star);
          break;
        case Strategy::kRegPlus:
          regret_pruned = PruneDecisionRegPlus(
              RegretLowerBound(emp, i), b, config.epsilon, config.gamma_star);
          break;
        case Strategy::kRegM:
          regret_pruned =
              PruneDecisionRegM(RegretLowerBound(emp, i), b, config.epsilon);
          break;
      }
      if (regret_pruned) regret_prunes.push_back(i);
    }
    const auto apply = [&](const std::vector<std::int64_t>& ids,
                           PruneReason reason) {
      for (std::int64_t i : ids) {
        active[i] = 0;
        emp.pruned_iteration[i] = t;
        report.record_of_index[i] =
            static_cast<std::int32_t>(report.prune_records.size());
        report.prune_records.push_back(PruneRecord{
            i, reason, t, schedule.cumulatives[t - 1], emp.bound[i],
            emp.acc[i].mean});
      }
    };
    apply(we_prunes, PruneReason::kWellEstimated);
    apply(regret_prunes, PruneReason::kRegret);
    active_count -=
        static_cast<std::int64_t>(we_prunes.size() + regret_prunes.size());

    stats.we_pruned = static_cast<int>(we_prunes.size());
    stats.regret_pruned = static_cast<int>(regret_prunes.size());
    stats.active_after = static_cast<int>(active_count);
    report.iteration_stats.push_back(stats);
  }

  report.terminated_by = active_count == 0 ? TerminatedBy::kAllPruned
                                           : TerminatedBy::kScheduleExhausted;
  report.profile_queries = source.ledger().profile_queries;
  report.index_queries = source.ledger().index_queries;
  return report;
}

RunReport RunPsp(const SimulatorSpec& spec, const SamplingSchedule& schedule,
                 const BoundBudget& budget, const PrunerConfig& config) {
  if (budget.c != spec.c || budget.index_count != spec.truth.num_indices()) {
    throw std::runtime_error("budget must match the simulator spec");
  }
  Simulator sim(spec);
  return RunPsp(sim, spec.truth.shape(), schedule, budget, config);
}

namespace {

const char* ReasonName(PruneReason r) {
  return r == PruneReason::kWellEstimated ? "well_estimated" : "regret";
}

}  // namespace

std::string ReportToJson(const RunReport& report) {
  nlohmann::json j;
  j["config"] = {
      {"strategy", StrategyName(report.config.strategy)},
      {"epsilon", report.config.epsilon},
      {"gamma_star", report.config.gamma_star},
      {"bound_mode", report.config.bound_mode == BoundMode::kUniform
                         ? "uniform"
                         : "nonuniform"},
  };
  j["budget"] = {
      {"c", report.budget.c},
      {"index_count", report.budget.index_count},
      {"schedule_length", report.budget.schedule_length},
      {"delta", report.budget.delta},
  };
  j["schedule"] = {
      {"marginals", report.schedule.marginals},
      {"cumulatives", report.schedule.cumulatives},
      {"beta", report.schedule.beta},
      {"alpha", report.schedule.alpha},
      {"alpha_prime", report.schedule.alpha_prime},
      {"omega", report.schedule.omega},
      {"hybrid", report.schedule.hybrid},
  };
  j["terminated_by"] = report.terminated_by == TerminatedBy::kAllPruned
                           ? "all_pruned"
                           : "schedule_exhausted";
  j["profile_queries"] = report.profile_queries;
  j["index_queries"] = report.index_queries;

  nlohmann::json records = nlohmann::json::array();
  for (const PruneRecord& rec : report.prune_records) {
    const UtilityIndex idx = report.empirical.shape.IndexFromId(rec.index_id);
    records.push_back({
        {"index_id", rec.index_id},
        {"player", idx.player},
        {"profile", idx.profile},
        {"reason", ReasonName(rec.reason)},
        {"iteration", rec.iteration},
        {"samples_at_prune", rec.samples_at_prune},
        {"bound_at_prune", rec.bound_at_prune},
        {"frozen_mean", rec.frozen_mean},
    });
  }
  j["prune_records"] = std::move(records);

  nlohmann::json iters = nlohmann::json::array();
  for (const IterationStats& s : report.iteration_stats) {
    iters.push_back({
        {"iteration", s.iteration},
        {"marginal", s.marginal},
        {"cumulative", s.cumulative},
        {"active_before", s.active_before},
        {"active_after", s.active_after},
        {"min_bound", s.min_bound},
        {"max_bound", s.max_bound},
        {"we_pruned", s.we_pruned},
        {"regret_pruned", s.regret_pruned},
    });
  }
  j["iterations"] = std::move(iters);

  std::vector<double> means, bounds;
  std::vector<std::int64_t> counts;
  for (std::int64_t i = 0; i < report.empirical.shape.num_indices; ++i) {
    means.push_back(report.empirical.acc[i].mean);
    counts.push_back(report.empirical.acc[i].count);
    bounds.push_back(report.empirical.bound[i]);
  }
  j["empirical"] = {
      {"players", report.empirical.shape.num_players},
      {"actions", report.empirical.shape.strategy_counts},
      {"means", means},
      {"counts", counts},
      {"bounds", bounds},
  };
  return j.dump();
}

void WriteReportJson(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << ReportToJson(report) << "\n";
}

}  // namespace egta
