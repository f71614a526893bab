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

#ifndef EGTA_TESTS_SUPPORT_HPP_
#define EGTA_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "egta/bounds.hpp"
#include "egta/game.hpp"
#include "egta/psp.hpp"
#include "egta/simulator.hpp"

namespace egta::testing {

// Utility source that replays prescribed per-index draw sequences; used to
// force exact empirical trajectories.
class ScriptedSource : public UtilitySource {
 public:
  ScriptedSource(GameShape shape,
                 std::vector<std::vector<double>> draws_per_index)
      : shape_(std::move(shape)), draws_(std::move(draws_per_index)) {
    ledger_.index_samples.assign(shape_.num_indices, 0);
  }

  void SampleBatch(std::int64_t profile_rank, const std::vector<int>& players,
                   std::int64_t count, std::vector<BatchStats>& out) override {
    out.resize(players.size());
    for (std::size_t k = 0; k < players.size(); ++k) {
      const std::int64_t idx = shape_.IndexId(players[k], profile_rank);
      UtilityAccumulator acc;
      for (std::int64_t j = 0; j < count; ++j) {
        const std::size_t pos =
            static_cast<std::size_t>(ledger_.index_samples[idx] + j);
        if (pos >= draws_[idx].size()) {
          throw std::out_of_range("scripted draws exhausted");
        }
        acc.Add(draws_[idx][pos]);
      }
      out[k] = BatchStats{acc.count, acc.mean, acc.sum_sq_dev};
      ledger_.index_samples[idx] += count;
      ledger_.index_queries += count;
    }
    ledger_.profile_queries += count;
  }

  const QueryLedger& ledger() const override { return ledger_; }

 private:
  GameShape shape_;
  std::vector<std::vector<double>> draws_;
  QueryLedger ledger_;
};

// The ps-reg0 counterexample, scripted: a (2,1)-action game with
// u_A = (2, 1), empirical means (2.5, 1.45) after iteration 1 and
// u-hat_A(a1, b) = 1.8 after iteration 2, uniform bounds 0.5 then 0.2.
struct CounterexampleTrace {
  NormalFormGame truth = NormalFormGame(2, {2, 1}, {2, 0, 1, 0});
  SamplingSchedule schedule;
  BoundBudget budget{4.0, 4, 2, 0.05};
  double epsilon = 0.2;

  CounterexampleTrace() {
    schedule.marginals = {1, 1};
    schedule.cumulatives = {1, 2};
    schedule.beta = 1.1;
    schedule.omega = 0.0;  // hand schedule; no omega requirement
  }

  RunReport Run(const PrunerConfig& config) const {
    // Index ids: 0 = (A, (a1,b)), 1 = (B, (a1,b)), 2 = (A, (a2,b)),
    // 3 = (B, (a2,b)).
    std::vector<std::vector<double>> draws = {
        {2.5, 1.1},   // mean 2.5, then (2.5 + 1.1) / 2 = 1.8
        {0.0, 0.0},
        {1.45, 1.45},
        {0.0, 0.0},
    };
    ScriptedSource source(truth.shape(), std::move(draws));
    PspHooks hooks;
    hooks.bound_override = [](int iteration, std::int64_t, double) {
      return iteration == 1 ? 0.5 : 0.2;
    };
    return RunPsp(source, truth.shape(), schedule, budget, config, hooks);
  }
};

}  // namespace egta::testing

#endif  // EGTA_TESTS_SUPPORT_HPP_
