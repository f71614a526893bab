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

#ifndef EGTA_EXPERIMENT_HPP_
#define EGTA_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "egta/psp.hpp"

namespace egta {

// gamma* given either absolutely or as a multiple of the target error
// ("0.4" vs "2eps").
struct GammaSpec {
  bool relative_to_eps = false;
  double value = 0.0;

  double Resolve(double eps) const {
    return relative_to_eps ? value * eps : value;
  }
};

struct AlgoSpec {
  Strategy strategy = Strategy::kWE;
  GammaSpec gamma;
};

struct ExperimentConfig {
  int actions = 40;
  double range_lo = -2.0;
  double range_hi = 2.0;
  double amplitude = 10.0;  // 0 disables noise
  double delta = 0.05;
  std::string eps_spec = "c/10";    // comma list, entries absolute or c/K,
                                    // or a sweep "c/K..c/L"
  std::string algos_spec = "ps-we";
  int runs = 10;
  std::uint64_t seed = 1;
  double beta = 1.1;
  std::string out;          // CSV path; empty keeps the table in memory
  bool ratio = false;
  bool verify = false;
  std::string reports_dir;  // when set, per-run RunReport JSON sidecars
  int mixed_profiles = 50;  // sampled profiles per mixed-containment check

  double RangeC() const;
  void Validate() const;
};

std::vector<double> ParseEpsSpec(const std::string& spec, double c);
std::vector<AlgoSpec> ParseAlgosSpec(const std::string& spec);

struct RunRow {
  double eps = 0.0;
  std::string algo;
  double gamma_star = 0.0;
  int run = 0;
  std::uint64_t seed = 0;
  std::int64_t profile_queries = 0;
  std::int64_t index_queries = 0;
  int we_pruned = 0;
  int regret_pruned = 0;
  TerminatedBy terminated_by = TerminatedBy::kAllPruned;
  int containment_ok = -1;  // -1 when verification did not run
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<RunRow> rows;  // (eps, algo, run) order
  std::string csv;
};

// One PSP run per (eps, algorithm, run) cell; per-run CSV rows plus
// mean/stdev aggregate rows per (eps, algorithm).
SweepResult RunSweep(const ExperimentConfig& config);

// Query-complexity ratios vs ps-we on shared game+noise per (eps, run);
// one aggregate CSV row per (eps, algorithm).
SweepResult RunRatioStudy(const ExperimentConfig& config);

// Shortest round-trip decimal form; used for all CSV numbers.
std::string FormatDouble(double v);

}  // namespace egta

#endif  // EGTA_EXPERIMENT_HPP_
