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

#include "egta/experiment.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "egta/analysis.hpp"
#include "egta/rng.hpp"
#include "egta/simulator.hpp"
#include "json.hpp"

namespace egta {

namespace {

constexpr std::uint64_t kTagCell = 11;
constexpr std::uint64_t kTagSharedGame = 12;
constexpr std::uint64_t kTagVerify = 13;

std::vector<std::string> SplitCommas(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

double ParseNumber(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) {
    throw std::invalid_argument("bad number: " + text);
  }
  return v;
}

// "c/K" -> c / K; plain numbers pass through.
double ParseEpsEntry(const std::string& entry, double c) {
  if (entry.rfind("c/", 0) == 0) {
    const double k = ParseNumber(entry.substr(2));
    if (!(k > 0)) throw std::invalid_argument("bad eps divisor: " + entry);
    return c / k;
  }
  return ParseNumber(entry);
}

struct Cell {
  int eps_index = 0;
  int algo_index = 0;
  int run_index = 0;
};

struct CellOutcome {
  RunRow row;
  bool ok = false;
  std::string error;
};

struct VerdictSummary {
  bool ok = true;
  std::vector<std::pair<std::string, bool>> checks;

  void Record(const std::string& name, bool holds) {
    checks.emplace_back(name, holds);
    ok = ok && holds;
  }
};

VerdictSummary VerifyRun(const SimulatorSpec& spec, const RunReport& report,
                         const AlgoSpec& algo, double eps, double gamma_star,
                         std::uint64_t seed, int mixed_profiles) {
  VerdictSummary summary;
  if (report.terminated_by != TerminatedBy::kAllPruned) {
    summary.Record("all_pruned", false);
    return summary;
  }
  const NormalFormGame empirical = report.empirical.MeanGame();
  const NormalFormGame& truth = spec.truth;

  // Recall: every true PNE is an approximate empirical PNE.
  summary.Record("recall_g0",
                 CheckPureContainment(empirical, truth, 0.0, 2.0 * eps).holds);
  // Precision at the gamma values covered by the strategy's guarantee.
  std::vector<double> gammas;
  switch (algo.strategy) {
    case Strategy::kWE:
    case Strategy::kRegM:
      gammas = {0.0, eps, 2.0 * eps};
      break;
    case Strategy::kReg0:
      gammas = {0.0};
      break;
    case Strategy::kReg:
    case Strategy::kRegPlus:
      gammas = {0.0, gamma_star / 2.0, gamma_star};
      break;
  }
  for (double gamma : gammas) {
    summary.Record(
        "precision_g" + FormatDouble(gamma),
        CheckPureContainment(truth, empirical, gamma, 2.0 * eps).holds);
  }
  const std::uint64_t mixed_seed = rng::DeriveKey(seed, kTagVerify);
  if (algo.strategy == Strategy::kWE) {
    summary.Record(
        "mixed_we",
        CheckMixedContainmentSampled(truth, empirical, eps, mixed_profiles,
                                     mixed_seed, MixedRule::kWellEstimated)
            .holds);
  }
  if (algo.strategy == Strategy::kRegM) {
    summary.Record("lemma6_condition",
                   CheckLemma6Condition(truth, empirical, eps));
    summary.Record(
        "mixed_middle",
        CheckMixedContainmentSampled(truth, empirical, eps, mixed_profiles,
                                     mixed_seed, MixedRule::kMiddle)
            .holds);
  }
  return summary;
}

std::string SanitizeLabel(std::string label) {
  for (char& ch : label) {
    if (ch == '+') ch = 'p';
  }
  return label;
}

void RunParallel(int num_cells, const std::function<void(int)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      std::max(1, std::min<int>(num_cells, hw == 0 ? 1 : static_cast<int>(hw)));
  if (workers == 1) {
    for (int i = 0; i < num_cells; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= num_cells) return;
        body(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

double MeanOf(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double StdevOf(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = MeanOf(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

void WriteIfRequested(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

}  // namespace

double ExperimentConfig::RangeC() const {
  return (range_hi - range_lo) + (amplitude > 0.0 ? 2.0 * amplitude : 0.0);
}

void ExperimentConfig::Validate() const {
  if (actions < 1) throw std::invalid_argument("actions must be >= 1");
  if (!(range_lo < range_hi)) {
    throw std::invalid_argument("range must satisfy lo < hi");
  }
  if (!(amplitude >= 0.0)) {
    throw std::invalid_argument("amplitude must be >= 0");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (!(beta > 1.0)) throw std::invalid_argument("beta must be > 1");
  if (mixed_profiles < 1) {
    throw std::invalid_argument("mixed_profiles must be >= 1");
  }
}

std::vector<double> ParseEpsSpec(const std::string& spec, double c) {
  const std::size_t dots = spec.find("..");
  std::vector<double> eps;
  if (dots != std::string::npos) {
    // Sweep syntax "c/K..c/L" -> { c/K, c/(K+1), ..., c/L }.
    const std::string first = spec.substr(0, dots);
    const std::string last = spec.substr(dots + 2);
    if (first.rfind("c/", 0) != 0 || last.rfind("c/", 0) != 0) {
      throw std::invalid_argument("sweep syntax is c/K..c/L");
    }
    const double kd = ParseNumber(first.substr(2));
    const double ld = ParseNumber(last.substr(2));
    const int k = static_cast<int>(kd);
    const int l = static_cast<int>(ld);
    if (kd != k || ld != l || k < 1 || l < k) {
      throw std::invalid_argument("sweep bounds must be integers with K <= L");
    }
    for (int i = k; i <= l; ++i) eps.push_back(c / static_cast<double>(i));
  } else {
    for (const std::string& entry : SplitCommas(spec)) {
      eps.push_back(ParseEpsEntry(entry, c));
    }
  }
  for (double e : eps) {
    if (!(e > 0.0)) throw std::invalid_argument("eps values must be > 0");
  }
  return eps;
}

std::vector<AlgoSpec> ParseAlgosSpec(const std::string& spec) {
  std::vector<AlgoSpec> algos;
  for (const std::string& entry : SplitCommas(spec)) {
    AlgoSpec algo;
    const std::size_t colon = entry.find(':');
    const std::string name =
        colon == std::string::npos ? entry : entry.substr(0, colon);
    algo.strategy = StrategyFromName(name);
    if (colon != std::string::npos) {
      if (algo.strategy != Strategy::kReg &&
          algo.strategy != Strategy::kRegPlus) {
        throw std::invalid_argument("only ps-reg and ps-reg+ take gamma: " +
                                    entry);
      }
      std::string gamma = entry.substr(colon + 1);
      if (gamma.size() >= 3 && gamma.substr(gamma.size() - 3) == "eps") {
        algo.gamma.relative_to_eps = true;
        gamma = gamma.substr(0, gamma.size() - 3);
        algo.gamma.value = gamma.empty() ? 1.0 : ParseNumber(gamma);
      } else {
        algo.gamma.value = ParseNumber(gamma);
      }
      if (!(algo.gamma.value >= 0.0)) {
        throw std::invalid_argument("gamma must be >= 0: " + entry);
      }
    }
    algos.push_back(algo);
  }
  if (algos.empty()) throw std::invalid_argument("no algorithms given");
  return algos;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

namespace {

struct CellRunner {
  const ExperimentConfig& config;
  const std::vector<double>& eps_list;
  const std::vector<AlgoSpec>& algos;

  CellOutcome Run(const Cell& cell) const {
    CellOutcome outcome;
    try {
      const double eps = eps_list[cell.eps_index];
      const AlgoSpec& algo = algos[cell.algo_index];
      const double gamma = algo.gamma.Resolve(eps);

      // Game and noise are shared by every algorithm in this (eps, run)
      // slot; the sampling stream is the cell's own.
      const std::uint64_t shared_seed = rng::DeriveKey(
          rng::DeriveKey(rng::DeriveKey(config.seed, kTagSharedGame),
                         static_cast<std::uint64_t>(cell.eps_index)),
          static_cast<std::uint64_t>(cell.run_index));
      const std::uint64_t cell_seed = rng::DeriveKey(
          rng::DeriveKey(
              rng::DeriveKey(rng::DeriveKey(config.seed, kTagCell),
                             static_cast<std::uint64_t>(cell.eps_index)),
              static_cast<std::uint64_t>(cell.algo_index)),
          static_cast<std::uint64_t>(cell.run_index));

      NormalFormGame game = MakeRandomZeroSum(config.actions, config.range_lo,
                                              config.range_hi, shared_seed);
      NoiseModel noise = NoNoise();
      if (config.amplitude > 0.0) {
        noise = MakePaperNoise(game, shared_seed);
        noise.amplitude = config.amplitude;
      }
      SimulatorSpec spec =
          MakeSimulatorSpec(std::move(game), std::move(noise),
                            config.range_lo, config.range_hi, cell_seed);

      const BoundBudget proto{spec.c, spec.truth.num_indices(), 1,
                              config.delta};
      const SamplingSchedule schedule =
          algo.strategy == Strategy::kWE
              ? BuildGeometricSchedule(proto, eps, config.beta)
              : BuildHybridSchedule(proto, eps, config.beta);
      const BoundBudget budget = BudgetFor(spec, schedule, config.delta);
      const PrunerConfig pruner =
          PrunerConfig::Make(algo.strategy, eps, gamma);

      const auto start = std::chrono::steady_clock::now();
      const RunReport report = RunPsp(spec, schedule, budget, pruner);
      const auto elapsed = std::chrono::steady_clock::now() - start;

      RunRow row;
      row.eps = eps;
      row.algo = StrategyName(algo.strategy);
      row.gamma_star = gamma;
      row.run = cell.run_index;
      row.seed = cell_seed;
      row.profile_queries = report.profile_queries;
      row.index_queries = report.index_queries;
      row.we_pruned = report.CountPruned(PruneReason::kWellEstimated);
      row.regret_pruned = report.CountPruned(PruneReason::kRegret);
      row.terminated_by = report.terminated_by;
      VerdictSummary verdicts;
      if (config.verify) {
        verdicts = VerifyRun(spec, report, algo, eps, gamma, cell_seed,
                             config.mixed_profiles);
        row.containment_ok = verdicts.ok ? 1 : 0;
      }
      row.wall_ms =
          std::chrono::duration<double, std::milli>(elapsed).count();

      if (!config.reports_dir.empty()) {
        std::ostringstream name;
        name << config.reports_dir << "/run_e" << cell.eps_index << "_"
             << SanitizeLabel(row.algo) << "_r" << cell.run_index << ".json";
        nlohmann::json j = nlohmann::json::parse(ReportToJson(report));
        if (config.verify) {
          nlohmann::json v = nlohmann::json::object();
          for (const auto& [check, holds] : verdicts.checks) {
            v[check] = holds;
          }
          j["verdicts"] = std::move(v);
        }
        std::ofstream out(name.str());
        if (!out) {
          throw std::runtime_error("cannot open " + name.str() +
                                   " for writing");
        }
        out << j.dump() << "\n";
      }
      outcome.row = row;
      outcome.ok = true;
    } catch (const std::exception& err) {
      outcome.error = err.what();
    }
    return outcome;
  }
};

void AppendRow(std::ostringstream& csv, const RunRow& row) {
  csv << FormatDouble(row.eps) << ',' << row.algo << ','
      << FormatDouble(row.gamma_star) << ',' << row.run << ',' << row.seed
      << ',' << row.profile_queries << ',' << row.index_queries << ','
      << row.we_pruned << ',' << row.regret_pruned << ','
      << (row.terminated_by == TerminatedBy::kAllPruned
              ? "all_pruned"
              : "schedule_exhausted")
      << ',' << (row.containment_ok < 0 ? "" : std::to_string(row.containment_ok))
      << ',' << FormatDouble(row.wall_ms) << '\n';
}

void AppendAggregates(std::ostringstream& csv,
                      const std::vector<RunRow>& group) {
  std::vector<double> pq, iq, we, rp, wall;
  double terminated = 0.0;
  double contained = 0.0;
  bool verified = false;
  for (const RunRow& row : group) {
    pq.push_back(static_cast<double>(row.profile_queries));
    iq.push_back(static_cast<double>(row.index_queries));
    we.push_back(row.we_pruned);
    rp.push_back(row.regret_pruned);
    wall.push_back(row.wall_ms);
    terminated += row.terminated_by == TerminatedBy::kAllPruned;
    if (row.containment_ok >= 0) {
      verified = true;
      contained += row.containment_ok;
    }
  }
  const double n = static_cast<double>(group.size());
  const RunRow& head = group.front();
  csv << FormatDouble(head.eps) << ',' << head.algo << ','
      << FormatDouble(head.gamma_star) << ",mean,,"
      << FormatDouble(MeanOf(pq)) << ',' << FormatDouble(MeanOf(iq)) << ','
      << FormatDouble(MeanOf(we)) << ',' << FormatDouble(MeanOf(rp)) << ','
      << FormatDouble(terminated / n) << ','
      << (verified ? FormatDouble(contained / n) : "") << ','
      << FormatDouble(MeanOf(wall)) << '\n';
  csv << FormatDouble(head.eps) << ',' << head.algo << ','
      << FormatDouble(head.gamma_star) << ",stdev,,"
      << FormatDouble(StdevOf(pq)) << ',' << FormatDouble(StdevOf(iq)) << ','
      << FormatDouble(StdevOf(we)) << ',' << FormatDouble(StdevOf(rp))
      << ",,," << FormatDouble(StdevOf(wall)) << '\n';
}

constexpr const char* kCsvHeader =
    "eps,algo,gamma_star,run,seed,profile_queries,index_queries,we_pruned,"
    "regret_pruned,terminated_by,containment_ok,wall_ms\n";

}  // namespace

SweepResult RunSweep(const ExperimentConfig& config) {
  config.Validate();
  const double c = config.RangeC();
  const std::vector<double> eps_list = ParseEpsSpec(config.eps_spec, c);
  const std::vector<AlgoSpec> algos = ParseAlgosSpec(config.algos_spec);

  std::vector<Cell> cells;
  for (int ei = 0; ei < static_cast<int>(eps_list.size()); ++ei) {
    for (int ai = 0; ai < static_cast<int>(algos.size()); ++ai) {
      for (int ri = 0; ri < config.runs; ++ri) {
        cells.push_back(Cell{ei, ai, ri});
      }
    }
  }
  std::vector<CellOutcome> outcomes(cells.size());
  const CellRunner runner{config, eps_list, algos};
  RunParallel(static_cast<int>(cells.size()),
              [&](int i) { outcomes[i] = runner.Run(cells[i]); });
  for (const CellOutcome& outcome : outcomes) {
    if (!outcome.ok) throw std::runtime_error(outcome.error);
  }

  SweepResult result;
  std::ostringstream csv;
  csv << kCsvHeader;
  std::size_t i = 0;
  for (std::size_t group = 0; group < eps_list.size() * algos.size();
       ++group) {
    std::vector<RunRow> rows;
    for (int ri = 0; ri < config.runs; ++ri, ++i) {
      rows.push_back(outcomes[i].row);
      AppendRow(csv, rows.back());
      result.rows.push_back(rows.back());
    }
    AppendAggregates(csv, rows);
  }
  result.csv = csv.str();
  WriteIfRequested(config.out, result.csv);
  return result;
}

SweepResult RunRatioStudy(const ExperimentConfig& config) {
  config.Validate();
  const double c = config.RangeC();
  const std::vector<double> eps_list = ParseEpsSpec(config.eps_spec, c);
  std::vector<AlgoSpec> algos = ParseAlgosSpec(config.algos_spec);
  // ps-we is the baseline; pull it to the front, adding it if absent.
  int baseline = -1;
  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    if (algos[ai].strategy == Strategy::kWE) {
      baseline = static_cast<int>(ai);
      break;
    }
  }
  if (baseline < 0) {
    algos.insert(algos.begin(), AlgoSpec{Strategy::kWE, {}});
    baseline = 0;
  }

  std::vector<Cell> cells;
  for (int ei = 0; ei < static_cast<int>(eps_list.size()); ++ei) {
    for (int ai = 0; ai < static_cast<int>(algos.size()); ++ai) {
      for (int ri = 0; ri < config.runs; ++ri) {
        cells.push_back(Cell{ei, ai, ri});
      }
    }
  }
  std::vector<CellOutcome> outcomes(cells.size());
  const CellRunner runner{config, eps_list, algos};
  RunParallel(static_cast<int>(cells.size()),
              [&](int i) { outcomes[i] = runner.Run(cells[i]); });
  for (const CellOutcome& outcome : outcomes) {
    if (!outcome.ok) throw std::runtime_error(outcome.error);
  }
  const auto cell_at = [&](int ei, int ai, int ri) -> const RunRow& {
    const std::size_t idx =
        (static_cast<std::size_t>(ei) * algos.size() + ai) * config.runs + ri;
    return outcomes[idx].row;
  };

  SweepResult result;
  std::ostringstream csv;
  csv << "eps,algo,gamma_star,runs,ratio_mean,ratio_stdev\n";
  for (int ei = 0; ei < static_cast<int>(eps_list.size()); ++ei) {
    for (int ai = 0; ai < static_cast<int>(algos.size()); ++ai) {
      std::vector<double> ratios;
      for (int ri = 0; ri < config.runs; ++ri) {
        const RunRow& row = cell_at(ei, ai, ri);
        const RunRow& base = cell_at(ei, baseline, ri);
        ratios.push_back(static_cast<double>(row.profile_queries) /
                         static_cast<double>(base.profile_queries));
        result.rows.push_back(row);
      }
      const RunRow& head = cell_at(ei, ai, 0);
      csv << FormatDouble(head.eps) << ',' << head.algo << ','
          << FormatDouble(head.gamma_star) << ',' << config.runs << ','
          << FormatDouble(ai == baseline ? 1.0 : MeanOf(ratios)) << ','
          << FormatDouble(ai == baseline ? 0.0 : StdevOf(ratios)) << '\n';
    }
  }
  result.csv = csv.str();
  WriteIfRequested(config.out, result.csv);
  return result;
}

}  // namespace egta
