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

#include "egta/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace egta {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void UtilityAccumulator::Add(double x) {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  sum_sq_dev += delta * (x - mean);
}

void UtilityAccumulator::Merge(const UtilityAccumulator& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double n = na + nb;
  const double delta = other.mean - mean;
  mean += delta * (nb / n);
  sum_sq_dev += other.sum_sq_dev + delta * delta * (na * nb / n);
  count += other.count;
}

double UtilityAccumulator::Variance() const {
  if (count < 2) {
    throw std::logic_error("sample variance needs at least two samples");
  }
  return sum_sq_dev / static_cast<double>(count - 1);
}

UtilityAccumulator TwoPointBatch(double center, double half_range,
                                 std::int64_t n_plus, std::int64_t n) {
  if (n < 0 || n_plus < 0 || n_plus > n) {
    throw std::invalid_argument("invalid two-point batch counts");
  }
  UtilityAccumulator acc;
  if (n == 0) return acc;
  const double dn = static_cast<double>(n);
  const double np = static_cast<double>(n_plus);
  const double nm = static_cast<double>(n - n_plus);
  acc.count = n;
  acc.mean = center + half_range * (np - nm) / dn;
  // Both support points sit at a fixed offset from the mean, so the sum of
  // squared deviations collapses to 4 h^2 n+ n- / n.
  acc.sum_sq_dev = 4.0 * half_range * half_range * np * nm / dn;
  return acc;
}

void BoundBudget::Validate() const {
  if (!(c >= 0.0)) throw std::invalid_argument("c must be >= 0");
  if (index_count < 1) throw std::invalid_argument("index_count must be >= 1");
  if (schedule_length < 1) {
    throw std::invalid_argument("schedule_length must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

double HoeffdingBound(double c, double failure, std::int64_t m) {
  if (m < 1) return kInf;
  return c * std::sqrt(std::log(2.0 / failure) /
                       (2.0 * static_cast<double>(m)));
}

double BennettBound(double c, double failure, double variance,
                    std::int64_t m) {
  if (variance < 0.0) throw std::invalid_argument("variance must be >= 0");
  if (m < 1) return kInf;
  const double dm = static_cast<double>(m);
  const double log_term = std::log(2.0 / failure);
  return c * log_term / (3.0 * dm) +
         std::sqrt(2.0 * variance * log_term / dm);
}

double EmpiricalBennettBound(double c, double failure, double sample_variance,
                             std::int64_t m) {
  if (sample_variance < 0.0) {
    throw std::invalid_argument("sample variance must be >= 0");
  }
  if (m < 2) return kInf;
  const double dm = static_cast<double>(m);
  const double log_term = std::log(3.0 / failure);
  const double kappa = 1.0 / 3.0 + 1.0 / (2.0 * log_term);
  const double c2l = c * c * log_term;
  const double variance_term = c2l / (dm - 1.0);
  const double eps_v =
      2.0 * c2l / (3.0 * dm) +
      std::sqrt(kappa * variance_term * variance_term +
                2.0 * c * c * sample_variance * log_term / dm);
  return c * log_term / (3.0 * dm) +
         std::sqrt(2.0 * (sample_variance + eps_v) * log_term / dm);
}

double Hoeffding(const BoundBudget& budget, std::int64_t m) {
  return HoeffdingBound(budget.c, budget.PerEvalDelta(), m);
}

double Bennett(const BoundBudget& budget, double variance, std::int64_t m) {
  return BennettBound(budget.c, budget.PerEvalDelta(), variance, m);
}

double EmpiricalBennett(const BoundBudget& budget,
                        const UtilityAccumulator& acc) {
  if (acc.count < 2) return kInf;
  return EmpiricalBennettBound(budget.c, budget.PerEvalDelta(),
                               acc.Variance(), acc.count);
}

double CombinedBound(const BoundBudget& budget,
                     const UtilityAccumulator& acc) {
  const double per_eval = budget.PerEvalDelta();
  if (acc.count < 2) return HoeffdingBound(budget.c, per_eval, acc.count);
  const double half = per_eval / 2.0;
  return std::min(
      HoeffdingBound(budget.c, half, acc.count),
      EmpiricalBennettBound(budget.c, half, acc.Variance(), acc.count));
}

}  // namespace egta
