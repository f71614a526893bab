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

#ifndef EGTA_BOUNDS_HPP_
#define EGTA_BOUNDS_HPP_

#include <cstdint>

namespace egta {

// Streaming mean/variance over one utility index (Welford update, Chan
// merge). sum_sq_dev is the running sum of squared deviations from the mean.
struct UtilityAccumulator {
  std::int64_t count = 0;
  double mean = 0.0;
  double sum_sq_dev = 0.0;

  void Add(double x);
  void Merge(const UtilityAccumulator& other);

  // Unbiased sample variance; defined only for count >= 2.
  double Variance() const;
};

// Batch of n draws from the two-point distribution center +/- half_range,
// n_plus of them on the + side, folded into closed-form moments. Matches
// sequential accumulation of the same draws up to rounding.
UtilityAccumulator TwoPointBatch(double center, double half_range,
                                 std::int64_t n_plus, std::int64_t n);

// Failure-budget bookkeeping for a progressive-sampling run: each bound
// evaluation inside the loop is charged delta / (index_count * T).
struct BoundBudget {
  double c = 0.0;               // sup over profiles of the sample range
  std::int64_t index_count = 0;  // |I|
  std::int64_t schedule_length = 0;  // T
  double delta = 0.0;

  double PerEvalDelta() const {
    return delta / (static_cast<double>(index_count) *
                    static_cast<double>(schedule_length));
  }
  void Validate() const;
};

// Closed forms at an explicit failure probability. m < 1 (resp. m < 2 for
// the empirical form) yields +infinity, mirroring the loop's "eps-hat = inf"
// initialization.
double HoeffdingBound(double c, double failure, std::int64_t m);
double BennettBound(double c, double failure, double variance,
                    std::int64_t m);
double EmpiricalBennettBound(double c, double failure, double sample_variance,
                             std::int64_t m);

// The same bounds charged at the budget's per-evaluation failure
// probability.
double Hoeffding(const BoundBudget& budget, std::int64_t m);
double Bennett(const BoundBudget& budget, double variance, std::int64_t m);
double EmpiricalBennett(const BoundBudget& budget,
                        const UtilityAccumulator& acc);

// min(Hoeffding, EmpiricalBennett) with the per-evaluation budget split
// evenly between the two; for count < 2 the Hoeffding bound alone at the
// full budget.
double CombinedBound(const BoundBudget& budget,
                     const UtilityAccumulator& acc);

}  // namespace egta

#endif  // EGTA_BOUNDS_HPP_
