// Copyright 2026 The discbal Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive discrepancy solvers built from the derandomizer, pairwise seeds,
// multiplicative weights, balanced partitions and isolation partitions.
//
// Every solver returns the assignment together with a per-row certificate
// composed from the certified bounds of the calls it made, so that
// report.Certified() can be checked on the output. Telemetry records the
// measured constants of each stage.

#ifndef DISCBAL_SOLVER_H_
#define DISCBAL_SOLVER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "discbal/core.h"
#include "discbal/isolate.h"
#include "discbal/profile.h"
#include "json.hpp"

namespace discbal {

struct SolveResult {
  Assignment chi;
  DiscReport report;  // bound holds the per-row certificate.
  nlohmann::json telemetry;
};

// L ~ sqrt(n) parts, each balanced on its own, then one more balancing of
// the per-part sums.
SolveResult WarmupSqrt(const SetSystem& sets, const ConstantsProfile& profile);

// Same shape with T groups of parts whose importance is coupled through
// multiplicative weights, eps = 1 / (10 ln m).
SolveResult WarmupSqrtOptimal(const SetSystem& sets,
                              const ConstantsProfile& profile);

struct CreatorResult {
  Partition partition;   // L parts of the columns.
  Assignment chi_bar;    // Signs inside each part.
  WeightedSystem mixture;  // m x L, a'_{il} = sum_{j in P_l} a_ij chi_bar_j.
  double variance_ratio = 0.0;  // max_i sum_l a'_il^2 / Delta.
  double variance_cap = 0.0;    // 1 + 1 / (10 ln^2 n).
  double spread_const = 0.0;    // max a'^2 L / (Delta ln(nm)).
  nlohmann::json telemetry;
};

// Reduces n columns to L by balancing inside parts, with MWU over groups of
// parts. Requires every row norm to be at most delta.
CreatorResult RecursionCreator(const WeightedSystem& a, double delta,
                               const ConstantsProfile& profile);

// Rows with squared norm at most delta; recurses until the base size and
// lifts the signs back. The certificate is the tail bound of the base
// instance, which carries the same signed sums as the input.
SolveResult SolveBalancedWeights(const WeightedSystem& a, double delta,
                                 const ConstantsProfile& profile);

// Set balancing with max-disc O(sqrt(s ln m)).
SolveResult SolveUnweighted(const SetSystem& sets,
                            const ConstantsProfile& profile);

// Integer matrix used by the weighted recursion.
struct IntSystem {
  int n = 0;
  std::vector<int64_t> offsets = {0};
  std::vector<int> cols;
  std::vector<int64_t> vals;

  int num_rows() const { return static_cast<int>(offsets.size()) - 1; }
  WeightedSystem ToWeighted() const;
};

struct WeightedStepResult {
  Partition fine;                     // T_Q parts of the columns.
  Assignment chi_bar;
  std::vector<std::vector<int>> col;  // Per row, isolated columns.
  nlohmann::json telemetry;
  // Families handed to IsolationPartition and its result.
  std::vector<WeightedSet> isolation_small;
  std::vector<std::vector<int>> isolation_big;
  IsolationResult isolation;
};

// Called once per recursion level with the step that produced it. The
// isolation fields are released after the call.
using StepObserver = std::function<void(int level, const WeightedStepResult&)>;

// One reduction step: isolation partition, MWU-coupled balancing of the
// medium and large buckets inside fine parts, and the collision sets.
// budgets bound the number of columns a row may isolate.
WeightedStepResult MwuWeightedStep(const IntSystem& a,
                                   const std::vector<int64_t>& budgets,
                                   const ConstantsProfile& profile);

struct RecursiveResult {
  Assignment chi;
  // Per row: isolated blocks as (level, column) pairs with their integer
  // coefficient at that level.
  struct Block {
    int level;
    int column;
    int64_t coeff;
  };
  std::vector<std::vector<Block>> blocks;
  std::vector<double> base_norm;    // Squared norm of the base-level row.
  std::vector<int64_t> base_sdisc;  // Signed sum on the base level.
  double base_log_m = 0.0;
  nlohmann::json telemetry;
};

RecursiveResult SolveWeightedRecursive(const IntSystem& a,
                                       std::vector<int64_t> budgets,
                                       const ConstantsProfile& profile,
                                       const StepObserver& observer = {});

// Real matrix balancing with max-disc O(sqrt(sum_j a_ij^2 ln m)) per row.
SolveResult SolveWeighted(const WeightedSystem& a,
                          const ConstantsProfile& profile,
                          const StepObserver& observer = {});

}  // namespace discbal

#endif  // DISCBAL_SOLVER_H_
