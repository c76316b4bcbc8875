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

// Partitions that isolate the elements of small weighted sets.
//
// SubsetSelect fixes a random subset (inclusion probability p) element by
// element against a sum of Chernoff estimators, one upper and one lower tail
// per (set, deviation, importance) triple. PickSparseSubset uses it to pick a
// subset meeting every small set in at most one element in the weighted
// sense. CollisionPartition spreads a subset over T parts greedily against a
// potential counting same-part pairs. IsolationPartition combines these into
// a coarse partition balanced on big sets and a fine refinement in which
// elements of small sets rarely share a part.

#ifndef DISCBAL_ISOLATE_H_
#define DISCBAL_ISOLATE_H_

#include <vector>

#include "discbal/core.h"
#include "discbal/profile.h"

namespace discbal {

// A set of ground elements with a log-importance.
struct WeightedSet {
  std::vector<int> elems;
  double log_imp = 0.0;
};

struct SelectTriple {
  std::vector<int> elems;
  double delta = 0.0;
  double log_imp = 0.0;
};

struct SubsetSelectResult {
  std::vector<int> subset;
  std::vector<bool> bad;  // u + l >= 1 at the end.
  // Weights below are scaled so that the largest importance is 1.
  double certificate = 0.0;  // sum_C imp_C (u_C + l_C) before any choice.
  double final_potential = 0.0;
  double bad_weight = 0.0;
};

// Triple elements must be distinct members of `ground`. Requires
// delta_C >= 0.5 p |S_C| for every triple.
SubsetSelectResult SubsetSelect(const std::vector<int>& ground, double p,
                                const std::vector<SelectTriple>& triples);

struct PickResult {
  std::vector<int> subset;
  int k_used = 0;
  int retries = 0;
  // sum_i imp_i (1 + delta)^{max(0, |R' cap S_i| - 1)} / sum_i imp_i.
  double inflation = 1.0;
};

// Sets must be subsets of `ground` of size at most k.
PickResult PickSparseSubset(const std::vector<int>& ground, int k,
                            const std::vector<WeightedSet>& sets,
                            double sparse_delta, double delta);

struct CollisionResult {
  std::vector<std::vector<int>> parts;  // Nonempty parts, ground ids.
  double initial_potential = 2.0;
  double final_potential = 0.0;
  bool monotone = true;  // The potential never increased.
  // sum_S imp_S sum_t C(|S cap Q_t|, 2) and its cap (2/T) sum imp_S C(|S|, 2).
  double weighted_pairs = 0.0;
  double pair_cap = 0.0;
  int max_part = 0;
  double size_cap = 0.0;  // 1 + log2 T + 2 |R| / T.
};

// Greedy T-way split of `ground` (taken in the given order).
CollisionResult CollisionPartition(const std::vector<int>& ground, int parts,
                                   const std::vector<WeightedSet>& sets);

// The collision potential after the first `assigned.size()` elements of
// `ground` were placed in parts assigned[0..].
double CollisionPotential(const std::vector<int>& ground, int parts,
                          const std::vector<WeightedSet>& sets,
                          const std::vector<int>& assigned);

struct ChunkedResult {
  std::vector<std::vector<int>> parts;
  // sum_i imp_i sum_t max(|S_i cap Q_t| - 1, 0) relative to sum_i imp_i.
  double collision_mass = 0.0;
  double collision_cap = 0.0;  // 1 / k.
  int max_part = 0;
};

ChunkedResult ChunkedCollisionPartition(const std::vector<int>& ground, int k,
                                        const std::vector<WeightedSet>& sets,
                                        const ConstantsProfile& profile,
                                        double n_times_m);

struct SampleResult {
  std::vector<int> sampled;
  std::vector<std::vector<int>> parts;
  std::vector<int> collisions;  // Per set: sum_t max(|S cap Q_t| - 1, 0).
  int pick_retries = 0;
};

SampleResult SamplePartition(const std::vector<int>& ground, int k,
                             const std::vector<WeightedSet>& sets,
                             const ConstantsProfile& profile,
                             double n_times_m);

struct RefineResult {
  std::vector<std::vector<int>> parts;
  std::vector<int> collisions;
  int rounds = 0;
  double round_cap = 0.0;  // ceil(k ln^2 n).
};

// Repeats SamplePartition on the residue until every element is placed.
// Importance is multiplied by (1 + delta)^{collisions} after each round.
RefineResult RefinePart(const std::vector<int>& ground, int k,
                        const std::vector<WeightedSet>& sets,
                        const ConstantsProfile& profile, double n_times_m);

struct IsolationChecks {
  int coarse_parts = 0;
  double coarse_target = 0.0;
  bool coarse_ok = false;     // Power of two not exceeding max(target, 1).
  int fine_parts = 0;
  bool fine_count_ok = false;  // fine_parts <= n / 2 (or n <= 1).
  int merges = 0;              // Fallback merges to reach n / 2.
  bool refinement_ok = false;
  double split_ratio = 0.0;    // max over B of max_t |B cap P_t| / cap_B.
  double split_cap = 1.0;
  double split_balance = 0.0;  // max over B of max_t |B cap P_t| T_P / |B|.
  int max_fine = 0;
  double fine_cap = 0.0;
  double inflation = 1.0;     // sum imp (1+delta)^coll / sum imp.
  double inflation_cap = 1.0;  // 1 + 1 / isolation_inflation_slack(n).
  bool AllOk() const;
};

struct IsolationResult {
  Partition coarse;
  Partition fine;
  std::vector<int> coarse_of_fine;
  std::vector<int> collisions;  // Per small set, over the final fine parts.
  IsolationChecks checks;
};

// `big` sets only steer the coarse split; `small` sets are isolated by the
// fine refinement. m_bound is the M of the size thresholds (n M).
IsolationResult IsolationPartition(int n, const std::vector<WeightedSet>& small,
                                   const std::vector<std::vector<int>>& big,
                                   const ConstantsProfile& profile,
                                   double m_bound);

}  // namespace discbal

#endif  // DISCBAL_ISOLATE_H_
