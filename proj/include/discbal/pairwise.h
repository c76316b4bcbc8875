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

// Pairwise-independent signs from a k-bit seed, k = ceil(log2(n + 1)).
// Element j is labelled b_j = j + 1 and gets chi_j = (-1)^{<seed, b_j>}.
// Distinct nonzero labels make the signs pairwise independent, so the mean
// over all seeds of sum_i w_i sdisc_i^2 equals sum_i w_i |S_i|; the seed with
// the smallest objective is found by exhaustive search.

#ifndef DISCBAL_PAIRWISE_H_
#define DISCBAL_PAIRWISE_H_

#include <cstdint>
#include <vector>

#include "discbal/core.h"

namespace discbal {

int PairwiseSeedBits(int n);
Assignment PairwiseSigns(int n, uint64_t seed);

// sum_i w_i sdisc_i(seed)^2 for every seed in [0, 2^k), with w the
// normalized importance.
std::vector<double> PairwiseObjectives(const SetSystem& sets,
                                       const ImportanceVector& imp);

struct PairwiseResult {
  uint64_t seed = 0;
  int seed_bits = 0;
  Assignment chi;
  double objective = 0.0;       // At the chosen seed.
  double mean_objective = 0.0;  // sum_i w_i |S_i|.
};

// Argmin over all seeds; the lowest seed wins ties.
PairwiseResult PairwiseBalance(const SetSystem& sets,
                               const ImportanceVector& imp);

}  // namespace discbal

#endif  // DISCBAL_PAIRWISE_H_
