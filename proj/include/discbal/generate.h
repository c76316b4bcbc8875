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


// Seeded instance generators. Every row (or graph) draws from its own
// stream derived from (seed, index), so output does not depend on the
// number of worker threads.

#ifndef DISCBAL_GENERATE_H_
#define DISCBAL_GENERATE_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "discbal/core.h"

namespace discbal {

uint64_t SplitMix64(uint64_t x);
std::mt19937_64 StreamRng(uint64_t seed, uint64_t stream);

// m rows of exactly min(s, n) distinct elements each.
SetSystem GenerateSets(int n, int m, int s, uint64_t seed);

enum class WeightDist { kGaussian, kLognormal, kPowerLaw, kUniform };
WeightDist ParseWeightDist(const std::string& name);
std::string WeightDistName(WeightDist d);

// m rows with min(row_nnz, n) nonzeros each.
WeightedSystem GenerateWeighted(int n, int m, int row_nnz, WeightDist dist,
                                uint64_t seed);

struct LatticeInstance {
  WeightedSystem a;       // Entries in [0, 1].
  std::vector<double> p;  // About a fifth of the entries are exactly 0 or 1.
};

// Row supports are spread log-uniformly so that mu_i covers several decades.
LatticeInstance GenerateLattice(int n, int m, uint64_t seed);

// Simple d-regular graph by pairing stubs and repairing loops and repeated
// edges with random double-edge swaps. Requires n d even and d < n.
std::vector<std::pair<int, int>> GenerateRegularGraph(int n, int d,
                                                      uint64_t seed);

}  // namespace discbal

#endif  // DISCBAL_GENERATE_H_
