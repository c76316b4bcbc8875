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

// Balanced partitions of a ground set with respect to a family of sets.
//
// Split2 halves [n] with the sequential derandomizer run on the +-1 incidence
// matrix (the ground set is added as an extra row so the halves have equal
// size up to the same deviation). Multiway partitions recurse on the halves;
// their per-set caps are composed from the certified deviation of each split.

#ifndef DISCBAL_PARTITION_H_
#define DISCBAL_PARTITION_H_

#include <vector>

#include "discbal/core.h"
#include "discbal/potential.h"

namespace discbal {

// |S_i cap P_t| for every set and every part it meets, row by row.
struct IntersectionTable {
  std::vector<int64_t> offsets;
  std::vector<int> parts;
  std::vector<int> counts;

  int max_count(int i) const;
};
IntersectionTable ComputeIntersections(const SetSystem& sets,
                                       const Partition& p);

struct SplitResult {
  Partition partition;          // Two parts; part 0 holds chi = +1.
  std::vector<double> deviation;  // max(|S cap P_0|, |S cap P_1|) - |S| / 2.
  std::vector<double> cap;        // tail_coeff sqrt(|S| ln M) / 2 + |S| / k.
  double size_deviation = 0.0;
  double size_cap = 0.0;
  bool certified = false;
};

// k > 0 sets the additive |S| / k slack of the cap.
SplitResult Split2(const SetSystem& sets, double k,
                   const PotentialParams& params = {});

struct MultiwayResult {
  Partition partition;
  std::vector<int> max_count;      // max_t |S_i cap P_t|.
  std::vector<double> certified;   // Composed cap on max_t |S_i cap P_t|.
  int max_part = 0;
  double size_cap = 0.0;           // Composed cap on the part size.
  // Smallest C with certified_i <= (1 + eps)|S_i| / L + C ln(m_hat) / eps^2.
  double c_add = 0.0;
  bool certified_ok = false;       // Every measured count within its cap.
};

// L must be a power of two and eps lie in (0, 0.5].
MultiwayResult MultiwayUnweighted(const SetSystem& sets, int parts, double eps,
                                  const PotentialParams& params = {});

struct WeightedMultiwayResult {
  Partition partition;
  int num_buckets = 0;
  // Per row, max over parts of the measured quantity, and its composed cap.
  std::vector<int> max_support;
  std::vector<double> support_cap;
  std::vector<double> max_mass;
  std::vector<double> mass_cap;
  int max_part = 0;
  double size_cap = 0.0;
  // Additive constants relative to (1 + eps) / L times the total, in units of
  // ln(m_hat) / eps^2 (size, support) and of max_j a_ij^2 (mass).
  double size_add = 0.0;
  double support_add = 0.0;
  double mass_add = 0.0;
  bool certified_ok = false;
};

// Index k of the bucket (1 - eps/3)^{k+1} a_max^2 < a^2 <= (1 - eps/3)^k a_max^2.
int WeightBucket(double a2, double max2, double eps);

// eps in (0, 1]. An all-zero matrix yields a size-balanced partition.
WeightedMultiwayResult MultiwayWeighted(const WeightedSystem& a, int parts,
                                        double eps,
                                        const PotentialParams& params = {});

}  // namespace discbal

#endif  // DISCBAL_PARTITION_H_
