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


// Helpers shared by the solver translation units.

#ifndef DISCBAL_SRC_SOLVER_INTERNAL_H_
#define DISCBAL_SRC_SOLVER_INTERNAL_H_

#include <vector>

#include "discbal/core.h"
#include "discbal/potential.h"
#include "discbal/profile.h"

namespace discbal::internal {

// M = max(m_bound, 2) with the profile's tail coefficients.
PotentialParams Params(const ConstantsProfile& profile, double m_bound);

// a'_{il} = sum_{j in P_l} a_ij chi_j.
WeightedSystem Mixture(const WeightedSystem& a, const Partition& p,
                       const Assignment& chi);

// Runs the derandomizer inside each listed part. log_imp is per row of the
// parent system. Writes the signs into chi and adds the squared signed part
// sums into square_sums.
void BalanceParts(const std::vector<Restricted<WeightedSystem>>& pieces,
                  const Partition& p, const std::vector<int>& which,
                  const std::vector<double>& log_imp,
                  const PotentialParams& params, Assignment& chi,
                  std::vector<double>& square_sums);

}  // namespace discbal::internal

#endif  // DISCBAL_SRC_SOLVER_INTERNAL_H_
