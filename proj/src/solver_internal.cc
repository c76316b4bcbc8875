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

#include "solver_internal.h"

#include <algorithm>

#include "discbal/parallel.h"

namespace discbal::internal {

PotentialParams Params(const ConstantsProfile& profile, double m_bound) {
  return {std::max(m_bound, 2.0), profile.tail_coeff, profile.lambda_coeff};
}

WeightedSystem Mixture(const WeightedSystem& a, const Partition& p,
                       const Assignment& chi) {
  std::vector<Triple> t;
  std::vector<double> acc(p.num_parts(), 0.0);
  std::vector<int> touched;
  std::vector<char> seen(p.num_parts(), 0);
  for (int i = 0; i < a.num_rows(); ++i) {
    touched.clear();
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      const int l = p.part_of(c[k]);
      if (!seen[l]) {
        seen[l] = 1;
        touched.push_back(l);
      }
      acc[l] += v[k] * chi[c[k]];
    }
    std::sort(touched.begin(), touched.end());
    for (int l : touched) {
      t.push_back({i, l, acc[l]});
      acc[l] = 0.0;
      seen[l] = 0;
    }
  }
  return WeightedSystem::FromTriples(p.num_parts(), a.num_rows(), std::move(t));
}

void BalanceParts(const std::vector<Restricted<WeightedSystem>>& pieces,
                  const Partition& p, const std::vector<int>& which,
                  const std::vector<double>& log_imp,
                  const PotentialParams& params, Assignment& chi,
                  std::vector<double>& square_sums) {
  std::vector<SeqResult> results(which.size());
  ParallelFor(static_cast<int>(which.size()), [&](int k) {
    const auto& piece = pieces[which[k]];
    std::vector<double> local(piece.row_map.size());
    for (size_t r = 0; r < local.size(); ++r) local[r] = log_imp[piece.row_map[r]];
    results[k] = SeqDerandomize(piece.system,
                                ImportanceVector::FromLog(std::move(local)),
                                params);
  });
  for (size_t k = 0; k < which.size(); ++k) {
    const auto& piece = pieces[which[k]];
    const auto& part = p.part(which[k]);
    for (size_t j = 0; j < part.size(); ++j) chi[part[j]] = results[k].chi[j];
    for (size_t r = 0; r < piece.row_map.size(); ++r) {
      const double s = results[k].report.sdisc[r];
      square_sums[piece.row_map[r]] += s * s;
    }
  }
}

}  // namespace discbal::internal
