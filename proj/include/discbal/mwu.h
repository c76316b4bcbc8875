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

// Multiplicative weights over m constraints. Each round an oracle reports
// gaps in [0, W] whose importance-weighted mean is at most 1; importance is
// updated as imp_i <- imp_i * (1 + eta * gap_i) with eta = eps / (3 W).
// After RequiredRounds() rounds every per-constraint average gap is at most
// 1 + eps.

#ifndef DISCBAL_MWU_H_
#define DISCBAL_MWU_H_

#include <cstdint>
#include <vector>

#include "discbal/core.h"

namespace discbal {

// ceil(9 W ln(m_hat) / eps^2).
int64_t RequiredRounds(double width, double epsilon, double m);

struct MwuCertificate {
  std::vector<double> averages;
  double max_average = 0.0;
  int64_t rounds = 0;
  int64_t required = 0;
  bool pass = false;  // max_average <= 1 + eps.
};

class MwuState {
 public:
  // Throws InvalidInput unless m >= 1, width > 0 and eps in (0, 0.5].
  MwuState(int m, double width, double epsilon);

  int num_constraints() const { return static_cast<int>(gap_sums_.size()); }
  double width() const { return width_; }
  double epsilon() const { return epsilon_; }
  double eta() const { return eta_; }
  int64_t rounds() const { return rounds_; }
  // Log-domain importance, rebuilt from the linear weights on demand.
  const ImportanceVector& importance() const;
  // Linear importance up to a common positive factor.
  const std::vector<double>& weights() const { return lin_; }
  // ln(sum_i imp_i).
  double log_total() const;

  // Checks gap ranges, the oracle inequality and the total-weight invariant,
  // then applies the update. Throws ContractViolation on any failure.
  void Update(const std::vector<double>& gaps);

  // Average gap per constraint so far; throws StaleError before any round.
  std::vector<double> Averages() const;
  // Throws StaleError before RequiredRounds() rounds have been played.
  MwuCertificate Certify() const;

 private:
  double width_;
  double epsilon_;
  double eta_;
  int64_t rounds_ = 0;
  double ref_ = 0.0;          // ln of the factor dropped from lin_.
  std::vector<double> lin_;
  mutable ImportanceVector imp_;
  mutable bool imp_stale_ = false;
  std::vector<double> gap_sums_;
};

}  // namespace discbal

#endif  // DISCBAL_MWU_H_
