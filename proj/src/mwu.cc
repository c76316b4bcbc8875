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

#include "discbal/mwu.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace discbal {
namespace {

void CheckParams(double width, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw InvalidInput("epsilon must lie in (0, 0.5]");
  }
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw InvalidInput("width must be positive");
  }
}

}  // namespace

int64_t RequiredRounds(double width, double epsilon, double m) {
  CheckParams(width, epsilon);
  const double t = 9.0 * width * LogHat(m) / (epsilon * epsilon);
  // Absorb the last-ulp noise of ln() so exact products are not rounded up.
  return static_cast<int64_t>(std::ceil(t * (1.0 - 1e-12)));
}

MwuState::MwuState(int m, double width, double epsilon)
    : width_(width), epsilon_(epsilon), eta_(epsilon / (3.0 * width)) {
  CheckParams(width, epsilon);
  if (m < 1) throw InvalidInput("need at least one constraint");
  imp_ = ImportanceVector::Uniform(m);
  lin_.assign(m, 1.0);
  gap_sums_.assign(m, 0.0);
}

double MwuState::log_total() const { return ref_ + std::log(PairwiseSum(lin_)); }

const ImportanceVector& MwuState::importance() const {
  if (imp_stale_) {
    std::vector<double> lw(lin_.size());
    for (size_t i = 0; i < lw.size(); ++i) lw[i] = ref_ + std::log(lin_[i]);
    imp_ = ImportanceVector::FromLog(std::move(lw));
    imp_stale_ = false;
  }
  return imp_;
}

void MwuState::Update(const std::vector<double>& gaps) {
  const int m = num_constraints();
  if (static_cast<int>(gaps.size()) != m) {
    throw InvalidInput("gap vector length mismatch");
  }
  for (int i = 0; i < m; ++i) {
    if (!(gaps[i] >= -1e-12 * width_ && gaps[i] <= width_ * (1.0 + 1e-12))) {
      throw ContractViolation("gap " + std::to_string(gaps[i]) +
                              " of constraint " + std::to_string(i) +
                              " outside [0, W]");
    }
  }
  std::vector<double> wg(m);
  for (int i = 0; i < m; ++i) wg[i] = lin_[i] * std::max(gaps[i], 0.0);
  const double lhs = PairwiseSum(wg);
  const double rhs = PairwiseSum(lin_);
  if (lhs > rhs * (1.0 + 1e-9)) {
    throw ContractViolation("oracle inequality violated: " +
                            std::to_string(lhs) + " > " + std::to_string(rhs));
  }
  double top = 0.0;
  for (int i = 0; i < m; ++i) {
    const double g = std::max(gaps[i], 0.0);
    lin_[i] *= 1.0 + eta_ * g;
    top = std::max(top, lin_[i]);
    gap_sums_[i] += g;
  }
  // Weights only grow; fold the common factor back in before overflow.
  if (top > 1e100) {
    for (double& x : lin_) x /= top;
    ref_ += std::log(top);
  }
  imp_stale_ = true;
  ++rounds_;
  const double cap = std::log(static_cast<double>(m)) + eta_ * rounds_;
  if (log_total() > cap + 1e-9 * std::max(1.0, std::abs(cap))) {
    throw ContractViolation("total importance exceeds m * exp(eta * t)");
  }
}

std::vector<double> MwuState::Averages() const {
  if (rounds_ == 0) throw StaleError("no rounds played");
  std::vector<double> avg(gap_sums_.size());
  for (size_t i = 0; i < avg.size(); ++i) avg[i] = gap_sums_[i] / rounds_;
  return avg;
}

MwuCertificate MwuState::Certify() const {
  MwuCertificate c;
  c.required = RequiredRounds(width_, epsilon_, num_constraints());
  c.rounds = rounds_;
  if (rounds_ < c.required || rounds_ == 0) {
    throw StaleError("certificate requested after " + std::to_string(rounds_) +
                     " of " + std::to_string(c.required) + " rounds");
  }
  c.averages = Averages();
  for (double a : c.averages) c.max_average = std::max(c.max_average, a);
  c.pass = c.max_average <= 1.0 + epsilon_;
  return c;
}

}  // namespace discbal
