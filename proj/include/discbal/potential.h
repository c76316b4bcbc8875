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
// Sequential derandomization by a composite pessimistic estimator.
//
// For each active row i (positive squared norm) let
//   Delta_i  = tail_coeff * sqrt(norm_i * ln M),
//   lambda_i = Delta_i / (lambda_coeff * norm_i).
// After the first j columns are fixed the potential is
//   Pot_j = sum_i w_i Avg_ij / sum_i w_i Avg_i0
//         + 1/(2 m M) * sum_i (Up_ij / Up_i0 + Lo_ij / Lo_i0)
// with Avg_ij = (fixed prefix sum)^2 + (unfixed squared mass) and Up/Lo the
// products of (1 +- lambda a chi + (lambda a)^2) over fixed columns times
// (1 + (lambda a)^2) over unfixed ones. m counts active rows only. Pot_0 is
// 1 + 1/M and the greedy choice never increases it, which yields
//   sum_i w_i disc_i^2 <= (1 + 1/M) sum_i w_i norm_i   and   disc_i < Delta_i.

#ifndef DISCBAL_POTENTIAL_H_
#define DISCBAL_POTENTIAL_H_

#include <vector>

#include "discbal/core.h"

namespace discbal {

struct PotentialParams {
  double M = 0.0;  // 0 selects max(m, 2).
  double tail_coeff = 1000.0;
  double lambda_coeff = 100.0;
};

// Resolves M and throws InvalidInput unless the coefficients make the tail
// certificate valid for an instance with m rows.
PotentialParams ResolvePotentialParams(const PotentialParams& params, int m);

// tail_coeff * sqrt(norm * ln M).
double TailBound(double norm, const PotentialParams& resolved);

class SequentialDerandomizer {
 public:
  SequentialDerandomizer(const WeightedSystem& a, const ImportanceVector& imp,
                         const PotentialParams& params);

  int next_column() const { return next_; }
  bool done() const { return next_ == n_; }
  // Potential of the committed prefix, maintained incrementally.
  double potential() const { return pot_; }
  double initial_potential() const { return pot0_; }
  // Potential after fixing the next column to chi, without committing.
  double Branch(int chi) const;
  // +1 when Branch(+1) <= Branch(-1), else -1.
  int Choose() const;
  void Fix(int chi);
  // Recomputes the potential of the committed prefix from the row states.
  double FullPotential() const;
  // max_i ln(Up_i0), compared against (tail/lambda)^2 * ln M.
  double max_log_upper_initial() const { return max_log_up0_; }
  const Assignment& assignment() const { return chi_; }
  const PotentialParams& params() const { return params_; }

 private:
  double Slope(int col) const;

  const WeightedSystem& a_;
  ColumnIndex columns_;
  PotentialParams params_;
  int n_;
  int next_ = 0;
  std::vector<double> w_;       // Normalized importance, 0 on inactive rows.
  std::vector<double> lambda_;  // 0 on inactive rows.
  std::vector<double> prefix_;
  std::vector<double> rest_;
  std::vector<double> up_;      // Up_ij / Up_i0.
  std::vector<double> lo_;
  double avg_scale_ = 0.0;      // 1 / sum_i w_i norm_i.
  double tail_scale_ = 0.0;     // 1 / (2 m M).
  double pot_ = 0.0;
  double pot0_ = 0.0;
  double max_log_up0_ = 0.0;
  Assignment chi_;
};

struct SeqResult {
  Assignment chi;
  DiscReport report;  // bound holds Delta_i.
  PotentialParams params;
  double initial_potential = 0.0;
  double final_potential = 0.0;
  // sum_i w_i disc_i^2 and (1 + 1/M) sum_i w_i norm_i, same normalization.
  double weighted_square_sum = 0.0;
  double weighted_square_cap = 0.0;
};

SeqResult SeqDerandomize(const WeightedSystem& a, const ImportanceVector& imp,
                         const PotentialParams& params = {});
SeqResult SeqDerandomize(const WeightedSystem& a,
                         const PotentialParams& params = {});

}  // namespace discbal

#endif  // DISCBAL_POTENTIAL_H_
