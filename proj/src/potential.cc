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
#include "discbal/potential.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace discbal {

PotentialParams ResolvePotentialParams(const PotentialParams& params, int m) {
  PotentialParams p = params;
  const double floor_m = std::max(static_cast<double>(m), 2.0);
  if (p.M == 0.0) p.M = floor_m;
  if (!(p.M >= floor_m) || !std::isfinite(p.M)) {
    throw InvalidInput("potential M must be at least max(m, 2)");
  }
  if (!(p.tail_coeff > 0.0) || !(p.lambda_coeff >= 4.0)) {
    throw InvalidInput("tail_coeff must be positive and lambda_coeff >= 4");
  }
  // Up_n / Up_0 >= M^E whenever a row reaches Delta: light entries give
  // exp(lambda Delta (1 - 2/c_l)), at most 4 (c_t/c_l)^2 ln M heavy entries
  // lose a factor 3/4 each, and Up_0 <= M^{(c_t/c_l)^2}.
  const double ct = p.tail_coeff;
  const double cl = p.lambda_coeff;
  const double exponent =
      ct * ct / cl * (1.0 - 2.0 / cl) -
      (ct / cl) * (ct / cl) * (1.0 + 4.0 * std::log(4.0 / 3.0));
  const double need = std::log(2.0 * floor_m * p.M * (1.0 + 1.0 / p.M));
  if (!(exponent * std::log(p.M) > need)) {
    throw InvalidInput("tail_coeff " + std::to_string(ct) + " / lambda_coeff " +
                       std::to_string(cl) +
                       " do not certify the tail bound");
  }
  return p;
}

double TailBound(double norm, const PotentialParams& resolved) {
  return resolved.tail_coeff * std::sqrt(norm * std::log(resolved.M));
}

SequentialDerandomizer::SequentialDerandomizer(const WeightedSystem& a,
                                               const ImportanceVector& imp,
                                               const PotentialParams& params)
    : a_(a),
      columns_(a),
      params_(ResolvePotentialParams(params, a.num_rows())),
      n_(a.n()) {
  const int m = a.num_rows();
  if (imp.size() != m) throw InvalidInput("importance length mismatch");
  w_ = imp.Normalized();
  lambda_.assign(m, 0.0);
  prefix_.assign(m, 0.0);
  rest_ = a.row_norms();
  up_.assign(m, 0.0);
  lo_.assign(m, 0.0);
  int active = 0;
  std::vector<double> mass(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (a.row_norm(i) > 0.0) {
      ++active;
      mass[i] = w_[i] * a.row_norm(i);
    } else {
      w_[i] = 0.0;
    }
  }
  double z = PairwiseSum(mass);
  if (active > 0 && !(z > 0.0)) {
    // Importance vanishes on every active row: fall back to uniform.
    for (int i = 0; i < m; ++i) {
      w_[i] = a.row_norm(i) > 0.0 ? 1.0 : 0.0;
      mass[i] = w_[i] * a.row_norm(i);
    }
    z = PairwiseSum(mass);
  }
  const double log_m = std::log(params_.M);
  if (active > 0) {
    avg_scale_ = 1.0 / z;
    tail_scale_ = 1.0 / (2.0 * active * params_.M);
    pot0_ = 1.0 + 1.0 / params_.M;
  }
  for (int i = 0; i < m; ++i) {
    if (a.row_norm(i) <= 0.0) continue;
    const double delta = params_.tail_coeff * std::sqrt(a.row_norm(i) * log_m);
    lambda_[i] = delta / (params_.lambda_coeff * a.row_norm(i));
    up_[i] = 1.0;
    lo_[i] = 1.0;
    double log_up0 = 0.0;
    for (double v : a.vals(i)) log_up0 += std::log1p(lambda_[i] * lambda_[i] * v * v);
    max_log_up0_ = std::max(max_log_up0_, log_up0);
  }
  const double cap = (params_.tail_coeff / params_.lambda_coeff) *
                     (params_.tail_coeff / params_.lambda_coeff) * log_m;
  if (max_log_up0_ > cap * (1.0 + 1e-12)) {
    throw ContractViolation("initial upper potential exceeds its cap");
  }
  pot_ = pot0_;
  chi_.assign(n_, 1);
}

// Pot(chi) - Pot = chi * Slope(col); the two branches average to Pot.
double SequentialDerandomizer::Slope(int col) const {
  double slope = 0.0;
  for (int64_t k = columns_.offsets[col]; k < columns_.offsets[col + 1]; ++k) {
    const int i = columns_.rows[k];
    if (lambda_[i] == 0.0) continue;
    const double v = columns_.vals[k];
    const double x = lambda_[i] * v;
    slope += 2.0 * w_[i] * v * prefix_[i] * avg_scale_ +
             tail_scale_ * (up_[i] - lo_[i]) * x / (1.0 + x * x);
  }
  return slope;
}

double SequentialDerandomizer::Branch(int chi) const {
  if (done()) throw StaleError("all columns are fixed");
  return pot_ + chi * Slope(next_);
}

int SequentialDerandomizer::Choose() const {
  if (done()) throw StaleError("all columns are fixed");
  return Slope(next_) <= 0.0 ? 1 : -1;
}

void SequentialDerandomizer::Fix(int chi) {
  if (done()) throw StaleError("all columns are fixed");
  if (chi != 1 && chi != -1) throw InvalidInput("sign must be +1 or -1");
  const int col = next_;
  pot_ += chi * Slope(col);
  for (int64_t k = columns_.offsets[col]; k < columns_.offsets[col + 1]; ++k) {
    const int i = columns_.rows[k];
    const double v = columns_.vals[k];
    prefix_[i] += chi * v;
    rest_[i] -= v * v;
    if (lambda_[i] == 0.0) continue;
    const double x = lambda_[i] * v;
    const double step = chi * x / (1.0 + x * x);
    up_[i] *= 1.0 + step;
    lo_[i] *= 1.0 - step;
  }
  chi_[col] = static_cast<int8_t>(chi);
  ++next_;
}

double SequentialDerandomizer::FullPotential() const {
  const int m = a_.num_rows();
  std::vector<double> avg(m, 0.0), tail(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (lambda_[i] == 0.0) continue;
    avg[i] = w_[i] * (prefix_[i] * prefix_[i] + std::max(rest_[i], 0.0));
    tail[i] = up_[i] + lo_[i];
  }
  return PairwiseSum(avg) * avg_scale_ + PairwiseSum(tail) * tail_scale_;
}

SeqResult SeqDerandomize(const WeightedSystem& a, const ImportanceVector& imp,
                         const PotentialParams& params) {
  SequentialDerandomizer sd(a, imp, params);
  while (!sd.done()) sd.Fix(sd.Choose());
  SeqResult r;
  r.chi = sd.assignment();
  r.params = sd.params();
  r.initial_potential = sd.initial_potential();
  r.final_potential = sd.potential();
  r.report = Evaluate(a, r.chi);
  std::vector<double> bound(a.num_rows());
  for (int i = 0; i < a.num_rows(); ++i) bound[i] = TailBound(a.row_norm(i), r.params);
  AttachBound(r.report, std::move(bound));
  std::vector<double> w = imp.Normalized();
  bool any = false;
  for (int i = 0; i < a.num_rows(); ++i) any |= a.row_norm(i) > 0.0 && w[i] > 0.0;
  std::vector<double> lhs(a.num_rows()), rhs(a.num_rows());
  for (int i = 0; i < a.num_rows(); ++i) {
    const double wi = any ? w[i] : 1.0;
    lhs[i] = wi * r.report.sdisc[i] * r.report.sdisc[i];
    rhs[i] = wi * a.row_norm(i);
  }
  r.weighted_square_sum = PairwiseSum(lhs);
  r.weighted_square_cap = (1.0 + 1.0 / r.params.M) * PairwiseSum(rhs);
  return r;
}

SeqResult SeqDerandomize(const WeightedSystem& a, const PotentialParams& params) {
  return SeqDerandomize(a, ImportanceVector::Uniform(a.num_rows()), params);
}

}  // namespace discbal
