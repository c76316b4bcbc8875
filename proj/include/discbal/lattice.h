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


// Rounding a fractional vector p in [0, 1]^n to q in {0, 1}^n so that every
// row sum of a nonnegative matrix moves little. Values are held in exact
// fixed point with B fractional bits; stage k clears bit k of every value by
// rounding the odd ones up or down with signs from the weighted solver.

#ifndef DISCBAL_LATTICE_H_
#define DISCBAL_LATTICE_H_

#include <cstdint>
#include <vector>

#include "discbal/core.h"
#include "discbal/profile.h"
#include "json.hpp"

namespace discbal {

using FixedWord = unsigned __int128;

struct FixedPointVector {
  int bits = 0;
  std::vector<FixedWord> values;  // value_j / 2^bits lies in [0, 1].

  double ToDouble(int j) const;
};

// ceil(10 log2 n_hat), capped at kMaxFixedBits.
inline constexpr int kMaxFixedBits = 120;
int DefaultFixedBits(int n);

// Round to nearest at `bits` fractional bits, ties away from zero. Entries
// must lie in [0, 1].
FixedPointVector Quantize(const std::vector<double>& p, int bits);

struct LatticeStage {
  int bit = 0;        // Bit cleared by this stage.
  int odd_count = 0;  // |J_k|.
  // Per row: the change of the row sum and the solver's certificate for it,
  // both in real units.
  std::vector<double> error;
  std::vector<double> certificate;
};

struct LatticeReport {
  std::vector<double> mu;          // sum_j a_ij p_j for the input p.
  std::vector<double> error;       // |A q - A p|.
  std::vector<double> certificate;  // Sum of stage certificates + quantization.
  std::vector<double> ratio;       // error / (sqrt(mu ln m_hat) + ln m_hat).
  double max_ratio = 0.0;
  double max_certificate_ratio = 0.0;
  bool certified = false;  // error <= certificate on every row.
  bool invariant_ok = false;  // Every stage cleared exactly its bit.
  std::vector<LatticeStage> stages;
  nlohmann::json ToJson() const;
};

struct LatticeResult {
  std::vector<int8_t> q;
  LatticeReport report;
};

// Entries of `a` must lie in [0, 1] and p in [0, 1]^n. bits <= 0 selects
// DefaultFixedBits(n).
LatticeResult RoundLattice(const WeightedSystem& a,
                           const std::vector<double>& p,
                           const ConstantsProfile& profile, int bits = 0);

}  // namespace discbal

#endif  // DISCBAL_LATTICE_H_
