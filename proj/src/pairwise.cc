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

#include "discbal/pairwise.h"

#include <algorithm>
#include <cmath>

#include "discbal/parallel.h"

namespace discbal {
namespace {

// Objective per seed by direct evaluation.
std::vector<double> DirectObjectives(const SetSystem& sets,
                                     const std::vector<double>& w, int bits) {
  const int64_t seeds = int64_t{1} << bits;
  std::vector<double> obj(seeds);
  const int chunks = static_cast<int>(std::min<int64_t>(seeds, 256));
  ParallelFor(chunks, [&](int c) {
    std::vector<double> terms(sets.num_sets());
    for (int64_t s = c; s < seeds; s += chunks) {
      for (int i = 0; i < sets.num_sets(); ++i) {
        int64_t sum = 0;
        for (int j : sets.row(i)) {
          sum += (__builtin_popcountll(static_cast<uint64_t>(s) & (j + 1)) & 1)
                     ? -1
                     : 1;
        }
        terms[i] = w[i] * static_cast<double>(sum * sum);
      }
      obj[s] = PairwiseSum(terms);
    }
  });
  return obj;
}

// Expands sdisc^2 into pair correlations: the objective is the Walsh-Hadamard
// transform of C[d] = sum_i w_i #{(j, j') in S_i^2 : b_j xor b_j' = d}.
std::vector<double> TransformObjectives(const SetSystem& sets,
                                        const std::vector<double>& w,
                                        int bits) {
  const int64_t size = int64_t{1} << bits;
  std::vector<double> c(size, 0.0);
  for (int i = 0; i < sets.num_sets(); ++i) {
    auto r = sets.row(i);
    c[0] += w[i] * static_cast<double>(r.size());
    for (size_t x = 0; x < r.size(); ++x) {
      for (size_t y = x + 1; y < r.size(); ++y) {
        c[(r[x] + 1) ^ (r[y] + 1)] += 2.0 * w[i];
      }
    }
  }
  for (int64_t h = 1; h < size; h <<= 1) {
    for (int64_t base = 0; base < size; base += 2 * h) {
      for (int64_t k = base; k < base + h; ++k) {
        const double u = c[k];
        const double v = c[k + h];
        c[k] = u + v;
        c[k + h] = u - v;
      }
    }
  }
  return c;
}

}  // namespace

int PairwiseSeedBits(int n) {
  int k = 0;
  while ((int64_t{1} << k) < static_cast<int64_t>(n) + 1) ++k;
  return k;
}

Assignment PairwiseSigns(int n, uint64_t seed) {
  Assignment chi(n);
  for (int j = 0; j < n; ++j) {
    chi[j] = (__builtin_popcountll(seed & static_cast<uint64_t>(j + 1)) & 1)
                 ? -1
                 : 1;
  }
  return chi;
}

std::vector<double> PairwiseObjectives(const SetSystem& sets,
                                       const ImportanceVector& imp) {
  if (imp.size() != sets.num_sets()) {
    throw InvalidInput("importance length mismatch");
  }
  const int bits = PairwiseSeedBits(sets.n());
  if (bits > 30) throw SizeError("seed space too large");
  const std::vector<double> w = imp.Normalized();
  double pairs = 0.0;
  for (int i = 0; i < sets.num_sets(); ++i) {
    pairs += 0.5 * sets.row_size(i) * static_cast<double>(sets.row_size(i));
  }
  const double direct = std::ldexp(static_cast<double>(sets.nnz()), bits);
  const double transform = pairs + std::ldexp(static_cast<double>(bits), bits);
  return transform <= direct ? TransformObjectives(sets, w, bits)
                             : DirectObjectives(sets, w, bits);
}

PairwiseResult PairwiseBalance(const SetSystem& sets,
                               const ImportanceVector& imp) {
  const std::vector<double> obj = PairwiseObjectives(sets, imp);
  PairwiseResult r;
  r.seed_bits = PairwiseSeedBits(sets.n());
  for (size_t s = 1; s < obj.size(); ++s) {
    if (obj[s] < obj[r.seed]) r.seed = s;
  }
  r.chi = PairwiseSigns(sets.n(), r.seed);
  const std::vector<double> w = imp.Normalized();
  std::vector<double> terms(sets.num_sets()), sizes(sets.num_sets());
  for (int i = 0; i < sets.num_sets(); ++i) {
    int64_t sum = 0;
    for (int j : sets.row(i)) sum += r.chi[j];
    terms[i] = w[i] * static_cast<double>(sum * sum);
    sizes[i] = w[i] * sets.row_size(i);
  }
  r.objective = PairwiseSum(terms);
  r.mean_objective = PairwiseSum(sizes);
  return r;
}

}  // namespace discbal
