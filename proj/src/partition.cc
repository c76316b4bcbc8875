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

#include "discbal/partition.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "discbal/parallel.h"

namespace discbal {
namespace {

bool IsPowerOfTwo(int x) { return x > 0 && (x & (x - 1)) == 0; }

WeightedSystem IncidenceWithGround(const SetSystem& sets) {
  std::vector<Triple> t;
  t.reserve(sets.nnz() + sets.n());
  const int m = sets.num_sets();
  for (int i = 0; i < m; ++i) {
    for (int j : sets.row(i)) t.push_back({i, j, 1.0});
  }
  for (int j = 0; j < sets.n(); ++j) t.push_back({m, j, 1.0});
  return WeightedSystem::FromTriples(sets.n(), m + 1, std::move(t));
}

// Cap on one side of a split of x elements.
double HalfCap(double x, double tail_coeff, double log_m) {
  return std::min(x, 0.5 * x + 0.5 * tail_coeff * std::sqrt(x * log_m));
}

}  // namespace

int IntersectionTable::max_count(int i) const {
  int best = 0;
  for (int64_t k = offsets[i]; k < offsets[i + 1]; ++k) {
    best = std::max(best, counts[k]);
  }
  return best;
}

IntersectionTable ComputeIntersections(const SetSystem& sets,
                                       const Partition& p) {
  if (p.n() != sets.n()) throw InvalidInput("partition size mismatch");
  IntersectionTable table;
  table.offsets.push_back(0);
  std::vector<int> cnt(p.num_parts(), 0);
  std::vector<int> touched;
  for (int i = 0; i < sets.num_sets(); ++i) {
    touched.clear();
    for (int j : sets.row(i)) {
      const int t = p.part_of(j);
      if (cnt[t]++ == 0) touched.push_back(t);
    }
    std::sort(touched.begin(), touched.end());
    for (int t : touched) {
      table.parts.push_back(t);
      table.counts.push_back(cnt[t]);
      cnt[t] = 0;
    }
    table.offsets.push_back(static_cast<int64_t>(table.parts.size()));
  }
  return table;
}

SplitResult Split2(const SetSystem& sets, double k,
                   const PotentialParams& params) {
  if (!(k > 0.0)) throw InvalidInput("split slack k must be positive");
  const int m = sets.num_sets();
  const WeightedSystem a = IncidenceWithGround(sets);
  PotentialParams local = params;
  if (local.M != 0.0) local.M = std::max(local.M, std::max(2.0, m + 1.0));
  const SeqResult sd = SeqDerandomize(a, local);

  std::vector<int> side(sets.n());
  for (int j = 0; j < sets.n(); ++j) side[j] = sd.chi[j] > 0 ? 0 : 1;
  SplitResult r;
  r.partition = Partition::FromPartOf(2, std::move(side));
  r.deviation.resize(m);
  r.cap.resize(m);
  r.certified = true;
  for (int i = 0; i < m; ++i) {
    r.deviation[i] = 0.5 * sd.report.disc[i];
    r.cap[i] = 0.5 * sd.report.bound[i] + sets.row_size(i) / k;
    r.certified &= r.deviation[i] <= r.cap[i];
  }
  r.size_deviation = 0.5 * sd.report.disc[m];
  r.size_cap = 0.5 * sd.report.bound[m] + sets.n() / k;
  r.certified &= r.size_deviation <= r.size_cap;
  return r;
}

MultiwayResult MultiwayUnweighted(const SetSystem& sets, int parts, double eps,
                                  const PotentialParams& params) {
  if (!IsPowerOfTwo(parts)) throw InvalidInput("part count must be a power of two");
  if (!(eps > 0.0 && eps <= 0.5)) throw InvalidInput("eps must lie in (0, 0.5]");
  const int m = sets.num_sets();
  const PotentialParams resolved = ResolvePotentialParams(
      {std::max(params.M, std::max(2.0, m + 1.0)), params.tail_coeff,
       params.lambda_coeff},
      m + 1);
  const double log_m = std::log(resolved.M);
  const double inf = std::numeric_limits<double>::infinity();

  Partition current = Partition::Trivial(sets.n());
  if (sets.n() == 0) current = Partition::FromParts(0, {{}});
  for (int width = 1; width < parts; width *= 2) {
    const auto pieces = SplitByPartition(sets, current);
    std::vector<Partition> halves(width);
    ParallelFor(width, [&](int t) {
      halves[t] = Split2(pieces[t].system, inf, params).partition;
    });
    std::vector<std::vector<int>> next(2 * width);
    for (int t = 0; t < width; ++t) {
      for (int h = 0; h < 2; ++h) {
        for (int local : halves[t].part(h)) {
          next[2 * t + h].push_back(current.part(t)[local]);
        }
      }
    }
    current = Partition::FromParts(sets.n(), std::move(next));
  }

  MultiwayResult r;
  r.partition = current;
  r.max_part = current.max_part_size();
  const IntersectionTable table = ComputeIntersections(sets, current);
  r.max_count.resize(m);
  r.certified.resize(m);
  r.certified_ok = true;
  const double log_mhat = LogHat(m);
  auto compose = [&](double x) {
    for (int width = 1; width < parts; width *= 2) {
      x = HalfCap(x, resolved.tail_coeff, log_m);
    }
    return x;
  };
  for (int i = 0; i < m; ++i) {
    r.max_count[i] = table.max_count(i);
    r.certified[i] = compose(sets.row_size(i));
    r.certified_ok &= r.max_count[i] <= r.certified[i] + 1e-9;
    const double excess =
        r.certified[i] - (1.0 + eps) * sets.row_size(i) / parts;
    r.c_add = std::max(r.c_add, excess * eps * eps / log_mhat);
  }
  r.size_cap = compose(sets.n());
  r.certified_ok &= r.max_part <= r.size_cap + 1e-9;
  return r;
}

int WeightBucket(double a2, double max2, double eps) {
  const double q = 1.0 - eps / 3.0;
  if (!(a2 > 0.0) || !(max2 >= a2)) throw InvalidInput("bad bucket query");
  int k = static_cast<int>(std::floor(std::log(max2 / a2) / -std::log(q)));
  k = std::max(k, 0);
  // Repair the last-ulp error of the logarithm.
  while (k > 0 && a2 > std::pow(q, k) * max2) --k;
  while (a2 <= std::pow(q, k + 1) * max2) ++k;
  return k;
}

WeightedMultiwayResult MultiwayWeighted(const WeightedSystem& a, int parts,
                                        double eps,
                                        const PotentialParams& params) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("eps must lie in (0, 1]");
  const int m = a.num_rows();
  const int n = a.n();
  const double q = 1.0 - eps / 3.0;
  const int kmax = static_cast<int>(std::ceil(10.0 * std::log(n + 1.0) / eps));

  // Family: nonempty buckets, then supports, then the ground set.
  struct BucketInfo {
    int row;
    int k;
  };
  std::vector<std::vector<int>> family;
  std::vector<BucketInfo> info;
  std::vector<double> max2(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const double amax = a.max_abs(i);
    max2[i] = amax * amax;
    auto c = a.cols(i);
    auto v = a.vals(i);
    std::vector<std::pair<int, int>> keyed;
    for (size_t t = 0; t < c.size(); ++t) {
      const int k = WeightBucket(v[t] * v[t], max2[i], eps);
      if (k <= kmax) keyed.emplace_back(k, c[t]);
    }
    std::sort(keyed.begin(), keyed.end());
    for (size_t t = 0; t < keyed.size();) {
      size_t u = t;
      std::vector<int> members;
      while (u < keyed.size() && keyed[u].first == keyed[t].first) {
        members.push_back(keyed[u++].second);
      }
      family.push_back(std::move(members));
      info.push_back({i, keyed[t].first});
      t = u;
    }
  }
  const int num_buckets = static_cast<int>(family.size());
  for (int i = 0; i < m; ++i) {
    auto c = a.cols(i);
    family.emplace_back(c.begin(), c.end());
  }
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  family.push_back(all);
  const SetSystem sets = SetSystem::FromRows(n, family);

  const double fam_eps = std::min(eps, 0.5);
  const MultiwayResult mw = MultiwayUnweighted(sets, parts, fam_eps, params);
  WeightedMultiwayResult r;
  r.partition = mw.partition;
  r.num_buckets = num_buckets;
  r.max_part = mw.max_part;
  r.size_cap = mw.size_cap;
  r.certified_ok = mw.certified_ok;
  const double log_f = LogHat(sets.num_sets());
  r.size_add = std::max(0.0, mw.size_cap - (1.0 + eps) * n / parts) * eps *
               eps / log_f;

  r.max_support.assign(m, 0);
  r.support_cap.assign(m, 0.0);
  r.max_mass.assign(m, 0.0);
  r.mass_cap.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const int f = num_buckets + i;
    r.max_support[i] = mw.max_count[f];
    r.support_cap[i] = mw.certified[f];
    const double base = (1.0 + eps) * sets.row_size(f) / parts;
    r.support_add = std::max(r.support_add, (r.support_cap[i] - base) * eps *
                                                eps / log_f);
  }
  // Mass cap: every bucket contributes its certified count times its upper
  // edge; entries beyond the last bucket are bounded by its lower edge.
  std::vector<int> in_buckets(m, 0);
  for (int b = 0; b < num_buckets; ++b) {
    const int i = info[b].row;
    r.mass_cap[i] += mw.certified[b] * std::pow(q, info[b].k) * max2[i];
    in_buckets[i] += sets.row_size(b);
  }
  std::vector<double> part_mass(parts, 0.0);
  for (int i = 0; i < m; ++i) {
    if (max2[i] == 0.0) continue;
    const int tail = a.row_size(i) - in_buckets[i];
    r.mass_cap[i] += std::min<double>(tail, r.support_cap[i]) *
                     std::pow(q, kmax + 1) * max2[i];
    std::fill(part_mass.begin(), part_mass.end(), 0.0);
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t t = 0; t < c.size(); ++t) {
      part_mass[mw.partition.part_of(c[t])] += v[t] * v[t];
    }
    r.max_mass[i] = *std::max_element(part_mass.begin(), part_mass.end());
    r.certified_ok &= r.max_mass[i] <= r.mass_cap[i] * (1.0 + 1e-9);
    r.mass_add = std::max(
        r.mass_add, (r.mass_cap[i] - (1.0 + eps) * a.row_norm(i) / parts) /
                        max2[i]);
  }
  return r;
}

}  // namespace discbal
