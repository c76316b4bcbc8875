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

#include "discbal/isolate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "discbal/parallel.h"
#include "discbal/partition.h"

namespace discbal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MaxLog(const std::vector<double>& logs) {
  double top = -kInf;
  for (double x : logs) top = std::max(top, x);
  return top;
}

std::unordered_map<int, int> PositionMap(const std::vector<int>& ground) {
  std::unordered_map<int, int> pos;
  pos.reserve(ground.size() * 2);
  for (size_t k = 0; k < ground.size(); ++k) {
    if (!pos.emplace(ground[k], static_cast<int>(k)).second) {
      throw InvalidInput("ground set repeats element " +
                         std::to_string(ground[k]));
    }
  }
  return pos;
}

// sum_i imp_i (1 + delta)^{c_i} / sum_i imp_i.
double Inflation(const std::vector<double>& log_imp,
                 const std::vector<int>& counts, double delta) {
  if (log_imp.empty()) return 1.0;
  const double top = MaxLog(log_imp);
  if (top == -kInf) return 1.0;
  std::vector<double> num(log_imp.size()), den(log_imp.size());
  for (size_t i = 0; i < log_imp.size(); ++i) {
    den[i] = std::exp(log_imp[i] - top);
    num[i] = den[i] * std::pow(1.0 + delta, counts[i]);
  }
  return PairwiseSum(num) / PairwiseSum(den);
}

// Per set, sum over parts of max(|S cap Q| - 1, 0).
std::vector<int> CountCollisions(const std::vector<WeightedSet>& sets,
                                 const std::unordered_map<int, int>& part_of) {
  std::vector<int> out(sets.size(), 0);
  std::unordered_map<int, int> seen;
  for (size_t i = 0; i < sets.size(); ++i) {
    seen.clear();
    for (int j : sets[i].elems) {
      auto it = part_of.find(j);
      if (it == part_of.end()) continue;
      if (seen[it->second]++ > 0) ++out[i];
    }
  }
  return out;
}

std::unordered_map<int, int> PartIndex(
    const std::vector<std::vector<int>>& parts) {
  std::unordered_map<int, int> idx;
  for (size_t t = 0; t < parts.size(); ++t) {
    for (int j : parts[t]) idx[j] = static_cast<int>(t);
  }
  return idx;
}

std::vector<double> LogImps(const std::vector<WeightedSet>& sets) {
  std::vector<double> out(sets.size());
  for (size_t i = 0; i < sets.size(); ++i) out[i] = sets[i].log_imp;
  return out;
}

}  // namespace

SubsetSelectResult SubsetSelect(const std::vector<int>& ground, double p,
                                const std::vector<SelectTriple>& triples) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInput("p must lie in (0, 1]");
  const auto pos = PositionMap(ground);
  const int nt = static_cast<int>(triples.size());
  std::vector<double> log_w(nt);
  for (int c = 0; c < nt; ++c) log_w[c] = triples[c].log_imp;
  const double top = MaxLog(log_w);
  std::vector<double> w(nt), lambda(nt), qu(nt), ql(nt), u(nt), l(nt);
  std::vector<std::vector<int>> touching(ground.size());
  SubsetSelectResult r;
  std::vector<double> init(nt);
  for (int c = 0; c < nt; ++c) {
    const SelectTriple& t = triples[c];
    const double s = static_cast<double>(t.elems.size());
    if (t.delta < 0.5 * p * s * (1.0 - 1e-12)) {
      throw InvalidInput("triple deviation below 0.5 p |S|");
    }
    for (int j : t.elems) {
      auto it = pos.find(j);
      if (it == pos.end()) throw InvalidInput("triple element outside ground");
      touching[it->second].push_back(c);
    }
    w[c] = top == -kInf ? 0.0 : std::exp(log_w[c] - top);
    lambda[c] = std::min(1.0, std::log1p(t.delta / (2.0 * std::max(1.0, p * s))));
    qu[c] = 1.0 - p + p * std::exp(lambda[c]);
    ql[c] = 1.0 - p + p * std::exp(-lambda[c]);
    u[c] = std::exp(s * std::log(qu[c]) - lambda[c] * (p * s + t.delta));
    l[c] = std::exp(s * std::log(ql[c]) + lambda[c] * (p * s - t.delta));
    init[c] = w[c] * (u[c] + l[c]);
  }
  r.certificate = PairwiseSum(init);

  std::vector<int> hits(nt, 0);
  for (size_t k = 0; k < ground.size(); ++k) {
    bool include = p == 1.0;
    if (!include) {
      double diff = 0.0;
      for (int c : touching[k]) {
        if (w[c] == 0.0) continue;
        diff += w[c] * (u[c] * (std::exp(lambda[c]) - 1.0) / qu[c] +
                        l[c] * (std::exp(-lambda[c]) - 1.0) / ql[c]);
      }
      include = diff < 0.0;
    }
    for (int c : touching[k]) {
      if (include) {
        u[c] *= std::exp(lambda[c]) / qu[c];
        l[c] *= std::exp(-lambda[c]) / ql[c];
        ++hits[c];
      } else {
        u[c] /= qu[c];
        l[c] /= ql[c];
      }
    }
    if (include) r.subset.push_back(ground[k]);
  }

  r.bad.resize(nt);
  std::vector<double> fin(nt), bad(nt, 0.0);
  for (int c = 0; c < nt; ++c) {
    const double s = static_cast<double>(triples[c].elems.size());
    const double x = hits[c];
    const double lu = lambda[c] * (x - p * s - triples[c].delta);
    const double ll = lambda[c] * (p * s - triples[c].delta - x);
    const double v = std::exp(lu) + std::exp(ll);
    r.bad[c] = v >= 1.0;
    fin[c] = w[c] * v;
    if (r.bad[c]) bad[c] = w[c];
  }
  r.final_potential = PairwiseSum(fin);
  r.bad_weight = PairwiseSum(bad);
  return r;
}

PickResult PickSparseSubset(const std::vector<int>& ground, int k,
                            const std::vector<WeightedSet>& sets,
                            double sparse_delta, double delta) {
  if (k < 1) throw InvalidInput("k must be positive");
  PickResult r;
  const std::vector<double> log_imp = LogImps(sets);
  auto inflation_of = [&](const std::vector<int>& subset) {
    std::unordered_map<int, int> in;
    for (int j : subset) in[j] = 0;
    std::vector<int> extra(sets.size(), 0);
    for (size_t i = 0; i < sets.size(); ++i) {
      int hits = 0;
      for (int j : sets[i].elems) hits += in.count(j) ? 1 : 0;
      extra[i] = std::max(hits - 1, 0);
    }
    return Inflation(log_imp, extra, delta);
  };

  if (ground.size() <= k / sparse_delta) {
    if (ground.size() <= 1) {
      r.subset = ground;
    } else {
      r.subset = {*std::min_element(ground.begin(), ground.end())};
    }
    r.k_used = k;
    r.inflation = inflation_of(r.subset);
    return r;
  }

  const double top = MaxLog(log_imp);
  double log_total = -kInf;
  if (top != -kInf) {
    std::vector<double> e(log_imp.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = std::exp(log_imp[i] - top);
    log_total = top + std::log(PairwiseSum(e));
  }
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const int kk = std::max(1, k >> attempt);
    const double p = 1.0 / (1.1 * kk);
    std::vector<SelectTriple> triples;
    for (const WeightedSet& s : sets) {
      if (s.elems.empty()) continue;
      const int first =
          std::max(1, static_cast<int>(std::ceil(0.5 * p * s.elems.size())));
      for (int d = first; d <= kk; ++d) {
        triples.push_back(
            {s.elems, static_cast<double>(d),
             s.log_imp + d * std::log1p(sparse_delta)});
      }
    }
    triples.push_back({ground, 0.5 * ground.size() / kk,
                       log_total == -kInf
                           ? 0.0
                           : std::log(10.0 / sparse_delta) + log_total});
    SubsetSelectResult sel = SubsetSelect(ground, p, triples);
    const double infl = inflation_of(sel.subset);
    const bool size_ok =
        static_cast<double>(sel.subset.size()) >= 0.1 * ground.size() / kk;
    if (size_ok && infl <= 2.0 * (1.0 + 1e-12)) {
      r.subset = std::move(sel.subset);
      r.k_used = kk;
      r.retries = attempt;
      r.inflation = infl;
      return r;
    }
  }
  throw ContractViolation("sparse subset selection failed after 3 retries");
}

double CollisionPotential(const std::vector<int>& ground, int parts,
                          const std::vector<WeightedSet>& sets,
                          const std::vector<int>& assigned) {
  if (parts < 1) throw InvalidInput("need at least one part");
  const auto pos = PositionMap(ground);
  const int ell = static_cast<int>(assigned.size());
  const double tt = parts;
  std::vector<int> size(parts, 0);
  for (int a : assigned) {
    if (a < 0 || a >= parts) throw InvalidInput("part index out of range");
    ++size[a];
  }
  std::vector<double> log_imp;
  std::vector<const WeightedSet*> kept;
  for (const WeightedSet& s : sets) {
    if (s.elems.size() >= 2) {
      kept.push_back(&s);
      log_imp.push_back(s.log_imp);
    }
  }
  const double top = MaxLog(log_imp);
  std::vector<double> num, den;
  for (size_t i = 0; i < kept.size(); ++i) {
    const double w = top == -kInf ? 0.0 : std::exp(log_imp[i] - top);
    std::vector<int> cnt(parts, 0);
    int placed = 0;
    for (int j : kept[i]->elems) {
      const int k = pos.at(j);
      if (k < ell) {
        ++cnt[assigned[k]];
        ++placed;
      }
    }
    double phi = 0.0;
    for (int c : cnt) phi += 0.5 * c * (c - 1.0);
    const double s = static_cast<double>(kept[i]->elems.size());
    phi += (0.5 * s * (s - 1.0) - 0.5 * placed * (placed - 1.0)) / tt;
    num.push_back(w * phi);
    den.push_back(w * 0.5 * s * (s - 1.0) / tt);
  }
  const double z = PairwiseSum(den);
  double value = z > 0.0 ? PairwiseSum(num) / z : 1.0;
  double part_term = 0.0;
  for (int t = 0; t < parts; ++t) {
    part_term += std::exp(size[t] * std::log(2.0) - ell * std::log1p(1.0 / tt));
  }
  return value + part_term / tt;
}

CollisionResult CollisionPartition(const std::vector<int>& ground, int parts,
                                   const std::vector<WeightedSet>& sets) {
  if (parts < 1) throw InvalidInput("need at least one part");
  const int nr = static_cast<int>(ground.size());
  const auto pos = PositionMap(ground);
  CollisionResult r;
  const double tt = parts;
  r.size_cap = 1.0 + std::log2(tt) + 2.0 * nr / tt;

  std::vector<int> kept;
  std::vector<double> log_imp;
  for (size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].elems.size() >= 2) {
      kept.push_back(static_cast<int>(i));
      log_imp.push_back(sets[i].log_imp);
    }
  }
  const double top = MaxLog(log_imp);
  std::vector<double> w(kept.size());
  std::vector<double> den(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    w[i] = top == -kInf ? 0.0 : std::exp(log_imp[i] - top);
    const double s = static_cast<double>(sets[kept[i]].elems.size());
    den[i] = w[i] * 0.5 * s * (s - 1.0);
  }
  const double pair_total = PairwiseSum(den);
  r.pair_cap = 2.0 / tt * pair_total;

  std::vector<int> part_of(nr, 0);
  if (parts >= nr) {
    for (int k = 0; k < nr; ++k) r.parts.push_back({ground[k]});
    r.max_part = nr > 0 ? 1 : 0;
    r.final_potential = CollisionPotential(
        ground, parts, sets, [&] {
          std::vector<int> a(nr);
          std::iota(a.begin(), a.end(), 0);
          return a;
        }());
    return r;
  }

  const double z = pair_total / tt;
  std::vector<std::vector<int>> sets_of(nr);
  for (size_t i = 0; i < kept.size(); ++i) {
    for (int j : sets[kept[i]].elems) {
      auto it = pos.find(j);
      if (it == pos.end()) throw InvalidInput("set element outside ground");
      sets_of[it->second].push_back(static_cast<int>(i));
    }
  }
  // Counts of each kept set per part, as sparse lists.
  std::vector<std::vector<std::pair<int, int>>> cnt(kept.size());
  std::vector<int> placed(kept.size(), 0);
  std::vector<int> size(parts, 0);
  const double log2v = std::log(2.0);
  const double step = std::log1p(1.0 / tt);
  double set_term = 1.0;
  double phi = 2.0;
  std::vector<double> add(parts, 0.0);
  std::vector<int> touched;
  for (int k = 0; k < nr; ++k) {
    touched.clear();
    double shift = 0.0;
    for (int i : sets_of[k]) {
      if (z > 0.0) shift += w[i] * placed[i] / (tt * z);
      for (auto& [t, c] : cnt[i]) {
        if (add[t] == 0.0) touched.push_back(t);
        add[t] += z > 0.0 ? w[i] * c / z : 0.0;
      }
    }
    int best = 0;
    double best_cost = kInf;
    for (int t = 0; t < parts; ++t) {
      const double cost =
          add[t] + std::exp(size[t] * log2v - (k + 1) * step) / tt;
      if (cost < best_cost) {
        best_cost = cost;
        best = t;
      }
    }
    set_term += add[best] - shift;
    for (int t : touched) add[t] = 0.0;
    for (int i : sets_of[k]) {
      ++placed[i];
      bool found = false;
      for (auto& [t, c] : cnt[i]) {
        if (t == best) {
          ++c;
          found = true;
        }
      }
      if (!found) cnt[i].emplace_back(best, 1);
    }
    ++size[best];
    part_of[k] = best;
    double part_term = 0.0;
    for (int t = 0; t < parts; ++t) {
      part_term += std::exp(size[t] * log2v - (k + 1) * step);
    }
    const double next = set_term + part_term / tt;
    if (next > phi * (1.0 + 1e-9)) r.monotone = false;
    phi = next;
  }
  r.final_potential = phi;
  std::vector<std::vector<int>> grouped(parts);
  for (int k = 0; k < nr; ++k) grouped[part_of[k]].push_back(ground[k]);
  for (auto& q : grouped) {
    if (q.empty()) continue;
    r.max_part = std::max(r.max_part, static_cast<int>(q.size()));
    r.parts.push_back(std::move(q));
  }
  std::vector<double> pairs(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    double v = 0.0;
    for (auto& [t, c] : cnt[i]) v += 0.5 * c * (c - 1.0);
    pairs[i] = w[i] * v;
  }
  r.weighted_pairs = PairwiseSum(pairs);
  return r;
}

ChunkedResult ChunkedCollisionPartition(const std::vector<int>& ground, int k,
                                        const std::vector<WeightedSet>& sets,
                                        const ConstantsProfile& profile,
                                        double n_times_m) {
  ChunkedResult r;
  r.collision_cap = 1.0 / std::max(k, 1);
  const int nr = static_cast<int>(ground.size());
  double singleton_limit;
  double chunk;
  if (profile.chunk_size > 0.0) {
    singleton_limit = 1.0;
    chunk = profile.chunk_size;
  } else {
    const double kp = static_cast<double>(k) * k *
                      std::pow(LogHat(n_times_m), 100.0);
    singleton_limit = std::pow(kp, 4.0);
    chunk = singleton_limit;
  }
  if (nr <= singleton_limit) {
    for (int j : ground) r.parts.push_back({j});
    r.max_part = nr > 0 ? 1 : 0;
    return r;
  }
  const int csize = static_cast<int>(std::max(1.0, std::min<double>(chunk, nr)));
  std::vector<std::vector<int>> chunks;
  for (int start = 0; start < nr; start += csize) {
    const int end = std::min(nr, start + csize);
    if (end - start < csize && !chunks.empty()) {
      chunks.back().insert(chunks.back().end(), ground.begin() + start,
                           ground.begin() + end);
    } else {
      chunks.emplace_back(ground.begin() + start, ground.begin() + end);
    }
  }
  std::unordered_map<int, int> chunk_of;
  for (size_t c = 0; c < chunks.size(); ++c) {
    for (int j : chunks[c]) chunk_of[j] = static_cast<int>(c);
  }
  std::vector<std::vector<WeightedSet>> local(chunks.size());
  for (const WeightedSet& s : sets) {
    std::unordered_map<int, std::vector<int>> by_chunk;
    for (int j : s.elems) {
      auto it = chunk_of.find(j);
      if (it != chunk_of.end()) by_chunk[it->second].push_back(j);
    }
    for (auto& [c, elems] : by_chunk) {
      if (elems.size() >= 2) local[c].push_back({std::move(elems), s.log_imp});
    }
  }
  // Sort each chunk's set list so the result does not depend on hash order.
  for (auto& list : local) {
    std::sort(list.begin(), list.end(),
              [](const WeightedSet& a, const WeightedSet& b) {
                return a.elems < b.elems ||
                       (a.elems == b.elems && a.log_imp < b.log_imp);
              });
  }
  std::vector<CollisionResult> results(chunks.size());
  ParallelFor(static_cast<int>(chunks.size()), [&](int c) {
    const int t = std::max(
        1, static_cast<int>(chunks[c].size() / profile.collision_part_size));
    results[c] = CollisionPartition(chunks[c], t, local[c]);
  });
  for (auto& res : results) {
    for (auto& q : res.parts) {
      r.max_part = std::max(r.max_part, static_cast<int>(q.size()));
      r.parts.push_back(std::move(q));
    }
  }
  const std::vector<int> coll = CountCollisions(sets, PartIndex(r.parts));
  // Importance-weighted mean of the collision counts.
  const std::vector<double> log_imp = LogImps(sets);
  const double top = MaxLog(log_imp);
  if (top != -kInf) {
    std::vector<double> num(sets.size()), den(sets.size());
    for (size_t i = 0; i < sets.size(); ++i) {
      den[i] = std::exp(log_imp[i] - top);
      num[i] = den[i] * coll[i];
    }
    r.collision_mass = PairwiseSum(num) / PairwiseSum(den);
  } else {
    r.collision_mass = 0.0;
  }
  return r;
}

SampleResult SamplePartition(const std::vector<int>& ground, int k,
                             const std::vector<WeightedSet>& sets,
                             const ConstantsProfile& profile,
                             double n_times_m) {
  SampleResult r;
  PickResult pick = PickSparseSubset(ground, k, sets, profile.sparse_delta,
                                     profile.delta);
  r.sampled = std::move(pick.subset);
  r.pick_retries = pick.retries;
  std::unordered_map<int, int> in;
  for (int j : r.sampled) in[j] = 0;
  std::vector<WeightedSet> sub;
  for (const WeightedSet& s : sets) {
    WeightedSet t;
    t.log_imp = s.log_imp;
    for (int j : s.elems) {
      if (in.count(j)) t.elems.push_back(j);
    }
    sub.push_back(std::move(t));
  }
  ChunkedResult chunked =
      ChunkedCollisionPartition(r.sampled, k, sub, profile, n_times_m);
  r.parts = std::move(chunked.parts);
  r.collisions = CountCollisions(sets, PartIndex(r.parts));
  return r;
}

RefineResult RefinePart(const std::vector<int>& ground, int k,
                        const std::vector<WeightedSet>& sets,
                        const ConstantsProfile& profile, double n_times_m) {
  RefineResult r;
  r.collisions.assign(sets.size(), 0);
  r.round_cap = std::ceil(std::max(k, 1) * std::pow(LogHat(ground.size()), 2));
  std::vector<int> residue = ground;
  std::sort(residue.begin(), residue.end());
  std::vector<double> log_imp = LogImps(sets);
  const double step = std::log1p(profile.delta);
  int stall = 0;
  while (!residue.empty()) {
    std::unordered_map<int, int> in;
    for (int j : residue) in[j] = 0;
    std::vector<WeightedSet> current;
    std::vector<int> index;
    int kk = 1;
    for (size_t i = 0; i < sets.size(); ++i) {
      WeightedSet t;
      t.log_imp = log_imp[i];
      for (int j : sets[i].elems) {
        if (in.count(j)) t.elems.push_back(j);
      }
      if (t.elems.empty()) continue;
      kk = std::max(kk, static_cast<int>(t.elems.size()));
      current.push_back(std::move(t));
      index.push_back(static_cast<int>(i));
    }
    SampleResult s = SamplePartition(residue, kk, current, profile, n_times_m);
    ++r.rounds;
    if (s.sampled.empty()) {
      if (++stall >= profile.stall_rounds) {
        throw ContractViolation("refinement residue stopped shrinking");
      }
      continue;
    }
    stall = 0;
    for (size_t c = 0; c < index.size(); ++c) {
      r.collisions[index[c]] += s.collisions[c];
      log_imp[index[c]] += s.collisions[c] * step;
    }
    for (auto& q : s.parts) r.parts.push_back(std::move(q));
    std::unordered_map<int, int> taken;
    for (int j : s.sampled) taken[j] = 0;
    std::vector<int> next;
    for (int j : residue) {
      if (!taken.count(j)) next.push_back(j);
    }
    residue = std::move(next);
  }
  return r;
}

bool IsolationChecks::AllOk() const {
  return coarse_ok && fine_count_ok && refinement_ok &&
         split_ratio <= split_cap * (1.0 + 1e-12) && max_fine <= fine_cap &&
         inflation <= inflation_cap * (1.0 + 1e-12);
}

IsolationResult IsolationPartition(int n, const std::vector<WeightedSet>& small,
                                   const std::vector<std::vector<int>>& big,
                                   const ConstantsProfile& profile,
                                   double m_bound) {
  if (n < 0) throw InvalidInput("negative ground set size");
  const double nm = std::max(n, 2) * std::max(m_bound, 2.0);
  const double log_n = LogHat(n);
  const double small_cap = profile.isolation_small_cap.Eval(nm);
  const double big_floor = profile.isolation_big_floor.Eval(nm);
  for (const WeightedSet& s : small) {
    if (s.elems.size() > small_cap) {
      throw InvalidInput("small set of size " + std::to_string(s.elems.size()) +
                         " exceeds the isolation cap");
    }
    for (int j : s.elems) {
      if (j < 0 || j >= n) throw InvalidInput("small set element out of range");
    }
  }
  for (const auto& b : big) {
    if (b.size() < big_floor) {
      throw InvalidInput("big set of size " + std::to_string(b.size()) +
                         " below the isolation floor");
    }
  }

  IsolationResult r;
  IsolationChecks& ck = r.checks;
  ck.coarse_target = profile.coarse_parts.Eval(nm);
  long long tp = PowerOfTwoAtLeast(ck.coarse_target);
  if (profile.coarse_min_size > 0.0) {
    tp = std::min(tp, PowerOfTwoAtMost(std::max(1.0, n / profile.coarse_min_size)));
  }
  tp = std::min(tp, PowerOfTwoAtMost(std::max(1, n)));
  ck.coarse_parts = static_cast<int>(tp);
  ck.coarse_ok = tp >= 1 && (tp & (tp - 1)) == 0 &&
                 tp <= std::max(1.0, 2.0 * ck.coarse_target);

  const SetSystem big_sets = SetSystem::FromRows(n, big);
  const double eps_c = std::min(0.5, 1.0 / (2.0 * std::pow(log_n, 3)));
  const MultiwayResult coarse = MultiwayUnweighted(
      big_sets, ck.coarse_parts, eps_c,
      PotentialParams{0.0, profile.tail_coeff, profile.lambda_coeff});
  r.coarse = coarse.partition;
  ck.split_cap = 1.0;
  const double split_slack = 1.0 + 1.0 / profile.isolation_split_slack.Eval(n);
  for (int i = 0; i < big_sets.num_sets(); ++i) {
    if (big_sets.row_size(i) == 0) continue;
    const double even = static_cast<double>(big_sets.row_size(i)) / ck.coarse_parts;
    const double cap = profile.split_from_certificate ? coarse.certified[i]
                                                      : split_slack * even;
    ck.split_balance = std::max(ck.split_balance, coarse.max_count[i] / even);
    ck.split_ratio = std::max(ck.split_ratio, coarse.max_count[i] / cap);
  }

  // Fine refinement, coarse part by coarse part, carrying the importance.
  std::vector<double> log_imp = LogImps(small);
  const double step = std::log1p(profile.delta);
  std::vector<std::vector<int>> fine;
  std::vector<int> fine_coarse;
  for (int t = 0; t < r.coarse.num_parts(); ++t) {
    const std::vector<int>& part = r.coarse.part(t);
    if (part.empty()) continue;
    std::vector<WeightedSet> local;
    std::vector<int> index;
    int kk = 1;
    for (size_t i = 0; i < small.size(); ++i) {
      WeightedSet s;
      s.log_imp = log_imp[i];
      for (int j : small[i].elems) {
        if (r.coarse.part_of(j) == t) s.elems.push_back(j);
      }
      if (s.elems.empty()) continue;
      kk = std::max(kk, static_cast<int>(s.elems.size()));
      local.push_back(std::move(s));
      index.push_back(static_cast<int>(i));
    }
    RefineResult rp = RefinePart(part, kk, local, profile, nm);
    for (size_t c = 0; c < index.size(); ++c) {
      log_imp[index[c]] += rp.collisions[c] * step;
    }
    for (auto& q : rp.parts) {
      fine.push_back(std::move(q));
      fine_coarse.push_back(t);
    }
  }

  // Merge the smallest fine parts of a coarse part until at most n/2 remain.
  const int limit = std::max(1, n / 2);
  if (static_cast<int>(fine.size()) > limit) {
    std::vector<std::vector<int>> by_coarse(r.coarse.num_parts());
    for (size_t q = 0; q < fine.size(); ++q) {
      by_coarse[fine_coarse[q]].push_back(static_cast<int>(q));
    }
    int count = static_cast<int>(fine.size());
    bool progress = true;
    while (count > limit && progress) {
      progress = false;
      for (auto& ids : by_coarse) {
        if (count <= limit) break;
        if (ids.size() < 2) continue;
        std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
          return fine[a].size() < fine[b].size();
        });
        const int a = ids[0];
        const int b = ids[1];
        fine[a].insert(fine[a].end(), fine[b].begin(), fine[b].end());
        std::sort(fine[a].begin(), fine[a].end());
        fine[b].clear();
        ids.erase(ids.begin() + 1);
        --count;
        ++ck.merges;
        progress = true;
      }
    }
    std::vector<std::vector<int>> kept;
    std::vector<int> kept_coarse;
    for (size_t q = 0; q < fine.size(); ++q) {
      if (fine[q].empty()) continue;
      kept.push_back(std::move(fine[q]));
      kept_coarse.push_back(fine_coarse[q]);
    }
    fine = std::move(kept);
    fine_coarse = std::move(kept_coarse);
  }

  r.fine = Partition::FromParts(n, fine);
  r.coarse_of_fine = fine_coarse;
  ck.fine_parts = r.fine.num_parts();
  ck.fine_count_ok = n <= 1 || ck.fine_parts <= n / 2;
  ck.refinement_ok = true;
  for (int q = 0; q < r.fine.num_parts(); ++q) {
    for (int j : r.fine.part(q)) {
      ck.refinement_ok &= r.coarse.part_of(j) == fine_coarse[q];
    }
  }
  ck.max_fine = r.fine.max_part_size();
  ck.fine_cap = profile.chunk_size > 0.0
                    ? 2.0 * profile.chunk_size
                    : 2000.0 * log_n;
  std::unordered_map<int, int> part_index;
  for (int j = 0; j < n; ++j) part_index[j] = r.fine.part_of(j);
  r.collisions = CountCollisions(small, part_index);
  ck.inflation = Inflation(LogImps(small), r.collisions, profile.delta);
  ck.inflation_cap = 1.0 + 1.0 / profile.isolation_inflation_slack.Eval(n);
  return r;
}

}  // namespace discbal
