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
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "discbal/profile.h"
#include "doctest.h"

namespace discbal {
namespace {

std::vector<WeightedSet> RandomSmallSets(std::mt19937_64& rng, int n, int m,
                                         int max_size) {
  std::vector<WeightedSet> sets(m);
  std::uniform_int_distribution<int> size(1, max_size);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& s : sets) {
    std::set<int> e;
    const int k = std::min(n, size(rng));
    while (static_cast<int>(e.size()) < k) e.insert(static_cast<int>(rng() % n));
    s.elems.assign(e.begin(), e.end());
    s.log_imp = g(rng);
  }
  return sets;
}

std::vector<int> Range(int n) {
  std::vector<int> g(n);
  for (int j = 0; j < n; ++j) g[j] = j;
  return g;
}

TEST_CASE("SubsetSelect keeps its potential below the certificate") {
  std::mt19937_64 rng(41);
  const std::vector<int> ground = Range(400);
  auto sets = RandomSmallSets(rng, 400, 50, 40);
  std::vector<SelectTriple> triples;
  const double p = 0.1;
  for (const auto& s : sets) {
    triples.push_back({s.elems, std::max(2.0, 0.5 * p * s.elems.size()), s.log_imp});
  }
  SubsetSelectResult r = SubsetSelect(ground, p, triples);
  CHECK(r.final_potential <= r.certificate * (1.0 + 1e-9));
  CHECK(r.bad_weight <= r.final_potential + 1e-12);
  std::set<int> in(r.subset.begin(), r.subset.end());
  for (size_t c = 0; c < triples.size(); ++c) {
    if (r.bad[c]) continue;
    int hits = 0;
    for (int j : triples[c].elems) hits += in.count(j) ? 1 : 0;
    // Both tails are below one, so the count is within delta of p |S|.
    CHECK(std::abs(hits - p * triples[c].elems.size()) <=
          triples[c].delta + 1e-9);
  }
  CHECK_THROWS_AS(SubsetSelect(ground, 0.0, triples), InvalidInput);
  CHECK_THROWS_AS(SubsetSelect(ground, 0.5, {{{0, 1}, 0.1, 0.0}}), InvalidInput);
  CHECK_THROWS_AS(SubsetSelect({0, 1}, 0.5, {{{5}, 1.0, 0.0}}), InvalidInput);
}

TEST_CASE("PickSparseSubset returns a sparse, large enough subset") {
  std::mt19937_64 rng(42);
  const std::vector<int> ground = Range(2000);
  auto sets = RandomSmallSets(rng, 2000, 80, 8);
  PickResult r = PickSparseSubset(ground, 8, sets, 0.25, 0.05);
  CHECK(r.inflation <= 2.0 * (1.0 + 1e-12));
  CHECK(static_cast<double>(r.subset.size()) >= 0.1 * 2000 / r.k_used);
  // Tiny grounds collapse to one element.
  PickResult tiny = PickSparseSubset({7, 3, 9}, 8, sets, 0.25, 0.05);
  CHECK(tiny.subset == std::vector<int>{3});
}

TEST_CASE("CollisionPotential averages over the next placement") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const int nr = 30;
    const int parts = 2 + static_cast<int>(rng() % 6);
    const std::vector<int> ground = Range(nr);
    auto sets = RandomSmallSets(rng, nr, 10, 6);
    std::vector<int> assigned;
    for (int ell = 0; ell < nr; ++ell) {
      const double here = CollisionPotential(ground, parts, sets, assigned);
      double avg = 0.0;
      for (int t = 0; t < parts; ++t) {
        assigned.push_back(t);
        avg += CollisionPotential(ground, parts, sets, assigned);
        assigned.pop_back();
      }
      CHECK(avg / parts == doctest::Approx(here).epsilon(1e-9));
      assigned.push_back(static_cast<int>(rng() % parts));
    }
    CHECK(CollisionPotential(ground, parts, sets, {}) == doctest::Approx(2.0));
  }
}

TEST_CASE("CollisionPartition is greedy on its potential") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const int nr = 120;
    const int parts = 8;
    const std::vector<int> ground = Range(nr);
    auto sets = RandomSmallSets(rng, nr, 40, 10);
    CollisionResult r = CollisionPartition(ground, parts, sets);
    CHECK(r.monotone);
    CHECK(r.final_potential <= 2.0 * (1.0 + 1e-9));
    CHECK(r.weighted_pairs <= r.pair_cap * (1.0 + 1e-9));
    CHECK(r.max_part <= r.size_cap);
    std::vector<int> assigned(nr, -1);
    for (size_t t = 0; t < r.parts.size(); ++t) {
      for (int j : r.parts[t]) assigned[j] = static_cast<int>(t);
    }
    for (int a : assigned) CHECK(a >= 0);
    CHECK(CollisionPotential(ground, parts, sets, assigned) ==
          doctest::Approx(r.final_potential).epsilon(1e-9));
  }
  CollisionResult wide = CollisionPartition(Range(5), 10, {});
  CHECK(wide.parts.size() == 5);
  CHECK(wide.max_part == 1);
}

TEST_CASE("RefinePart covers the ground exactly once") {
  std::mt19937_64 rng(45);
  const ConstantsProfile profile = ConstantsProfile::Practical();
  const std::vector<int> ground = Range(3000);
  auto sets = RandomSmallSets(rng, 3000, 60, 12);
  RefineResult r = RefinePart(ground, 12, sets, profile, 3000.0 * 60);
  std::vector<int> seen(3000, 0);
  for (const auto& q : r.parts) {
    for (int j : q) ++seen[j];
  }
  for (int s : seen) CHECK(s == 1);
  std::unordered_map<int, int> part;
  for (size_t t = 0; t < r.parts.size(); ++t) {
    for (int j : r.parts[t]) part[j] = static_cast<int>(t);
  }
  for (size_t i = 0; i < sets.size(); ++i) {
    std::unordered_map<int, int> cnt;
    for (int j : sets[i].elems) ++cnt[part[j]];
    int coll = 0;
    for (auto& [t, c] : cnt) coll += c - 1;
    CHECK(r.collisions[i] == coll);
  }
  CHECK(r.rounds >= 1);
}

TEST_CASE("IsolationPartition structural checks") {
  std::mt19937_64 rng(46);
  const ConstantsProfile profile = ConstantsProfile::Practical();
  const int n = 4096;
  auto small = RandomSmallSets(rng, n, 64, 20);
  std::vector<std::vector<int>> big;
  for (int b = 0; b < 8; ++b) {
    std::vector<int> row;
    for (int j = 0; j < n; ++j) {
      if (rng() % 4 == 0) row.push_back(j);
    }
    big.push_back(row);
  }
  IsolationResult r = IsolationPartition(n, small, big, profile, 64.0);
  const IsolationChecks& ck = r.checks;
  CHECK(ck.coarse_ok);
  CHECK(ck.fine_count_ok);
  CHECK(ck.refinement_ok);
  CHECK(ck.max_fine <= ck.fine_cap);
  CHECK(ck.split_ratio <= ck.split_cap);
  for (int q = 0; q < r.fine.num_parts(); ++q) {
    for (int j : r.fine.part(q)) CHECK(r.coarse.part_of(j) == r.coarse_of_fine[q]);
  }
  // Recount the big-set split against the coarse partition.
  for (const auto& b : big) {
    std::vector<int> cnt(r.coarse.num_parts(), 0);
    for (int j : b) ++cnt[r.coarse.part_of(j)];
    const int top = *std::max_element(cnt.begin(), cnt.end());
    CHECK(top * r.coarse.num_parts() / static_cast<double>(b.size()) <=
          ck.split_balance + 1e-9);
  }
  // Recompute the inflation from the collisions.
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < small.size(); ++i) {
    std::unordered_map<int, int> cnt;
    for (int j : small[i].elems) ++cnt[r.fine.part_of(j)];
    int coll = 0;
    for (auto& [t, c] : cnt) coll += c - 1;
    CHECK(r.collisions[i] == coll);
    num += std::exp(small[i].log_imp) * std::pow(1.0 + profile.delta, coll);
    den += std::exp(small[i].log_imp);
  }
  CHECK(ck.inflation == doctest::Approx(num / den).epsilon(1e-9));
}

TEST_CASE("IsolationPartition preconditions") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  CHECK_THROWS_AS(IsolationPartition(10, {{{11}, 0.0}}, {}, profile, 2.0),
                  InvalidInput);
  CHECK_THROWS_AS(IsolationPartition(-1, {}, {}, profile, 2.0), InvalidInput);
  IsolationResult r = IsolationPartition(1, {}, {}, profile, 2.0);
  CHECK(r.fine.num_parts() == 1);
}

}  // namespace
}  // namespace discbal
