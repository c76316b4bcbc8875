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

#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace discbal {
namespace {

TEST_CASE("seed bits cover the labels") {
  CHECK(PairwiseSeedBits(0) == 0);
  CHECK(PairwiseSeedBits(1) == 1);
  CHECK(PairwiseSeedBits(3) == 2);
  CHECK(PairwiseSeedBits(4) == 3);
  CHECK(PairwiseSigns(3, 0) == Assignment{1, 1, 1});
  // Labels 1, 2, 3 against seed 0b01.
  CHECK(PairwiseSigns(3, 1) == Assignment{-1, 1, -1});
}

TEST_CASE("signs are pairwise independent over the seed space") {
  const int n = 9;
  const int bits = PairwiseSeedBits(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      int64_t corr = 0, single = 0;
      for (uint64_t s = 0; s < (uint64_t{1} << bits); ++s) {
        Assignment chi = PairwiseSigns(n, s);
        corr += chi[a] * chi[b];
        single += chi[a];
      }
      CHECK(corr == 0);
      CHECK(single == 0);
    }
  }
}

TEST_CASE("objectives match direct evaluation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    SetSystem s = testing::RandomSets(rng, n, 5, 0.4);
    std::vector<double> lin(5);
    for (double& w : lin) w = 1.0 + static_cast<double>(rng() % 7);
    ImportanceVector imp = ImportanceVector::FromLinear(lin);
    auto obj = PairwiseObjectives(s, imp);
    auto w = imp.Normalized();
    REQUIRE(obj.size() == (size_t{1} << PairwiseSeedBits(n)));
    for (uint64_t seed = 0; seed < obj.size(); ++seed) {
      DiscReport r = Evaluate(s, PairwiseSigns(n, seed));
      double ref = 0.0;
      for (int i = 0; i < 5; ++i) ref += w[i] * r.sdisc[i] * r.sdisc[i];
      CHECK(obj[seed] == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("balance picks the lowest minimizing seed") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    SetSystem s = testing::RandomSets(rng, 12, 6, 0.5);
    PairwiseResult r = PairwiseBalance(s, ImportanceVector::Uniform(6));
    auto obj = PairwiseObjectives(s, ImportanceVector::Uniform(6));
    for (uint64_t seed = 0; seed < obj.size(); ++seed) {
      if (seed < r.seed) CHECK(obj[seed] > obj[r.seed]);
      CHECK(obj[seed] >= obj[r.seed]);
    }
    CHECK(r.objective <= r.mean_objective + 1e-9);
    CHECK(r.chi == PairwiseSigns(12, r.seed));
  }
}

TEST_CASE("importance length is checked") {
  SetSystem s = SetSystem::FromRows(3, {{0, 1}});
  CHECK_THROWS_AS(PairwiseBalance(s, ImportanceVector::Uniform(2)),
                  InvalidInput);
}

}  // namespace
}  // namespace discbal
