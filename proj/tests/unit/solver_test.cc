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


#include "discbal/solver.h"

#include <cmath>
#include <random>
#include <vector>

#include "discbal/generate.h"
#include "discbal/parallel.h"
#include "discbal/profile.h"
#include "doctest.h"
#include "test_util.h"

namespace discbal {
namespace {

void CheckReport(const WeightedSystem& a, const SolveResult& r) {
  REQUIRE(static_cast<int>(r.chi.size()) == a.n());
  auto s = testing::SignedSums(testing::ToDense(a), r.chi);
  for (int i = 0; i < a.num_rows(); ++i) {
    CHECK(r.report.sdisc[i] == doctest::Approx(s[i]).epsilon(1e-9).scale(1.0));
    CHECK(std::abs(s[i]) <= r.report.bound[i] * (1.0 + 1e-9) + 1e-9);
  }
  CHECK(r.report.Certified());
  CHECK(r.telemetry.value("certified", false));
}

TEST_CASE("SolveUnweighted certifies small and recursive instances") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  for (int n : {1, 16, 400, 4000}) {
    const int m = std::max(2, n / 10);
    const int s = std::max(1, static_cast<int>(std::sqrt(n)) * 3);
    SetSystem sets = GenerateSets(n, m, s, 7);
    SolveResult r = SolveUnweighted(sets, profile);
    CheckReport(WeightedSystem::FromSetSystem(sets), r);
  }
}

TEST_CASE("SolveUnweighted edge cases") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  SolveResult empty = SolveUnweighted(SetSystem::FromRows(0, {}), profile);
  CHECK(empty.chi.empty());
  SolveResult no_rows = SolveUnweighted(SetSystem::FromRows(5, {}), profile);
  CHECK(no_rows.chi.size() == 5);
  SolveResult blank = SolveUnweighted(SetSystem::FromRows(5, {{}, {}}), profile);
  CHECK(blank.report.Certified());
}

TEST_CASE("theory mode stays on the base path") {
  const ConstantsProfile theory = ConstantsProfile::Theory();
  SetSystem sets = GenerateSets(2000, 200, 44, 3);
  SolveResult r = SolveUnweighted(sets, theory);
  CHECK(r.telemetry.value("path", "") == "direct");
  CHECK(r.report.Certified());
}

TEST_CASE("warm-up solvers") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  SetSystem sets = GenerateSets(3000, 300, 60, 11);
  const WeightedSystem a = WeightedSystem::FromSetSystem(sets);
  CheckReport(a, WarmupSqrt(sets, profile));
  CheckReport(a, WarmupSqrtOptimal(sets, profile));
}

TEST_CASE("RecursionCreator mixture matches its definition") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  std::mt19937_64 rng(5);
  WeightedSystem a = testing::RandomWeighted(rng, 256, 6, 0.5);
  double delta = 0.0;
  for (int i = 0; i < a.num_rows(); ++i) delta = std::max(delta, a.row_norm(i));
  CreatorResult c = RecursionCreator(a, delta, profile);
  const int parts = c.partition.num_parts();
  CHECK(parts * 2 <= a.n());
  REQUIRE(c.mixture.n() == parts);
  testing::DenseMatrix d = testing::ToDense(a);
  testing::DenseMatrix mix = testing::ToDense(c.mixture);
  double worst = 0.0;
  for (int i = 0; i < a.num_rows(); ++i) {
    std::vector<double> want(parts, 0.0);
    for (int j = 0; j < a.n(); ++j) {
      want[c.partition.part_of(j)] += d.rows[i][j] * c.chi_bar[j];
    }
    double norm = 0.0;
    for (int l = 0; l < parts; ++l) {
      CHECK(mix.rows[i][l] == doctest::Approx(want[l]).epsilon(1e-9).scale(1.0));
      norm += want[l] * want[l];
    }
    worst = std::max(worst, norm / delta);
  }
  CHECK(c.variance_ratio == doctest::Approx(worst).epsilon(1e-9));
  CHECK_THROWS_AS(RecursionCreator(a, delta * 0.5, profile), InvalidInput);
}

TEST_CASE("SolveBalancedWeights lifts signs back") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  std::vector<Triple> t;
  const int n = 2048, m = 8;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (rng() % 2) t.push_back({i, j, u(rng)});
    }
  }
  WeightedSystem a = WeightedSystem::FromTriples(n, m, t);
  double delta = 0.0;
  for (int i = 0; i < m; ++i) delta = std::max(delta, a.row_norm(i));
  SolveResult r = SolveBalancedWeights(a, delta, profile);
  CheckReport(a, r);
  CHECK(r.telemetry["levels"].size() >= 1);
  CHECK(r.telemetry["base_columns"].get<int>() < n);
}

TEST_CASE("IntSystem converts to doubles") {
  IntSystem s;
  s.n = 3;
  s.offsets = {0, 2, 3};
  s.cols = {0, 2, 1};
  s.vals = {5, -2, 7};
  WeightedSystem w = s.ToWeighted();
  CHECK(w.num_rows() == 2);
  CHECK(w.row_norm(0) == 29.0);
  CHECK(w.vals(1)[0] == 7.0);
}

TEST_CASE("SolveWeighted certifies heavy-tailed rows") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  for (WeightDist dist : {WeightDist::kGaussian, WeightDist::kPowerLaw,
                          WeightDist::kLognormal, WeightDist::kUniform}) {
    WeightedSystem a = GenerateWeighted(2048, 16, 512, dist, 3);
    SolveResult r = SolveWeighted(a, profile);
    CheckReport(a, r);
  }
  WeightedSystem tiny = WeightedSystem::FromTriples(3, 2, {{0, 0, 1e-300}, {1, 2, 5.0}});
  CheckReport(tiny, SolveWeighted(tiny, profile));
  WeightedSystem zero = WeightedSystem::FromTriples(4, 2, {});
  CHECK(SolveWeighted(zero, profile).report.Certified());
}

TEST_CASE("results do not depend on the thread count") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  SetSystem sets = GenerateSets(5000, 500, 70, 2);
  WeightedSystem a = GenerateWeighted(4096, 32, 1024, WeightDist::kPowerLaw, 2);
  SetNumThreads(1);
  const Assignment base_sets = SolveUnweighted(sets, profile).chi;
  const Assignment base_w = SolveWeighted(a, profile).chi;
  for (int threads : {2, 8}) {
    SetNumThreads(threads);
    CHECK(SolveUnweighted(sets, profile).chi == base_sets);
    CHECK(SolveWeighted(a, profile).chi == base_w);
  }
  SetNumThreads(1);
}

}  // namespace
}  // namespace discbal
