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


#include "discbal/lattice.h"

#include <cmath>
#include <random>
#include <vector>

#include "discbal/generate.h"
#include "discbal/profile.h"
#include "doctest.h"
#include "test_util.h"

namespace discbal {
namespace {

TEST_CASE("DefaultFixedBits") {
  CHECK(DefaultFixedBits(1) == 10);
  CHECK(DefaultFixedBits(1024) == 100);
  CHECK(DefaultFixedBits(1 << 20) == kMaxFixedBits);
}

TEST_CASE("Quantize is exact on dyadic values and rounds half up") {
  FixedPointVector f = Quantize({0.0, 1.0, 0.5, 0.375, 3.0 / 2048.0}, 10);
  CHECK(f.values[0] == 0);
  CHECK(f.values[1] == FixedWord{1} << 10);
  CHECK(f.values[2] == 512);
  CHECK(f.values[3] == 384);
  CHECK(f.values[4] == 2);
  CHECK(f.ToDouble(3) == 0.375);
  FixedPointVector wide = Quantize({1.0, 0.1}, 120);
  CHECK(wide.values[0] == FixedWord{1} << 120);
  CHECK(wide.ToDouble(1) == 0.1);
  CHECK_THROWS_AS(Quantize({1.5}, 10), InvalidInput);
  CHECK_THROWS_AS(Quantize({0.5}, 0), InvalidInput);
  CHECK_THROWS_AS(Quantize({0.5}, 121), InvalidInput);
}

TEST_CASE("RoundLattice output is integral and certified") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  LatticeInstance inst = GenerateLattice(512, 12, 4);
  LatticeResult r = RoundLattice(inst.a, inst.p, profile, 24);
  REQUIRE(r.q.size() == inst.p.size());
  for (size_t j = 0; j < r.q.size(); ++j) {
    CHECK((r.q[j] == 0 || r.q[j] == 1));
    if (inst.p[j] == 0.0) CHECK(r.q[j] == 0);
    if (inst.p[j] == 1.0) CHECK(r.q[j] == 1);
  }
  CHECK(r.report.invariant_ok);
  CHECK(r.report.certified);
  testing::DenseMatrix d = testing::ToDense(inst.a);
  for (int i = 0; i < inst.a.num_rows(); ++i) {
    long double mu = 0.0L, aq = 0.0L;
    for (int j = 0; j < d.n; ++j) {
      mu += d.rows[i][j] * inst.p[j];
      aq += d.rows[i][j] * r.q[j];
    }
    const double err = static_cast<double>(std::fabs(aq - mu));
    CHECK(r.report.mu[i] == doctest::Approx(static_cast<double>(mu)).epsilon(1e-9));
    CHECK(r.report.error[i] == doctest::Approx(err).epsilon(1e-6).scale(1.0));
    CHECK(err <= r.report.certificate[i] + 1e-9);
  }
  CHECK(static_cast<int>(r.report.stages.size()) <= 24);
  for (const LatticeStage& s : r.report.stages) CHECK(s.odd_count > 0);
}

TEST_CASE("RoundLattice on integral input changes nothing") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  WeightedSystem a = WeightedSystem::FromTriples(3, 1, {{0, 0, 1.0}, {0, 2, 0.5}});
  LatticeResult r = RoundLattice(a, {1.0, 0.0, 1.0}, profile);
  CHECK(r.q == std::vector<int8_t>{1, 0, 1});
  CHECK(r.report.error[0] == 0.0);
  CHECK(r.report.stages.empty());
}

TEST_CASE("RoundLattice input checks") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  WeightedSystem a = WeightedSystem::FromTriples(2, 1, {{0, 0, 2.0}});
  CHECK_THROWS_AS(RoundLattice(a, {0.5, 0.5}, profile), InvalidInput);
  WeightedSystem b = WeightedSystem::FromTriples(2, 1, {{0, 0, 0.5}});
  CHECK_THROWS_AS(RoundLattice(b, {0.5}, profile), InvalidInput);
  CHECK_THROWS_AS(RoundLattice(b, {0.5, -0.1}, profile), InvalidInput);
}

TEST_CASE("report json") {
  const ConstantsProfile profile = ConstantsProfile::Practical();
  LatticeInstance inst = GenerateLattice(64, 4, 1);
  auto j = RoundLattice(inst.a, inst.p, profile, 16).report.ToJson();
  CHECK(j.contains("max_ratio"));
  CHECK(j["invariant_ok"].get<bool>());
}

}  // namespace
}  // namespace discbal
