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


#include "discbal/profile.h"

#include <cmath>

#include "discbal/core.h"
#include "doctest.h"

namespace discbal {
namespace {

TEST_CASE("PolyLog evaluation") {
  PolyLog p{2.0, 3.0, 5.0};
  CHECK(p.Eval(1.0) == 5.0);
  CHECK(p.Eval(1e6) == doctest::Approx(2.0 * std::pow(std::log(1e6), 3.0)));
}

TEST_CASE("powers of two") {
  CHECK(PowerOfTwoAtLeast(0.0) == 1);
  CHECK(PowerOfTwoAtLeast(5.0) == 8);
  CHECK(PowerOfTwoAtLeast(8.0) == 8);
  CHECK(PowerOfTwoAtMost(0.5) == 1);
  CHECK(PowerOfTwoAtMost(9.0) == 8);
  CHECK(PowerOfTwoAtMost(16.0) == 16);
}

TEST_CASE("modes") {
  CHECK(ParseProfileMode("theory") == ProfileMode::kTheory);
  CHECK(ProfileModeName(ProfileMode::kPractical) == "practical");
  CHECK_THROWS_AS(ParseProfileMode("fast"), InvalidInput);
  CHECK(ConstantsProfile::ForMode(ProfileMode::kTheory).tail_coeff == 1000.0);
  CHECK(ConstantsProfile::Theory().lambda_coeff == 100.0);
  // Theory edge base is max(16, 4 ln^2 n).
  CHECK(ConstantsProfile::Theory().edge_base.Eval(1e4) ==
        doctest::Approx(4.0 * std::pow(std::log(1e4), 2.0)));
}

TEST_CASE("overrides") {
  ConstantsProfile p = ConstantsProfile::Practical();
  p.ApplyOverrides({{"tail_coeff", 12.0},
                    {"edge_base", {{"floor", 32.0}}},
                    {"stall_rounds", 5},
                    {"split_from_certificate", false}});
  CHECK(p.tail_coeff == 12.0);
  CHECK(p.edge_base.floor == 32.0);
  CHECK(p.edge_base.coef == 1.0);
  CHECK(p.stall_rounds == 5);
  CHECK_FALSE(p.split_from_certificate);
  CHECK_THROWS_AS(p.ApplyOverrides({{"nope", 1.0}}), InvalidInput);
  CHECK_THROWS_AS(p.ApplyOverrides({{"delta", 1.5}}), InvalidInput);
  CHECK_THROWS_AS(p.ApplyOverrides({{"tail_coeff", "x"}}), InvalidInput);
  CHECK_THROWS_AS(p.ApplyOverrides({{"stall_rounds", "x"}}), InvalidInput);
  CHECK_THROWS_AS(p.ApplyOverrides(nlohmann::json::array()), InvalidInput);
}

TEST_CASE("json round trip") {
  ConstantsProfile t = ConstantsProfile::Theory();
  ConstantsProfile p = ConstantsProfile::Practical();
  p.ApplyOverrides(t.ToJson());
  CHECK(p.ToJson() == t.ToJson());
  CHECK(p.mode == ProfileMode::kTheory);
}

}  // namespace
}  // namespace discbal
