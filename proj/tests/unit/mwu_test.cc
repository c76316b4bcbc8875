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


#include "discbal/mwu.h"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace discbal {
namespace {

TEST_CASE("RequiredRounds") {
  CHECK(RequiredRounds(2.0, 0.5, 10.0) ==
        static_cast<int64_t>(std::ceil(9.0 * 2.0 * std::log(10.0) / 0.25)));
  // m below 2 is clamped.
  CHECK(RequiredRounds(1.0, 0.5, 1.0) == RequiredRounds(1.0, 0.5, 2.0));
  CHECK_THROWS_AS(RequiredRounds(1.0, 0.6, 10.0), InvalidInput);
  CHECK_THROWS_AS(RequiredRounds(0.0, 0.5, 10.0), InvalidInput);
}

TEST_CASE("update rule") {
  MwuState s(3, 2.0, 0.3);
  CHECK(s.eta() == doctest::Approx(0.05));
  s.Update({1.0, 0.5, 1.5});
  const auto& lw = s.importance().log_weights();
  CHECK(lw[0] == doctest::Approx(std::log(1.05)));
  CHECK(lw[2] == doctest::Approx(std::log(1.075)));
  CHECK(s.Averages()[1] == doctest::Approx(0.5));
}

TEST_CASE("linear weights survive rescaling") {
  // Constraint 0 takes the full width every round; its weight passes 1e100
  // long before the end, so the common factor is folded at least once.
  MwuState s(2, 1.0, 0.5);
  const double step = std::log1p(s.eta());
  for (int t = 0; t < 2000; ++t) s.Update({1.0, 0.0});
  const auto& w = s.weights();
  CHECK(w[0] <= 1e100);
  const auto& lw = s.importance().log_weights();
  CHECK(lw[0] == doctest::Approx(2000 * step).epsilon(1e-9));
  CHECK(lw[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.log_total() == doctest::Approx(2000 * step).epsilon(1e-9));
}

TEST_CASE("contract checks") {
  MwuState s(2, 1.0, 0.5);
  CHECK_THROWS_AS(s.Averages(), StaleError);
  CHECK_THROWS_AS(s.Certify(), StaleError);
  CHECK_THROWS_AS(s.Update({1.5, 0.0}), ContractViolation);
  CHECK_THROWS_AS(s.Update({-0.5, 0.0}), ContractViolation);
  // Mean gap above one breaks the oracle inequality.
  CHECK_THROWS_AS(s.Update({1.0, 1.0 + 1e-3}), ContractViolation);
  CHECK_THROWS_AS(s.Update({1.0}), InvalidInput);
  CHECK_THROWS_AS(MwuState(0, 1.0, 0.5), InvalidInput);
}

TEST_CASE("adversarial oracle cannot beat the guarantee") {
  std::mt19937_64 rng(99);
  for (double width : {2.0, 8.0}) {
    for (double eps : {0.1, 0.5}) {
      const int m = 10;
      MwuState s(m, width, eps);
      const int64_t rounds = RequiredRounds(width, eps, m);
      for (int64_t t = 0; t < rounds; ++t) {
        s.Update(testing::AdversarialGaps(s.importance().Normalized(), width,
                                          0, rng));
      }
      MwuCertificate c = s.Certify();
      CHECK(c.pass);
      CHECK(c.max_average <= 1.0 + eps);
      CHECK(c.rounds == rounds);
    }
  }
}

TEST_CASE("importance stays finite for long runs") {
  std::mt19937_64 rng(5);
  MwuState s(4, 8.0, 0.5);
  for (int t = 0; t < 20000; ++t) {
    s.Update(testing::AdversarialGaps(s.importance().Normalized(), 8.0, 0, rng));
  }
  CHECK(std::isfinite(s.log_total()));
}

}  // namespace
}  // namespace discbal
