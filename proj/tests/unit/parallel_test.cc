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


#include "discbal/parallel.h"

#include <atomic>
#include <stdexcept>
#include <vector>

#include "doctest.h"

namespace discbal {
namespace {

TEST_CASE("ParallelFor visits every index once") {
  for (int threads : {1, 2, 8}) {
    SetNumThreads(threads);
    std::vector<int> hits(1000, 0);
    ParallelFor(1000, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  SetNumThreads(1);
}

TEST_CASE("nested calls run serially and still cover the range") {
  SetNumThreads(4);
  std::vector<int> out(16 * 16, 0);
  ParallelFor(16, [&](int i) {
    ParallelFor(16, [&](int j) { out[i * 16 + j] = i + j; });
  });
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) CHECK(out[i * 16 + j] == i + j);
  }
  SetNumThreads(1);
}

TEST_CASE("exceptions propagate") {
  SetNumThreads(2);
  CHECK_THROWS_AS(ParallelFor(10,
                              [](int i) {
                                if (i == 7) throw std::runtime_error("x");
                              }),
                  std::runtime_error);
  SetNumThreads(0);
  CHECK(NumThreads() == 1);
}

}  // namespace
}  // namespace discbal
