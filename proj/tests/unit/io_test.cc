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


#include "discbal/io.h"

#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_util.h"

namespace discbal {
namespace {

int ParseErrorLine(const std::string& text) {
  std::istringstream in(text);
  try {
    ParseSetSystem(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST_CASE("set system text round trip") {
  std::mt19937_64 rng(1);
  SetSystem s = testing::RandomSets(rng, 30, 7, 0.2);
  std::ostringstream out;
  WriteSetSystem(out, s);
  std::istringstream in(out.str());
  SetSystem t = ParseSetSystem(in);
  REQUIRE(t.num_sets() == s.num_sets());
  for (int i = 0; i < s.num_sets(); ++i) {
    CHECK(std::vector<int>(t.row(i).begin(), t.row(i).end()) ==
          std::vector<int>(s.row(i).begin(), s.row(i).end()));
  }
  SetSystem u = SetSystemFromJson(ToJson(s));
  CHECK(u.nnz() == s.nnz());
}

TEST_CASE("comments and blank lines are skipped") {
  std::istringstream in("# header\n\n3 2\n2 0 2\n# mid\n0\n");
  SetSystem s = ParseSetSystem(in);
  CHECK(s.num_sets() == 2);
  CHECK(s.row_size(0) == 2);
  CHECK(s.row_size(1) == 0);
}

TEST_CASE("parse errors carry the line number") {
  CHECK(ParseErrorLine("3 2\n2 0 2\n1 x\n") == 3);
  CHECK(ParseErrorLine("3 2\n2 0 2\n1 5\n") == 3);
  CHECK(ParseErrorLine("3 2\n2 0\n1 1\n") == 2);
  CHECK(ParseErrorLine("3 2\n\n# c\n1 0\n") == 5);
  CHECK(ParseErrorLine("3\n") == 1);
  CHECK(ParseErrorLine("3 1\n1 0\n1 1\n") == 3);
}

TEST_CASE("weighted text round trip is exact") {
  std::mt19937_64 rng(2);
  WeightedSystem a = testing::RandomWeighted(rng, 12, 5, 0.5);
  std::ostringstream out;
  WriteWeightedSystem(out, a);
  std::istringstream in(out.str());
  WeightedSystem b = ParseWeightedSystem(in);
  REQUIRE(b.nnz() == a.nnz());
  for (int i = 0; i < a.num_rows(); ++i) {
    for (int k = 0; k < a.row_size(i); ++k) {
      CHECK(a.vals(i)[k] == b.vals(i)[k]);
    }
  }
  WeightedSystem c = WeightedSystemFromJson(ToJson(a));
  CHECK(c.row_norms() == a.row_norms());
}

TEST_CASE("weighted parse errors") {
  auto line = [](const std::string& text) {
    std::istringstream in(text);
    try {
      ParseWeightedSystem(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line("2 1 2\n0 0 1.0\n0 0 2.0\n") == 3);
  CHECK(line("2 1 1\n0 0 nan\n") == 2);
  CHECK(line("2 1 1\n0 2 1\n") == 2);
  CHECK(line("2 1 2\n0 0 1\n") == 3);
}

TEST_CASE("assignments and vectors") {
  std::ostringstream out;
  WriteAssignment(out, {1, -1, 1});
  std::istringstream in(out.str());
  CHECK(ParseAssignment(in) == Assignment{1, -1, 1});
  std::istringstream plus("2\n+1\n-1\n");
  CHECK(ParseAssignment(plus) == Assignment{1, -1});
  std::istringstream zero("1\n0\n");
  CHECK_THROWS_AS(ParseAssignment(zero), ParseError);
  std::ostringstream vout;
  WriteRealVector(vout, {0.1, 1.0 / 3.0});
  std::istringstream vin(vout.str());
  auto v = ParseRealVector(vin);
  CHECK(v[1] == 1.0 / 3.0);
}

TEST_CASE("edge lists") {
  std::istringstream in("0 1\n# x\n1 2\n");
  auto e = ParseEdgeList(in);
  REQUIRE(e.size() == 2);
  CHECK(e[1] == Edge{1, 2});
  std::vector<int> colors;
  std::istringstream color_in("0 1 3\n1 2 0\n");
  auto ce = ParseEdgeList(color_in, &colors);
  CHECK(colors == std::vector<int>{3, 0});
  std::istringstream bad("0 1\n");
  CHECK_THROWS_AS(ParseEdgeList(bad, &colors), ParseError);
  std::ostringstream out;
  WriteEdgeList(out, ce, &colors);
  CHECK(out.str() == "0 1 3\n1 2 0\n");
}

TEST_CASE("file loaders accept both text and json") {
  const std::string path = "io_test_tmp.json";
  WriteFile(path, R"({"n": 3, "sets": [[0, 2], [1]]})");
  SetSystem s = LoadSetSystem(path);
  CHECK(s.num_sets() == 2);
  WriteFile(path, "3 1 1\n0 2 -1.5\n");
  WeightedSystem a = LoadWeightedSystem(path);
  CHECK(a.row_norm(0) == 2.25);
  WriteFile(path, "{\"n\": 3, ");
  CHECK_THROWS_AS(LoadSetSystem(path), ParseError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(LoadSetSystem("/nonexistent/file"), InvalidInput);
}

}  // namespace
}  // namespace discbal
