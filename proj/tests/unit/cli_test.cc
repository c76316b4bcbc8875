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


#include "cli.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "discbal/core.h"
#include "discbal/io.h"
#include "doctest.h"

namespace discbal::cli {
namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Call(std::vector<std::string> args) {
  args.insert(args.begin(), "discbal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = Main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Tmp(const std::string& name) { return "cli_test_" + name; }

TEST_CASE("gen is byte-reproducible") {
  REQUIRE(Call({"gen", "sets", "--n", "100", "--m", "10", "--s", "20", "--seed", "1",
                "-o", Tmp("a.txt")}).code == kExitOk);
  REQUIRE(Call({"gen", "sets", "--n", "100", "--m", "10", "--s", "20", "--seed", "1",
                "-o", Tmp("b.txt")}).code == kExitOk);
  CHECK(ReadFile(Tmp("a.txt")) == ReadFile(Tmp("b.txt")));
  Run stdout_run = Call({"gen", "sets", "--n", "100", "--m", "10", "--s", "20",
                         "--seed", "1"});
  CHECK(stdout_run.out == ReadFile(Tmp("a.txt")));
}

TEST_CASE("gen weighted and graph") {
  REQUIRE(Call({"gen", "weighted", "--n", "300", "--m", "5", "--row-nnz", "40",
                "--dist", "lognormal", "-o", Tmp("w.txt")}).code == kExitOk);
  CHECK(LoadWeightedSystem(Tmp("w.txt")).nnz() == 200);
  REQUIRE(Call({"gen", "graph", "--n", "50", "--d", "4", "-o", Tmp("g.txt")}).code ==
          kExitOk);
  std::istringstream in(ReadFile(Tmp("g.txt")));
  auto edges = ParseEdgeList(in);
  std::vector<int> deg(50, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  for (int d : deg) CHECK(d == 4);
  CHECK(Call({"gen", "graph", "--n", "5", "--d", "3"}).code == kExitInput);
  CHECK(Call({"gen", "weighted", "--n", "5", "--m", "1", "--row-nnz", "1", "--dist",
              "cauchy"}).code == kExitInput);
}

TEST_CASE("solve balance writes a matching report") {
  WriteFile(Tmp("tiny.txt"), "6 3\n3 0 1 2\n3 2 3 4\n4 0 2 4 5\n");
  Run r = Call({"solve", "balance", "-i", Tmp("tiny.txt"), "-o", Tmp("tiny.chi"),
                "--report", Tmp("tiny.json")});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(ReadFile(Tmp("tiny.json")));
  CHECK(rep["certified"].get<bool>());
  CHECK(rep["n"].get<int>() == 6);
  std::istringstream in(ReadFile(Tmp("tiny.chi")));
  Assignment chi = ParseAssignment(in);
  DiscReport e = Evaluate(LoadSetSystem(Tmp("tiny.txt")), chi);
  CHECK(rep["report"]["disc"].get<std::vector<double>>() == e.disc);
  Run v = Call({"verify", "balance", "-i", Tmp("tiny.txt"), "-a", Tmp("tiny.chi"),
                "--report", Tmp("tiny.json")});
  CHECK(v.code == kExitOk);
  for (const char* solver : {"warmup", "warmup-optimal", "seq"}) {
    CHECK(Call({"solve", "balance", "-i", Tmp("tiny.txt"), "--solver", solver,
                "--report", Tmp("x.json")}).code == kExitOk);
  }
  CHECK(Call({"solve", "balance", "-i", Tmp("tiny.txt"), "--solver", "magic"}).code ==
        kExitInput);
}

TEST_CASE("malformed input reports the line") {
  WriteFile(Tmp("bad.txt"), "6 2\n2 0 1\n2 0 x\n");
  Run r = Call({"solve", "balance", "-i", Tmp("bad.txt")});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(Call({"solve", "balance", "-i", Tmp("missing.txt")}).code == kExitInput);
  CHECK(Call({"solve", "balance"}).code == kExitInput);
  CHECK(Call({"frobnicate"}).code == kExitInput);
  CHECK(Call({"solve", "balance", "-i", Tmp("tiny.txt"), "--mode", "fast"}).code ==
        kExitInput);
}

TEST_CASE("theory mode records the base path") {
  REQUIRE(Call({"gen", "sets", "--n", "3000", "--m", "300", "--s", "55", "-o",
                Tmp("big.txt")}).code == kExitOk);
  Run r = Call({"solve", "balance", "-i", Tmp("big.txt"), "--mode", "theory",
                "--report", Tmp("big.json")});
  CHECK(r.code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(ReadFile(Tmp("big.json")));
  CHECK(rep["mode"] == "theory");
  CHECK(rep["telemetry"]["path"] == "direct");
  CHECK(rep["profile"]["tail_coeff"].get<double>() == 1000.0);
}

TEST_CASE("verify flags a corrupted assignment") {
  REQUIRE(Call({"gen", "sets", "--n", "200", "--m", "2", "--s", "200", "-o",
                Tmp("full.txt")}).code == kExitOk);
  REQUIRE(Call({"solve", "balance", "-i", Tmp("full.txt"), "-o", Tmp("full.chi"),
                "--report", Tmp("full.json")}).code == kExitOk);
  std::istringstream in(ReadFile(Tmp("full.chi")));
  Assignment chi = ParseAssignment(in);
  chi[0] = static_cast<int8_t>(-chi[0]);
  std::ostringstream one;
  WriteAssignment(one, chi);
  WriteFile(Tmp("one.chi"), one.str());
  Run flipped = Call({"verify", "balance", "-i", Tmp("full.txt"), "-a", Tmp("one.chi"),
                      "--report", Tmp("full.json")});
  CHECK(flipped.code == kExitCertificate);
  CHECK(flipped.out.find("reported disc") != std::string::npos);
  Assignment plus(200, 1);
  std::ostringstream all;
  WriteAssignment(all, plus);
  WriteFile(Tmp("plus.chi"), all.str());
  Run bad = Call({"verify", "balance", "-i", Tmp("full.txt"), "-a", Tmp("plus.chi"),
                  "--report", Tmp("full.json")});
  CHECK(bad.code == kExitCertificate);
  CHECK(bad.out.find("exceeds certificate") != std::string::npos);
  // Without a report there is nothing to violate.
  CHECK(Call({"verify", "balance", "-i", Tmp("full.txt"), "-a", Tmp("plus.chi")}).code ==
        kExitOk);
}

TEST_CASE("wbalance, lattice and edgecolor round trips") {
  REQUIRE(Call({"gen", "weighted", "--n", "500", "--m", "8", "--row-nnz", "100",
                "--dist", "powerlaw", "-o", Tmp("pw.txt")}).code == kExitOk);
  CHECK(Call({"solve", "wbalance", "-i", Tmp("pw.txt"), "-o", Tmp("pw.chi"),
              "--report", Tmp("pw.json")}).code == kExitOk);
  CHECK(Call({"verify", "wbalance", "-i", Tmp("pw.txt"), "-a", Tmp("pw.chi"),
              "--report", Tmp("pw.json")}).code == kExitOk);

  REQUIRE(Call({"gen", "lattice", "--n", "300", "--m", "6", "-o", Tmp("lat.txt"),
                "--p-out", Tmp("lat.p")}).code == kExitOk);
  CHECK(Call({"lattice", "-i", Tmp("lat.txt"), "--p", Tmp("lat.p"), "--bits", "20",
              "-o", Tmp("lat.q"), "--report", Tmp("lat.json")}).code == kExitOk);
  CHECK(Call({"verify", "lattice", "-i", Tmp("lat.txt"), "--p", Tmp("lat.p"), "-a",
              Tmp("lat.q"), "--report", Tmp("lat.json")}).code == kExitOk);
  CHECK(Call({"lattice", "-i", Tmp("lat.txt")}).code == kExitInput);

  REQUIRE(Call({"gen", "graph", "--n", "200", "--d", "20", "-o", Tmp("gr.txt")}).code ==
          kExitOk);
  CHECK(Call({"edgecolor", "-i", Tmp("gr.txt"), "-o", Tmp("gr.col"), "--report",
              Tmp("gr.json")}).code == kExitOk);
  const nlohmann::json rep = nlohmann::json::parse(ReadFile(Tmp("gr.json")));
  CHECK(rep["delta"].get<int>() == 20);
  CHECK(Call({"verify", "edgecolor", "-i", Tmp("gr.txt"), "-a", Tmp("gr.col")}).code ==
        kExitOk);
  // Merge two colors to break properness.
  std::string col = ReadFile(Tmp("gr.col"));
  std::istringstream in(col);
  std::vector<int> colors;
  auto edges = ParseEdgeList(in, &colors);
  for (int& c : colors) c = c == 1 ? 0 : c;
  std::ostringstream out;
  WriteEdgeList(out, edges, &colors);
  WriteFile(Tmp("gr.bad"), out.str());
  CHECK(Call({"verify", "edgecolor", "-i", Tmp("gr.txt"), "-a", Tmp("gr.bad")}).code ==
        kExitCertificate);
}

TEST_CASE("independent verifiers") {
  SetSystem s = SetSystem::FromRows(4, {{0, 1, 2}, {2, 3}});
  VerifyOutcome v = VerifySets(s, {1, -1, 1, 1}, nullptr);
  CHECK(v.ok);
  CHECK(v.max_disc == 2.0);
  nlohmann::json rep = {{"report", {{"bound", {0.5, 3.0}}}}};
  VerifyOutcome w = VerifySets(s, {1, -1, 1, 1}, &rep);
  CHECK_FALSE(w.ok);
  CHECK(w.failures.size() == 1);
  CHECK_FALSE(VerifySets(s, {1, -1, 1}, nullptr).ok);
  WeightedSystem a = WeightedSystem::FromTriples(2, 1, {{0, 0, 3.0}, {0, 1, 4.0}});
  CHECK(IndependentMaxRatio(a, {1, -1}) ==
        doctest::Approx(1.0 / std::sqrt(25.0 * std::log(2.0))));
  CHECK_FALSE(VerifyColoring(3, {{0, 1}, {1, 2}}, {0, 0}).ok);
  CHECK(VerifyColoring(3, {{0, 1}, {1, 2}}, {0, 1}).ok);
  CHECK_FALSE(VerifyLattice(a, {0.5, 0.5}, {1, 2}, nullptr).ok);
}

TEST_CASE("bench rows, csv and determinism") {
  WriteFile(Tmp("suite1.json"),
            R"({"instances": [{"kind": "sets", "n": 400, "m": 40, "s": 20}]})");
  Run one = Call({"bench", "--suite", Tmp("suite1.json"), "--csv", Tmp("one.csv")});
  REQUIRE(one.code == kExitOk);
  const nlohmann::json rep1 = nlohmann::json::parse(one.out);
  CHECK(rep1["rows"].size() == 1);
  const std::string csv = ReadFile(Tmp("one.csv"));
  CHECK(csv.rfind(std::string(kBenchCsvHeader) + "\n", 0) == 0);

  nlohmann::json suite = {
      {"instances",
       {{{"kind", "sets"}, {"n", 2000}, {"m", 200}, {"s", 45}, {"repeat", 2}},
        {{"kind", "weighted"}, {"n", 1024}, {"m", 16}, {"row_nnz", 256},
         {"dist", "powerlaw"}}}},
      {"threads", {1, 8}}};
  std::string csv2;
  const nlohmann::json rep2 = RunBench(suite, csv2);
  CHECK(rep2["deterministic"].get<bool>());
  CHECK(rep2["certified"].get<bool>());
  CHECK(rep2["rows"].size() == 6);
  CHECK(rep2["aggregate"]["count"].get<int>() == 6);

  WriteFile(Tmp("suite_bad.json"), R"({"instances": [{"kind": "sets"}]})");
  CHECK(Call({"bench", "--suite", Tmp("suite_bad.json")}).code == kExitInput);
}

}  // namespace
}  // namespace discbal::cli
