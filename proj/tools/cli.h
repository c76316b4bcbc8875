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


// Command-line front end. Commands live in this library so tests can drive
// them without spawning processes.
//
// Exit codes: 0 success, 1 a certificate or check failed, 2 bad input.

#ifndef DISCBAL_TOOLS_CLI_H_
#define DISCBAL_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "discbal/core.h"
#include "discbal/edgecolor.h"
#include "json.hpp"

namespace discbal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificate = 1;
inline constexpr int kExitInput = 2;

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

// Checks recomputed independently of the solver code.
struct VerifyOutcome {
  bool ok = true;
  int rows = 0;
  double max_disc = 0.0;
  std::vector<std::string> failures;
  nlohmann::json ToJson() const;
};

// `report` may be null. When present, its "report" object supplies the
// per-row certificate ("bound") and the claimed discrepancies ("disc"),
// which must match the recomputed values.
VerifyOutcome VerifySets(const SetSystem& sets, const Assignment& chi,
                         const nlohmann::json* report);
VerifyOutcome VerifyWeighted(const WeightedSystem& a, const Assignment& chi,
                             const nlohmann::json* report);
VerifyOutcome VerifyLattice(const WeightedSystem& a,
                            const std::vector<double>& p,
                            const std::vector<int>& q,
                            const nlohmann::json* report);
VerifyOutcome VerifyColoring(int n, const std::vector<std::pair<int, int>>& edges,
                             const std::vector<int>& colors);

// Max over rows of disc / sqrt(norm ln m_hat), recomputed from scratch.
double IndependentMaxRatio(const WeightedSystem& a, const Assignment& chi);

// Suite: {"instances": [...], "modes": [...], "threads": [...]}. Each
// instance is {"kind": "sets"|"weighted", "n", "m", "s" | "row_nnz",
// "dist", "seed", "repeat"}. Returns the BenchReport JSON; fills csv.
nlohmann::json RunBench(const nlohmann::json& suite, std::string& csv);

// CSV header of RunBench, in column order.
extern const char* const kBenchCsvHeader;

}  // namespace discbal::cli

#endif  // DISCBAL_TOOLS_CLI_H_
