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
// Text and JSON formats.
//
// Set system text:       first line "n m", then m lines "k j_1 ... j_k".
// Weighted system text:  first line "n m nnz", then nnz lines "i j a".
// Assignment text:       first line "n", then n lines holding +1 or -1.
// Real vector text:      first line "n", then n values.
// Edge list text:        one "u v" per line; colored lists add a third column.
// Indices are 0-based. Lines starting with '#' and blank lines are skipped.
// Loaders accept the JSON mirrors when the first non-blank character is '{'.

#ifndef DISCBAL_IO_H_
#define DISCBAL_IO_H_

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "discbal/core.h"
#include "json.hpp"

namespace discbal {

using Edge = std::pair<int, int>;

SetSystem ParseSetSystem(std::istream& in);
WeightedSystem ParseWeightedSystem(std::istream& in);
Assignment ParseAssignment(std::istream& in);
std::vector<double> ParseRealVector(std::istream& in);
// With `colors`, every line must carry a third column holding the color.
std::vector<Edge> ParseEdgeList(std::istream& in,
                                std::vector<int>* colors = nullptr);

void WriteSetSystem(std::ostream& out, const SetSystem& sets);
void WriteWeightedSystem(std::ostream& out, const WeightedSystem& a);
void WriteAssignment(std::ostream& out, const Assignment& chi);
void WriteRealVector(std::ostream& out, const std::vector<double>& v);
void WriteEdgeList(std::ostream& out, const std::vector<Edge>& edges,
                   const std::vector<int>* colors = nullptr);

nlohmann::json ToJson(const SetSystem& sets);
nlohmann::json ToJson(const WeightedSystem& a);
nlohmann::json ToJson(const DiscReport& report);
SetSystem SetSystemFromJson(const nlohmann::json& j);
WeightedSystem WeightedSystemFromJson(const nlohmann::json& j);

// File helpers. Failures to open raise InvalidInput.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);
SetSystem LoadSetSystem(const std::string& path);
WeightedSystem LoadWeightedSystem(const std::string& path);

}  // namespace discbal

#endif  // DISCBAL_IO_H_
