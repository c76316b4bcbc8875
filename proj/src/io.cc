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

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace discbal {
namespace {

// Yields the tokens of successive non-blank, non-comment lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool Next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      tokens.clear();
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  void Require(std::vector<std::string>& tokens, const char* what) {
    if (!Next(tokens)) throw ParseError(line_ + 1, std::string("missing ") + what);
  }

  int line() const { return line_; }

  int64_t Int(const std::string& tok) const {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError(line_, "expected an integer, got '" + tok + "'");
    }
    return v;
  }

  int NonNeg(const std::string& tok) const {
    const int64_t v = Int(tok);
    if (v < 0 || v > INT32_MAX) {
      throw ParseError(line_, "value '" + tok + "' out of range");
    }
    return static_cast<int>(v);
  }

  double Real(const std::string& tok) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || errno == ERANGE ||
        !std::isfinite(v)) {
      throw ParseError(line_, "expected a finite number, got '" + tok + "'");
    }
    return v;
  }

  void Arity(const std::vector<std::string>& tokens, size_t want) const {
    if (tokens.size() != want) {
      throw ParseError(line_, "expected " + std::to_string(want) +
                                  " fields, got " +
                                  std::to_string(tokens.size()));
    }
  }

 private:
  std::istream& in_;
  int line_ = 0;
};

}  // namespace

SetSystem ParseSetSystem(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  r.Require(tok, "header 'n m'");
  r.Arity(tok, 2);
  const int n = r.NonNeg(tok[0]);
  const int m = r.NonNeg(tok[1]);
  std::vector<std::vector<int>> rows(m);
  for (int i = 0; i < m; ++i) {
    r.Require(tok, "set line");
    const int k = r.NonNeg(tok[0]);
    r.Arity(tok, static_cast<size_t>(k) + 1);
    for (int t = 1; t <= k; ++t) {
      const int j = r.NonNeg(tok[t]);
      if (j >= n) {
        throw ParseError(r.line(), "element " + tok[t] + " outside [0, n)");
      }
      rows[i].push_back(j);
    }
  }
  if (r.Next(tok)) throw ParseError(r.line(), "trailing data");
  return SetSystem::FromRows(n, rows);
}

WeightedSystem ParseWeightedSystem(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  r.Require(tok, "header 'n m nnz'");
  r.Arity(tok, 3);
  const int n = r.NonNeg(tok[0]);
  const int m = r.NonNeg(tok[1]);
  const int nnz = r.NonNeg(tok[2]);
  std::vector<Triple> t;
  t.reserve(nnz);
  for (int k = 0; k < nnz; ++k) {
    r.Require(tok, "entry line");
    r.Arity(tok, 3);
    const int i = r.NonNeg(tok[0]);
    const int j = r.NonNeg(tok[1]);
    if (i >= m || j >= n) throw ParseError(r.line(), "entry out of range");
    t.push_back({i, j, r.Real(tok[2])});
  }
  if (r.Next(tok)) throw ParseError(r.line(), "trailing data");
  try {
    return WeightedSystem::FromTriples(n, m, std::move(t));
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(r.line(), e.what());
  }
}

Assignment ParseAssignment(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  r.Require(tok, "length line");
  r.Arity(tok, 1);
  const int n = r.NonNeg(tok[0]);
  Assignment chi(n);
  for (int j = 0; j < n; ++j) {
    r.Require(tok, "sign line");
    r.Arity(tok, 1);
    const int64_t v = r.Int(tok[0][0] == '+' ? tok[0].substr(1) : tok[0]);
    if (v != 1 && v != -1) throw ParseError(r.line(), "sign must be +1 or -1");
    chi[j] = static_cast<int8_t>(v);
  }
  if (r.Next(tok)) throw ParseError(r.line(), "trailing data");
  return chi;
}

std::vector<double> ParseRealVector(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> tok;
  r.Require(tok, "length line");
  r.Arity(tok, 1);
  const int n = r.NonNeg(tok[0]);
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) {
    r.Require(tok, "value line");
    r.Arity(tok, 1);
    v[j] = r.Real(tok[0]);
  }
  if (r.Next(tok)) throw ParseError(r.line(), "trailing data");
  return v;
}

std::vector<Edge> ParseEdgeList(std::istream& in, std::vector<int>* colors) {
  LineReader r(in);
  std::vector<std::string> tok;
  std::vector<Edge> edges;
  if (colors != nullptr) colors->clear();
  while (r.Next(tok)) {
    r.Arity(tok, colors != nullptr ? 3 : 2);
    edges.emplace_back(r.NonNeg(tok[0]), r.NonNeg(tok[1]));
    if (colors != nullptr) colors->push_back(r.NonNeg(tok[2]));
  }
  return edges;
}

void WriteSetSystem(std::ostream& out, const SetSystem& sets) {
  out << sets.n() << ' ' << sets.num_sets() << '\n';
  for (int i = 0; i < sets.num_sets(); ++i) {
    out << sets.row_size(i);
    for (int j : sets.row(i)) out << ' ' << j;
    out << '\n';
  }
}

void WriteWeightedSystem(std::ostream& out, const WeightedSystem& a) {
  out << a.n() << ' ' << a.num_rows() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (int i = 0; i < a.num_rows(); ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      out << i << ' ' << c[k] << ' ' << v[k] << '\n';
    }
  }
}

void WriteAssignment(std::ostream& out, const Assignment& chi) {
  out << chi.size() << '\n';
  for (int8_t c : chi) out << (c > 0 ? "1\n" : "-1\n");
}

void WriteRealVector(std::ostream& out, const std::vector<double>& v) {
  out << v.size() << '\n' << std::setprecision(17);
  for (double x : v) out << x << '\n';
}

void WriteEdgeList(std::ostream& out, const std::vector<Edge>& edges,
                   const std::vector<int>* colors) {
  for (size_t e = 0; e < edges.size(); ++e) {
    out << edges[e].first << ' ' << edges[e].second;
    if (colors != nullptr) out << ' ' << (*colors)[e];
    out << '\n';
  }
}

nlohmann::json ToJson(const SetSystem& sets) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < sets.num_sets(); ++i) {
    auto r = sets.row(i);
    rows.push_back(std::vector<int>(r.begin(), r.end()));
  }
  return {{"n", sets.n()}, {"sets", rows}};
}

nlohmann::json ToJson(const WeightedSystem& a) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < a.num_rows(); ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      entries.push_back(nlohmann::json::array({i, c[k], v[k]}));
    }
  }
  return {{"n", a.n()}, {"m", a.num_rows()}, {"entries", entries}};
}

nlohmann::json ToJson(const DiscReport& report) {
  nlohmann::json j;
  j["sdisc"] = report.sdisc;
  j["disc"] = report.disc;
  j["ratio"] = report.ratio;
  j["max_disc"] = report.max_disc;
  j["max_ratio"] = report.max_ratio;
  if (!report.bound.empty()) {
    j["bound"] = report.bound;
    j["certified"] = report.Certified();
  }
  return j;
}

SetSystem SetSystemFromJson(const nlohmann::json& j) {
  try {
    return SetSystem::FromRows(j.at("n").get<int>(),
                               j.at("sets").get<std::vector<std::vector<int>>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
}

WeightedSystem WeightedSystemFromJson(const nlohmann::json& j) {
  try {
    std::vector<Triple> t;
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 3) {
        throw ParseError(0, "entry must be [i, j, a]");
      }
      t.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return WeightedSystem::FromTriples(j.at("n").get<int>(),
                                       j.at("m").get<int>(), std::move(t));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << contents;
}

namespace {

bool LooksLikeJson(const std::string& s) {
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

nlohmann::json ParseJsonText(const std::string& s) {
  try {
    return nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace

SetSystem LoadSetSystem(const std::string& path) {
  const std::string text = ReadFile(path);
  if (LooksLikeJson(text)) return SetSystemFromJson(ParseJsonText(text));
  std::istringstream in(text);
  return ParseSetSystem(in);
}

WeightedSystem LoadWeightedSystem(const std::string& path) {
  const std::string text = ReadFile(path);
  if (LooksLikeJson(text)) return WeightedSystemFromJson(ParseJsonText(text));
  std::istringstream in(text);
  return ParseWeightedSystem(in);
}

}  // namespace discbal
