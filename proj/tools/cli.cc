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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "discbal/edgecolor.h"
#include "discbal/generate.h"
#include "discbal/io.h"
#include "discbal/lattice.h"
#include "discbal/parallel.h"
#include "discbal/potential.h"
#include "discbal/profile.h"
#include "discbal/solver.h"

namespace discbal::cli {
namespace {

using Json = nlohmann::json;

const char* const kTasks = "balance|wbalance|lattice|edgecolor";

struct SolveOptions {
  std::string task;
  std::string input;
  std::string p_path;
  std::string solver = "unweighted";
  std::string out;
  std::string report;
  std::string mode = "practical";
  std::string profile_path;
  int threads = 0;
  double tail_coeff = 0.0;
  double pot_m = 0.0;
  int bits = 0;
};

struct GenOptions {
  std::string kind;
  int n = 0;
  int m = 0;
  int s = 0;
  int row_nnz = 0;
  int d = 0;
  std::string dist = "gaussian";
  uint64_t seed = 1;
  std::string out;
  std::string p_out;
};

struct VerifyOptions {
  std::string task;
  std::string input;
  std::string assignment;
  std::string p_path;
  std::string report;
};

struct BenchOptions {
  std::string suite;
  std::string json_out;
  std::string csv_out;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

ConstantsProfile MakeProfile(const SolveOptions& o) {
  ConstantsProfile p = ConstantsProfile::ForMode(ParseProfileMode(o.mode));
  if (!o.profile_path.empty()) {
    Json j;
    try {
      j = Json::parse(ReadFile(o.profile_path));
    } catch (const Json::parse_error& e) {
      throw ParseError(0, e.what());
    }
    p.ApplyOverrides(j);
  }
  if (o.tail_coeff > 0.0) p.tail_coeff = o.tail_coeff;
  return p;
}

void WriteOrPrint(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteFile(path, text);
  }
}

std::vector<double> LoadVector(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ParseRealVector(in);
}

int VertexCount(const std::vector<Edge>& edges) {
  int n = 0;
  for (const auto& [u, v] : edges) n = std::max({n, u + 1, v + 1});
  return n;
}

void ApplyThreads(int threads) {
  if (threads > 0) SetNumThreads(threads);
}

SolveResult SolveSets(const SetSystem& sets, const std::string& solver,
                      const ConstantsProfile& profile, double pot_m) {
  if (solver == "unweighted") return SolveUnweighted(sets, profile);
  if (solver == "warmup") return WarmupSqrt(sets, profile);
  if (solver == "warmup-optimal") return WarmupSqrtOptimal(sets, profile);
  if (solver == "seq") {
    const WeightedSystem a = WeightedSystem::FromSetSystem(sets);
    const SeqResult r = SeqDerandomize(
        a, PotentialParams{pot_m, profile.tail_coeff, profile.lambda_coeff});
    SolveResult out;
    out.chi = r.chi;
    out.report = r.report;
    out.telemetry = {{"path", "seq"}, {"M", r.params.M},
                     {"final_potential", r.final_potential}};
    return out;
  }
  throw InvalidInput("unknown solver '" + solver + "'");
}

int RunSolve(const SolveOptions& o, std::ostream& out) {
  ApplyThreads(o.threads);
  const ConstantsProfile profile = MakeProfile(o);
  const auto start = std::chrono::steady_clock::now();
  Json rep;
  rep["task"] = o.task;
  rep["mode"] = o.mode;
  rep["threads"] = NumThreads();
  rep["profile"] = profile.ToJson();
  bool ok = false;
  std::ostringstream artifact;
  if (o.task == "balance" || o.task == "wbalance") {
    SolveResult r;
    if (o.task == "balance") {
      const SetSystem sets = LoadSetSystem(o.input);
      rep["n"] = sets.n();
      rep["m"] = sets.num_sets();
      rep["s"] = sets.s_max();
      rep["solver"] = o.solver;
      r = SolveSets(sets, o.solver, profile, o.pot_m);
    } else {
      const WeightedSystem a = LoadWeightedSystem(o.input);
      rep["n"] = a.n();
      rep["m"] = a.num_rows();
      rep["solver"] = o.solver == "seq" ? "seq" : "weighted";
      if (o.solver == "seq") {
        const SeqResult s = SeqDerandomize(
            a, PotentialParams{o.pot_m, profile.tail_coeff, profile.lambda_coeff});
        r.chi = s.chi;
        r.report = s.report;
        r.telemetry = {{"path", "seq"}, {"M", s.params.M}};
      } else {
        r = SolveWeighted(a, profile);
      }
    }
    ok = r.report.Certified();
    rep["report"] = ToJson(r.report);
    rep["telemetry"] = r.telemetry;
    WriteAssignment(artifact, r.chi);
  } else if (o.task == "lattice") {
    if (o.p_path.empty()) throw InvalidInput("lattice needs --p");
    const WeightedSystem a = LoadWeightedSystem(o.input);
    const std::vector<double> p = LoadVector(o.p_path);
    const LatticeResult r = RoundLattice(a, p, profile, o.bits);
    rep["n"] = a.n();
    rep["m"] = a.num_rows();
    rep["bits"] = o.bits > 0 ? o.bits : DefaultFixedBits(a.n());
    rep["report"] = r.report.ToJson();
    ok = r.report.certified && r.report.invariant_ok;
    artifact << r.q.size() << '\n';
    for (int8_t v : r.q) artifact << static_cast<int>(v) << '\n';
  } else if (o.task == "edgecolor") {
    std::istringstream in(ReadFile(o.input));
    const std::vector<Edge> edges = ParseEdgeList(in);
    const Graph g = Graph::FromEdges(VertexCount(edges), edges);
    const ColorEdgesResult r = ColorEdges(g, profile);
    rep["n"] = g.n();
    rep["edges"] = g.num_edges();
    rep["delta"] = g.max_degree();
    rep["colors"] = r.coloring.num_colors;
    rep["k3"] = r.k3;
    rep["telemetry"] = r.telemetry;
    ok = IsProperColoring(g, r.coloring) && r.degree_split_ok && r.bipartite_exact;
    WriteEdgeList(artifact, g.edges(), &r.coloring.color);
  } else {
    throw InvalidInput(std::string("unknown task '") + o.task + "', expected " + kTasks);
  }
  rep["wall_seconds"] = Seconds(start);
  rep["certified"] = ok;
  if (!o.out.empty()) WriteFile(o.out, artifact.str());
  WriteOrPrint(o.report, rep.dump(2) + "\n", out);
  return ok ? kExitOk : kExitCertificate;
}

int RunGen(const GenOptions& o, std::ostream& out) {
  std::ostringstream text;
  if (o.kind == "sets") {
    WriteSetSystem(text, GenerateSets(o.n, o.m, o.s, o.seed));
  } else if (o.kind == "weighted") {
    WriteWeightedSystem(text, GenerateWeighted(o.n, o.m, o.row_nnz,
                                               ParseWeightDist(o.dist), o.seed));
  } else if (o.kind == "lattice") {
    if (o.p_out.empty()) throw InvalidInput("lattice generation needs --p-out");
    const LatticeInstance inst = GenerateLattice(o.n, o.m, o.seed);
    WriteWeightedSystem(text, inst.a);
    std::ostringstream p;
    WriteRealVector(p, inst.p);
    WriteFile(o.p_out, p.str());
  } else if (o.kind == "graph") {
    WriteEdgeList(text, GenerateRegularGraph(o.n, o.d, o.seed));
  } else {
    throw InvalidInput("unknown instance kind '" + o.kind + "'");
  }
  WriteOrPrint(o.out, text.str(), out);
  return kExitOk;
}

int RunVerify(const VerifyOptions& o, std::ostream& out) {
  std::optional<Json> report;
  if (!o.report.empty()) {
    try {
      report = Json::parse(ReadFile(o.report));
    } catch (const Json::parse_error& e) {
      throw ParseError(0, e.what());
    }
  }
  const Json* rp = report ? &*report : nullptr;
  VerifyOutcome v;
  if (o.task == "balance" || o.task == "wbalance") {
    std::istringstream in(ReadFile(o.assignment));
    const Assignment chi = ParseAssignment(in);
    v = o.task == "balance" ? VerifySets(LoadSetSystem(o.input), chi, rp)
                            : VerifyWeighted(LoadWeightedSystem(o.input), chi, rp);
  } else if (o.task == "lattice") {
    const std::vector<double> qd = LoadVector(o.assignment);
    std::vector<int> q(qd.begin(), qd.end());
    v = VerifyLattice(LoadWeightedSystem(o.input), LoadVector(o.p_path), q, rp);
  } else if (o.task == "edgecolor") {
    std::istringstream gin(ReadFile(o.input));
    const std::vector<Edge> edges = ParseEdgeList(gin);
    std::istringstream color_in(ReadFile(o.assignment));
    std::vector<int> colors;
    const std::vector<Edge> colored = ParseEdgeList(color_in, &colors);
    if (colored != edges) {
      v.ok = false;
      v.failures.push_back("colored edge list does not match the input graph");
    } else {
      v = VerifyColoring(VertexCount(edges), edges, colors);
    }
  } else {
    throw InvalidInput(std::string("unknown task '") + o.task + "', expected " + kTasks);
  }
  out << v.ToJson().dump(2) << "\n";
  return v.ok ? kExitOk : kExitCertificate;
}

int RunBenchCommand(const BenchOptions& o, std::ostream& out) {
  Json suite;
  try {
    suite = Json::parse(ReadFile(o.suite));
  } catch (const Json::parse_error& e) {
    throw ParseError(0, e.what());
  }
  std::string csv;
  const Json rep = RunBench(suite, csv);
  WriteOrPrint(o.json_out, rep.dump(2) + "\n", out);
  if (!o.csv_out.empty()) WriteFile(o.csv_out, csv);
  return rep.value("ok", false) ? kExitOk : kExitCertificate;
}

void AddSolveFlags(CLI::App* sub, SolveOptions& o) {
  sub->add_option("--input,-i", o.input, "Instance file")->required();
  sub->add_option("--p", o.p_path, "Fractional vector (lattice)");
  sub->add_option("--solver", o.solver,
                  "unweighted|warmup|warmup-optimal|seq (balance); weighted|seq (wbalance)");
  sub->add_option("--out,-o", o.out, "Assignment, rounding or coloring output");
  sub->add_option("--report", o.report, "JSON report path (default stdout)");
  sub->add_option("--mode", o.mode, "theory|practical");
  sub->add_option("--profile", o.profile_path, "JSON profile overrides");
  sub->add_option("--threads", o.threads, "Worker threads");
  sub->add_option("--tail-coeff", o.tail_coeff, "Tail-bound coefficient");
  sub->add_option("--pot-M", o.pot_m, "Tail-bound scale M for the seq solver");
  sub->add_option("--bits", o.bits, "Fixed-point bits (lattice)");
}

}  // namespace

const char* const kBenchCsvHeader =
    "instance,kind,mode,n,m,size,threads,max_ratio,certificate_slack,"
    "wall_seconds,certified,deterministic";

Json RunBench(const Json& suite, std::string& csv) {
  std::vector<std::string> modes = {"practical"};
  std::vector<int> threads = {1};
  if (suite.contains("modes")) modes = suite.at("modes").get<std::vector<std::string>>();
  if (suite.contains("threads")) threads = suite.at("threads").get<std::vector<int>>();
  if (threads.empty()) throw InvalidInput("bench needs at least one thread count");
  const int saved_threads = NumThreads();
  Json rows = Json::array();
  std::ostringstream out;
  out << kBenchCsvHeader << "\n" << std::setprecision(10);
  bool all_ok = true;
  bool all_det = true;
  std::vector<double> ratios;
  int index = 0;
  for (const Json& inst : suite.at("instances")) {
    const std::string kind = inst.value("kind", "sets");
    const int repeat = inst.value("repeat", 1);
    for (int rep = 0; rep < repeat; ++rep, ++index) {
      const uint64_t seed = inst.value("seed", uint64_t{1}) + rep;
      const int n = inst.at("n").get<int>();
      const int m = inst.at("m").get<int>();
      WeightedSystem a;
      SetSystem sets;
      int size = 0;
      if (kind == "sets") {
        size = inst.at("s").get<int>();
        sets = GenerateSets(n, m, size, seed);
        a = WeightedSystem::FromSetSystem(sets);
      } else if (kind == "weighted") {
        size = inst.at("row_nnz").get<int>();
        a = GenerateWeighted(n, m, size, ParseWeightDist(inst.value("dist", "gaussian")),
                             seed);
      } else {
        throw InvalidInput("unknown bench kind '" + kind + "'");
      }
      for (const std::string& mode : modes) {
        const ConstantsProfile profile = ConstantsProfile::ForMode(ParseProfileMode(mode));
        std::optional<Assignment> first;
        bool det = true;
        for (int t : threads) {
          SetNumThreads(t);
          const auto start = std::chrono::steady_clock::now();
          const SolveResult r = kind == "sets" ? SolveUnweighted(sets, profile)
                                               : SolveWeighted(a, profile);
          const double wall = Seconds(start);
          if (!first) {
            first = r.chi;
          } else if (*first != r.chi) {
            det = false;
          }
          // Ratios and slack come from the stored assignment, not the solver.
          const double ratio = IndependentMaxRatio(a, r.chi);
          const VerifyOutcome v = VerifyWeighted(a, r.chi, nullptr);
          double slack = std::numeric_limits<double>::infinity();
          const double log_m = std::log(std::max(m, 2));
          bool certified = v.ok;
          for (int i = 0; i < a.num_rows(); ++i) {
            long double s = 0.0L;
            auto c = a.cols(i);
            auto x = a.vals(i);
            for (size_t k = 0; k < c.size(); ++k) s += static_cast<long double>(x[k]) * r.chi[c[k]];
            const double disc = std::fabs(static_cast<double>(s));
            const double bound = r.report.bound.empty() ? 0.0 : r.report.bound[i];
            if (disc > bound * (1.0 + 1e-9) + 1e-12) certified = false;
            if (a.row_norm(i) > 0.0) {
              slack = std::min(slack, (bound - disc) / std::sqrt(a.row_norm(i) * log_m));
            }
          }
          if (!std::isfinite(slack)) slack = 0.0;
          all_ok = all_ok && certified;
          ratios.push_back(ratio);
          rows.push_back({{"instance", index}, {"kind", kind}, {"mode", mode},
                          {"n", n}, {"m", m}, {"size", size}, {"threads", t},
                          {"max_ratio", ratio}, {"certificate_slack", slack},
                          {"wall_seconds", wall}, {"certified", certified},
                          {"seed", seed}});
          out << index << ',' << kind << ',' << mode << ',' << n << ',' << m << ','
              << size << ',' << t << ',' << ratio << ',' << slack << ',' << wall
              << ',' << (certified ? 1 : 0) << ',';
          // Determinism is final only after the last thread count; the CSV
          // row records the comparison against the first run.
          out << (det ? 1 : 0) << "\n";
        }
        all_det = all_det && det;
      }
    }
  }
  SetNumThreads(saved_threads);
  std::sort(ratios.begin(), ratios.end());
  auto pct = [&](double q) {
    if (ratios.empty()) return 0.0;
    const size_t k = static_cast<size_t>(std::ceil(q * ratios.size())) - (q > 0 ? 1 : 0);
    return ratios[std::min(k, ratios.size() - 1)];
  };
  Json rep;
  rep["rows"] = rows;
  rep["aggregate"] = {{"count", ratios.size()}, {"p50", pct(0.5)}, {"p90", pct(0.9)},
                      {"p99", pct(0.99)}, {"max", pct(1.0)}};
  rep["deterministic"] = all_det;
  rep["certified"] = all_ok;
  rep["ok"] = all_ok && all_det;
  csv = out.str();
  return rep;
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic discrepancy minimization"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GenOptions gen;
  CLI::App* g = app.add_subcommand("gen", "Generate a seeded instance");
  g->add_option("kind", gen.kind, "sets|weighted|lattice|graph")->required();
  g->add_option("--n", gen.n, "Columns or vertices")->required();
  g->add_option("--m", gen.m, "Rows");
  g->add_option("--s", gen.s, "Set size");
  g->add_option("--row-nnz", gen.row_nnz, "Nonzeros per row");
  g->add_option("--d", gen.d, "Degree");
  g->add_option("--dist", gen.dist, "gaussian|lognormal|powerlaw|uniform");
  g->add_option("--seed", gen.seed, "64-bit seed");
  g->add_option("--out,-o", gen.out, "Output path (default stdout)");
  g->add_option("--p-out", gen.p_out, "Fractional vector output (lattice)");

  SolveOptions solve;
  CLI::App* s = app.add_subcommand("solve", "Solve an instance");
  s->add_option("task", solve.task, kTasks)->required();
  AddSolveFlags(s, solve);

  SolveOptions lat;
  CLI::App* l = app.add_subcommand("lattice", "Same as `solve lattice`");
  AddSolveFlags(l, lat);
  SolveOptions ec;
  CLI::App* e = app.add_subcommand("edgecolor", "Same as `solve edgecolor`");
  AddSolveFlags(e, ec);

  VerifyOptions ver;
  CLI::App* v = app.add_subcommand("verify", "Recheck a solution independently");
  v->add_option("task", ver.task, kTasks)->required();
  v->add_option("--input,-i", ver.input, "Instance file")->required();
  v->add_option("--assignment,-a", ver.assignment,
                "Assignment, q vector or colored edge list")->required();
  v->add_option("--p", ver.p_path, "Fractional vector (lattice)");
  v->add_option("--report", ver.report, "Solve report with certificates");

  BenchOptions bench;
  CLI::App* b = app.add_subcommand("bench", "Run a benchmark suite");
  b->add_option("--suite", bench.suite, "Suite JSON")->required();
  b->add_option("--json", bench.json_out, "Report path (default stdout)");
  b->add_option("--csv", bench.csv_out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e2) {
    return app.exit(e2, out, err) == 0 ? kExitOk : kExitInput;
  }
  try {
    if (g->parsed()) return RunGen(gen, out);
    if (s->parsed()) return RunSolve(solve, out);
    if (l->parsed()) {
      lat.task = "lattice";
      return RunSolve(lat, out);
    }
    if (e->parsed()) {
      ec.task = "edgecolor";
      return RunSolve(ec, out);
    }
    if (v->parsed()) return RunVerify(ver, out);
    if (b->parsed()) return RunBenchCommand(bench, out);
  } catch (const InvalidInput& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& ex) {
    // Missing or mistyped fields in a suite or report file.
    err << "error: " << ex.what() << "\n";
    return kExitInput;
  } catch (const std::exception& ex) {
    err << "failure: " << ex.what() << "\n";
    return kExitCertificate;
  }
  return kExitInput;
}

}  // namespace discbal::cli
