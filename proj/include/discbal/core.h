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

// Core types shared by every solver: set systems, sparse weighted matrices,
// sign assignments, partitions, importance weights and discrepancy reports.

#ifndef DISCBAL_CORE_H_
#define DISCBAL_CORE_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace discbal {

// Malformed or out-of-domain input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A text or JSON input that failed to parse. line() is 1-based, 0 for JSON.
class ParseError : public InvalidInput {
 public:
  ParseError(int line, const std::string& what)
      : InvalidInput("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// An internal guarantee that was checked at runtime and did not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Instance too large for an exhaustive routine.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Query issued before the object reached the required state.
class StaleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ln(max(x, 2)). Every bound formula uses this clamp on m and n.
double LogHat(double x);

// Deterministic pairwise summation; the tree shape depends only on the size.
double PairwiseSum(std::span<const double> values);

// Family of m subsets of [n]. Rows are stored sorted and deduplicated.
class SetSystem {
 public:
  SetSystem() = default;
  static SetSystem FromRows(int n, const std::vector<std::vector<int>>& rows);

  int n() const { return n_; }
  int num_sets() const { return static_cast<int>(offsets_.size()) - 1; }
  int s_max() const { return s_max_; }
  int64_t nnz() const { return offsets_.back(); }
  std::span<const int> row(int i) const {
    return {elems_.data() + offsets_[i],
            static_cast<size_t>(offsets_[i + 1] - offsets_[i])};
  }
  int row_size(int i) const {
    return static_cast<int>(offsets_[i + 1] - offsets_[i]);
  }

 private:
  int n_ = 0;
  int s_max_ = 0;
  std::vector<int64_t> offsets_ = {0};
  std::vector<int> elems_;
};

struct Triple {
  int row;
  int col;
  double value;
};

// Sparse m x n real matrix in row-major compressed form. Explicit zeros are
// dropped; duplicate (row, col) pairs are rejected.
class WeightedSystem {
 public:
  WeightedSystem() = default;
  static WeightedSystem FromTriples(int n, int m, std::vector<Triple> triples);
  static WeightedSystem FromSetSystem(const SetSystem& sets);

  int n() const { return n_; }
  int num_rows() const { return static_cast<int>(offsets_.size()) - 1; }
  int64_t nnz() const { return offsets_.back(); }
  std::span<const int> cols(int i) const {
    return {cols_.data() + offsets_[i],
            static_cast<size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::span<const double> vals(int i) const {
    return {vals_.data() + offsets_[i],
            static_cast<size_t>(offsets_[i + 1] - offsets_[i])};
  }
  int row_size(int i) const {
    return static_cast<int>(offsets_[i + 1] - offsets_[i]);
  }
  // Sum of squared entries of row i.
  double row_norm(int i) const { return row_norms_[i]; }
  const std::vector<double>& row_norms() const { return row_norms_; }
  double max_abs(int i) const;

 private:
  int n_ = 0;
  std::vector<int64_t> offsets_ = {0};
  std::vector<int> cols_;
  std::vector<double> vals_;
  std::vector<double> row_norms_;
};

// Column-major view of a WeightedSystem, built on demand.
struct ColumnIndex {
  explicit ColumnIndex(const WeightedSystem& a);
  std::vector<int64_t> offsets;
  std::vector<int> rows;
  std::vector<double> vals;
};

// Entries are +1 or -1.
using Assignment = std::vector<int8_t>;

void CheckAssignment(const Assignment& chi, int n);

class Partition {
 public:
  Partition() = default;
  static Partition FromPartOf(int num_parts, std::vector<int> part_of);
  // Parts must be disjoint and cover [n]; empty parts are allowed.
  static Partition FromParts(int n, std::vector<std::vector<int>> parts);
  static Partition Trivial(int n);
  static Partition Singletons(int n);

  int n() const { return static_cast<int>(part_of_.size()); }
  int num_parts() const { return static_cast<int>(parts_.size()); }
  int part_of(int j) const { return part_of_[j]; }
  const std::vector<int>& part_of() const { return part_of_; }
  const std::vector<int>& part(int t) const { return parts_[t]; }
  const std::vector<std::vector<int>>& parts() const { return parts_; }
  int max_part_size() const;
  // Drops empty parts, keeping the order of the rest.
  Partition Compacted() const;

 private:
  std::vector<int> part_of_;
  std::vector<std::vector<int>> parts_;
};

// Nonnegative weights stored as natural logs so that multiplicative updates
// never overflow. A zero weight is -infinity.
class ImportanceVector {
 public:
  ImportanceVector() = default;
  static ImportanceVector Uniform(int m);
  static ImportanceVector FromLinear(const std::vector<double>& w);
  static ImportanceVector FromLog(std::vector<double> log_w);

  int size() const { return static_cast<int>(log_w_.size()); }
  double log_weight(int i) const { return log_w_[i]; }
  const std::vector<double>& log_weights() const { return log_w_; }
  void set_log_weight(int i, double v) { log_w_[i] = v; }
  // Linear weights scaled so the largest is 1. All zero maps to all ones.
  std::vector<double> Normalized() const;
  bool AllZero() const;

 private:
  std::vector<double> log_w_;
};

struct DiscReport {
  std::vector<double> sdisc;
  std::vector<double> disc;
  std::vector<double> bound;  // Empty when no certificate is attached.
  std::vector<double> ratio;  // disc / sqrt(row_norm * ln(m_hat)).
  double max_disc = 0.0;
  double max_ratio = 0.0;

  // True when a bound is attached and every row satisfies it, up to a
  // relative slack of 1e-9.
  bool Certified() const;
  int num_violations() const;
};

DiscReport Evaluate(const SetSystem& sets, const Assignment& chi);
DiscReport Evaluate(const WeightedSystem& a, const Assignment& chi);
void AttachBound(DiscReport& report, std::vector<double> bound);

template <typename System>
struct Restricted {
  System system;
  std::vector<int> row_map;  // Local row -> row of the parent system.
};

// Keeps only the elements of `part`, renumbered by their position in `part`.
// Rows that become empty are dropped.
Restricted<SetSystem> Restrict(const SetSystem& sets,
                               std::span<const int> part);
Restricted<WeightedSystem> Restrict(const WeightedSystem& a,
                                    std::span<const int> part);

// Restrict() for every part at once, in time linear in the input.
std::vector<Restricted<SetSystem>> SplitByPartition(const SetSystem& sets,
                                                    const Partition& p);
std::vector<Restricted<WeightedSystem>> SplitByPartition(
    const WeightedSystem& a, const Partition& p);

struct BruteForceResult {
  int64_t value = 0;
  Assignment chi;
};

// Exact minimum of max_i |sum_{j in S_i} chi_j| by Gray-code enumeration.
// Throws SizeError when n exceeds `cap`.
BruteForceResult BruteForceMinDisc(const SetSystem& sets, int cap = 24);

// chi_j * signs[part(j)].
Assignment Mix(const Assignment& chi, const Partition& p,
               const Assignment& signs);

}  // namespace discbal

#endif  // DISCBAL_CORE_H_
