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

// Hidden constants and polylog thresholds used by the recursive solvers.
//
// Theory mode keeps the literal exponents, which makes every recursion stop
// at its base case for inputs that fit in memory. Practical mode replaces
// each polylog threshold with a small multiple of a single logarithm so that
// the recursions actually fire at n up to about 1e6. Certificates are always
// computed from the values actually used.

#ifndef DISCBAL_PROFILE_H_
#define DISCBAL_PROFILE_H_

#include <string>

#include "json.hpp"

namespace discbal {

enum class ProfileMode { kTheory, kPractical };

// coef * ln(max(x, 2))^exponent, never below `floor`.
struct PolyLog {
  double coef = 1.0;
  double exponent = 1.0;
  double floor = 0.0;
  double Eval(double x) const;
};

struct ConstantsProfile {
  ProfileMode mode = ProfileMode::kPractical;

  // Tail estimator coefficients passed to the derandomizer.
  double tail_coeff = 0.0;
  double lambda_coeff = 0.0;

  // Unweighted solver. Direct solve when s <= unweighted_direct(m); otherwise
  // parts carry about unweighted_part_load(m) elements of each set and the
  // MWU runs over unweighted_groups(m) groups (theory: 9 W ln m / eps^2).
  double unweighted_eps = 0.0;
  PolyLog unweighted_direct;
  PolyLog unweighted_part_load;
  PolyLog unweighted_groups;

  // Balanced-weights recursion: base case below balanced_base(m) columns,
  // parts of creator_part_size(nm) columns, creator_groups(nm) MWU groups.
  // creator_eps <= 0 selects 1 / (100 ln^2(nm)).
  PolyLog balanced_base;
  PolyLog creator_part_size;
  PolyLog creator_groups;
  double creator_eps = 0.0;

  // Optimal warm-up: number of MWU groups as a function of m.
  PolyLog warmup_groups;

  // Weighted solver.
  double delta = 0.05;          // Budget decay and collision inflation.
  double scale_exp = 10.0;      // Rows are scaled to max |a| = n^scale_exp.
  PolyLog weighted_base;        // Base case below this many columns (of 3 m D).
  double bucket_ratio = 0.0;    // <= 0 selects 1 + 1 / ln^3(n).
  PolyLog small_bucket;         // Buckets up to this size are small (of n M).
  PolyLog large_bucket;         // Buckets from this size on are large.
  PolyLog coarse_parts;         // Upper target for the coarse part count.
  double coarse_min_size = 0.0; // Practical: coarse parts at least this big.
  PolyLog isolation_small_cap;  // Precondition on small-family set sizes.
  PolyLog isolation_big_floor;  // Precondition on big-family set sizes.
  // Caps checked on the isolation output: importance inflation at most
  // 1 + 1/inflation_slack(n); big-set split counts at most
  // (1 + 1/split_slack(n)) |B| / T, or the coarse partitioner's certified
  // count when split_from_certificate is set.
  PolyLog isolation_inflation_slack;
  PolyLog isolation_split_slack;
  bool split_from_certificate = false;
  double sparse_delta = 0.05;   // Subset-selection slack.
  double chunk_size = 0.0;      // <= 0 selects the theory chunk bounds.
  double collision_part_size = 100.0;  // Chunk elements per collision part.
  int stall_rounds = 3;

  // Edge coloring: base case when the maximum degree is at most this.
  PolyLog edge_base;

  static ConstantsProfile Theory();
  static ConstantsProfile Practical();
  static ConstantsProfile ForMode(ProfileMode mode);

  // Accepts {"name": number} for scalar knobs and
  // {"name": {"coef": c, "exponent": e, "floor": f}} for polylog knobs.
  // A "mode" entry relabels the profile without resetting any knob.
  void ApplyOverrides(const nlohmann::json& overrides);
  nlohmann::json ToJson() const;
};

ProfileMode ParseProfileMode(const std::string& name);
std::string ProfileModeName(ProfileMode mode);

// Smallest power of two >= x (at least 1) and largest power of two <= x.
long long PowerOfTwoAtLeast(double x);
long long PowerOfTwoAtMost(double x);

}  // namespace discbal

#endif  // DISCBAL_PROFILE_H_
