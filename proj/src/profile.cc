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

#include "discbal/profile.h"

#include <algorithm>
#include <cmath>

#include "discbal/core.h"

namespace discbal {

double PolyLog::Eval(double x) const {
  return std::max(floor, coef * std::pow(LogHat(x), exponent));
}

ConstantsProfile ConstantsProfile::Theory() {
  ConstantsProfile p;
  p.mode = ProfileMode::kTheory;
  p.tail_coeff = 1000.0;
  p.lambda_coeff = 100.0;
  p.unweighted_eps = 0.01;
  p.unweighted_direct = {1.0, 10.0, 0.0};
  p.unweighted_part_load = {1.0 / (0.01 * 0.01), 1.0, 0.0};
  p.unweighted_groups = {0.0, 0.0, 0.0};  // Derived from the MWU width.
  p.balanced_base = {1.0, 30.0, 0.0};
  p.creator_part_size = {1.0, 20.0, 0.0};
  p.creator_groups = {0.0, 0.0, 0.0};  // Derived from creator_eps.
  p.creator_eps = 0.0;
  p.warmup_groups = {1.0, 5.0, 1.0};
  p.delta = 0.05;
  p.scale_exp = 10.0;
  p.weighted_base = {1.0, 20.0, 0.0};
  p.bucket_ratio = 0.0;
  p.small_bucket = {1.0, 50.0, 0.0};
  p.large_bucket = {1.0, 90.0, 0.0};
  p.coarse_parts = {1.0, 20.0, 1.0};
  p.coarse_min_size = 0.0;
  p.isolation_small_cap = {1.0, 100.0, 0.0};
  p.isolation_big_floor = {1.0, 30.0, 0.0};
  p.isolation_inflation_slack = {10.0, 2.0, 0.0};
  p.isolation_split_slack = {1.0, 3.0, 0.0};
  p.split_from_certificate = false;
  p.sparse_delta = 0.05;
  p.chunk_size = 0.0;
  p.collision_part_size = 100.0;
  p.edge_base = {4.0, 2.0, 16.0};
  return p;
}

ConstantsProfile ConstantsProfile::Practical() {
  ConstantsProfile p;
  p.mode = ProfileMode::kPractical;
  p.tail_coeff = 9.0;
  p.lambda_coeff = 8.0;
  p.unweighted_eps = 0.25;
  p.unweighted_direct = {4.0, 1.0, 0.0};
  p.unweighted_part_load = {2.0, 1.0, 4.0};
  p.unweighted_groups = {2.0, 1.0, 1.0};
  p.balanced_base = {8.0, 1.0, 64.0};
  p.creator_part_size = {4.0, 1.0, 8.0};
  p.creator_groups = {2.0, 1.0, 1.0};
  p.creator_eps = 0.1;
  p.warmup_groups = {1.0, 1.0, 1.0};
  p.delta = 0.05;
  p.scale_exp = 10.0;
  p.weighted_base = {256.0, 0.0, 0.0};
  p.bucket_ratio = 2.0;
  p.small_bucket = {1.0, 1.0, 2.0};
  p.large_bucket = {2.0, 1.0, 4.0};
  p.coarse_parts = {4.0, 1.0, 1.0};
  p.coarse_min_size = 1024.0;
  p.isolation_small_cap = {1.0, 3.0, 0.0};
  p.isolation_big_floor = {1.0, 1.0, 2.0};
  p.isolation_inflation_slack = {1.0, 1.0, 0.0};
  p.isolation_split_slack = {1.0, 3.0, 0.0};
  p.split_from_certificate = true;
  p.sparse_delta = 0.25;
  p.chunk_size = 200.0;
  p.collision_part_size = 2.0;
  p.edge_base = {1.0, 2.0, 16.0};
  return p;
}

ConstantsProfile ConstantsProfile::ForMode(ProfileMode mode) {
  return mode == ProfileMode::kTheory ? Theory() : Practical();
}

namespace {

using Json = nlohmann::json;

template <typename F>
void ForEachKnob(ConstantsProfile& p, F&& f) {
  f("tail_coeff", &p.tail_coeff, nullptr);
  f("lambda_coeff", &p.lambda_coeff, nullptr);
  f("unweighted_eps", &p.unweighted_eps, nullptr);
  f("unweighted_direct", nullptr, &p.unweighted_direct);
  f("unweighted_part_load", nullptr, &p.unweighted_part_load);
  f("unweighted_groups", nullptr, &p.unweighted_groups);
  f("balanced_base", nullptr, &p.balanced_base);
  f("creator_part_size", nullptr, &p.creator_part_size);
  f("creator_groups", nullptr, &p.creator_groups);
  f("creator_eps", &p.creator_eps, nullptr);
  f("warmup_groups", nullptr, &p.warmup_groups);
  f("delta", &p.delta, nullptr);
  f("scale_exp", &p.scale_exp, nullptr);
  f("weighted_base", nullptr, &p.weighted_base);
  f("bucket_ratio", &p.bucket_ratio, nullptr);
  f("small_bucket", nullptr, &p.small_bucket);
  f("large_bucket", nullptr, &p.large_bucket);
  f("coarse_parts", nullptr, &p.coarse_parts);
  f("coarse_min_size", &p.coarse_min_size, nullptr);
  f("isolation_small_cap", nullptr, &p.isolation_small_cap);
  f("isolation_big_floor", nullptr, &p.isolation_big_floor);
  f("isolation_inflation_slack", nullptr, &p.isolation_inflation_slack);
  f("isolation_split_slack", nullptr, &p.isolation_split_slack);
  f("sparse_delta", &p.sparse_delta, nullptr);
  f("chunk_size", &p.chunk_size, nullptr);
  f("collision_part_size", &p.collision_part_size, nullptr);
  f("edge_base", nullptr, &p.edge_base);
}

}  // namespace

void ConstantsProfile::ApplyOverrides(const Json& overrides) {
  if (!overrides.is_object()) throw InvalidInput("profile overrides must be an object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    bool found = false;
    ForEachKnob(*this, [&](const char* name, double* scalar, PolyLog* poly) {
      if (it.key() != name) return;
      found = true;
      try {
        if (scalar != nullptr) {
          *scalar = it.value().get<double>();
        } else {
          poly->coef = it.value().value("coef", poly->coef);
          poly->exponent = it.value().value("exponent", poly->exponent);
          poly->floor = it.value().value("floor", poly->floor);
        }
      } catch (const Json::exception& e) {
        throw InvalidInput("bad override for " + it.key() + ": " + e.what());
      }
    });
    try {
      if (it.key() == "stall_rounds") {
        stall_rounds = it.value().get<int>();
        found = true;
      }
      if (it.key() == "split_from_certificate") {
        split_from_certificate = it.value().get<bool>();
        found = true;
      }
      if (it.key() == "mode") {
        // Present in ToJson() output; only the label changes.
        mode = ParseProfileMode(it.value().get<std::string>());
        found = true;
      }
    } catch (const Json::exception& e) {
      throw InvalidInput("bad override for " + it.key() + ": " + e.what());
    }
    if (!found) throw InvalidInput("unknown profile knob " + it.key());
  }
  if (delta <= 0.0 || delta >= 1.0) throw InvalidInput("delta must lie in (0, 1)");
  if (sparse_delta <= 0.0 || sparse_delta >= 1.0) {
    throw InvalidInput("sparse_delta must lie in (0, 1)");
  }
  if (collision_part_size < 1.0) {
    throw InvalidInput("collision_part_size must be at least 1");
  }
  if (stall_rounds < 1) throw InvalidInput("stall_rounds must be positive");
}

Json ConstantsProfile::ToJson() const {
  Json j;
  j["mode"] = ProfileModeName(mode);
  ConstantsProfile copy = *this;
  ForEachKnob(copy, [&](const char* name, double* scalar, PolyLog* poly) {
    if (scalar != nullptr) {
      j[name] = *scalar;
    } else {
      j[name] = {{"coef", poly->coef},
                 {"exponent", poly->exponent},
                 {"floor", poly->floor}};
    }
  });
  j["stall_rounds"] = stall_rounds;
  j["split_from_certificate"] = split_from_certificate;
  return j;
}

ProfileMode ParseProfileMode(const std::string& name) {
  if (name == "theory") return ProfileMode::kTheory;
  if (name == "practical") return ProfileMode::kPractical;
  throw InvalidInput("unknown mode '" + name + "'");
}

std::string ProfileModeName(ProfileMode mode) {
  return mode == ProfileMode::kTheory ? "theory" : "practical";
}

long long PowerOfTwoAtLeast(double x) {
  long long p = 1;
  while (static_cast<double>(p) < x && p < (1LL << 62)) p <<= 1;
  return p;
}

long long PowerOfTwoAtMost(double x) {
  long long p = 1;
  while (static_cast<double>(p * 2) <= x && p < (1LL << 61)) p <<= 1;
  return p;
}

}  // namespace discbal
