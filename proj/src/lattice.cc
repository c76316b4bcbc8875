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

#include "discbal/lattice.h"

#include <algorithm>
#include <cmath>

#include "discbal/solver.h"

namespace discbal {

double FixedPointVector::ToDouble(int j) const {
  // Split so that neither half loses precision before the division.
  const FixedWord hi = values[j] >> 64;
  const FixedWord lo = values[j] & ~static_cast<uint64_t>(0);
  return std::ldexp(static_cast<double>(static_cast<uint64_t>(hi)), 64 - bits) +
         std::ldexp(static_cast<double>(static_cast<uint64_t>(lo)), -bits);
}

int DefaultFixedBits(int n) {
  const double b = std::ceil(10.0 * std::log2(std::max(n, 2)));
  return static_cast<int>(std::min<double>(b, kMaxFixedBits));
}

FixedPointVector Quantize(const std::vector<double>& p, int bits) {
  if (bits < 1 || bits > kMaxFixedBits) throw InvalidInput("bit depth out of range");
  FixedPointVector out;
  out.bits = bits;
  out.values.resize(p.size());
  for (size_t j = 0; j < p.size(); ++j) {
    const double v = p[j];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput("p[" + std::to_string(j) + "] outside [0, 1]");
    }
    if (v == 0.0) continue;
    int e = 0;
    const double frac = std::frexp(v, &e);  // v = frac 2^e, frac in [0.5, 1).
    const uint64_t mant = static_cast<uint64_t>(std::ldexp(frac, 53));
    // v 2^bits = mant 2^(e - 53 + bits).
    const int shift = e - 53 + bits;
    FixedWord w = 0;
    if (shift >= 0) {
      w = static_cast<FixedWord>(mant) << shift;
    } else if (-shift < 64) {
      const uint64_t half = uint64_t{1} << (-shift - 1);
      w = (mant + half) >> -shift;
    }
    out.values[j] = w;
  }
  return out;
}

nlohmann::json LatticeReport::ToJson() const {
  nlohmann::json j;
  j["mu"] = mu;
  j["error"] = error;
  j["certificate"] = certificate;
  j["ratio"] = ratio;
  j["max_ratio"] = max_ratio;
  j["max_certificate_ratio"] = max_certificate_ratio;
  j["certified"] = certified;
  j["invariant_ok"] = invariant_ok;
  j["stages"] = static_cast<int>(stages.size());
  return j;
}

LatticeResult RoundLattice(const WeightedSystem& a,
                           const std::vector<double>& p,
                           const ConstantsProfile& profile, int bits) {
  const int n = a.n();
  const int m = a.num_rows();
  if (static_cast<int>(p.size()) != n) throw InvalidInput("p has the wrong length");
  for (int i = 0; i < m; ++i) {
    for (double v : a.vals(i)) {
      if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("matrix entry outside [0, 1]");
    }
  }
  if (bits <= 0) bits = DefaultFixedBits(n);
  FixedPointVector fx = Quantize(p, bits);

  LatticeResult r;
  LatticeReport& rep = r.report;
  rep.certificate.assign(m, 0.0);
  rep.invariant_ok = true;
  for (int i = 0; i < m; ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    for (size_t k = 0; k < c.size(); ++k) {
      rep.certificate[i] += v[k] * std::abs(p[c[k]] - fx.ToDouble(c[k]));
    }
  }

  for (int k = 0; k < bits; ++k) {
    const FixedWord bit = FixedWord{1} << k;
    std::vector<int> odd;
    for (int j = 0; j < n; ++j) {
      if (fx.values[j] & bit) odd.push_back(j);
    }
    if (odd.empty()) continue;
    const auto sub = Restrict(a, odd);
    Assignment chi(odd.size(), 1);
    std::vector<double> stage_cert(m, 0.0);
    std::vector<double> stage_err(m, 0.0);
    const double unit = std::ldexp(1.0, k - bits);
    if (sub.system.num_rows() > 0) {
      SolveResult s = SolveWeighted(sub.system, profile);
      chi = s.chi;
      for (size_t r2 = 0; r2 < sub.row_map.size(); ++r2) {
        const int i = sub.row_map[r2];
        stage_err[i] = unit * s.report.disc[r2];
        stage_cert[i] = unit * s.report.bound[r2];
        rep.certificate[i] += stage_cert[i];
      }
    }
    for (size_t t = 0; t < odd.size(); ++t) {
      FixedWord& w = fx.values[odd[t]];
      w = chi[t] > 0 ? w + bit : w - bit;
      if (w & bit) rep.invariant_ok = false;
    }
    // Every value is now a multiple of 2^(k + 1).
    const FixedWord mask = (bit << 1) - 1;
    for (int j = 0; j < n; ++j) {
      if (fx.values[j] & mask) rep.invariant_ok = false;
    }
    rep.stages.push_back({k, static_cast<int>(odd.size()), std::move(stage_err),
                          std::move(stage_cert)});
  }

  const FixedWord one = FixedWord{1} << bits;
  r.q.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    if (fx.values[j] == one) {
      r.q[j] = 1;
    } else if (fx.values[j] != 0) {
      rep.invariant_ok = false;
    }
  }
  const double log_m = LogHat(m);
  rep.mu.assign(m, 0.0);
  rep.error.assign(m, 0.0);
  rep.ratio.assign(m, 0.0);
  rep.certified = true;
  for (int i = 0; i < m; ++i) {
    auto c = a.cols(i);
    auto v = a.vals(i);
    std::vector<double> diff(c.size());
    std::vector<double> mu(c.size());
    for (size_t k = 0; k < c.size(); ++k) {
      diff[k] = v[k] * (r.q[c[k]] - p[c[k]]);
      mu[k] = v[k] * p[c[k]];
    }
    rep.mu[i] = PairwiseSum(mu);
    rep.error[i] = std::abs(PairwiseSum(diff));
    const double scale = std::sqrt(rep.mu[i] * log_m) + log_m;
    rep.ratio[i] = rep.error[i] / scale;
    rep.max_ratio = std::max(rep.max_ratio, rep.ratio[i]);
    rep.max_certificate_ratio =
        std::max(rep.max_certificate_ratio, rep.certificate[i] / scale);
    if (rep.error[i] > rep.certificate[i] * (1.0 + 1e-9) + 1e-12) {
      rep.certified = false;
    }
  }
  return r;
}

}  // namespace discbal
