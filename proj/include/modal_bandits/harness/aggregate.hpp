// Copyright 2026 The Modal Bandits Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Mean and standard deviation across seeds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "modal_bandits/errors.hpp"

namespace modal::harness {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample sd (n - 1); 0 for a single value
};

// The mean is clamped to [min, max] so rounding never leaves the range, and a
// single value is returned unchanged.
inline MeanSd mean_sd(std::span<const double> values) {
  if (values.empty()) throw DataError("cannot aggregate an empty set of values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  double shifted = 0.0;
  for (double v : values) shifted += v - lo;
  const double n = static_cast<double>(values.size());
  MeanSd out;
  out.mean = std::clamp(lo + shifted / n, lo, hi);
  if (values.size() > 1 && hi > lo) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

// Column-wise aggregation of equally long per-seed series.
inline std::vector<MeanSd> aggregate_series(const std::vector<std::vector<double>>& per_seed) {
  if (per_seed.empty()) throw DataError("cannot aggregate zero seeds");
  const std::size_t len = per_seed.front().size();
  for (const auto& s : per_seed) {
    if (s.size() != len) throw ShapeError("per-seed series differ in length");
  }
  std::vector<MeanSd> out(len);
  std::vector<double> column(per_seed.size());
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t s = 0; s < per_seed.size(); ++s) column[s] = per_seed[s][t];
    out[t] = mean_sd(column);
  }
  return out;
}

}  // namespace modal::harness
