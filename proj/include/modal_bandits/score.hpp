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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "modal_bandits/errors.hpp"

namespace modal {

// Maps a mode location in R^D to a value in [0, 1]. The raw value is passed
// through `scale * raw + offset` and clamped.
class ScoreFunction {
 public:
  enum class Kind { identity, distance_from_origin, negated_distance, table };

  ScoreFunction() = default;

  static ScoreFunction identity() { return ScoreFunction(Kind::identity, 1.0, 0.0); }

  // |x| / sqrt(D): the diagonal of the unit box maps to 1.
  static ScoreFunction distance_from_origin(std::size_t dimension) {
    return ScoreFunction(Kind::distance_from_origin,
                         1.0 / std::sqrt(static_cast<double>(dimension)), 0.0);
  }

  // 1 - |x| / sqrt(D).
  static ScoreFunction negated_distance(std::size_t dimension) {
    return ScoreFunction(Kind::negated_distance,
                         -1.0 / std::sqrt(static_cast<double>(dimension)), 1.0);
  }

  // Piecewise-linear interpolation through (xs[i], ys[i]) for D = 1, constant
  // beyond the end knots. The Lipschitz constant defaults to the steepest slope.
  static ScoreFunction table(std::vector<double> xs, std::vector<double> ys,
                             double lipschitz = 0.0) {
    if (xs.size() < 2 || xs.size() != ys.size()) {
      throw ParameterError("score table needs >= 2 knots with matching x and y");
    }
    double steepest = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) throw ParameterError("score table x must increase strictly");
      steepest = std::max(steepest, std::fabs((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])));
    }
    ScoreFunction s(Kind::table, 1.0, 0.0);
    s.xs_ = std::move(xs);
    s.ys_ = std::move(ys);
    s.lipschitz_ = lipschitz > 0.0 ? lipschitz : steepest;
    return s;
  }

  // Replaces the affine normalization.
  ScoreFunction with_normalization(double scale, double offset) const {
    ScoreFunction s = *this;
    s.scale_ = scale;
    s.offset_ = offset;
    return s;
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }
  // Lipschitz constant of the normalized score (raw constant times |scale|).
  double lipschitz_constant() const {
    return (kind_ == Kind::table ? lipschitz_ : 1.0) * std::fabs(scale_);
  }
  const std::vector<double>& table_x() const { return xs_; }
  const std::vector<double>& table_y() const { return ys_; }

  // Factor applied to confidence radii: 1 for 1-Lipschitz scores, otherwise
  // the Lipschitz constant.
  double bonus_multiplier() const { return std::max(1.0, lipschitz_constant()); }

  double operator()(std::span<const double> x) const {
    double raw = 0.0;
    switch (kind_) {
      case Kind::identity:
        if (x.size() != 1) throw ShapeError("identity score requires D = 1");
        raw = x[0];
        break;
      case Kind::distance_from_origin:
      case Kind::negated_distance: {
        double sum = 0.0;
        for (double v : x) sum += v * v;
        raw = std::sqrt(sum);
        break;
      }
      case Kind::table:
        if (x.size() != 1) throw ShapeError("table score requires D = 1");
        raw = interpolate(x[0]);
        break;
    }
    return std::clamp(scale_ * raw + offset_, 0.0, 1.0);
  }

  std::string name() const { return kind_name(kind_); }

  static std::string kind_name(Kind kind) {
    switch (kind) {
      case Kind::identity: return "identity";
      case Kind::distance_from_origin: return "distance_from_origin";
      case Kind::negated_distance: return "negated_distance";
      case Kind::table: return "table";
    }
    return "identity";
  }

 private:
  ScoreFunction(Kind kind, double scale, double offset)
      : kind_(kind), scale_(scale), offset_(offset) {}

  double interpolate(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + w * (ys_[hi] - ys_[lo]);
  }

  Kind kind_ = Kind::identity;
  double scale_ = 1.0;
  double offset_ = 0.0;
  double lipschitz_ = 1.0;
  std::vector<double> xs_, ys_;
};

}  // namespace modal
