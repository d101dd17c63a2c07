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
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modal_bandits/errors.hpp"

namespace modal {

using Point = std::vector<double>;

// An ordered collection of points in R^D stored row-major in one buffer.
class SampleSet {
 public:
  explicit SampleSet(std::size_t dimension = 1) : dimension_(dimension) {
    if (dimension_ == 0) throw ShapeError("sample dimension must be >= 1");
  }

  SampleSet(std::size_t dimension, std::vector<double> flat)
      : dimension_(dimension), data_(std::move(flat)) {
    if (dimension_ == 0) throw ShapeError("sample dimension must be >= 1");
    if (data_.size() % dimension_ != 0) {
      throw ShapeError("flat buffer length " + std::to_string(data_.size()) +
                       " is not a multiple of dimension " +
                       std::to_string(dimension_));
    }
  }

  // One-dimensional set from scalar values.
  static SampleSet from_scalars(std::span<const double> values) {
    return SampleSet(1, std::vector<double>(values.begin(), values.end()));
  }
  static SampleSet from_scalars(std::initializer_list<double> values) {
    return SampleSet(1, std::vector<double>(values));
  }

  static SampleSet from_points(std::size_t dimension,
                               const std::vector<Point>& points) {
    SampleSet out(dimension);
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p);
    return out;
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return data_.size() / dimension_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }

  Point point(std::size_t i) const {
    auto s = (*this)[i];
    return Point(s.begin(), s.end());
  }

  void reserve(std::size_t n) { data_.reserve(n * dimension_); }

  void push_back(std::span<const double> p) {
    if (p.size() != dimension_) {
      throw ShapeError("point of dimension " + std::to_string(p.size()) +
                       " pushed into a set of dimension " +
                       std::to_string(dimension_));
    }
    data_.insert(data_.end(), p.begin(), p.end());
  }
  void push_back(double scalar) { push_back(std::span<const double>(&scalar, 1)); }

  // Union of two sets of equal dimension (this first, then other).
  SampleSet concat(const SampleSet& other) const {
    if (!other.empty() && other.dimension_ != dimension_) {
      throw ShapeError("cannot concatenate sets of dimension " +
                       std::to_string(dimension_) + " and " +
                       std::to_string(other.dimension_));
    }
    SampleSet out = *this;
    out.data_.insert(out.data_.end(), other.data_.begin(), other.data_.end());
    return out;
  }

  // First `n` points.
  SampleSet prefix(std::size_t n) const {
    n = std::min(n, size());
    return SampleSet(dimension_, std::vector<double>(
                                     data_.begin(),
                                     data_.begin() + static_cast<std::ptrdiff_t>(n * dimension_)));
  }

  const std::vector<double>& flat() const { return data_; }

 private:
  std::size_t dimension_;
  std::vector<double> data_;
};

// Lexicographic "a < b" over coordinates; the library-wide tie-break order.
inline bool lex_less(std::span<const double> a, std::span<const double> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace modal
