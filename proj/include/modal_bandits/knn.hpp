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

// k-nearest-neighbor radius and density primitives.
//
// Every search here is exact: the brute-force scan, the sorted sliding window
// used for one-dimensional sets and the k-d tree used for D >= 2 all compute
// distances through euclidean_distance() and therefore return bit-identical
// radii.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "modal_bandits/errors.hpp"
#include "modal_bandits/sample_set.hpp"

namespace modal {

inline double euclidean_distance(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.size() == 1) return std::fabs(a[0] - b[0]);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// Volume of the unit ball in R^D: pi^{D/2} / Gamma(D/2 + 1).
inline double unit_ball_volume(std::size_t dimension) {
  const double half = static_cast<double>(dimension) / 2.0;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

// ceil(n^{4/(4+D)}) clamped to [1, n]. The exponent is evaluated in floating
// point and corrected against exact integer arithmetic near integers so that
// perfect powers (n = 10^5, D = 1 -> 10^4) are not pushed up by rounding.
inline std::size_t default_k(std::size_t n, std::size_t dimension) {
  if (n == 0) throw ParameterError("default_k requires n >= 1");
  if (dimension == 0) throw ParameterError("default_k requires D >= 1");
  const double exponent = 4.0 / (4.0 + static_cast<double>(dimension));
  const double value = std::pow(static_cast<double>(n), exponent);
  auto k = static_cast<std::size_t>(std::ceil(value));
  const auto nearest = static_cast<std::size_t>(std::llround(value));
  if (nearest >= 1 && std::fabs(value - static_cast<double>(nearest)) <
                          1e-9 * static_cast<double>(nearest)) {
    // k >= n^{4/(4+D)}  <=>  k^{4+D} >= n^4; check exactly when it fits.
    const double bits = (4.0 + static_cast<double>(dimension)) *
                        std::log2(static_cast<double>(nearest) + 1.0);
    if (bits < 120.0 && 4.0 * std::log2(static_cast<double>(n) + 1.0) < 120.0) {
      auto ipow = [](unsigned __int128 base, std::size_t e) {
        unsigned __int128 r = 1;
        for (std::size_t i = 0; i < e; ++i) r *= base;
        return r;
      };
      const unsigned __int128 lhs = ipow(nearest, 4 + dimension);
      const unsigned __int128 rhs = ipow(n, 4);
      k = lhs >= rhs ? nearest : nearest + 1;
    }
  }
  return std::clamp<std::size_t>(k, 1, n);
}

// k / (n * v_D * r^D); +infinity when r == 0 (k coincident points).
inline double density_from_radius(double radius, std::size_t k, std::size_t n,
                                  std::size_t dimension) {
  if (radius <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) /
         (static_cast<double>(n) * unit_ball_volume(dimension) *
          std::pow(radius, static_cast<double>(dimension)));
}

namespace detail {

inline void check_query(const SampleSet& samples, std::span<const double> query,
                        std::size_t k) {
  if (query.size() != samples.dimension()) {
    throw ShapeError("query dimension " + std::to_string(query.size()) +
                     " does not match sample dimension " +
                     std::to_string(samples.dimension()));
  }
  if (k == 0 || k > samples.size()) {
    throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(samples.size()) + ")");
  }
}

}  // namespace detail

// Distance from `query` to its k-th nearest point of `samples`. A query that is
// itself a member of the set is its own first neighbor at distance 0.
inline double knn_radius(const SampleSet& samples, std::span<const double> query,
                         std::size_t k) {
  detail::check_query(samples, query, k);
  std::vector<double> dist(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    dist[i] = euclidean_distance(query, samples[i]);
  }
  auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(dist.begin(), kth, dist.end());
  return *kth;
}

inline double knn_density(const SampleSet& samples,
                          std::span<const double> query, std::size_t k) {
  const double r = knn_radius(samples, query, k);
  return density_from_radius(r, k, samples.size(), samples.dimension());
}

// Exact k-d tree over a SampleSet (points are copied).
class KdTree {
 public:
  explicit KdTree(const SampleSet& samples, std::size_t leaf_size = 16)
      : dim_(samples.dimension()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
    const std::size_t n = samples.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (n > 0) build(samples, order, 0, n);
    points_.reserve(n * dim_);
    for (auto idx : order) {
      auto p = samples[idx];
      points_.insert(points_.end(), p.begin(), p.end());
    }
    original_index_ = std::move(order);
    box_lo_.resize(nodes_.size() * dim_);
    box_hi_.resize(nodes_.size() * dim_);
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      for (std::size_t a = 0; a < dim_; ++a) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = nodes_[id].begin; i < nodes_[id].end; ++i) {
          lo = std::min(lo, points_[i * dim_ + a]);
          hi = std::max(hi, points_[i * dim_ + a]);
        }
        box_lo_[id * dim_ + a] = lo;
        box_hi_[id * dim_ + a] = hi;
      }
    }
  }

  std::size_t size() const { return original_index_.size(); }
  std::size_t dimension() const { return dim_; }

  // k-th nearest neighbor distance; same contract as modal::knn_radius.
  double knn_radius(std::span<const double> query, std::size_t k) const {
    if (query.size() != dim_) throw ShapeError("query dimension mismatch");
    if (k == 0 || k > size()) {
      throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                           ", n=" + std::to_string(size()) + ")");
    }
    std::priority_queue<double> heap;  // max-heap of the k best distances
    knn_search(0, query, k, heap);
    return heap.top();
  }

  // Number of points within `radius` (inclusive); stops counting at `limit`.
  std::size_t count_within(std::span<const double> query, double radius,
                           std::size_t limit) const {
    std::size_t count = 0;
    if (!nodes_.empty()) count_search(0, query, radius, limit, count);
    return count;
  }

  // Original index of argmin over the tree's points of r_k, ties to the
  // lexicographically smallest point. A leaf is skipped when fewer than k
  // points lie within the incumbent radius of its bounding box.
  std::size_t argmin_knn_radius(std::size_t k, double* radius_out = nullptr) const {
    const std::size_t n = size();
    if (k == 0 || k > n) {
      throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                           ", n=" + std::to_string(n) + ")");
    }
    std::size_t best = n;
    double best_r = std::numeric_limits<double>::infinity();
    auto offer = [&](std::size_t pos) {
      const double r = knn_radius(at(pos), k);
      if (best == n || r < best_r ||
          (r == best_r && lex_less(at(pos), at(best)))) {
        best = pos;
        best_r = r;
      }
    };
    std::vector<std::int64_t> leaves;
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      if (nodes_[id].left < 0) leaves.push_back(static_cast<std::int64_t>(id));
    }
    // Seed the incumbent with the first point of the tightest leaves.
    std::vector<std::pair<double, std::int64_t>> tight;
    for (auto id : leaves) {
      double diag = 0.0;
      const std::size_t off = static_cast<std::size_t>(id) * dim_;
      for (std::size_t a = 0; a < dim_; ++a) {
        const double w = box_hi_[off + a] - box_lo_[off + a];
        diag += w * w;
      }
      tight.emplace_back(diag, id);
    }
    const std::size_t seeds = std::min<std::size_t>(4, tight.size());
    std::partial_sort(tight.begin(), tight.begin() + static_cast<std::ptrdiff_t>(seeds), tight.end());
    for (std::size_t i = 0; i < seeds; ++i) offer(nodes_[static_cast<std::size_t>(tight[i].second)].begin);
    for (auto id : leaves) {
      const Node& leaf = nodes_[static_cast<std::size_t>(id)];
      std::size_t bound = 0;
      count_near_box(0, id, best_r, k, bound);
      if (bound < k) continue;
      for (std::size_t pos = leaf.begin; pos < leaf.end; ++pos) {
        std::size_t c = 0;
        count_search(0, at(pos), best_r, k, c);
        if (c >= k) offer(pos);
      }
    }
    if (radius_out) *radius_out = best_r;
    return original_index_[best];
  }

  // Calls fn(original_index, distance) for every point within `radius`.
  template <typename Fn>
  void for_each_within(std::span<const double> query, double radius, Fn&& fn) const {
    if (!nodes_.empty()) range_search(0, query, radius, fn);
  }

 private:
  struct Node {
    std::size_t begin = 0, end = 0;  // range in the permuted order
    std::size_t axis = 0;
    double split = 0.0;
    std::int64_t left = -1, right = -1;
  };

  std::span<const double> at(std::size_t pos) const {
    return {points_.data() + pos * dim_, dim_};
  }

  // Squared distances from q to the nearest and farthest corners of a node box.
  void box_distances(std::int64_t id, std::span<const double> q, double& near_sq,
                     double& far_sq) const {
    near_sq = 0.0;
    far_sq = 0.0;
    const std::size_t off = static_cast<std::size_t>(id) * dim_;
    for (std::size_t a = 0; a < dim_; ++a) {
      const double lo = box_lo_[off + a], hi = box_hi_[off + a];
      const double below = lo - q[a], above = q[a] - hi;
      const double gap = below > 0.0 ? below : (above > 0.0 ? above : 0.0);
      const double span = std::max(std::fabs(q[a] - lo), std::fabs(q[a] - hi));
      near_sq += gap * gap;
      far_sq += span * span;
    }
  }

  // Box tests are widened by a relative margin so that only points compared
  // exactly at the leaves decide borderline cases.
  static constexpr double kInside = 1.0 - 1e-9;
  static constexpr double kOutside = 1.0 + 1e-9;

  std::int64_t build(const SampleSet& samples, std::vector<std::size_t>& order,
                     std::size_t begin, std::size_t end) {
    const auto id = static_cast<std::int64_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= leaf_size_) return id;
    std::size_t best_axis = 0;
    double best_spread = -1.0;
    for (std::size_t a = 0; a < dim_; ++a) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = samples[order[i]][a];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        best_axis = a;
      }
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t x, std::size_t y) {
                       return samples[x][best_axis] < samples[y][best_axis];
                     });
    const double split = samples[order[mid]][best_axis];
    const std::int64_t left = build(samples, order, begin, mid);
    const std::int64_t right = build(samples, order, mid, end);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.axis = best_axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
  }

  void knn_search(std::int64_t id, std::span<const double> q, std::size_t k,
                  std::priority_queue<double>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const double d = euclidean_distance(q, at(i));
        if (heap.size() < k) {
          heap.push(d);
        } else if (d < heap.top()) {
          heap.pop();
          heap.push(d);
        }
      }
      return;
    }
    const double diff = q[node.axis] - node.split;
    const std::int64_t near = diff < 0.0 ? node.left : node.right;
    const std::int64_t far = diff < 0.0 ? node.right : node.left;
    knn_search(near, q, k, heap);
    if (heap.size() < k || std::fabs(diff) <= heap.top()) {
      double near_sq = 0.0, far_sq = 0.0;
      box_distances(far, q, near_sq, far_sq);
      if (heap.size() < k || near_sq <= heap.top() * heap.top() * kOutside) {
        knn_search(far, q, k, heap);
      }
    }
  }

  // Upper bound on the number of points within `radius` of the box of node
  // `target`, counted up to `limit`.
  void count_near_box(std::int64_t id, std::int64_t target, double radius, std::size_t limit,
                      std::size_t& count) const {
    if (count >= limit) return;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    const std::size_t a_off = static_cast<std::size_t>(id) * dim_;
    const std::size_t t_off = static_cast<std::size_t>(target) * dim_;
    double near_sq = 0.0, far_sq = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) {
      const double nlo = box_lo_[a_off + a], nhi = box_hi_[a_off + a];
      const double tlo = box_lo_[t_off + a], thi = box_hi_[t_off + a];
      const double gap = std::max({tlo - nhi, nlo - thi, 0.0});
      const double reach = std::max({tlo - nlo, nhi - thi, 0.0});
      near_sq += gap * gap;
      far_sq += reach * reach;
    }
    const double r_sq = radius * radius;
    if (near_sq > r_sq * kOutside) return;
    if (far_sq <= r_sq * kOutside || node.left < 0) {
      // Leaves are counted whole once they touch the widened region.
      count = std::min(limit, count + (node.end - node.begin));
      return;
    }
    count_near_box(node.left, target, radius, limit, count);
    count_near_box(node.right, target, radius, limit, count);
  }

  void count_search(std::int64_t id, std::span<const double> q, double radius,
                    std::size_t limit, std::size_t& count) const {
    if (count >= limit) return;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    double near_sq = 0.0, far_sq = 0.0;
    box_distances(id, q, near_sq, far_sq);
    const double r_sq = radius * radius;
    if (near_sq > r_sq * kOutside) return;
    if (far_sq < r_sq * kInside) {
      count = std::min(limit, count + (node.end - node.begin));
      return;
    }
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end && count < limit; ++i) {
        if (euclidean_distance(q, at(i)) <= radius) ++count;
      }
      return;
    }
    const double diff = q[node.axis] - node.split;
    const std::int64_t near = diff < 0.0 ? node.left : node.right;
    const std::int64_t far = diff < 0.0 ? node.right : node.left;
    count_search(near, q, radius, limit, count);
    if (std::fabs(diff) <= radius) count_search(far, q, radius, limit, count);
  }

  template <typename Fn>
  void range_search(std::int64_t id, std::span<const double> q, double radius,
                    Fn& fn) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const double d = euclidean_distance(q, at(i));
        if (d <= radius) fn(original_index_[i], d);
      }
      return;
    }
    const double diff = q[node.axis] - node.split;
    const std::int64_t near = diff < 0.0 ? node.left : node.right;
    const std::int64_t far = diff < 0.0 ? node.right : node.left;
    range_search(near, q, radius, fn);
    if (std::fabs(diff) <= radius) range_search(far, q, radius, fn);
  }

  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<Node> nodes_;
  std::vector<double> box_lo_, box_hi_;
  std::vector<double> points_;
  std::vector<std::size_t> original_index_;
};

// Indices of a one-dimensional set sorted by value (ties by index).
inline std::vector<std::size_t> sorted_order_1d(const SampleSet& samples) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& v = samples.flat();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return order;
}

// r_k at every position of an ascending sequence of scalars. In sorted order
// the k nearest neighbors of position i form a window [l, l+k-1] containing i;
// the k-th distance is the smallest window reach.
inline std::vector<double> sorted_knn_radii_1d(std::span<const double> v, std::size_t k) {
  const std::size_t n = v.size();
  if (k == 0 || k > n) {
    throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  }
  std::vector<double> radii(n);
  // The first window start whose right reach dominates its left reach is
  // nondecreasing in i, so one sweep finds it for every position.
  std::size_t a = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i + 1 >= k ? i + 1 - k : 0;
    const std::size_t hi = std::min(i, n - k);
    auto reach = [&](std::size_t l) {
      return std::max(std::fabs(v[l] - v[i]), std::fabs(v[l + k - 1] - v[i]));
    };
    a = std::max(a, lo);
    while (a <= hi && std::fabs(v[a + k - 1] - v[i]) < std::fabs(v[a] - v[i])) ++a;
    double best = std::numeric_limits<double>::infinity();
    if (a <= hi) best = reach(a);
    if (a > lo) best = std::min(best, reach(a - 1));
    radii[i] = best;
  }
  return radii;
}

// r_k(X_i) for every sample point X_i, indexed like `samples`.
inline std::vector<double> all_knn_radii(const SampleSet& samples, std::size_t k) {
  const std::size_t n = samples.size();
  if (k == 0 || k > n) {
    throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  }
  std::vector<double> radii(n);
  if (samples.dimension() == 1) {
    const auto order = sorted_order_1d(samples);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = samples.flat()[order[i]];
    const auto sorted_radii = sorted_knn_radii_1d(v, k);
    for (std::size_t i = 0; i < n; ++i) radii[order[i]] = sorted_radii[i];
    return radii;
  }
  const KdTree tree(samples);
  for (std::size_t i = 0; i < n; ++i) radii[i] = tree.knn_radius(samples[i], k);
  return radii;
}

}  // namespace modal
