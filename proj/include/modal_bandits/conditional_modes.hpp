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

// Modes of a conditional reward density f(r | X = x) estimated from joint
// samples (r_j, X_j): the k-NN radius of each grid point (R_i, x) in
// R^{1+d} is computed against the joint sample and the grid is searched.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modal_bandits/errors.hpp"
#include "modal_bandits/knn.hpp"
#include "modal_bandits/mode_estimation.hpp"
#include "modal_bandits/sample_set.hpp"

namespace modal {

// Pairs (reward in [0,1], context in R^d).
class JointSampleSet {
 public:
  explicit JointSampleSet(std::size_t context_dimension = 1)
      : contexts_(context_dimension) {}

  void push_back(double reward, std::span<const double> context) {
    if (!(reward >= 0.0 && reward <= 1.0)) {
      throw DataError("joint sample reward " + std::to_string(reward) +
                      " outside [0, 1]");
    }
    contexts_.push_back(context);
    rewards_.push_back(reward);
  }

  std::size_t size() const { return rewards_.size(); }
  bool empty() const { return rewards_.empty(); }
  std::size_t context_dimension() const { return contexts_.dimension(); }
  double reward(std::size_t i) const { return rewards_[i]; }
  std::span<const double> context(std::size_t i) const { return contexts_[i]; }
  const std::vector<double>& rewards() const { return rewards_; }
  const SampleSet& contexts() const { return contexts_; }

 private:
  std::vector<double> rewards_;
  SampleSet contexts_;
};

struct ConditionalModeConfig {
  std::size_t m = 50;            // grid {1/m, ..., (m-1)/m}
  std::optional<std::size_t> k;  // unset: ceil(n^{2 alpha / (2 alpha + d + 1)})
  double delta = 0.05;
  double epsilon_level = 0.0;    // extra slack subtracted from the graph level
  std::size_t p = 1;
  double alpha = 1.0;            // Holder exponent used only for the default k
  double beta_coefficient = 100.0;
  // Optional per-coordinate multiplier applied to contexts (and queries)
  // before distances are taken. Empty: contexts used as given.
  std::vector<double> context_scale;

  void validate() const {
    if (m < 2) throw ParameterError("grid resolution m must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (!(epsilon_level >= 0.0)) throw ParameterError("epsilon_level must be >= 0");
    if (p == 0) throw ParameterError("p must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
    if (!(beta_coefficient > 0.0)) throw ParameterError("beta_coefficient must be > 0");
    if (k && *k == 0) throw ParameterError("k must be >= 1");
  }

  std::size_t resolve_k(std::size_t n, std::size_t context_dimension) const {
    if (k) return *k;
    const double exponent =
        2.0 * alpha / (2.0 * alpha + static_cast<double>(context_dimension) + 1.0);
    const auto value = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(n), exponent) - 1e-9));
    return std::clamp<std::size_t>(value, 1, n);
  }

  double grid_value(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(m);
  }
};

struct ConditionalMode {
  double reward = 0.0;
  double density = 0.0;
};

// A joint sample indexed for repeated conditional queries.
class ConditionalModeIndex {
 public:
  ConditionalModeIndex(const JointSampleSet& samples, ConditionalModeConfig config)
      : config_(std::move(config)),
        context_dim_(samples.context_dimension()),
        n_(samples.size()),
        joint_(embed(samples, config_)),
        tree_(joint_) {
    config_.validate();
    if (samples.empty()) throw ParameterError("joint sample set is empty");
    k_ = config_.resolve_k(n_, context_dim_);
    if (k_ > n_) {
      throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k_) +
                           ", n=" + std::to_string(n_) + ")");
    }
  }

  std::size_t k() const { return k_; }
  std::size_t size() const { return n_; }
  const ConditionalModeConfig& config() const { return config_; }

  // r_k((reward, x)) against the joint sample.
  double radius(double reward, std::span<const double> x) const {
    return tree_.knn_radius(query_point(reward, x), k_);
  }

  double density(double radius_value) const {
    return density_from_radius(radius_value, k_, n_, context_dim_ + 1);
  }

  // Grid value minimizing r_k(R_i, x); ties to the smaller grid value.
  double mode(std::span<const double> x) const {
    check_context(x);
    double best_value = config_.grid_value(1);
    double best_r = radius(best_value, x);
    for (std::size_t i = 2; i < config_.m; ++i) {
      const double value = config_.grid_value(i);
      const double r = radius(value, x);
      if (r < best_r) {
        best_r = r;
        best_value = value;
      }
    }
    return best_value;
  }

  // Level-set graph version over the grid; up to config.p entries in
  // descending density order. Vertices of G(level) are grid points with
  // density >= level and R_a, R_b are adjacent when
  // |R_a - R_b| <= min(r_k(R_a, x), r_k(R_b, x)).
  std::vector<ConditionalMode> p_modes(std::span<const double> x) const {
    check_context(x);
    const std::size_t g = config_.m - 1;
    std::vector<double> value(g), radii(g), dens(g);
    for (std::size_t i = 0; i < g; ++i) {
      value[i] = config_.grid_value(i + 1);
      radii[i] = radius(value[i], x);
      dens[i] = density(radii[i]);
    }
    std::vector<std::size_t> order(g);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });

    const double beta = beta_k(config_.beta_coefficient, config_.delta, n_, k_);
    detail::DisjointSets components(g);
    std::vector<char> active(g, 0);
    auto activate = [&](std::size_t v) {
      active[v] = 1;
      for (std::size_t u = 0; u < g; ++u) {
        if (u != v && active[u] &&
            std::fabs(value[u] - value[v]) <= std::min(radii[u], radii[v])) {
          components.unite(u, v);
        }
      }
    };

    std::vector<std::size_t> collected;
    std::vector<ConditionalMode> out;
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < g; ++pos) {
      const std::size_t i = order[pos];
      const double level = detail::lowered_level(dens[i], beta, config_.epsilon_level);
      while (next < g && (next <= pos || dens[order[next]] >= level)) {
        activate(order[next]);
        ++next;
      }
      const std::size_t root = components.find(i);
      const bool disjoint = std::none_of(collected.begin(), collected.end(),
                                         [&](std::size_t c) { return components.find(c) == root; });
      if (disjoint) {
        collected.push_back(i);
        out.push_back({value[i], dens[i]});
      }
      if (out.size() == config_.p) break;
    }
    return out;
  }

 private:
  static SampleSet embed(const JointSampleSet& samples, const ConditionalModeConfig& config) {
    const std::size_t d = samples.context_dimension();
    if (!config.context_scale.empty() && config.context_scale.size() != d) {
      throw ShapeError("context_scale length must equal the context dimension");
    }
    SampleSet joint(d + 1);
    joint.reserve(samples.size());
    Point row(d + 1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      row[0] = samples.reward(i);
      auto c = samples.context(i);
      for (std::size_t j = 0; j < d; ++j) {
        row[j + 1] = config.context_scale.empty() ? c[j] : c[j] * config.context_scale[j];
      }
      joint.push_back(row);
    }
    return joint;
  }

  void check_context(std::span<const double> x) const {
    if (x.size() != context_dim_) {
      throw ShapeError("context dimension " + std::to_string(x.size()) +
                       " does not match joint sample context dimension " +
                       std::to_string(context_dim_));
    }
  }

  Point query_point(double reward, std::span<const double> x) const {
    Point q(context_dim_ + 1);
    q[0] = reward;
    for (std::size_t j = 0; j < context_dim_; ++j) {
      q[j + 1] = config_.context_scale.empty() ? x[j] : x[j] * config_.context_scale[j];
    }
    return q;
  }

  ConditionalModeConfig config_;
  std::size_t context_dim_;
  std::size_t n_;
  SampleSet joint_;
  KdTree tree_;
  std::size_t k_ = 1;
};

inline double conditional_mode(const JointSampleSet& samples, std::span<const double> x,
                               const ConditionalModeConfig& config = {}) {
  if (samples.empty()) throw ParameterError("joint sample set is empty");
  return ConditionalModeIndex(samples, config).mode(x);
}

inline std::vector<ConditionalMode> conditional_p_modes(const JointSampleSet& samples,
                                                        std::span<const double> x,
                                                        const ConditionalModeConfig& config) {
  if (samples.empty()) throw ParameterError("joint sample set is empty");
  return ConditionalModeIndex(samples, config).p_modes(x);
}

}  // namespace modal
