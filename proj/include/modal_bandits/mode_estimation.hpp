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

// Nonparametric mode estimation from samples: the k-NN argmin estimator, its
// multi-mode (level-set graph) extension, a Gaussian-mechanism private
// release, and a harness for measuring displacement under inserted points.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modal_bandits/errors.hpp"
#include "modal_bandits/knn.hpp"
#include "modal_bandits/random.hpp"
#include "modal_bandits/sample_set.hpp"

namespace modal {

struct ModeEstimatorConfig {
  std::optional<std::size_t> k;  // unset: default_k(n, D)
  double delta = 0.05;
  std::size_t p = 1;
  // Constant in beta_k = c * log(1/delta) * sqrt(log n) / sqrt(k). With the
  // conventional c = 100 and desk-scale n, beta_k >= 1 and the level-set graph
  // degenerates to the full graph; use c so that beta_k < 1 for multi-mode work.
  double beta_coefficient = 100.0;
  // Below this sample count estimates carry low_sample_warning.
  std::size_t min_samples = 50;

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (p == 0) throw ParameterError("p must be >= 1");
    if (!(beta_coefficient > 0.0)) throw ParameterError("beta_coefficient must be > 0");
    if (k && *k == 0) throw ParameterError("k must be >= 1");
  }

  std::size_t resolve_k(std::size_t n, std::size_t dimension) const {
    return k ? *k : default_k(n, dimension);
  }
};

struct ModeEstimate {
  Point location;
  double density = 0.0;  // f_k at location; +inf for a zero radius
  std::size_t k_used = 0;
  std::size_t n_used = 0;
  bool low_sample_warning = false;
};

struct PrivacyParams {
  double epsilon = 1.0;
  double delta_privacy = 0.05;
  std::optional<double> sigma;  // unset: dp_sigma(...)
};

struct ContaminationReport {
  ModeEstimate clean_estimate;
  ModeEstimate contaminated_estimate;
  double displacement = 0.0;
  std::size_t ell = 0;
  double theoretical_bound = 0.0;
};

struct RobustnessOptions {
  double bound_constant = 1.0;
  // Test hook: allows ell >= k to demonstrate why the precondition exists.
  bool enforce_ell_below_k = true;
};

namespace detail {

inline void check_samples(const SampleSet& samples, std::size_t k) {
  if (samples.empty()) throw ParameterError("sample set is empty");
  if (k == 0 || k > samples.size()) {
    throw ParameterError("k must satisfy 1 <= k <= n (k=" + std::to_string(k) +
                         ", n=" + std::to_string(samples.size()) + ")");
  }
}

inline ModeEstimate make_estimate(const SampleSet& samples, std::size_t index,
                                  double radius, std::size_t k,
                                  const ModeEstimatorConfig& config) {
  ModeEstimate est;
  est.location = samples.point(index);
  est.density = density_from_radius(radius, k, samples.size(), samples.dimension());
  est.k_used = k;
  est.n_used = samples.size();
  est.low_sample_warning = samples.size() < config.min_samples;
  return est;
}

// Index of argmin_i r_k(X_i), ties to the lexicographically smallest point.
inline std::size_t argmin_knn_radius(const SampleSet& samples, std::size_t k,
                                     double* radius_out) {
  const std::size_t n = samples.size();
  std::size_t best = n;
  double best_r = std::numeric_limits<double>::infinity();
  auto offer = [&](std::size_t i, double r) {
    if (best == n || r < best_r || (r == best_r && lex_less(samples[i], samples[best]))) {
      best = i;
      best_r = r;
    }
  };
  if (samples.dimension() == 1) {
    const auto radii = all_knn_radii(samples, k);
    for (std::size_t i = 0; i < n; ++i) offer(i, radii[i]);
  } else {
    const KdTree tree(samples);
    double r = 0.0;
    const std::size_t i = tree.argmin_knn_radius(k, &r);
    offer(i, r);
  }
  if (radius_out) *radius_out = best_r;
  return best;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

// lambda - beta * lambda, with the infinite-density case handled explicitly.
inline double lowered_level(double lambda, double beta, double slack = 0.0) {
  if (beta >= 1.0) return -std::numeric_limits<double>::infinity();
  if (std::isinf(lambda)) return lambda;
  return lambda - beta * lambda - slack;
}

}  // namespace detail

// Sample point minimizing the k-NN radius.
inline ModeEstimate estimate_mode(const SampleSet& samples,
                                  const ModeEstimatorConfig& config = {}) {
  config.validate();
  if (samples.empty()) throw ParameterError("sample set is empty");
  const std::size_t k = config.resolve_k(samples.size(), samples.dimension());
  detail::check_samples(samples, k);
  double radius = 0.0;
  const std::size_t idx = detail::argmin_knn_radius(samples, k, &radius);
  return detail::make_estimate(samples, idx, radius, k, config);
}

inline double beta_k(double coefficient, double delta, std::size_t n, std::size_t k) {
  return coefficient * std::log(1.0 / delta) *
         std::sqrt(std::log(static_cast<double>(n))) /
         std::sqrt(static_cast<double>(k));
}

// Up to config.p modes found by scanning points in descending k-NN density and
// collecting connected components of the level-set graph G(lambda - beta_k
// lambda) that are disjoint from those already collected. Edges join X_i, X_j
// when |X_i - X_j| <= min(r_k(X_i), r_k(X_j)). Returned in collection order;
// each entry is the density argmax of its component.
inline std::vector<ModeEstimate> estimate_p_modes(const SampleSet& samples,
                                                  const ModeEstimatorConfig& config) {
  config.validate();
  if (samples.empty()) throw ParameterError("sample set is empty");
  const std::size_t n = samples.size();
  const std::size_t dim = samples.dimension();
  const std::size_t k = config.resolve_k(n, dim);
  detail::check_samples(samples, k);

  const auto radii = all_knn_radii(samples, k);
  std::vector<double> density(n);
  for (std::size_t i = 0; i < n; ++i) density[i] = density_from_radius(radii[i], k, n, dim);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (radii[a] != radii[b]) return radii[a] < radii[b];
    if (lex_less(samples[a], samples[b])) return true;
    if (lex_less(samples[b], samples[a])) return false;
    return a < b;
  });

  const double beta = beta_k(config.beta_coefficient, config.delta, n, k);
  const KdTree tree(samples);
  detail::DisjointSets components(n);
  std::vector<char> active(n, 0);
  std::size_t next = 0;  // next vertex (in density order) to activate

  auto activate = [&](std::size_t v) {
    active[v] = 1;
    tree.for_each_within(samples[v], radii[v], [&](std::size_t u, double d) {
      if (u != v && active[u] && d <= radii[u]) components.unite(u, v);
    });
  };

  std::vector<std::size_t> collected;
  std::vector<ModeEstimate> out;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = order[pos];
    const double level = detail::lowered_level(density[i], beta);
    while (next < n && (next <= pos || density[order[next]] >= level)) {
      activate(order[next]);
      ++next;
    }
    const std::size_t root = components.find(i);
    bool disjoint = true;
    for (std::size_t rep : collected) {
      if (components.find(rep) == root) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) {
      collected.push_back(i);
      out.push_back(detail::make_estimate(samples, i, radii[i], k, config));
    }
    if (out.size() == config.p) break;
  }
  return out;
}

// Lexicographic minimum location among the first min(p, size) modes.
inline Point p_mode_value(std::span<const ModeEstimate> modes, std::size_t p) {
  if (modes.empty()) throw ParameterError("p_mode_value requires at least one mode");
  if (p == 0) throw ParameterError("p must be >= 1");
  const std::size_t limit = std::min(p, modes.size());
  std::size_t best = 0;
  for (std::size_t i = 1; i < limit; ++i) {
    if (lex_less(modes[i].location, modes[best].location)) best = i;
  }
  return modes[best].location;
}

// Gaussian noise scale C * log(2/delta) * (log n)^{1/4} * k^{1/4} / epsilon.
inline double dp_sigma(std::size_t n, std::size_t k, const PrivacyParams& privacy,
                       double calibration_constant = 1.0) {
  if (k == 0 || k > n) throw ParameterError("dp_sigma requires n >= k >= 1");
  if (!(privacy.epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  if (!(privacy.delta_privacy > 0.0 && privacy.delta_privacy < 1.0)) {
    throw ParameterError("privacy delta must lie in (0, 1)");
  }
  if (!(calibration_constant > 0.0)) throw ParameterError("calibration constant must be > 0");
  return calibration_constant * std::log(2.0 / privacy.delta_privacy) *
         std::pow(std::log(static_cast<double>(n)), 0.25) *
         std::pow(static_cast<double>(k), 0.25) / privacy.epsilon;
}

// Mode estimate plus i.i.d. N(0, sigma^2) noise on every coordinate.
inline Point private_mode(const SampleSet& samples, const ModeEstimatorConfig& config,
                          const PrivacyParams& privacy, std::uint64_t seed,
                          double calibration_constant = 1.0) {
  const ModeEstimate clean = estimate_mode(samples, config);
  double sigma = 0.0;
  if (privacy.sigma) {
    sigma = *privacy.sigma;
    if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  } else {
    sigma = dp_sigma(clean.n_used, clean.k_used, privacy, calibration_constant);
  }
  Rng rng(seed);
  Point out = clean.location;
  for (double& x : out) x += sigma * rng.normal();
  return out;
}

// C * sqrt(log(1/delta)) * (log n)^{1/4} * (k - ell)^{-1/4}.
inline double robustness_bound(std::size_t n, std::size_t k, std::size_t ell,
                               double delta, double constant) {
  if (ell >= k) return std::numeric_limits<double>::infinity();
  return constant * std::sqrt(std::log(1.0 / delta)) *
         std::pow(std::log(static_cast<double>(n)), 0.25) *
         std::pow(static_cast<double>(k - ell), -0.25);
}

// Mode displacement caused by inserting `adversarial_points` into `samples`.
// Both estimates use the k resolved for the clean sample.
inline ContaminationReport measure_robustness(const SampleSet& samples,
                                              const SampleSet& adversarial_points,
                                              const ModeEstimatorConfig& config,
                                              const RobustnessOptions& options = {}) {
  config.validate();
  if (samples.empty()) throw ParameterError("sample set is empty");
  const std::size_t k = config.resolve_k(samples.size(), samples.dimension());
  const std::size_t ell = adversarial_points.size();
  if (options.enforce_ell_below_k && ell >= k) {
    throw ParameterError(
        "robustness requires ell < k (ell=" + std::to_string(ell) + ", k=" +
        std::to_string(k) +
        "): with ell >= k inserted points an adversary can stack them anywhere "
        "and create a new mode arbitrarily far from the clean estimate");
  }
  ModeEstimatorConfig fixed = config;
  fixed.k = k;
  ContaminationReport report;
  report.clean_estimate = estimate_mode(samples, fixed);
  report.contaminated_estimate = estimate_mode(samples.concat(adversarial_points), fixed);
  report.displacement = euclidean_distance(report.clean_estimate.location,
                                           report.contaminated_estimate.location);
  report.ell = ell;
  report.theoretical_bound =
      robustness_bound(samples.size(), k, ell, config.delta, options.bound_constant);
  return report;
}

}  // namespace modal
