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

// Finite-armed modal bandits: UCB, uniform (round-robin) sampling and top-m
// identification, plus the gap bookkeeping and regret measures used to
// evaluate them. An arm's value is the score of the mode of its reward law.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modal_bandits/environments.hpp"
#include "modal_bandits/errors.hpp"
#include "modal_bandits/knn.hpp"
#include "modal_bandits/mode_estimation.hpp"
#include "modal_bandits/random.hpp"
#include "modal_bandits/sample_set.hpp"
#include "modal_bandits/score.hpp"

namespace modal {

struct BurnInPolicy {
  std::size_t initial_pulls_per_arm = 10;

  void validate() const {
    if (initial_pulls_per_arm == 0) throw ParameterError("burn-in pulls per arm must be >= 1");
  }
};

namespace detail {

// Mode estimate of `samples`; `sorted` (ascending copy of a D = 1 sample)
// enables the linear-window path for p = 1.
inline ModeEstimate modal_estimate(const SampleSet& samples, const std::vector<double>* sorted,
                                   const ModeEstimatorConfig& config) {
  if (config.p > 1) {
    const auto modes = estimate_p_modes(samples, config);
    const Point target = p_mode_value(modes, config.p);
    for (const auto& m : modes) {
      if (m.location == target) return m;
    }
    return modes.front();
  }
  if (samples.dimension() == 1 && sorted != nullptr) {
    config.validate();
    const std::size_t n = sorted->size();
    if (n == 0) throw ParameterError("sample set is empty");
    const std::size_t k = config.resolve_k(n, 1);
    detail::check_samples(samples, k);
    const auto radii = sorted_knn_radii_1d(*sorted, k);
    const std::size_t best =
        static_cast<std::size_t>(std::min_element(radii.begin(), radii.end()) - radii.begin());
    ModeEstimate est;
    est.location = {(*sorted)[best]};
    est.density = density_from_radius(radii[best], k, n, 1);
    est.k_used = k;
    est.n_used = n;
    est.low_sample_warning = n < config.min_samples;
    return est;
  }
  return estimate_mode(samples, config);
}

}  // namespace detail

// Rewards observed from one arm and its cached mode estimate.
class ArmState {
 public:
  ArmState(std::size_t arm_id, std::size_t dimension) : arm_id_(arm_id), rewards_(dimension) {}

  ArmState(std::size_t arm_id, SampleSet rewards) : arm_id_(arm_id), rewards_(std::move(rewards)) {
    if (rewards_.dimension() == 1) {
      sorted_ = rewards_.flat();
      std::sort(sorted_.begin(), sorted_.end());
    }
  }

  std::size_t arm_id() const { return arm_id_; }
  std::size_t pulls() const { return rewards_.size(); }
  const SampleSet& rewards() const { return rewards_; }
  const std::optional<ModeEstimate>& cached_mode() const { return cached_mode_; }
  std::size_t cached_at() const { return cached_at_; }
  bool stale() const { return !cached_mode_ || cached_at_ != pulls(); }

  void add(std::span<const double> reward) {
    rewards_.push_back(reward);
    if (rewards_.dimension() == 1) {
      sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), reward[0]), reward[0]);
    }
  }

  const ModeEstimate& refresh(const ModeEstimatorConfig& config) {
    if (pulls() == 0) throw ParameterError("arm " + std::to_string(arm_id_) + " has no rewards");
    if (stale()) {
      cached_mode_ = detail::modal_estimate(rewards_, rewards_.dimension() == 1 ? &sorted_ : nullptr,
                                            config);
      cached_at_ = pulls();
    }
    return *cached_mode_;
  }

  double value(const ScoreFunction& score, const ModeEstimatorConfig& config) {
    return score(refresh(config).location);
  }

 private:
  std::size_t arm_id_;
  SampleSet rewards_;
  std::vector<double> sorted_;
  std::optional<ModeEstimate> cached_mode_;
  std::size_t cached_at_ = 0;
};

inline std::vector<ArmState> make_arm_states(std::size_t arms, std::size_t dimension) {
  std::vector<ArmState> states;
  states.reserve(arms);
  for (std::size_t i = 0; i < arms; ++i) states.emplace_back(i, dimension);
  return states;
}

// True arm values theta_i (in arm-id order) and the gaps derived from them.
class GapProfile {
 public:
  explicit GapProfile(std::vector<double> thetas) : thetas_(std::move(thetas)) {
    if (thetas_.empty()) throw ParameterError("gap profile needs at least one arm");
    sorted_ = thetas_;
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
  }

  std::size_t arms() const { return thetas_.size(); }
  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& sorted_descending() const { return sorted_; }
  double best() const { return sorted_.front(); }

  double theta(std::size_t arm) const {
    if (arm >= thetas_.size()) throw DataError("unknown arm id " + std::to_string(arm));
    return thetas_[arm];
  }

  // max_j theta_j - theta_i, by arm id.
  std::vector<double> deltas() const {
    std::vector<double> out;
    for (double t : thetas_) out.push_back(best() - t);
    return out;
  }

  // Top-m gaps by arm id, measured against the m-th and (m+1)-th largest
  // values: theta_i - theta_(m+1) above the boundary, theta_(m) - theta_i
  // below it.
  std::vector<double> m_deltas(std::size_t m) const {
    if (m == 0 || m >= thetas_.size()) throw ParameterError("m must satisfy 1 <= m < K");
    const double mth = sorted_[m - 1];
    const double next = sorted_[m];
    std::vector<double> out;
    for (double t : thetas_) out.push_back(t >= mth ? t - next : mth - t);
    return out;
  }

  // The m largest arms by id (ties to the lower id).
  std::vector<std::size_t> top_arms(std::size_t m) const {
    std::vector<std::size_t> ids(thetas_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::stable_sort(ids.begin(), ids.end(),
                     [&](std::size_t a, std::size_t b) { return thetas_[a] > thetas_[b]; });
    ids.resize(std::min(m, ids.size()));
    std::sort(ids.begin(), ids.end());
    return ids;
  }

 private:
  std::vector<double> thetas_;
  std::vector<double> sorted_;
};

struct RunRecord {
  std::string strategy;
  std::uint64_t seed = 0;
  std::vector<std::size_t> pulls;  // I_t for t = 1..n
  SampleSet rewards{1};            // reward observed at step t
  std::vector<std::size_t> counts;  // T_i(n)
  std::vector<std::pair<std::string, std::string>> config;

  std::size_t horizon() const { return pulls.size(); }

  // T_i(t) for every arm at step t (0 <= t <= n).
  std::vector<std::size_t> counts_at(std::size_t t) const {
    std::vector<std::size_t> c(counts.size(), 0);
    for (std::size_t j = 0; j < t && j < pulls.size(); ++j) ++c[pulls[j]];
    return c;
  }

  // Rewards of one arm among the first t steps.
  SampleSet arm_rewards(std::size_t arm, std::size_t t) const {
    SampleSet out(rewards.dimension());
    for (std::size_t j = 0; j < t && j < pulls.size(); ++j) {
      if (pulls[j] == arm) out.push_back(rewards[j]);
    }
    return out;
  }

  std::size_t most_pulled() const {
    return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  }
};

namespace detail {

inline RunRecord start_record(const std::string& strategy, const StochasticEnvironment& env) {
  RunRecord r;
  r.strategy = strategy;
  r.seed = env.seed();
  r.rewards = SampleSet(env.dimension());
  r.counts.assign(env.arms(), 0);
  return r;
}

// Pulls `arm` once: the reward is the arm's next latent draw.
inline void pull(StochasticEnvironment& env, std::vector<ArmState>& states, RunRecord& record,
                 std::size_t arm) {
  const Point reward = env.draw(arm, states[arm].pulls() + 1);
  states[arm].add(reward);
  record.pulls.push_back(arm);
  record.rewards.push_back(reward);
  ++record.counts[arm];
}

inline void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// log(1/delta) * log(T) / T^(1/(4+D)). Zero at T = 1.
inline double ucb_bonus(std::size_t T, double delta, std::size_t dimension) {
  if (T == 0) throw ParameterError("ucb_bonus needs T >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (dimension == 0) throw ParameterError("dimension must be >= 1");
  const double t = static_cast<double>(T);
  return std::log(1.0 / delta) * std::log(t) / std::pow(t, 1.0 / (4.0 + static_cast<double>(dimension)));
}

// Arm to pull next: the lowest-id arm still in burn-in, otherwise the argmax
// of score(mode) + bonus (scaled by the score's Lipschitz constant), ties to
// the lowest id. Stale mode estimates are refreshed in place.
inline std::size_t ucb_select(std::vector<ArmState>& states, double delta, const ScoreFunction& score,
                              const BurnInPolicy& burn_in, const ModeEstimatorConfig& estimator = {}) {
  if (states.empty()) throw ParameterError("ucb_select needs at least one arm");
  burn_in.validate();
  for (const auto& s : states) {
    if (s.pulls() < burn_in.initial_pulls_per_arm) return s.arm_id();
  }
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t dim = states[i].rewards().dimension();
    const double index = states[i].value(score, estimator) +
                         score.bonus_multiplier() * ucb_bonus(states[i].pulls(), delta, dim);
    if (index > best_index) {
      best_index = index;
      best = i;
    }
  }
  return best;
}

// UCB over n steps with per-step confidence delta / n.
inline RunRecord run_ucb(StochasticEnvironment& env, std::size_t n, double delta,
                         const ScoreFunction& score, const BurnInPolicy& burn_in = {},
                         const ModeEstimatorConfig& estimator = {}) {
  detail::check_delta(delta);
  burn_in.validate();
  estimator.validate();
  if (n < env.arms() * burn_in.initial_pulls_per_arm) {
    throw ParameterError("horizon " + std::to_string(n) + " is below the burn-in total " +
                         std::to_string(env.arms() * burn_in.initial_pulls_per_arm));
  }
  auto record = detail::start_record("ucb", env);
  record.config = {{"n", std::to_string(n)},
                   {"delta", detail::fmt(delta)},
                   {"burn_in", std::to_string(burn_in.initial_pulls_per_arm)},
                   {"score", score.name()}};
  auto states = make_arm_states(env.arms(), env.dimension());
  const double step_delta = delta / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t arm = ucb_select(states, step_delta, score, burn_in, estimator);
    detail::pull(env, states, record, arm);
  }
  return record;
}

struct UniformResult {
  RunRecord record;
  std::vector<std::size_t> ranking;  // arm ids by descending estimated value
  std::vector<double> values;        // estimated value by arm id
};

// Round-robin pulls (argmin of counts, ties to the lowest id), then arms
// ranked by the score of their sample (p-)mode.
inline UniformResult run_uniform(StochasticEnvironment& env, std::size_t n, const ScoreFunction& score,
                                 const ModeEstimatorConfig& estimator = {}) {
  estimator.validate();
  if (n < env.arms()) throw ParameterError("horizon must be at least the number of arms");
  UniformResult out{detail::start_record("uniform", env), {}, {}};
  out.record.config = {{"n", std::to_string(n)}, {"score", score.name()}};
  auto states = make_arm_states(env.arms(), env.dimension());
  for (std::size_t t = 0; t < n; ++t) detail::pull(env, states, out.record, t % env.arms());
  for (auto& s : states) out.values.push_back(s.value(score, estimator));
  out.ranking.resize(env.arms());
  for (std::size_t i = 0; i < env.arms(); ++i) out.ranking[i] = i;
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return out.values[a] > out.values[b]; });
  return out;
}

// Anytime confidence radius (log(c t^2) + log(1/delta)) * log t / t^(1/(4+D))
// where c = sum_{i >= N0} 1/i^2.
inline double confidence_U(std::size_t t, double delta, std::size_t dimension, std::size_t n0) {
  if (t == 0) throw ParameterError("confidence_U needs t >= 1");
  if (n0 == 0) throw ParameterError("N0 must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  double head = 0.0;
  for (std::size_t i = 1; i < n0; ++i) head += 1.0 / (static_cast<double>(i) * static_cast<double>(i));
  const double c = std::numbers::pi * std::numbers::pi / 6.0 - head;
  const double td = static_cast<double>(t);
  return (std::log(c * td * td) + std::log(1.0 / delta)) * std::log(td) /
         std::pow(td, 1.0 / (4.0 + static_cast<double>(dimension)));
}

struct TopMOptions {
  std::size_t m = 1;
  double delta = 0.05;
  BurnInPolicy burn_in;
  std::size_t max_pulls = 100000;
  // Pull the less-pulled of h_t and l_t instead of the randomized choice.
  bool deterministic = false;
  ModeEstimatorConfig estimator;
};

struct TopMResult {
  std::vector<std::size_t> selected;  // ascending arm ids
  RunRecord record;
  bool terminated_early = false;  // confidence stop (true) or budget exit (false)
};

// Top-m identification: after burn-in, H_t holds the m arms with the highest
// empirical value (ties to the lower id). The run stops once the lowest lower
// bound in H_t reaches the highest upper bound outside it, or when the pull
// budget is spent.
inline TopMResult run_top_m(StochasticEnvironment& env, const ScoreFunction& score,
                            const TopMOptions& options) {
  const std::size_t K = env.arms();
  if (options.m == 0 || options.m >= K) throw ParameterError("m must satisfy 1 <= m < K");
  detail::check_delta(options.delta);
  options.burn_in.validate();
  options.estimator.validate();
  const std::size_t n0 = options.burn_in.initial_pulls_per_arm;
  if (options.max_pulls < K * n0) throw ParameterError("max_pulls is below the burn-in total");

  TopMResult out{{}, detail::start_record("top_m", env), false};
  out.record.config = {{"m", std::to_string(options.m)},
                       {"delta", detail::fmt(options.delta)},
                       {"burn_in", std::to_string(n0)},
                       {"max_pulls", std::to_string(options.max_pulls)},
                       {"deterministic", options.deterministic ? "true" : "false"},
                       {"score", score.name()}};
  auto states = make_arm_states(K, env.dimension());
  Rng coin(derive_seed(env.seed(), 0x70B));
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < n0; ++j) detail::pull(env, states, out.record, i);
  }
  const double delta_high = options.delta / (2.0 * static_cast<double>(K - options.m));
  const double delta_low = options.delta / (2.0 * static_cast<double>(options.m));
  const double lip = score.bonus_multiplier();
  const std::size_t dim = env.dimension();
  std::vector<double> values(K);
  std::vector<std::size_t> order(K);
  for (;;) {
    for (std::size_t i = 0; i < K; ++i) values[i] = states[i].value(score, options.estimator);
    for (std::size_t i = 0; i < K; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::size_t h = order[0];
    double b_h = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < options.m; ++r) {
      const std::size_t i = order[r];
      const double lower = values[i] - lip * confidence_U(states[i].pulls(), delta_high, dim, n0);
      if (lower < b_h || (lower == b_h && i < h)) {
        b_h = lower;
        h = i;
      }
    }
    std::size_t l = order[options.m];
    double b_l = -std::numeric_limits<double>::infinity();
    for (std::size_t r = options.m; r < K; ++r) {
      const std::size_t i = order[r];
      const double upper = values[i] + lip * confidence_U(states[i].pulls(), delta_low, dim, n0);
      if (upper > b_l || (upper == b_l && i < l)) {
        b_l = upper;
        l = i;
      }
    }
    out.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(options.m));
    std::sort(out.selected.begin(), out.selected.end());
    if (b_h >= b_l) {
      out.terminated_early = true;
      return out;
    }
    if (out.record.horizon() >= options.max_pulls) return out;
    const double th = static_cast<double>(states[h].pulls());
    const double tl = static_cast<double>(states[l].pulls());
    std::size_t next;
    if (options.deterministic) {
      next = states[h].pulls() <= states[l].pulls() ? h : l;
    } else {
      next = coin.uniform() < tl / (th + tl) ? h : l;
    }
    detail::pull(env, states, out.record, next);
  }
}

// n * max_i theta_i - sum_t theta_{I_t}, accumulated as a sum of gaps.
inline double regret_mode(const RunRecord& record, const GapProfile& truth) {
  double total = 0.0;
  for (std::size_t arm : record.pulls) total += truth.best() - truth.theta(arm);
  return total;
}

// regret_mode after every step t = 1..n.
inline std::vector<double> regret_mode_curve(const RunRecord& record, const GapProfile& truth) {
  std::vector<double> out;
  out.reserve(record.horizon());
  double total = 0.0;
  for (std::size_t t = 0; t < record.horizon(); ++t) {
    total += truth.best() - truth.theta(record.pulls[t]);
    out.push_back(total);
  }
  return out;
}

// Regret against sample modes after t steps: max_i t * v(X_{i,1..t}) -
// sum_i T_i(t) * v(S_i(t)), with v the score of the sample (p-)mode and
// `streams[i]` arm i's counterfactual full-pull sample.
inline double regret_sample_mode_at(const RunRecord& record, const std::vector<SampleSet>& streams,
                                    std::size_t t, const ScoreFunction& score,
                                    const ModeEstimatorConfig& estimator = {}) {
  if (t == 0 || t > record.horizon()) throw ParameterError("t must lie in [1, n]");
  if (streams.size() != record.counts.size()) throw DataError("one stream per arm is required");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (streams[i].size() < t) {
      throw DataError("stream for arm " + std::to_string(i) + " is shorter than " + std::to_string(t));
    }
    ArmState full(i, streams[i].prefix(t));
    best = std::max(best, full.value(score, estimator));
  }
  double collected = 0.0;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    ArmState pulled(i, record.arm_rewards(i, t));
    if (pulled.pulls() > 0) collected += static_cast<double>(pulled.pulls()) * pulled.value(score, estimator);
  }
  return static_cast<double>(t) * best - collected;
}

inline double regret_sample_mode(const RunRecord& record, const std::vector<SampleSet>& streams,
                                 const ScoreFunction& score, const ModeEstimatorConfig& estimator = {}) {
  return regret_sample_mode_at(record, streams, record.horizon(), score, estimator);
}

// Counterfactual full-pull streams X_{i,1..n} from the environment's latent
// per-arm generators.
inline std::vector<SampleSet> counterfactual_streams(StochasticEnvironment& env, std::size_t n) {
  std::vector<SampleSet> out;
  for (std::size_t i = 0; i < env.arms(); ++i) out.push_back(env.stream(i, n));
  return out;
}

}  // namespace modal
