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

// Contextual modal bandits: round-robin exploration that records the context
// of every pull, then a policy that plays, at each context, the arm whose
// estimated conditional mode scores highest.

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "modal_bandits/bandit.hpp"
#include "modal_bandits/conditional_modes.hpp"
#include "modal_bandits/environments.hpp"
#include "modal_bandits/errors.hpp"
#include "modal_bandits/score.hpp"

namespace modal {

class ContextualPolicy {
 public:
  ContextualPolicy(std::vector<JointSampleSet> samples, ConditionalModeConfig config,
                   ScoreFunction score = ScoreFunction::identity())
      : samples_(std::move(samples)), config_(std::move(config)), score_(std::move(score)) {
    if (samples_.empty()) throw ParameterError("policy needs at least one arm");
    config_.validate();
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (samples_[i].empty()) {
        throw ParameterError("arm " + std::to_string(i) + " has an empty joint sample");
      }
      if (samples_[i].context_dimension() != samples_.front().context_dimension()) {
        throw ShapeError("all arms must share one context dimension");
      }
      indexes_.emplace_back(samples_[i], config_);
    }
  }

  std::size_t arms() const { return samples_.size(); }
  std::size_t context_dimension() const { return samples_.front().context_dimension(); }
  const std::vector<JointSampleSet>& samples() const { return samples_; }
  const ConditionalModeConfig& config() const { return config_; }
  const ScoreFunction& score() const { return score_; }

  // Estimated conditional mode of every arm at x.
  std::vector<double> conditional_modes(std::span<const double> x) const {
    if (x.size() != context_dimension()) {
      throw ShapeError("context has dimension " + std::to_string(x.size()) + ", policy expects " +
                       std::to_string(context_dimension()));
    }
    std::vector<double> out;
    for (const auto& index : indexes_) out.push_back(index.mode(x));
    return out;
  }

  // argmax_i score(conditional mode of arm i at x), ties to the lowest id.
  std::size_t operator()(std::span<const double> x) const {
    const auto modes = conditional_modes(x);
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double v = score_(std::span<const double>(&modes[i], 1));
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    return best;
  }

 private:
  std::vector<JointSampleSet> samples_;
  ConditionalModeConfig config_;
  ScoreFunction score_;
  std::vector<ConditionalModeIndex> indexes_;
};

inline std::size_t evaluate_policy(const ContextualPolicy& policy, std::span<const double> x) {
  return policy(x);
}

struct ContextualRun {
  ContextualPolicy policy;
  RunRecord record;
  SampleSet contexts{1};  // context seen at each step
};

// n round-robin pulls; each step consumes one context and stores the
// (reward, context) pair with the pulled arm.
inline ContextualRun run_contextual_uniform(ContextualEnvironment& env, std::size_t n,
                                            const ConditionalModeConfig& config = {},
                                            const ScoreFunction& score = ScoreFunction::identity()) {
  if (n < env.arms()) throw ParameterError("horizon must be at least the number of arms");
  RunRecord record;
  record.strategy = "contextual_uniform";
  record.seed = env.seed();
  record.counts.assign(env.arms(), 0);
  record.config = {{"n", std::to_string(n)}, {"grid_m", std::to_string(config.m)},
                   {"score", score.name()}};
  std::vector<JointSampleSet> joint(env.arms(), JointSampleSet(env.context_dimension()));
  SampleSet contexts(env.context_dimension());
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t arm = t % env.arms();
    const Point x = env.next_context();
    const double r = env.draw(arm, x);
    joint[arm].push_back(r, x);
    contexts.push_back(x);
    record.pulls.push_back(arm);
    record.rewards.push_back(r);
    ++record.counts[arm];
  }
  return {ContextualPolicy(std::move(joint), config, score), std::move(record), std::move(contexts)};
}

}  // namespace modal
