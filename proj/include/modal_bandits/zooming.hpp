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

// Continuum-armed modal bandit by successive radius halving: each phase
// samples a fresh active set of arms in a ball around the current center,
// runs finite-arm UCB on it, then recenters on the UCB argmax and halves the
// radius.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "modal_bandits/bandit.hpp"
#include "modal_bandits/environments.hpp"
#include "modal_bandits/errors.hpp"
#include "modal_bandits/random.hpp"
#include "modal_bandits/score.hpp"

namespace modal {

struct ZoomingConfig {
  std::size_t arms_per_phase = 8;   // M
  std::size_t phase_length = 800;   // P
  double initial_radius = 1.0;      // R0
  Point initial_center;             // A0; empty: center of the arm-space box
  std::size_t horizon = 4800;       // n
  double delta = 0.05;
  BurnInPolicy burn_in;
  ModeEstimatorConfig estimator;
  // Consecutive rejections before falling back to projection onto the box.
  std::size_t max_rejections = 10000;

  void validate(const ContinuumEnvironment& env) const {
    burn_in.validate();
    estimator.validate();
    if (arms_per_phase < 2) throw ParameterError("arms_per_phase must be >= 2");
    if (phase_length < arms_per_phase * burn_in.initial_pulls_per_arm) {
      throw ParameterError("phase_length must be >= arms_per_phase * burn-in pulls");
    }
    if (!(initial_radius > 0.0)) throw ParameterError("initial_radius must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (horizon < phase_length) throw ParameterError("horizon must be >= phase_length");
    if (!initial_center.empty()) {
      if (initial_center.size() != env.arm_dimension()) throw ShapeError("initial center dimension mismatch");
      if (!env.contains(initial_center)) throw ParameterError("initial center lies outside the arm space");
    }
  }
};

struct PhaseTrace {
  std::size_t phase = 0;
  Point center;
  double radius = 0.0;
  Point argmax;
  std::vector<Point> active_arms;
  std::size_t pulls = 0;
  bool projected = false;  // rejection sampling gave up and projected onto the box
};

struct ZoomingResult {
  Point best_arm;
  std::vector<PhaseTrace> phases;
  std::size_t total_pulls = 0;
  std::vector<std::size_t> slots;     // phase-local arm index pulled at each step
  std::vector<double> pulled_modes;   // true mode of the arm pulled at each step
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Uniform draw from B(center, radius) intersected with the box, by rejection
// from the intersection of the two bounding boxes. After `max_rejections`
// consecutive failures the draw is taken from the ball's bounding box and
// clamped onto the arm-space box.
inline Point sample_ball_in_box(Rng& rng, std::span<const double> center, double radius,
                                const Point& lower, const Point& upper, std::size_t max_rejections,
                                bool& projected) {
  const std::size_t d = center.size();
  Point lo(d), hi(d), x(d);
  bool empty_box = false;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = std::max(lower[i], center[i] - radius);
    hi[i] = std::min(upper[i], center[i] + radius);
    empty_box = empty_box || lo[i] > hi[i];
  }
  const double r2 = radius * radius;
  if (!empty_box) {
    for (std::size_t attempt = 0; attempt < max_rejections; ++attempt) {
      for (std::size_t i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
      if (squared_distance(x, center) <= r2) return x;
    }
  }
  projected = true;
  for (std::size_t i = 0; i < d; ++i) {
    x[i] = std::clamp(rng.uniform(center[i] - radius, center[i] + radius), lower[i], upper[i]);
  }
  return x;
}

}  // namespace detail

inline ZoomingResult run_zooming(ContinuumEnvironment& env, ZoomingConfig config) {
  config.validate(env);
  const std::size_t d = env.arm_dimension();
  if (config.initial_center.empty()) {
    config.initial_center.resize(d);
    for (std::size_t i = 0; i < d; ++i) config.initial_center[i] = 0.5 * (env.lower()[i] + env.upper()[i]);
  }
  Rng sampler(derive_seed(env.seed(), 0x200));
  const ScoreFunction score = ScoreFunction::identity();
  const std::size_t phases = config.horizon / config.phase_length;
  ZoomingResult out;
  Point center = config.initial_center;
  for (std::size_t j = 0; j < phases; ++j) {
    PhaseTrace trace;
    trace.phase = j;
    trace.center = center;
    trace.radius = std::ldexp(config.initial_radius, -static_cast<int>(j));
    for (std::size_t a = 0; a < config.arms_per_phase; ++a) {
      trace.active_arms.push_back(detail::sample_ball_in_box(sampler, center, trace.radius, env.lower(),
                                                             env.upper(), config.max_rejections,
                                                             trace.projected));
    }
    const std::size_t length =
        j + 1 == phases ? config.horizon - j * config.phase_length : config.phase_length;
    auto states = make_arm_states(config.arms_per_phase, 1);
    for (std::size_t t = 0; t < length; ++t) {
      const std::size_t arm = ucb_select(states, config.delta, score, config.burn_in, config.estimator);
      const double r = env.draw(trace.active_arms[arm]);
      out.slots.push_back(arm);
      out.pulled_modes.push_back(env.mode_at(trace.active_arms[arm]));
      states[arm].add(std::span<const double>(&r, 1));
    }
    const std::size_t best = ucb_select(states, config.delta, score, config.burn_in, config.estimator);
    trace.argmax = trace.active_arms[best];
    trace.pulls = length;
    out.total_pulls += length;
    center = trace.argmax;
    out.phases.push_back(std::move(trace));
  }
  out.best_arm = out.phases.back().argmax;
  return out;
}

}  // namespace modal
