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

// Named experiment presets. Mixture parameters are artifact-defined constants
// chosen to reproduce the qualitative layout of each figure: which arm is
// optimal, how close the modes are, and where the contamination falls.

#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "modal_bandits/harness/config.hpp"

namespace modal::harness {

namespace detail {

using Parts = std::vector<std::tuple<double, Point, double>>;

inline ArmSpec mixture_arm(const std::string& label, std::size_t dimension, const Parts& parts,
                           std::optional<ContaminationModel> contamination = std::nullopt) {
  return {label, ArmDistribution::normal_mixture(dimension, parts), std::move(contamination)};
}

}  // namespace detail

// Three arms; 20% of draws come from noise points. Arm 1's noise sits below its
// mode, the other arms' noise above theirs.
inline ExperimentConfig fig2_contaminated() {
  ExperimentConfig c;
  c.name = c.preset = "fig2_contaminated";
  c.strategy = Strategy::ucb;
  c.horizon = 2000;
  c.burn_in.initial_pulls_per_arm = 60;
  const ContaminationModel below{0.2, {{0.15}, {0.25}}, 0.02};
  const ContaminationModel above{0.2, {{0.9}, {0.97}}, 0.02};
  c.arms = {detail::mixture_arm("Arm 1", 1, {{0.7, {0.65}, 0.05}, {0.3, {0.35}, 0.08}}, below),
            detail::mixture_arm("Arm 2", 1, {{0.6, {0.55}, 0.05}, {0.4, {0.75}, 0.06}}, above),
            detail::mixture_arm("Arm 3", 1, {{0.6, {0.45}, 0.04}, {0.4, {0.70}, 0.05}}, above)};
  c.score = ScoreFunction::identity();
  c.score_set = true;
  return c;
}

// Top modes 0.60, 0.59, 0.58. The secondary components put the arm means in
// the opposite order.
inline ExperimentConfig fig3_close_modes() {
  ExperimentConfig c;
  c.name = c.preset = "fig3_close_modes";
  c.strategy = Strategy::ucb;
  c.horizon = 8000;
  c.burn_in.initial_pulls_per_arm = 60;
  c.arms = {detail::mixture_arm("Arm 1", 1, {{0.6, {0.60}, 0.01}, {0.4, {0.30}, 0.05}}),
            detail::mixture_arm("Arm 2", 1, {{0.6, {0.59}, 0.01}, {0.4, {0.50}, 0.05}}),
            detail::mixture_arm("Arm 3", 1, {{0.6, {0.58}, 0.01}, {0.4, {0.80}, 0.05}})};
  c.score = ScoreFunction::identity();
  c.score_set = true;
  return c;
}

// Two-dimensional rewards scored by distance from the origin; arm 3's top mode
// is the farthest out.
inline ExperimentConfig fig4_distance_score() {
  ExperimentConfig c;
  c.name = c.preset = "fig4_distance_score";
  c.strategy = Strategy::ucb;
  c.horizon = 1500;
  c.burn_in.initial_pulls_per_arm = 10;
  c.arms = {detail::mixture_arm("Arm 1", 2, {{0.6, {0.30, 0.30}, 0.05}, {0.4, {0.75, 0.70}, 0.06}}),
            detail::mixture_arm("Arm 2", 2, {{0.7, {0.50, 0.45}, 0.05}, {0.3, {0.20, 0.80}, 0.05}}),
            detail::mixture_arm("Arm 3", 2, {{0.65, {0.75, 0.80}, 0.05}, {0.35, {0.25, 0.20}, 0.05}})};
  c.score = ScoreFunction::distance_from_origin(2);
  c.score_set = true;
  return c;
}

// Bimodal arms scored by their 2-mode. Arm 2 has the highest top mode but arm
// 1 has the highest 2-mode.
inline ExperimentConfig appendix_2mode() {
  ExperimentConfig c;
  c.name = c.preset = "appendix_2mode";
  c.strategy = Strategy::ucb;
  c.horizon = 1000;
  c.burn_in.initial_pulls_per_arm = 30;
  c.arms = {detail::mixture_arm("Arm 1", 1, {{0.5, {0.70}, 0.03}, {0.5, {0.88}, 0.03}}),
            detail::mixture_arm("Arm 2", 1, {{0.55, {0.90}, 0.03}, {0.45, {0.30}, 0.03}}),
            detail::mixture_arm("Arm 3", 1, {{0.5, {0.50}, 0.03}, {0.5, {0.62}, 0.03}})};
  c.score = ScoreFunction::identity();
  c.score_set = true;
  c.estimator.p = 2;
  c.estimator.beta_coefficient = 0.2;
  return c;
}

inline ExperimentConfig top_m_five_arms() {
  ExperimentConfig c;
  c.name = c.preset = "top_m_five_arms";
  c.strategy = Strategy::top_m;
  c.horizon = 10000;
  c.seeds = 50;
  std::size_t i = 1;
  for (double theta : {0.9, 0.75, 0.6, 0.35, 0.15}) {
    c.arms.push_back({"Arm " + std::to_string(i++), ArmDistribution::normal(theta, 0.05), std::nullopt});
  }
  c.score = ScoreFunction::identity();
  c.score_set = true;
  c.top_m.m = 2;
  return c;
}

// Two arms whose conditional modes cross at x = 0.5.
inline ExperimentConfig contextual_crossing() {
  ExperimentConfig c;
  c.name = c.preset = "contextual_crossing";
  c.strategy = Strategy::contextual_uniform;
  c.horizon = 50000;
  c.seeds = 3;
  c.contextual.arms = crossing_arms();
  c.contextual.exclude_halfwidth = 0.05;
  c.score = ScoreFunction::identity();
  c.score_set = true;
  return c;
}

inline ExperimentConfig zooming_quadratic() {
  ExperimentConfig c;
  c.name = c.preset = "zooming_quadratic";
  c.strategy = Strategy::zooming;
  c.horizon = 4800;
  c.seeds = 100;
  c.burn_in.initial_pulls_per_arm = 80;
  c.zooming.zooming.initial_center = {0.5};
  c.score = ScoreFunction::identity();
  c.score_set = true;
  return c;
}

inline const std::map<std::string, ExperimentConfig (*)()>& preset_table() {
  static const std::map<std::string, ExperimentConfig (*)()> table{
      {"fig2_contaminated", &fig2_contaminated}, {"fig3_close_modes", &fig3_close_modes},
      {"fig4_distance_score", &fig4_distance_score}, {"appendix_2mode", &appendix_2mode},
      {"top_m_five_arms", &top_m_five_arms}, {"contextual_crossing", &contextual_crossing},
      {"zooming_quadratic", &zooming_quadratic}};
  return table;
}

inline std::vector<ExperimentConfig> figure_environments() {
  std::vector<ExperimentConfig> out;
  for (const auto& [name, make] : preset_table()) out.push_back(make());
  return out;
}

// Throws ParameterError for unknown names.
inline ExperimentConfig preset(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const auto& [n, f] : table) known += (known.empty() ? "" : ", ") + n;
    throw ParameterError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return it->second();
}

}  // namespace modal::harness
