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

// TOML loader for ExperimentConfig.
//
//   [experiment]   name, preset, strategy, horizon, delta, seeds, base_seed,
//                  output_dir, burn_in, regret_stride, svg
//   [environment]  [[environment.arms]] with [[environment.arms.components]]
//                  and an optional [environment.arms.contamination]
//   [score]        kind, scale, offset, xs, ys, lipschitz
//   [estimator]    k, p, delta, beta_coefficient
//   [top_m]        m, deterministic (the pull budget is experiment.horizon)
//   [contextual]   environment, sigma, context_dimension, grid_m, k, p, alpha,
//                  beta_coefficient, eval_points, exclude_center, exclude_halfwidth
//   [zooming]      lower, upper, optimum, peak, curvature, reward_sd,
//                  arms_per_phase, phase_length, initial_radius, initial_center,
//                  tolerance
//
// A preset named in [experiment] is loaded first; every other key overrides it.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "modal_bandits/harness/catalogue.hpp"
#include "modal_bandits/harness/config.hpp"

namespace modal::harness {

namespace detail {

inline void check_range(TableReader& r, const std::string& key, bool ok, const std::string& message) {
  if (!ok) r.fail(key, message);
}

inline void parse_experiment(TableReader& r, ExperimentConfig& c) {
  c.name = r.string("name", c.name);
  if (r.has("strategy")) {
    const auto s = parse_strategy(r.string("strategy", ""));
    if (!s) r.fail("strategy", "expected one of ucb, uniform, top_m, contextual_uniform, zooming");
    c.strategy = *s;
  }
  c.horizon = r.count("horizon", c.horizon);
  check_range(r, "horizon", c.horizon >= 1, "must be >= 1");
  c.delta = r.number("delta", c.delta);
  check_range(r, "delta", c.delta > 0.0 && c.delta < 1.0, "must lie in (0, 1)");
  c.seeds = r.count("seeds", c.seeds);
  check_range(r, "seeds", c.seeds >= 1, "must be >= 1");
  c.base_seed = r.seed("base_seed", c.base_seed);
  c.output_dir = r.string("output_dir", c.output_dir);
  c.burn_in.initial_pulls_per_arm = r.count("burn_in", c.burn_in.initial_pulls_per_arm);
  check_range(r, "burn_in", c.burn_in.initial_pulls_per_arm >= 1, "must be >= 1");
  c.regret_stride = r.count("regret_stride", c.regret_stride);
  c.write_svg = r.boolean("svg", c.write_svg);
}

inline void parse_estimator(TableReader& r, ModeEstimatorConfig& e) {
  if (r.has("k")) {
    e.k = r.count("k", 1);
    check_range(r, "k", *e.k >= 1, "must be >= 1");
  }
  e.p = r.count("p", e.p);
  check_range(r, "p", e.p >= 1, "must be >= 1");
  e.delta = r.number("delta", e.delta);
  check_range(r, "delta", e.delta > 0.0 && e.delta < 1.0, "must lie in (0, 1)");
  e.beta_coefficient = r.number("beta_coefficient", e.beta_coefficient);
  check_range(r, "beta_coefficient", e.beta_coefficient > 0.0, "must be > 0");
}

inline void parse_top_m(TableReader& r, TopMSettings& t) {
  t.m = r.count("m", t.m);
  t.deterministic = r.boolean("deterministic", t.deterministic);
}

inline void parse_contextual(TableReader& r, ContextualSettings& s) {
  if (r.has("environment") || r.has("sigma")) {
    const std::string env = r.string("environment", "crossing");
    if (env != "crossing") r.fail("environment", "only the 'crossing' contextual environment is available");
    const double sigma = r.number("sigma", 0.05);
    check_range(r, "sigma", sigma > 0.0, "must be > 0");
    s.arms = crossing_arms(sigma);
  }
  s.context_dimension = r.count("context_dimension", s.context_dimension);
  s.conditional.m = r.count("grid_m", s.conditional.m);
  check_range(r, "grid_m", s.conditional.m >= 2, "must be >= 2");
  if (r.has("k")) {
    s.conditional.k = r.count("k", 1);
    check_range(r, "k", *s.conditional.k >= 1, "must be >= 1");
  }
  s.conditional.p = r.count("p", s.conditional.p);
  s.conditional.alpha = r.number("alpha", s.conditional.alpha);
  check_range(r, "alpha", s.conditional.alpha > 0.0 && s.conditional.alpha <= 1.0, "must lie in (0, 1]");
  s.conditional.beta_coefficient = r.number("beta_coefficient", s.conditional.beta_coefficient);
  s.eval_points = r.count("eval_points", s.eval_points);
  check_range(r, "eval_points", s.eval_points >= 1, "must be >= 1");
  s.exclude_center = r.number("exclude_center", s.exclude_center);
  s.exclude_halfwidth = r.number("exclude_halfwidth", s.exclude_halfwidth);
}

inline void parse_zooming(TableReader& r, ZoomingSettings& z) {
  z.lower = r.numbers("lower", z.lower);
  z.upper = r.numbers("upper", z.upper);
  z.optimum = r.numbers("optimum", z.optimum);
  if (z.lower.size() != z.upper.size()) r.fail("upper", "lower and upper must have equal length");
  if (z.optimum.size() != z.lower.size()) r.fail("optimum", "optimum must match the arm-space dimension");
  z.peak = r.number("peak", z.peak);
  z.curvature = r.number("curvature", z.curvature);
  z.reward_sd = r.number("reward_sd", z.reward_sd);
  check_range(r, "reward_sd", z.reward_sd > 0.0, "must be > 0");
  z.tolerance = r.number("tolerance", z.tolerance);
  z.zooming.arms_per_phase = r.count("arms_per_phase", z.zooming.arms_per_phase);
  z.zooming.phase_length = r.count("phase_length", z.zooming.phase_length);
  z.zooming.initial_radius = r.number("initial_radius", z.zooming.initial_radius);
  check_range(r, "initial_radius", z.zooming.initial_radius > 0.0, "must be > 0");
  z.zooming.initial_center = r.numbers("initial_center", z.zooming.initial_center);
}

inline ExperimentConfig parse_document(const toml::table& root, const std::string& source) {
  TableReader top(root, "", source);
  ExperimentConfig c;
  const toml::table* experiment = top.table("experiment");
  if (experiment) {
    TableReader pr(*experiment, "experiment.", source);
    if (pr.has("preset")) {
      try {
        c = preset(pr.string("preset", ""));
      } catch (const ParameterError& e) {
        pr.fail("preset", e.what());
      }
    }
  }
  if (experiment) {
    TableReader r(*experiment, "experiment.", source);
    r.has("preset");
    parse_experiment(r, c);
    r.finish();
  }
  if (const auto* env = top.table("environment")) {
    TableReader r(*env, "environment.", source);
    if (r.has("arms")) c.arms = parse_arms(r, source);
    r.finish();
  }
  if (const auto* t = top.table("score")) {
    TableReader r(*t, "score.", source);
    try {
      c.score = parse_score(r, c.dimension());
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(source, t->source().begin.line, std::string("score: ") + e.what());
    }
    c.score_set = true;
    r.finish();
  }
  if (!c.score_set) {
    c.score = c.dimension() == 1 ? ScoreFunction::identity() : ScoreFunction::distance_from_origin(c.dimension());
    c.score_set = true;
  }
  if (const auto* t = top.table("estimator")) {
    TableReader r(*t, "estimator.", source);
    parse_estimator(r, c.estimator);
    r.finish();
  }
  if (const auto* t = top.table("top_m")) {
    TableReader r(*t, "top_m.", source);
    parse_top_m(r, c.top_m);
    r.finish();
  }
  if (const auto* t = top.table("contextual")) {
    TableReader r(*t, "contextual.", source);
    parse_contextual(r, c.contextual);
    r.finish();
  }
  if (const auto* t = top.table("zooming")) {
    TableReader r(*t, "zooming.", source);
    parse_zooming(r, c.zooming);
    r.finish();
  }
  top.finish();
  if (c.strategy == Strategy::contextual_uniform && c.contextual.arms.empty()) c.contextual.arms = crossing_arms();
  try {
    c.validate();
  } catch (const Error& e) {
    const std::size_t line = experiment ? experiment->source().begin.line : 1;
    throw ConfigError(source, line, std::string("invalid experiment: ") + e.what());
  }
  return c;
}

}  // namespace detail

// Parses TOML text; `source` names the input in error messages.
inline ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError(source, e.source().begin.line, std::string(e.description()));
  }
  return detail::parse_document(root, source);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

}  // namespace modal::harness
