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

// Experiment configuration: one strategy, one environment, a seed range and
// output settings. Files are TOML; every error names the offending line.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <toml.hpp>

#include "modal_bandits/bandit.hpp"
#include "modal_bandits/conditional_modes.hpp"
#include "modal_bandits/environments.hpp"
#include "modal_bandits/errors.hpp"
#include "modal_bandits/mode_estimation.hpp"
#include "modal_bandits/score.hpp"
#include "modal_bandits/zooming.hpp"

namespace modal::harness {

enum class Strategy { ucb, uniform, top_m, contextual_uniform, zooming };

inline std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::ucb: return "ucb";
    case Strategy::uniform: return "uniform";
    case Strategy::top_m: return "top_m";
    case Strategy::contextual_uniform: return "contextual_uniform";
    case Strategy::zooming: return "zooming";
  }
  return "ucb";
}

inline std::optional<Strategy> parse_strategy(const std::string& s) {
  for (auto v : {Strategy::ucb, Strategy::uniform, Strategy::top_m, Strategy::contextual_uniform,
                 Strategy::zooming}) {
    if (strategy_name(v) == s) return v;
  }
  return std::nullopt;
}

// Error in a configuration file; `line` is 0 when no position applies.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message)
      : Error(source + ":" + (line ? std::to_string(line) + ":" : std::string()) + " " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct TopMSettings {
  std::size_t m = 1;
  bool deterministic = false;
};

struct ContextualSettings {
  std::vector<ContextualArm> arms;
  std::size_t context_dimension = 1;
  ConditionalModeConfig conditional;
  std::size_t eval_points = 20;
  // Evaluation points x with |x - exclude_center| < exclude_halfwidth (D = 1
  // contexts) are skipped.
  double exclude_center = 0.5;
  double exclude_halfwidth = 0.0;
};

struct ZoomingSettings {
  Point lower{0.0};
  Point upper{1.0};
  Point optimum{0.7};
  double peak = 0.9;
  double curvature = 0.8;
  double reward_sd = 0.05;
  double tolerance = 0.1;
  ZoomingConfig zooming;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string preset;  // catalogue name this config started from, if any
  Strategy strategy = Strategy::ucb;
  std::size_t horizon = 1000;
  double delta = 0.05;
  std::size_t seeds = 25;
  std::uint64_t base_seed = 2024;
  std::string output_dir = "out";
  BurnInPolicy burn_in;
  std::size_t regret_stride = 0;  // 0: max(1, horizon / 50)
  bool write_svg = true;
  std::vector<ArmSpec> arms;
  ScoreFunction score;
  bool score_set = false;
  ModeEstimatorConfig estimator;
  TopMSettings top_m;
  ContextualSettings contextual;
  ZoomingSettings zooming;

  std::size_t dimension() const { return arms.empty() ? 1 : arms.front().distribution.dimension(); }

  std::size_t stride() const {
    return regret_stride ? regret_stride : std::max<std::size_t>(1, horizon / 50);
  }

  // Structural checks; throws ParameterError / ValidationError.
  void validate() const {
    if (seeds == 0) throw ParameterError("seeds must be >= 1");
    if (horizon == 0) throw ParameterError("horizon must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    burn_in.validate();
    estimator.validate();
    switch (strategy) {
      case Strategy::ucb:
      case Strategy::uniform:
      case Strategy::top_m: {
        if (arms.empty()) throw ParameterError("environment needs at least one arm");
        for (const auto& a : arms) {
          validate_arm(a);
          if (a.distribution.dimension() != dimension()) throw ShapeError("all arms must share one dimension");
        }
        (void)score(Point(dimension(), 0.5));
        if (strategy == Strategy::ucb && horizon < arms.size() * burn_in.initial_pulls_per_arm) {
          throw ParameterError("horizon is below the burn-in total");
        }
        if (strategy == Strategy::uniform && horizon < arms.size()) {
          throw ParameterError("horizon must be at least the number of arms");
        }
        if (strategy == Strategy::top_m) {
          if (top_m.m == 0 || top_m.m >= arms.size()) throw ParameterError("top_m.m must satisfy 1 <= m < K");
          if (horizon < arms.size() * burn_in.initial_pulls_per_arm) {
            throw ParameterError("horizon (the pull budget) is below the burn-in total");
          }
        }
        break;
      }
      case Strategy::contextual_uniform:
        if (contextual.arms.empty()) throw ParameterError("contextual environment needs arms");
        if (horizon < contextual.arms.size()) throw ParameterError("horizon must be at least the number of arms");
        contextual.conditional.validate();
        (void)ContextualEnvironment(contextual.arms, contextual.context_dimension, 0);
        if (contextual.eval_points == 0) throw ParameterError("eval_points must be >= 1");
        break;
      case Strategy::zooming: {
        ContinuumEnvironment env(zooming.lower, zooming.upper, quadratic_landscape(zooming.optimum),
                                 zooming.reward_sd, 0);
        if (zooming.optimum.size() != zooming.lower.size()) throw ShapeError("optimum dimension mismatch");
        ZoomingConfig zc = zooming.zooming;
        zc.horizon = horizon;
        zc.delta = delta;
        zc.burn_in = burn_in;
        zc.validate(env);
        break;
      }
    }
  }
};

namespace detail {

// Reads keys from one TOML table and reports unknown ones.
class TableReader {
 public:
  TableReader(const toml::table& table, std::string prefix, std::string source)
      : table_(table), prefix_(std::move(prefix)), source_(std::move(source)) {}

  bool has(const std::string& key) {
    used_.insert(key);
    return table_.contains(key);
  }

  std::size_t line_of(const std::string& key) const {
    const auto* node = table_.get(key);
    return node ? node->source().begin.line : table_.source().begin.line;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(source_, line_of(key), prefix_ + key + ": " + message);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto* node = table_.get(key);
    if (auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer())) return *v;
    fail(key, "expected a number");
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const auto* node = table_.get(key);
    if (!node->is_integer()) fail(key, "expected a non-negative integer");
    const auto v = *node->value<std::int64_t>();
    if (v < 0) fail(key, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    return static_cast<std::uint64_t>(count(key, static_cast<std::size_t>(fallback)));
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto* node = table_.get(key);
    if (!node->is_boolean()) fail(key, "expected true or false");
    return *node->value<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto* node = table_.get(key);
    if (!node->is_string()) fail(key, "expected a string");
    return *node->value<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const auto* node = table_.get(key);
    const auto* arr = node->as_array();
    if (!arr) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *arr) {
      if (!(e.is_floating_point() || e.is_integer())) fail(key, "expected an array of numbers");
      out.push_back(*e.value<double>());
    }
    return out;
  }

  // Scalar or array of numbers, broadcast to `width`.
  std::vector<double> numbers_or_scalar(const std::string& key, std::size_t width) {
    const auto* node = table_.get(key);
    if (node && (node->is_floating_point() || node->is_integer())) {
      return std::vector<double>(width, number(key, 0.0));
    }
    auto v = numbers(key, {});
    if (v.size() != width) fail(key, "expected " + std::to_string(width) + " values");
    return v;
  }

  std::vector<std::vector<double>> matrix(const std::string& key) {
    if (!has(key)) return {};
    const auto* arr = table_.get(key)->as_array();
    if (!arr) fail(key, "expected an array of arrays of numbers");
    std::vector<std::vector<double>> out;
    for (const auto& row : *arr) {
      const auto* r = row.as_array();
      if (!r) fail(key, "expected an array of arrays of numbers");
      std::vector<double> v;
      for (const auto& e : *r) {
        if (!(e.is_floating_point() || e.is_integer())) fail(key, "expected an array of arrays of numbers");
        v.push_back(*e.value<double>());
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  const toml::table* table(const std::string& key) {
    if (!has(key)) return nullptr;
    const auto* t = table_.get(key)->as_table();
    if (!t) fail(key, "expected a table");
    return t;
  }

  std::vector<const toml::table*> tables(const std::string& key) {
    if (!has(key)) return {};
    const auto* arr = table_.get(key)->as_array();
    if (!arr) fail(key, "expected an array of tables");
    std::vector<const toml::table*> out;
    for (const auto& e : *arr) {
      const auto* t = e.as_table();
      if (!t) fail(key, "expected an array of tables");
      out.push_back(t);
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, v] : table_) {
      const std::string key(k.str());
      if (!used_.count(key)) {
        throw ConfigError(source_, v.source().begin.line, "unknown key " + prefix_ + key);
      }
    }
  }

  const std::string& source() const { return source_; }
  std::size_t table_line() const { return table_.source().begin.line; }

 private:
  const toml::table& table_;
  std::string prefix_;
  std::string source_;
  std::set<std::string> used_;
};

inline AxisDensity parse_axis(TableReader& r, const std::string& kind, std::size_t axis,
                              const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<double>& c) {
  if (kind == "normal") return AxisDensity::normal(a[axis], b[axis]);
  if (kind == "uniform") return AxisDensity::uniform(a[axis], b[axis]);
  if (kind == "triangular") return AxisDensity::triangular(a[axis], b[axis], c[axis]);
  r.fail("kind", "unknown component kind '" + kind + "' (normal, uniform, triangular)");
}

inline MixtureComponent parse_component(const toml::table& t, const std::string& prefix,
                                        const std::string& source) {
  TableReader r(t, prefix, source);
  MixtureComponent c;
  c.weight = r.number("weight", 1.0);
  const std::string kind = r.string("kind", "normal");
  std::vector<double> a, b, d;
  if (kind == "normal") {
    a = r.numbers("mean", {});
    if (a.empty()) r.fail("mean", "normal components need a mean array");
    r.has("sd");
    b = r.numbers_or_scalar("sd", a.size());
  } else if (kind == "uniform") {
    a = r.numbers("lo", {});
    b = r.numbers("hi", {});
    if (a.empty() || a.size() != b.size()) r.fail("lo", "uniform components need lo and hi arrays of equal length");
  } else if (kind == "triangular") {
    a = r.numbers("lo", {});
    b = r.numbers("peak", {});
    d = r.numbers("hi", {});
    if (a.empty() || a.size() != b.size() || a.size() != d.size()) {
      r.fail("lo", "triangular components need lo, peak and hi arrays of equal length");
    }
  } else {
    r.fail("kind", "unknown component kind '" + kind + "' (normal, uniform, triangular)");
  }
  for (std::size_t axis = 0; axis < a.size(); ++axis) c.axes.push_back(parse_axis(r, kind, axis, a, b, d));
  r.finish();
  return c;
}

inline std::vector<ArmSpec> parse_arms(TableReader& env, const std::string& source) {
  std::vector<ArmSpec> arms;
  std::size_t index = 0;
  for (const auto* arm_table : env.tables("arms")) {
    const std::string prefix = "environment.arms[" + std::to_string(index) + "].";
    TableReader r(*arm_table, prefix, source);
    ArmSpec arm;
    arm.label = r.string("label", "Arm " + std::to_string(index + 1));
    std::vector<MixtureComponent> comps;
    std::size_t ci = 0;
    for (const auto* ct : r.tables("components")) {
      comps.push_back(parse_component(*ct, prefix + "components[" + std::to_string(ci++) + "].", source));
    }
    if (comps.empty()) r.fail("components", "each arm needs at least one component");
    const std::size_t dim = comps.front().axes.size();
    arm.distribution = ArmDistribution(dim, std::move(comps));
    if (const auto* ct = r.table("contamination")) {
      TableReader cr(*ct, prefix + "contamination.", source);
      ContaminationModel cm;
      cm.q = cr.number("q", 0.0);
      cm.noise_points = cr.matrix("noise_points");
      cm.dispersion = cr.number("dispersion", 0.0);
      cr.finish();
      try {
        cm.validate(dim);
      } catch (const Error& e) {
        throw ConfigError(source, ct->source().begin.line, prefix + "contamination: " + e.what());
      }
      arm.contamination = cm;
    }
    r.finish();
    try {
      arm.distribution.validate_structure();
      (void)true_modes(arm.distribution);
    } catch (const Error& e) {
      throw ConfigError(source, arm_table->source().begin.line, prefix.substr(0, prefix.size() - 1) + ": " + e.what());
    }
    arms.push_back(std::move(arm));
    ++index;
  }
  return arms;
}

inline ScoreFunction parse_score(TableReader& r, std::size_t dimension) {
  const std::string kind = r.string("kind", dimension == 1 ? "identity" : "distance_from_origin");
  ScoreFunction s;
  if (kind == "identity") {
    s = ScoreFunction::identity();
  } else if (kind == "distance_from_origin") {
    s = ScoreFunction::distance_from_origin(dimension);
  } else if (kind == "negated_distance") {
    s = ScoreFunction::negated_distance(dimension);
  } else if (kind == "table") {
    try {
      s = ScoreFunction::table(r.numbers("xs", {}), r.numbers("ys", {}), r.number("lipschitz", 0.0));
    } catch (const Error& e) {
      r.fail("xs", e.what());
    }
  } else {
    r.fail("kind", "unknown score '" + kind + "' (identity, distance_from_origin, negated_distance, table)");
  }
  if (r.has("scale") || r.has("offset")) {
    s = s.with_normalization(r.number("scale", s.scale()), r.number("offset", s.offset()));
  }
  return s;
}

}  // namespace detail

}  // namespace modal::harness
