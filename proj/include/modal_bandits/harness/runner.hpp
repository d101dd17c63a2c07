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

// Multi-seed experiment execution and artifact emission.
//
// Output files (UTF-8, LF line endings, '.' decimals):
//   pulls.csv   t,arm,mean,sd           cumulative pulls of each arm after step t
//   regret.csv  t,R_mean,R_sd,Rbar_mean,Rbar_sd,normalized
//               at checkpoints; Rbar is blank for contextual and zooming runs
//   summary.json
//   cumulative_pulls.svg, regret.svg, normalized_regret.svg (when svg = true)
//   trace.csv   zooming runs: seed,phase,center_*,radius,argmax_*,projected
//   policy/     contextual runs: the seed-0 policy
// Arm columns hold 0-based arm ids; zooming runs use the phase-local arm slot.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "modal_bandits/bandit.hpp"
#include "modal_bandits/contextual.hpp"
#include "modal_bandits/environments.hpp"
#include "modal_bandits/harness/aggregate.hpp"
#include "modal_bandits/harness/config.hpp"
#include "modal_bandits/harness/svg.hpp"
#include "modal_bandits/io/csv.hpp"
#include "modal_bandits/random.hpp"
#include "modal_bandits/zooming.hpp"

namespace modal::harness {

// Everything one seed contributes to the aggregate.
struct SeedOutcome {
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> cumulative_pulls;  // [arm][t - 1]
  std::vector<double> regret;                         // R at each checkpoint
  std::vector<double> sample_regret;                  // Rbar at each checkpoint; empty if undefined
  std::string answer;                                 // final answer, e.g. "0" or "0,1"
  bool terminated_early = false;
  double accuracy = 0.0;  // contextual: matched grid fraction; zooming: 1 if within tolerance
  std::size_t pulls_used = 0;
  std::vector<PhaseTrace> trace;
  std::optional<ContextualPolicy> policy;
};

struct AggregateResult {
  ExperimentConfig config;
  std::vector<std::size_t> checkpoints;
  std::vector<std::vector<MeanSd>> pulls;  // [arm][t - 1]
  std::vector<MeanSd> regret;
  std::vector<MeanSd> sample_regret;  // empty if undefined
  std::map<std::string, std::size_t> answers;
  std::vector<SeedOutcome> seeds;
  std::vector<double> true_values;  // stochastic strategies only

  std::size_t arms() const { return pulls.size(); }
  std::size_t horizon() const { return config.horizon; }
  // Mean cumulative pulls of every arm at the final step.
  std::vector<double> final_mean_pulls() const {
    std::vector<double> out;
    for (const auto& a : pulls) out.push_back(a.back().mean);
    return out;
  }
};

inline std::vector<std::size_t> checkpoints(std::size_t horizon, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t t = stride; t <= horizon; t += stride) out.push_back(t);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

namespace detail {

inline std::vector<std::vector<double>> cumulative_counts(const std::vector<std::size_t>& pulls,
                                                          std::size_t arms, std::size_t horizon) {
  std::vector<std::vector<double>> out(arms, std::vector<double>(horizon, 0.0));
  std::vector<double> c(arms, 0.0);
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t < pulls.size()) c[pulls[t]] += 1.0;
    for (std::size_t a = 0; a < arms; ++a) out[a][t] = c[a];
  }
  return out;
}

// Values of a per-step running total at each checkpoint; steps past the end of
// `running` carry the last value forward.
inline std::vector<double> at_checkpoints(const std::vector<double>& running,
                                          const std::vector<std::size_t>& cps) {
  std::vector<double> out;
  for (std::size_t t : cps) {
    if (running.empty()) {
      out.push_back(0.0);
    } else {
      out.push_back(running[std::min(t, running.size()) - 1]);
    }
  }
  return out;
}

inline std::vector<double> running_sum(const std::vector<double>& increments) {
  std::vector<double> out;
  out.reserve(increments.size());
  double total = 0.0;
  for (double v : increments) out.push_back(total += v);
  return out;
}

inline std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
  return s;
}

inline void stochastic_regret(SeedOutcome& out, const RunRecord& record, StochasticEnvironment& env,
                              const ExperimentConfig& c, const GapProfile& truth,
                              const std::vector<std::size_t>& cps) {
  out.regret = at_checkpoints(regret_mode_curve(record, truth), cps);
  const auto streams = counterfactual_streams(env, record.horizon());
  double last = 0.0;
  for (std::size_t t : cps) {
    if (t <= record.horizon()) last = regret_sample_mode_at(record, streams, t, c.score, c.estimator);
    out.sample_regret.push_back(last);
  }
}

inline SeedOutcome run_stochastic_seed(const ExperimentConfig& c, std::uint64_t seed,
                                       const GapProfile& truth, const std::vector<std::size_t>& cps) {
  SeedOutcome out;
  out.seed = seed;
  StochasticEnvironment env(c.arms, seed);
  RunRecord record;
  if (c.strategy == Strategy::ucb) {
    record = run_ucb(env, c.horizon, c.delta, c.score, c.burn_in, c.estimator);
    out.answer = std::to_string(record.most_pulled());
  } else if (c.strategy == Strategy::uniform) {
    auto r = run_uniform(env, c.horizon, c.score, c.estimator);
    out.answer = std::to_string(r.ranking.front());
    record = std::move(r.record);
  } else {
    TopMOptions o;
    o.m = c.top_m.m;
    o.delta = c.delta;
    o.burn_in = c.burn_in;
    o.max_pulls = c.horizon;
    o.deterministic = c.top_m.deterministic;
    o.estimator = c.estimator;
    auto r = run_top_m(env, c.score, o);
    out.answer = join_ids(r.selected);
    out.terminated_early = r.terminated_early;
    record = std::move(r.record);
  }
  out.pulls_used = record.horizon();
  out.cumulative_pulls = cumulative_counts(record.pulls, c.arms.size(), c.horizon);
  stochastic_regret(out, record, env, c, truth, cps);
  return out;
}

inline std::vector<Point> evaluation_contexts(const ContextualSettings& s) {
  std::vector<Point> out;
  for (std::size_t g = 0; g < s.eval_points; ++g) {
    const double v = (static_cast<double>(g) + 0.5) / static_cast<double>(s.eval_points);
    if (std::fabs(v - s.exclude_center) < s.exclude_halfwidth) continue;
    out.emplace_back(s.context_dimension, v);
  }
  return out;
}

inline SeedOutcome run_contextual_seed(const ExperimentConfig& c, std::uint64_t seed,
                                       const std::vector<std::size_t>& cps) {
  SeedOutcome out;
  out.seed = seed;
  ContextualEnvironment env(c.contextual.arms, c.contextual.context_dimension, seed);
  auto run = run_contextual_uniform(env, c.horizon, c.contextual.conditional, c.score);
  out.pulls_used = c.horizon;
  out.cumulative_pulls = cumulative_counts(run.record.pulls, env.arms(), c.horizon);
  std::vector<double> increments;
  increments.reserve(c.horizon);
  for (std::size_t t = 0; t < c.horizon; ++t) {
    const auto x = run.contexts[t];
    double best = -std::numeric_limits<double>::infinity(), pulled = 0.0;
    for (std::size_t i = 0; i < env.arms(); ++i) {
      const double m = env.true_conditional_mode(i, x);
      const double v = c.score(std::span<const double>(&m, 1));
      best = std::max(best, v);
      if (i == run.record.pulls[t]) pulled = v;
    }
    increments.push_back(best - pulled);
  }
  out.regret = at_checkpoints(running_sum(increments), cps);
  const auto grid = evaluation_contexts(c.contextual);
  std::size_t matched = 0;
  for (const auto& x : grid) matched += run.policy(x) == env.optimal_arm(x, c.score);
  out.accuracy = grid.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(grid.size());
  std::vector<std::size_t> choices;
  for (const auto& x : grid) choices.push_back(run.policy(x));
  out.answer = join_ids(choices);
  out.policy.emplace(std::move(run.policy));
  return out;
}

inline SeedOutcome run_zooming_seed(const ExperimentConfig& c, std::uint64_t seed,
                                    const std::vector<std::size_t>& cps) {
  SeedOutcome out;
  out.seed = seed;
  const auto& z = c.zooming;
  ContinuumEnvironment env(z.lower, z.upper, quadratic_landscape(z.optimum, z.peak, z.curvature), z.reward_sd,
                           seed);
  ZoomingConfig zc = z.zooming;
  zc.horizon = c.horizon;
  zc.delta = c.delta;
  zc.burn_in = c.burn_in;
  zc.estimator = c.estimator;
  auto r = run_zooming(env, zc);
  out.pulls_used = r.total_pulls;
  out.cumulative_pulls = cumulative_counts(r.slots, zc.arms_per_phase, c.horizon);
  const double best = env.mode_at(z.optimum);
  std::vector<double> increments;
  for (double v : r.pulled_modes) increments.push_back(best - v);
  out.regret = at_checkpoints(running_sum(increments), cps);
  double sq = 0.0;
  for (std::size_t i = 0; i < z.optimum.size(); ++i) {
    sq += (r.best_arm[i] - z.optimum[i]) * (r.best_arm[i] - z.optimum[i]);
  }
  out.accuracy = std::sqrt(sq) <= z.tolerance ? 1.0 : 0.0;
  out.answer = out.accuracy > 0.0 ? "within_tolerance" : "outside_tolerance";
  out.trace = std::move(r.phases);
  return out;
}

}  // namespace detail

inline std::vector<double> config_true_values(const ExperimentConfig& c) {
  switch (c.strategy) {
    case Strategy::ucb:
    case Strategy::uniform:
    case Strategy::top_m: return true_arm_values(c.arms, c.score, c.estimator.p);
    default: return {};
  }
}

// Runs every seed (seed i uses derive_seed(base_seed, i)) on up to `jobs`
// threads and aggregates in seed order. The first failing seed's exception is
// rethrown after all threads finish.
inline AggregateResult run_experiment(const ExperimentConfig& config, std::size_t jobs = 1) {
  config.validate();
  AggregateResult result;
  result.config = config;
  result.checkpoints = checkpoints(config.horizon, config.stride());
  result.true_values = config_true_values(config);
  std::optional<GapProfile> truth;
  if (!result.true_values.empty()) truth.emplace(result.true_values);

  std::vector<std::optional<SeedOutcome>> outcomes(config.seeds);
  std::vector<std::exception_ptr> errors(config.seeds);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.seeds; i = next++) {
      try {
        const std::uint64_t seed = derive_seed(config.base_seed, i);
        switch (config.strategy) {
          case Strategy::contextual_uniform:
            outcomes[i] = detail::run_contextual_seed(config, seed, result.checkpoints);
            break;
          case Strategy::zooming:
            outcomes[i] = detail::run_zooming_seed(config, seed, result.checkpoints);
            break;
          default:
            outcomes[i] = detail::run_stochastic_seed(config, seed, *truth, result.checkpoints);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, config.seeds);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < threads; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (auto& o : outcomes) result.seeds.push_back(std::move(*o));
  const std::size_t arms = result.seeds.front().cumulative_pulls.size();
  for (std::size_t a = 0; a < arms; ++a) {
    std::vector<std::vector<double>> per_seed;
    for (const auto& s : result.seeds) per_seed.push_back(s.cumulative_pulls[a]);
    result.pulls.push_back(aggregate_series(per_seed));
  }
  std::vector<std::vector<double>> r, rbar;
  for (const auto& s : result.seeds) {
    r.push_back(s.regret);
    if (!s.sample_regret.empty()) rbar.push_back(s.sample_regret);
  }
  result.regret = aggregate_series(r);
  if (!rbar.empty()) result.sample_regret = aggregate_series(rbar);
  for (const auto& s : result.seeds) ++result.answers[s.answer];
  return result;
}

// File name -> contents for every text artifact of `result`.
inline std::map<std::string, std::string> render_artifacts(const AggregateResult& result) {
  using io::format_number;
  const auto& c = result.config;
  std::map<std::string, std::string> files;

  std::ostringstream pulls;
  pulls << "t,arm,mean,sd\n";
  for (std::size_t t = 1; t <= c.horizon; ++t) {
    for (std::size_t a = 0; a < result.arms(); ++a) {
      const auto& v = result.pulls[a][t - 1];
      pulls << t << ',' << a << ',' << format_number(v.mean) << ',' << format_number(v.sd) << '\n';
    }
  }
  files["pulls.csv"] = pulls.str();

  std::ostringstream regret;
  regret << "t,R_mean,R_sd,Rbar_mean,Rbar_sd,normalized\n";
  for (std::size_t i = 0; i < result.checkpoints.size(); ++i) {
    const std::size_t t = result.checkpoints[i];
    const auto& r = result.regret[i];
    regret << t << ',' << format_number(r.mean) << ',' << format_number(r.sd) << ',';
    if (!result.sample_regret.empty()) {
      regret << format_number(result.sample_regret[i].mean) << ',' << format_number(result.sample_regret[i].sd);
    } else {
      regret << ',';
    }
    regret << ',' << format_number(r.mean / static_cast<double>(t)) << '\n';
  }
  files["regret.csv"] = regret.str();

  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["preset"] = c.preset;
  j["strategy"] = strategy_name(c.strategy);
  j["horizon"] = c.horizon;
  j["delta"] = c.delta;
  j["seeds"] = c.seeds;
  j["base_seed"] = c.base_seed;
  j["burn_in"] = c.burn_in.initial_pulls_per_arm;
  j["score"] = c.score.name();
  j["estimator_p"] = c.estimator.p;
  auto labels = nlohmann::ordered_json::array();
  if (c.strategy == Strategy::contextual_uniform) {
    for (const auto& a : c.contextual.arms) labels.push_back(a.label);
  } else if (c.strategy != Strategy::zooming) {
    for (const auto& a : c.arms) labels.push_back(a.label);
  }
  j["arm_labels"] = labels;
  if (!result.true_values.empty()) j["true_values"] = result.true_values;
  j["final_mean_pulls"] = result.final_mean_pulls();
  auto answers = nlohmann::ordered_json::object();
  for (const auto& [k, v] : result.answers) answers[k] = v;
  j["answer_frequencies"] = answers;
  j["final_regret_mean"] = result.regret.back().mean;
  if (c.strategy == Strategy::top_m) {
    std::size_t early = 0;
    for (const auto& s : result.seeds) early += s.terminated_early;
    j["terminated_early"] = early;
  }
  if (c.strategy == Strategy::contextual_uniform || c.strategy == Strategy::zooming) {
    std::vector<double> acc;
    for (const auto& s : result.seeds) acc.push_back(s.accuracy);
    j[c.strategy == Strategy::zooming ? "success_rate" : "policy_accuracy_mean"] = mean_sd(acc).mean;
  }
  auto per_seed = nlohmann::ordered_json::array();
  for (const auto& s : result.seeds) {
    nlohmann::ordered_json e;
    e["seed"] = s.seed;
    e["answer"] = s.answer;
    e["pulls_used"] = s.pulls_used;
    per_seed.push_back(e);
  }
  j["per_seed"] = per_seed;
  files["summary.json"] = j.dump(2) + "\n";

  if (c.strategy == Strategy::zooming) {
    const std::size_t d = c.zooming.lower.size();
    std::ostringstream trace;
    trace << "seed,phase";
    for (std::size_t i = 1; i <= d; ++i) trace << ",center_" << i;
    trace << ",radius";
    for (std::size_t i = 1; i <= d; ++i) trace << ",argmax_" << i;
    trace << ",projected\n";
    for (std::size_t s = 0; s < result.seeds.size(); ++s) {
      for (const auto& p : result.seeds[s].trace) {
        trace << s << ',' << p.phase;
        for (double v : p.center) trace << ',' << format_number(v);
        trace << ',' << format_number(p.radius);
        for (double v : p.argmax) trace << ',' << format_number(v);
        trace << ',' << (p.projected ? 1 : 0) << '\n';
      }
    }
    files["trace.csv"] = trace.str();
  }

  if (c.write_svg) {
    std::vector<Series> pull_series;
    for (std::size_t a = 0; a < result.arms(); ++a) {
      Series s;
      s.label = labels.size() == result.arms() ? labels[a].get<std::string>() : "Slot " + std::to_string(a + 1);
      for (std::size_t t = 1; t <= c.horizon; ++t) {
        s.x.push_back(static_cast<double>(t));
        s.y.push_back(result.pulls[a][t - 1].mean);
        s.spread.push_back(result.pulls[a][t - 1].sd);
      }
      pull_series.push_back(std::move(s));
    }
    files["cumulative_pulls.svg"] =
        line_chart(pull_series, {c.name + ": cumulative arm pulls", "t", "pulls"});
    Series r{"R(t)", {}, {}, {}}, rn{"R(t) / t", {}, {}, {}}, rb{"Rbar(t)", {}, {}, {}};
    for (std::size_t i = 0; i < result.checkpoints.size(); ++i) {
      const double t = static_cast<double>(result.checkpoints[i]);
      r.x.push_back(t);
      r.y.push_back(result.regret[i].mean);
      r.spread.push_back(result.regret[i].sd);
      rn.x.push_back(t);
      rn.y.push_back(result.regret[i].mean / t);
      rn.spread.push_back(result.regret[i].sd / t);
      if (!result.sample_regret.empty()) {
        rb.x.push_back(t);
        rb.y.push_back(result.sample_regret[i].mean);
        rb.spread.push_back(result.sample_regret[i].sd);
      }
    }
    std::vector<Series> regret_series{r};
    if (!rb.x.empty()) regret_series.push_back(rb);
    files["regret.svg"] = line_chart(regret_series, {c.name + ": regret", "t", "regret"});
    files["normalized_regret.svg"] = line_chart({rn}, {c.name + ": normalized regret", "t", "regret / t"});
  }
  return files;
}

// Writes the artifacts into `dir`. On any failure every file this call
// created is removed before the exception propagates.
inline std::vector<std::filesystem::path> write_artifacts(const AggregateResult& result,
                                                          const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  const bool dir_existed = fs::exists(dir);
  try {
    fs::create_directories(dir);
    for (const auto& [name, content] : render_artifacts(result)) {
      const fs::path path = dir / name;
      written.push_back(path);
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw DataError("cannot write " + path.string());
    }
    if (result.config.strategy == Strategy::contextual_uniform && result.seeds.front().policy) {
      const fs::path policy_dir = dir / "policy";
      written.push_back(policy_dir);
      io::save_policy(policy_dir, *result.seeds.front().policy);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove_all(p, ec);
    if (!dir_existed) fs::remove(dir, ec);
    throw;
  }
  return written;
}

}  // namespace modal::harness
