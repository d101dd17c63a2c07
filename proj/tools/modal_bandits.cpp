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

// modal_bandits: command-line front end.
//
//   modal_bandits estimate   --input points.csv [--k auto|INT] [--delta D] [--p P]
//                            [--private --epsilon E --dp-delta D --seed S]
//   modal_bandits robustness --input points.csv --adversary extra.csv [--k auto|INT]
//   modal_bandits run        --config experiment.toml | --preset NAME [--jobs N] [--out DIR]
//   modal_bandits catalogue
//
// Exit status: 0 success, 2 invalid input or configuration, 1 runtime failure.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "modal_bandits/harness/catalogue.hpp"
#include "modal_bandits/harness/loader.hpp"
#include "modal_bandits/harness/runner.hpp"
#include "modal_bandits/io/csv.hpp"
#include "modal_bandits/mode_estimation.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

struct EstimatorFlags {
  std::string k = "auto";
  double delta = 0.05;
  double beta_coefficient = 100.0;
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f) {
  cmd->add_option("--k", f.k, "neighbours k: 'auto' or a positive integer")->capture_default_str();
  cmd->add_option("--delta", f.delta, "confidence parameter delta")->capture_default_str();
  cmd->add_option("--beta-coefficient", f.beta_coefficient, "constant c in beta_k (p-modes)")
      ->capture_default_str();
}

modal::ModeEstimatorConfig estimator_config(const EstimatorFlags& f) {
  modal::ModeEstimatorConfig c;
  c.delta = f.delta;
  c.beta_coefficient = f.beta_coefficient;
  if (f.k != "auto") {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(f.k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.k.size() || v < 1) throw modal::ParameterError("--k must be 'auto' or a positive integer");
    c.k = static_cast<std::size_t>(v);
  }
  c.validate();
  return c;
}

std::string join_location(const modal::Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + modal::io::format_number(p[i]);
  return s;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const modal::harness::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const modal::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const modal::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const modal::ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mode-based bandit experiments and k-NN mode estimation"};
  app.require_subcommand(1);

  std::string input, adversary;
  EstimatorFlags est;
  std::size_t p = 1;
  bool use_private = false;
  double epsilon = 1.0, dp_delta = 0.05;
  std::uint64_t seed = 0;
  auto* estimate = app.add_subcommand("estimate", "Estimate the mode (or p modes) of a CSV point set");
  estimate->add_option("--input", input, "CSV file, one point per row")->required();
  add_estimator_flags(estimate, est);
  estimate->add_option("--p", p, "number of modes to report")->capture_default_str();
  estimate->add_flag("--private", use_private, "add Gaussian noise for differential privacy");
  estimate->add_option("--epsilon", epsilon, "privacy epsilon")->capture_default_str();
  estimate->add_option("--dp-delta", dp_delta, "privacy delta")->capture_default_str();
  estimate->add_option("--seed", seed, "noise seed")->capture_default_str();

  EstimatorFlags rob;
  std::string rob_input;
  auto* robustness = app.add_subcommand("robustness", "Mode displacement caused by added points");
  robustness->add_option("--input", rob_input, "clean CSV point set")->required();
  robustness->add_option("--adversary", adversary, "CSV of inserted points (may be empty)")->required();
  add_estimator_flags(robustness, rob);

  std::string config_path, preset_name, out_dir;
  std::size_t jobs = 1;
  auto* run = app.add_subcommand("run", "Run a multi-seed experiment and write CSV/SVG artifacts");
  auto* config_opt = run->add_option("--config", config_path, "TOML experiment file");
  auto* preset_opt = run->add_option("--preset", preset_name, "catalogue preset name");
  config_opt->excludes(preset_opt);
  run->add_option("--jobs", jobs, "worker threads across seeds")->capture_default_str();
  run->add_option("--out", out_dir, "output directory (overrides MODAL_BANDITS_OUT and the config)");

  auto* catalogue = app.add_subcommand("catalogue", "List the experiment presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  if (*estimate) {
    return guarded([&] {
      const auto samples = modal::io::read_points(std::filesystem::path(input));
      auto config = estimator_config(est);
      config.p = p;
      config.validate();
      std::vector<modal::ModeEstimate> rows;
      if (p > 1) {
        rows = modal::estimate_p_modes(samples, config);
      } else {
        rows.push_back(modal::estimate_mode(samples, config));
      }
      if (use_private) {
        if (p > 1) throw modal::ParameterError("--private supports p = 1 only");
        modal::PrivacyParams privacy;
        privacy.epsilon = epsilon;
        privacy.delta_privacy = dp_delta;
        rows.front().location = modal::private_mode(samples, config, privacy, seed);
      }
      modal::io::write_estimates(std::cout, rows, samples.dimension());
      return 0;
    });
  }
  if (*robustness) {
    return guarded([&] {
      const auto clean = modal::io::read_points(std::filesystem::path(rob_input));
      const auto extra = modal::io::read_points(std::filesystem::path(adversary), clean.dimension());
      if (extra.dimension() != clean.dimension()) throw modal::ShapeError("adversary dimension differs from input");
      const auto report = modal::measure_robustness(clean, extra, estimator_config(rob));
      std::cout << "clean,contaminated,displacement,ell,k,theoretical_bound\n"
                << join_location(report.clean_estimate.location) << ','
                << join_location(report.contaminated_estimate.location) << ','
                << modal::io::format_number(report.displacement) << ',' << report.ell << ','
                << report.clean_estimate.k_used << ',' << modal::io::format_number(report.theoretical_bound)
                << '\n';
      return 0;
    });
  }
  if (*run) {
    return guarded([&] {
      if (config_path.empty() && preset_name.empty()) {
        throw modal::ParameterError("run needs --config FILE or --preset NAME");
      }
      auto config = config_path.empty() ? modal::harness::preset(preset_name)
                                         : modal::harness::load_config(config_path);
      if (!out_dir.empty()) {
        config.output_dir = out_dir;
      } else if (const char* env = std::getenv("MODAL_BANDITS_OUT"); env && *env) {
        config.output_dir = env;
      }
      try {
        config.validate();
      } catch (const modal::Error& e) {
        throw modal::harness::ConfigError(config_path.empty() ? preset_name : config_path, 0, e.what());
      }
      modal::harness::AggregateResult result;
      try {
        result = modal::harness::run_experiment(config, jobs);
      } catch (const std::exception& e) {
        std::cerr << "error: run failed: " << e.what() << '\n';
        return kExitRuntime;
      }
      try {
        modal::harness::write_artifacts(result, config.output_dir);
      } catch (const std::exception& e) {
        std::cerr << "error: writing outputs failed: " << e.what() << '\n';
        return kExitRuntime;
      }
      std::cout << config.name << ": " << config.seeds << " seeds, horizon " << config.horizon << ", outputs in "
                << config.output_dir << '\n';
      const auto final_pulls = result.final_mean_pulls();
      for (std::size_t a = 0; a < final_pulls.size(); ++a) {
        std::cout << "  arm " << a << " mean pulls " << modal::io::format_number(final_pulls[a]) << '\n';
      }
      for (const auto& [answer, count] : result.answers) {
        std::cout << "  answer " << answer << ": " << count << '/' << config.seeds << '\n';
      }
      return 0;
    });
  }
  if (*catalogue) {
    for (const auto& c : modal::harness::figure_environments()) {
      std::cout << c.name << '\t' << modal::harness::strategy_name(c.strategy) << "\thorizon=" << c.horizon
                << "\tseeds=" << c.seeds << '\n';
    }
    return 0;
  }
  return kExitInvalid;
}
