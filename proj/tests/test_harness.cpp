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

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "modal_bandits/harness/aggregate.hpp"
#include "modal_bandits/harness/loader.hpp"
#include "modal_bandits/harness/runner.hpp"
#include "modal_bandits/harness/svg.hpp"

namespace {

namespace h = modal::harness;

const std::string kTwoArms = R"(
[experiment]
name = "two"
strategy = "ucb"
horizon = 200
seeds = 3
burn_in = 10

[[environment.arms]]
label = "A"
[[environment.arms.components]]
kind = "normal"
mean = [0.7]
sd = 0.05

[[environment.arms]]
label = "B"
[[environment.arms.components]]
kind = "triangular"
lo = [0.1]
peak = [0.3]
hi = [0.6]
)";

std::size_t error_line(const std::string& text) {
  try {
    h::parse_config(text, "cfg.toml");
  } catch (const h::ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("cfg.toml:", 0), 0u) << e.what();
    return e.line();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return 0;
}

TEST(Config, ParsesInlineArms) {
  const auto c = h::parse_config(kTwoArms, "cfg.toml");
  EXPECT_EQ(c.name, "two");
  EXPECT_EQ(c.horizon, 200u);
  EXPECT_EQ(c.seeds, 3u);
  ASSERT_EQ(c.arms.size(), 2u);
  EXPECT_EQ(c.arms[1].label, "B");
  EXPECT_EQ(c.score.name(), "identity");
  EXPECT_EQ(c.burn_in.initial_pulls_per_arm, 10u);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[experiment]\nname = \"x\"\nbogus = 1\n"), 3u);
  EXPECT_EQ(error_line("[experiment]\nseeds = 0\npreset = \"fig2_contaminated\"\n"), 2u);
  EXPECT_EQ(error_line("[experiment]\nhorizon = = 3\n"), 2u);
  EXPECT_EQ(error_line("\n[experiment]\nstrategy = \"greedy\"\n"), 3u);
  EXPECT_EQ(error_line("[experiment]\npreset = \"nope\"\n"), 2u);
  EXPECT_GT(error_line("[experiment]\nname = \"empty\"\n"), 0u);
  EXPECT_GT(error_line(R"([experiment]
name = "flat"
[[environment.arms]]
[[environment.arms.components]]
kind = "uniform"
lo = [0.0]
hi = [1.0]
)"),
            0u);
}

TEST(Config, PresetOverride) {
  const auto c = h::parse_config("[experiment]\npreset = \"fig2_contaminated\"\nseeds = 4\nhorizon = 500\n", "x");
  const auto base = h::preset("fig2_contaminated");
  EXPECT_EQ(c.seeds, 4u);
  EXPECT_EQ(c.horizon, 500u);
  EXPECT_EQ(c.arms.size(), base.arms.size());
  EXPECT_EQ(c.burn_in.initial_pulls_per_arm, base.burn_in.initial_pulls_per_arm);
}

TEST(Config, ShippedConfigsLoad) {
  const std::filesystem::path dir = MODAL_BANDITS_SOURCE_DIR "/configs";
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".toml") continue;
    ++seen;
    EXPECT_NO_THROW(h::load_config(entry.path())) << entry.path();
  }
  EXPECT_GE(seen, 7u);
}

TEST(Config, InlineFig2MatchesPreset) {
  const auto inline_cfg = h::load_config(MODAL_BANDITS_SOURCE_DIR "/configs/fig2.toml");
  auto a = inline_cfg;
  auto b = h::preset("fig2_contaminated");
  a.seeds = b.seeds = 2;
  a.horizon = b.horizon = 300;
  const auto ra = h::run_experiment(a);
  const auto rb = h::run_experiment(b);
  EXPECT_EQ(ra.final_mean_pulls(), rb.final_mean_pulls());
}

TEST(Strategy, NamesRoundTrip) {
  for (auto s : {h::Strategy::ucb, h::Strategy::uniform, h::Strategy::top_m, h::Strategy::contextual_uniform,
                 h::Strategy::zooming}) {
    EXPECT_EQ(h::parse_strategy(h::strategy_name(s)), s);
  }
  EXPECT_FALSE(h::parse_strategy("eps_greedy"));
}

TEST(Aggregate, MeanSd) {
  const std::vector<double> one{3.5};
  EXPECT_EQ(h::mean_sd(one).mean, 3.5);
  EXPECT_EQ(h::mean_sd(one).sd, 0.0);
  const std::vector<double> same(7, 0.1);
  EXPECT_EQ(h::mean_sd(same).mean, 0.1);
  EXPECT_EQ(h::mean_sd(same).sd, 0.0);
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(h::mean_sd(v).mean, 2.5);
  EXPECT_DOUBLE_EQ(h::mean_sd(v).sd, std::sqrt(5.0 / 3.0));
}

TEST(Runner, SingleSeedAggregateIsIdentity) {
  auto c = h::parse_config(kTwoArms, "x");
  c.seeds = 1;
  const auto r = h::run_experiment(c);
  ASSERT_EQ(r.seeds.size(), 1u);
  for (std::size_t a = 0; a < r.arms(); ++a) {
    for (std::size_t t = 0; t < c.horizon; ++t) {
      ASSERT_EQ(r.pulls[a][t].mean, r.seeds[0].cumulative_pulls[a][t]);
      ASSERT_EQ(r.pulls[a][t].sd, 0.0);
    }
  }
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i) EXPECT_EQ(r.regret[i].mean, r.seeds[0].regret[i]);
}

TEST(Runner, PullsConserved) {
  const auto c = h::parse_config(kTwoArms, "x");
  const auto r = h::run_experiment(c);
  for (std::size_t t = 0; t < c.horizon; ++t) {
    double total = 0.0;
    for (std::size_t a = 0; a < r.arms(); ++a) total += r.pulls[a][t].mean;
    ASSERT_NEAR(total, static_cast<double>(t + 1), 1e-9);
  }
  EXPECT_EQ(r.checkpoints.back(), c.horizon);
  EXPECT_EQ(r.answers.at("0"), 3u);
}

TEST(Runner, ArtifactsIndependentOfJobs) {
  const auto c = h::parse_config(kTwoArms, "x");
  const auto a = h::render_artifacts(h::run_experiment(c, 1));
  const auto b = h::render_artifacts(h::run_experiment(c, 3));
  EXPECT_EQ(a, b);
  for (const char* name : {"pulls.csv", "regret.csv", "summary.json", "cumulative_pulls.svg", "regret.svg"}) {
    EXPECT_TRUE(a.count(name)) << name;
  }
  EXPECT_EQ(a.at("pulls.csv").rfind("t,arm,mean,sd\n1,0,", 0), 0u);
}

TEST(Runner, EveryStrategyRuns) {
  for (const char* name : {"top_m_five_arms", "contextual_crossing", "zooming_quadratic", "appendix_2mode"}) {
    auto c = h::preset(name);
    c.seeds = 1;
    if (c.strategy == h::Strategy::contextual_uniform) c.horizon = 2000;
    if (c.strategy == h::Strategy::top_m) c.horizon = 400;
    const auto files = h::render_artifacts(h::run_experiment(c));
    EXPECT_TRUE(files.count("summary.json")) << name;
    if (c.strategy == h::Strategy::zooming) {
      EXPECT_TRUE(files.count("trace.csv"));
    }
  }
}

TEST(Runner, WriteArtifacts) {
  auto c = h::parse_config(kTwoArms, "x");
  c.seeds = 1;
  const auto dir = std::filesystem::temp_directory_path() / "modal_bandits_harness_test";
  std::filesystem::remove_all(dir);
  const auto written = h::write_artifacts(h::run_experiment(c), dir);
  EXPECT_FALSE(written.empty());
  for (const auto& p : written) EXPECT_TRUE(std::filesystem::exists(p));
  std::filesystem::remove_all(dir);
}

TEST(Svg, Deterministic) {
  const h::Series s{"a", {1, 2, 3}, {0.1, 0.4, 0.2}, {0.01, 0.02, 0.01}};
  const h::ChartOptions opt{"title <x>", "t", "y"};
  const auto one = h::line_chart({s}, opt);
  EXPECT_EQ(one, h::line_chart({s}, opt));
  EXPECT_NE(one.find("<svg"), std::string::npos);
  EXPECT_NE(one.find("title &lt;x&gt;"), std::string::npos);
}

}  // namespace
