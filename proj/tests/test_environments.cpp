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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "modal_bandits/environments.hpp"
#include "modal_bandits/harness/catalogue.hpp"
#include "modal_bandits/mode_estimation.hpp"
#include "oracles.hpp"

namespace {

using modal::ArmDistribution;
using modal::ArmSpec;
using modal::AxisDensity;
using modal::MixtureComponent;

std::vector<double> draws(const ArmSpec& arm, std::size_t n, std::uint64_t seed) {
  modal::Rng rng(seed);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(modal::sample_reward(arm, rng)[0]);
  return out;
}

ArmDistribution assorted_mixture() {
  return ArmDistribution(1, {{0.5, {AxisDensity::normal(0.3, 0.05)}},
                             {0.3, {AxisDensity::triangular(0.5, 0.7, 0.95)}},
                             {0.2, {AxisDensity::uniform(0.0, 1.0)}}});
}

TEST(SampleReward, MatchesAnalyticCdf) {
  for (const auto& dist : {ArmDistribution::normal(0.5, 0.1), ArmDistribution::normal(0.05, 0.1),
                           assorted_mixture()}) {
    const ArmSpec arm{"", dist, std::nullopt};
    const auto v = draws(arm, 100000, 11);
    EXPECT_LT(oracle::ks_distance(v, [&](double x) { return dist.cdf(x); }), 0.02);
    for (double x : v) ASSERT_TRUE(x >= 0.0 && x <= 1.0);
  }
}

TEST(SampleReward, NearDegenerateContamination) {
  const ArmSpec arm{"", ArmDistribution::normal(0.2, 0.05), modal::ContaminationModel{0.999, {{0.5}}, 0.0}};
  const auto v = draws(arm, 100000, 3);
  const auto hits = std::count(v.begin(), v.end(), 0.5);
  EXPECT_NEAR(static_cast<double>(hits) / 1e5, 0.999, 0.001);
}

TEST(SampleReward, ContaminationValidation) {
  EXPECT_THROW((modal::ContaminationModel{1.0, {{0.5}}, 0.0}).validate(1), modal::ValidationError);
  EXPECT_THROW((modal::ContaminationModel{0.2, {}, 0.0}).validate(1), modal::ValidationError);
  EXPECT_THROW((modal::ContaminationModel{0.2, {{0.99}}, 0.02}).validate(1), modal::ValidationError);
  EXPECT_NO_THROW((modal::ContaminationModel{0.2, {{0.5}}, 0.02}).validate(1));
}

TEST(ArmDistribution, IntegratesToOne) {
  EXPECT_NEAR(oracle::simpson([&](double x) { return assorted_mixture().density({&x, 1}); }, 0.0, 1.0), 1.0,
              1e-6);
  for (const auto& config : modal::harness::figure_environments()) {
    for (const auto& arm : config.arms) {
      const auto& d = arm.distribution;
      double total = 0.0;
      if (d.dimension() == 1) {
        total = oracle::simpson([&](double x) { return d.density({&x, 1}); }, 0.0, 1.0);
      } else {
        total = oracle::simpson(
            [&](double x) {
              return oracle::simpson(
                  [&](double y) {
                    const double p[2] = {x, y};
                    return d.density(p);
                  },
                  0.0, 1.0, 400);
            },
            0.0, 1.0, 400);
      }
      EXPECT_NEAR(total, 1.0, 1e-6) << config.name << " " << arm.label;
    }
  }
}

TEST(TrueModes, Examples) {
  const auto single = modal::true_modes(ArmDistribution::normal(0.3, 0.05));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_NEAR(single[0].location[0], 0.3, 1e-6);

  const auto two = modal::true_modes(
      ArmDistribution::normal_mixture(1, {{0.7, {0.3}, 0.05}, {0.3, {0.8}, 0.05}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0].location[0], 0.3, 1e-3);
  EXPECT_NEAR(two[1].location[0], 0.8, 1e-3);
  EXPECT_GT(two[0].density, two[1].density);

  EXPECT_THROW(modal::true_modes(ArmDistribution(1, {{1.0, {AxisDensity::uniform(0.0, 1.0)}}})),
               modal::ValidationError);
  EXPECT_THROW(modal::true_modes(ArmDistribution::normal_mixture(1, {{0.5, {0.5}, 0.1}, {0.5, {0.52}, 0.1}})),
               modal::ValidationError);
}

TEST(TrueModes, InvariantToComponentOrder) {
  const auto a = modal::true_modes(
      ArmDistribution::normal_mixture(1, {{0.5, {0.2}, 0.04}, {0.3, {0.5}, 0.05}, {0.2, {0.85}, 0.03}}));
  const auto b = modal::true_modes(
      ArmDistribution::normal_mixture(1, {{0.2, {0.85}, 0.03}, {0.5, {0.2}, 0.04}, {0.3, {0.5}, 0.05}}));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i].location[0], b[i].location[0], 1e-9);
    EXPECT_NEAR(a[i].density, b[i].density, 1e-9);
  }
  const auto c = modal::true_modes(
      ArmDistribution::normal_mixture(2, {{0.6, {0.3, 0.7}, 0.05}, {0.4, {0.8, 0.2}, 0.05}}));
  const auto d = modal::true_modes(
      ArmDistribution::normal_mixture(2, {{0.4, {0.8, 0.2}, 0.05}, {0.6, {0.3, 0.7}, 0.05}}));
  ASSERT_EQ(c.size(), 2u);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(c[0].location[0], d[0].location[0], 1e-9);
  EXPECT_NEAR(c[0].location[1], d[0].location[1], 1e-9);
  EXPECT_NEAR(c[0].location[0], 0.3, 1e-3);
}

TEST(Catalogue, Fig3ModesAreClose) {
  const auto c = modal::harness::preset("fig3_close_modes");
  std::vector<double> tops;
  for (const auto& arm : c.arms) tops.push_back(modal::true_modes(arm.distribution).front().location[0]);
  for (std::size_t i = 0; i < tops.size(); ++i) {
    for (std::size_t j = i + 1; j < tops.size(); ++j) EXPECT_LE(std::fabs(tops[i] - tops[j]), 0.02);
  }
  EXPECT_GT(tops[0], tops[1]);
  EXPECT_GT(tops[1], tops[2]);
}

TEST(Catalogue, Fig2FirstArmBestUnderContamination) {
  const auto c = modal::harness::preset("fig2_contaminated");
  std::vector<double> contaminated;
  for (const auto& arm : c.arms) {
    const auto top = modal::contaminated_top_mode(arm);
    // The noise law never displaces the clean top mode.
    EXPECT_NEAR(top.location[0], modal::true_modes(arm.distribution).front().location[0], 1e-6) << arm.label;
    contaminated.push_back(top.location[0]);
  }
  EXPECT_GT(contaminated[0], contaminated[1]);
  EXPECT_GT(contaminated[0], contaminated[2]);
  EXPECT_LT(c.arms[0].contamination->noise_points[0][0], contaminated[0]);
  EXPECT_GT(c.arms[1].contamination->noise_points[0][0], contaminated[1]);
}

TEST(Catalogue, Fig4ThirdArmOptimal) {
  const auto c = modal::harness::preset("fig4_distance_score");
  const auto values = modal::true_arm_values(c.arms, c.score);
  EXPECT_GT(values[2], values[0]);
  EXPECT_GT(values[2], values[1]);
}

TEST(Catalogue, AppendixRankingsDiffer) {
  const auto c = modal::harness::preset("appendix_2mode");
  const auto top = modal::true_arm_values(c.arms, c.score, 1);
  const auto two = modal::true_arm_values(c.arms, c.score, 2);
  EXPECT_NE(std::max_element(top.begin(), top.end()) - top.begin(),
            std::max_element(two.begin(), two.end()) - two.begin());
}

TEST(Catalogue, EveryPresetValidates) {
  for (const auto& c : modal::harness::figure_environments()) EXPECT_NO_THROW(c.validate()) << c.name;
  EXPECT_THROW(modal::harness::preset("fig9"), modal::ParameterError);
}

TEST(HiddenContext, ConstantSchedule) {
  modal::HiddenContextSpec spec;
  spec.schedule = modal::HiddenContextSpec::constant(1.0);
  const auto v = modal::hidden_context_stream(spec, 5000, 2);
  for (double x : v) ASSERT_LT(std::fabs(x - spec.mu1), 0.3);
  EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0) / 5000.0, spec.mu1, 0.01);
}

TEST(HiddenContext, TinySigma) {
  modal::HiddenContextSpec spec;
  spec.sigma = 1e-3;
  for (double x : modal::hidden_context_stream(spec, 1000, 5)) {
    ASSERT_LT(std::min(std::fabs(x - 0.3), std::fabs(x - 0.7)), 0.01);
  }
}

TEST(HiddenContext, MeanShiftsModeStays) {
  modal::HiddenContextSpec spec;
  spec.schedule = modal::HiddenContextSpec::step(0.9, 0.1);
  const std::size_t n = 20000;
  const auto v = modal::hidden_context_stream(spec, n, 9);
  const std::vector<double> first(v.begin(), v.begin() + n / 2), second(v.begin() + n / 2, v.end());
  auto mean = [](const std::vector<double>& h) { return std::accumulate(h.begin(), h.end(), 0.0) / h.size(); };
  EXPECT_NEAR(mean(second) - mean(first), 0.32, 0.03);
  for (const auto* half : {&first, &second}) {
    const double m = modal::estimate_mode(modal::SampleSet::from_scalars(*half)).location[0];
    EXPECT_LT(std::min(std::fabs(m - 0.3), std::fabs(m - 0.7)), 0.05);
  }
}

TEST(HiddenContext, Errors) {
  modal::HiddenContextSpec spec;
  spec.mu2 = spec.mu1;
  EXPECT_THROW(modal::hidden_context_stream(spec, 10, 1), modal::ParameterError);
  spec = {};
  spec.schedule = modal::HiddenContextSpec::constant(1.5);
  EXPECT_THROW(modal::hidden_context_stream(spec, 10, 1), modal::ParameterError);
}

TEST(StochasticEnvironment, StreamsIndependentOfPullOrder) {
  const std::vector<ArmSpec> arms{{"", ArmDistribution::normal(0.3, 0.1), std::nullopt},
                                  {"", ArmDistribution::normal(0.6, 0.1), std::nullopt}};
  modal::StochasticEnvironment a(arms, 4), b(arms, 4);
  const auto a1 = a.draw(1, 5);
  for (std::size_t t = 1; t <= 5; ++t) b.draw(0, t);
  EXPECT_EQ(b.draw(1, 5), a1);
  EXPECT_EQ(a.stream(1, 5).point(4), a1);
  EXPECT_THROW(a.draw(2, 1), modal::DataError);
  EXPECT_THROW(a.draw(0, 0), modal::ParameterError);
}

TEST(ContextualEnvironment, CrossingModes) {
  const modal::ContextualEnvironment env(modal::crossing_arms(), 1, 1);
  const double x = 0.1;
  EXPECT_NEAR(env.true_conditional_mode(0, {&x, 1}), 0.26, 1e-12);
  EXPECT_NEAR(env.true_conditional_mode(1, {&x, 1}), 0.74, 1e-12);
  EXPECT_EQ(env.optimal_arm({&x, 1}), 1u);
  const double y = 0.9;
  EXPECT_EQ(env.optimal_arm({&y, 1}), 0u);
}

TEST(ContextualEnvironment, MixtureModeByGrid) {
  const modal::ContextualEnvironment env(
      {{"", {{0.7, 0.2, {0.4}, 0.05}, {0.3, 0.8, {0.0}, 0.05}}}}, 1, 1);
  const double x = 0.5;
  EXPECT_NEAR(env.true_conditional_mode(0, {&x, 1}), 0.4, 1e-3);
}

}  // namespace
