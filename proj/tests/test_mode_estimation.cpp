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
#include "modal_bandits/mode_estimation.hpp"
#include "oracles.hpp"

namespace {

using modal::ModeEstimatorConfig;
using modal::SampleSet;

SampleSet truncated_normal(std::size_t n, double mean, double sd, std::uint64_t seed) {
  modal::Rng rng(seed);
  SampleSet s(1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(modal::detail::truncated_normal_draw(rng, mean, sd));
  return s;
}

SampleSet two_bumps(std::size_t n, std::uint64_t seed) {
  const modal::ArmSpec arm{"", modal::ArmDistribution::normal_mixture(1, {{0.6, {0.25}, 0.05}, {0.4, {0.75}, 0.05}}),
                           std::nullopt};
  modal::Rng rng(seed);
  SampleSet s(1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(modal::sample_reward(arm, rng));
  return s;
}

ModeEstimatorConfig with_k(std::size_t k) {
  ModeEstimatorConfig c;
  c.k = k;
  return c;
}

TEST(EstimateMode, WorkedExample) {
  const auto x = SampleSet::from_scalars({0.1, 0.5, 0.52, 0.54, 0.9});
  const auto e = modal::estimate_mode(x, with_k(3));
  EXPECT_EQ(e.location, modal::Point{0.52});
  EXPECT_EQ(e.k_used, 3u);
  EXPECT_EQ(e.n_used, 5u);
  EXPECT_NEAR(e.density, 3.0 / (5.0 * 2.0 * 0.02), 1e-9);
}

TEST(EstimateMode, Singleton) {
  const auto x = SampleSet::from_scalars({0.7});
  EXPECT_EQ(modal::estimate_mode(x, with_k(1)).location, modal::Point{0.7});
  EXPECT_EQ(modal::estimate_mode(x).location, modal::Point{0.7});
}

TEST(EstimateMode, EmptyIsParameterError) {
  EXPECT_THROW(modal::estimate_mode(SampleSet(1)), modal::ParameterError);
}

TEST(EstimateMode, LowSampleWarning) {
  const auto x = SampleSet::from_scalars({0.1, 0.2, 0.3});
  EXPECT_TRUE(modal::estimate_mode(x).low_sample_warning);
  EXPECT_FALSE(modal::estimate_mode(truncated_normal(100, 0.5, 0.1, 1)).low_sample_warning);
}

TEST(EstimateMode, LexicographicTieBreak) {
  const auto x = SampleSet::from_scalars({0.9, 0.1, 0.5});
  EXPECT_EQ(modal::estimate_mode(x, with_k(1)).location, modal::Point{0.1});
  SampleSet y(2);
  y.push_back(std::vector<double>{0.3, 0.8});
  y.push_back(std::vector<double>{0.3, 0.2});
  EXPECT_EQ(modal::estimate_mode(y, with_k(1)).location, (modal::Point{0.3, 0.2}));
}

TEST(EstimateMode, DuplicateClusterWinsImmediately) {
  const auto x = SampleSet::from_scalars({0.1, 0.4, 0.4, 0.4, 0.8, 0.81});
  const auto e = modal::estimate_mode(x, with_k(3));
  EXPECT_EQ(e.location, modal::Point{0.4});
  EXPECT_EQ(e.density, std::numeric_limits<double>::infinity());
}

TEST(EstimateMode, OracleEquivalenceRandomInstances) {
  modal::Rng pick(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + pick.below(300);
    const std::size_t dim = 1 + pick.below(3);
    const std::size_t k = 1 + pick.below(n);
    SampleSet x(dim);
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : p) v = std::round(pick.uniform() * 40.0) / 40.0;
      x.push_back(p);
    }
    const auto got = modal::estimate_mode(x, with_k(k));
    ASSERT_EQ(got.location, x.point(oracle::mode_index(x, k))) << "trial " << trial;
  }
}

TEST(EstimateMode, TruncatedNormalLocatesMode) {
  int close = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = modal::estimate_mode(truncated_normal(100000, 0.5, 0.1, 300 + seed));
    close += std::fabs(e.location[0] - 0.5) <= 0.03;
  }
  EXPECT_GE(close, 95);
}

TEST(EstimateMode, PermutationInvariance) {
  auto x = two_bumps(500, 4);
  const auto before = modal::estimate_mode(x);
  auto flat = x.flat();
  modal::Rng rng(1);
  for (std::size_t i = flat.size() - 1; i > 0; --i) std::swap(flat[i], flat[rng.below(i + 1)]);
  const auto after = modal::estimate_mode(SampleSet(1, flat));
  EXPECT_EQ(before.location, after.location);
  EXPECT_EQ(before.density, after.density);
}

TEST(PModes, POneMatchesEstimateMode) {
  const auto x = SampleSet::from_scalars({0.1, 0.5, 0.52, 0.54, 0.9});
  auto c = with_k(3);
  const auto modes = modal::estimate_p_modes(x, c);
  ASSERT_EQ(modes.size(), 1u);
  EXPECT_EQ(modes.front().location, modal::Point{0.52});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto y = two_bumps(2000, seed);
    ModeEstimatorConfig d;
    EXPECT_EQ(modal::estimate_p_modes(y, d).front().location, modal::estimate_mode(y, d).location);
  }
}

TEST(PModes, RecoversBothBumpsInDensityOrder) {
  const auto x = two_bumps(20000, 12);
  ModeEstimatorConfig c;
  c.p = 2;
  c.beta_coefficient = 0.2;
  ASSERT_LT(modal::beta_k(c.beta_coefficient, c.delta, x.size(), modal::default_k(x.size(), 1)), 1.0);
  const auto modes = modal::estimate_p_modes(x, c);
  ASSERT_EQ(modes.size(), 2u);
  EXPECT_NEAR(modes[0].location[0], 0.25, 0.05);
  EXPECT_NEAR(modes[1].location[0], 0.75, 0.05);
  EXPECT_GE(modes[0].density, modes[1].density);
}

TEST(PModes, PLargerThanComponentCount) {
  const auto x = two_bumps(20000, 13);
  ModeEstimatorConfig c;
  c.p = 5;
  c.beta_coefficient = 0.2;
  EXPECT_LE(modal::estimate_p_modes(x, c).size(), 2u);
}

TEST(PModes, DefaultCoefficientCollapsesToOneComponent) {
  const auto x = two_bumps(5000, 14);
  ModeEstimatorConfig c;
  c.p = 2;
  EXPECT_EQ(modal::estimate_p_modes(x, c).size(), 1u);
}

TEST(PModeValue, Examples) {
  std::vector<modal::ModeEstimate> m(2);
  m[0].location = {0.75};
  m[1].location = {0.25};
  EXPECT_EQ(modal::p_mode_value(m, 1), modal::Point{0.75});
  EXPECT_EQ(modal::p_mode_value(m, 2), modal::Point{0.25});
  std::vector<modal::ModeEstimate> one(1);
  one[0].location = {0.5};
  EXPECT_EQ(modal::p_mode_value(one, 3), modal::Point{0.5});
  EXPECT_THROW(modal::p_mode_value(std::vector<modal::ModeEstimate>{}, 1), modal::ParameterError);
}

TEST(DpSigma, Goldens) {
  modal::PrivacyParams unit;
  unit.epsilon = 1.0;
  unit.delta_privacy = 2.0 / std::exp(1.0);
  // n = 3 is the integer nearest e; log 3 ^ 0.25 is the only non-unit factor.
  EXPECT_NEAR(modal::dp_sigma(3, 1, unit), std::pow(std::log(3.0), 0.25), 1e-12);
  modal::PrivacyParams p;
  p.epsilon = 0.5;
  p.delta_privacy = 0.05;
  EXPECT_NEAR(modal::dp_sigma(10000, 1000, p), 72.27587850494791, 1e-9);
  modal::PrivacyParams twice = p;
  twice.epsilon = 1.0;
  EXPECT_NEAR(modal::dp_sigma(10000, 1000, twice), 0.5 * modal::dp_sigma(10000, 1000, p), 1e-12);
}

TEST(DpSigma, RejectsBadParameters) {
  modal::PrivacyParams p;
  EXPECT_THROW(modal::dp_sigma(5, 6, p), modal::ParameterError);
  p.epsilon = 0.0;
  EXPECT_THROW(modal::dp_sigma(5, 1, p), modal::ParameterError);
}

TEST(PrivateMode, ZeroSigmaIsExact) {
  const auto x = truncated_normal(1000, 0.5, 0.1, 3);
  modal::PrivacyParams p;
  p.sigma = 0.0;
  EXPECT_EQ(modal::private_mode(x, {}, p, 1), modal::estimate_mode(x).location);
}

TEST(PrivateMode, SeedDeterminesNoise) {
  const auto x = truncated_normal(1000, 0.5, 0.1, 3);
  modal::PrivacyParams p;
  p.sigma = 0.1;
  EXPECT_EQ(modal::private_mode(x, {}, p, 7), modal::private_mode(x, {}, p, 7));
  EXPECT_NE(modal::private_mode(x, {}, p, 7), modal::private_mode(x, {}, p, 8));
}

TEST(PrivateMode, NoiseScaleCalibrated) {
  const auto x = truncated_normal(200, 0.5, 0.1, 3);
  const double clean = modal::estimate_mode(x).location[0];
  modal::PrivacyParams p;
  p.sigma = 0.05;
  std::vector<double> noise;
  for (std::uint64_t s = 0; s < 10000; ++s) noise.push_back(modal::private_mode(x, {}, p, s)[0] - clean);
  const double mean = std::accumulate(noise.begin(), noise.end(), 0.0) / noise.size();
  double ss = 0.0;
  for (double v : noise) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(std::sqrt(ss / (noise.size() - 1)), 0.05, 0.05 * 0.05);
}

TEST(Robustness, EmptyAdversaryNoDisplacement) {
  const auto x = truncated_normal(1000, 0.5, 0.1, 9);
  const auto r = modal::measure_robustness(x, SampleSet(1), {});
  EXPECT_EQ(r.displacement, 0.0);
  EXPECT_EQ(r.ell, 0u);
}

TEST(Robustness, HalfKClusterDoesNotMoveMode) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto x = truncated_normal(10000, 0.5, 0.1, 700 + seed);
    const std::size_t k = modal::default_k(x.size(), 1);
    SampleSet adv(1);
    for (std::size_t i = 0; i < k / 2; ++i) adv.push_back(0.8);
    const auto r = modal::measure_robustness(x, adv, {});
    ok += r.displacement <= 0.1;
  }
  EXPECT_GE(ok, 28);
}

TEST(Robustness, EllAtLeastKRejected) {
  const auto x = truncated_normal(100, 0.5, 0.1, 9);
  SampleSet adv(1);
  for (int i = 0; i < 5; ++i) adv.push_back(0.9);
  EXPECT_THROW(modal::measure_robustness(x, adv, with_k(5)), modal::ParameterError);
  EXPECT_THROW(modal::measure_robustness(x, adv, with_k(4)), modal::ParameterError);
}

TEST(Robustness, TestHookShowsPreconditionIsTight) {
  const auto x = truncated_normal(10000, 0.5, 0.1, 21);
  SampleSet adv(1);
  for (int i = 0; i < 5; ++i) adv.push_back(0.9);
  modal::RobustnessOptions o;
  o.enforce_ell_below_k = false;
  const auto r = modal::measure_robustness(x, adv, with_k(5), o);
  EXPECT_NEAR(r.displacement, 0.4, 0.05);
  EXPECT_EQ(r.theoretical_bound, std::numeric_limits<double>::infinity());
}

TEST(Robustness, DistantSpreadInsertionLeavesEstimate) {
  const auto x = truncated_normal(5000, 0.5, 0.1, 22);
  const std::size_t k = modal::default_k(x.size(), 1);
  SampleSet adv(1);
  for (std::size_t i = 0; i < k - 1; ++i) adv.push_back(5.0 + 3.0 * static_cast<double>(i));
  const auto r = modal::measure_robustness(x, adv, {});
  EXPECT_EQ(r.displacement, 0.0);
  EXPECT_EQ(r.contaminated_estimate.location, r.clean_estimate.location);
}

TEST(BetaK, Formula) {
  EXPECT_NEAR(modal::beta_k(100.0, 0.05, 10000, 100),
              100.0 * std::log(20.0) * std::sqrt(std::log(10000.0)) / 10.0, 1e-9);
}

}  // namespace
