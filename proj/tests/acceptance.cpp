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

// Acceptance checks 1-12. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   acceptance [--only N[,N...]] [--cli PATH]
//
// With --cli the determinism check also runs the command-line tool twice.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modal_bandits.hpp"
#include "modal_bandits/harness/catalogue.hpp"
#include "modal_bandits/harness/runner.hpp"
#include "oracles.hpp"

namespace {

namespace h = modal::harness;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> check;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

modal::SampleSet truncated_normal(std::size_t n, double mean, double sd, std::uint64_t seed) {
  const auto dist = modal::ArmDistribution::normal(mean, sd);
  modal::Rng rng(seed);
  modal::SampleSet out(1);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(dist.sample(rng));
  return out;
}

// 1. Library estimators agree with brute force on 1000 random instances.
Outcome oracle_equivalence() {
  modal::Rng rng(0xACCE1);
  std::size_t mode_mismatch = 0, cond_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(500);
    const std::size_t dim = 1 + rng.below(3);
    const std::size_t k = 1 + rng.below(n);
    // Coarse grids make exact ties common.
    const double grid = trial % 2 ? 0.0 : 20.0;
    modal::SampleSet x(dim);
    modal::Point p(dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : p) v = grid > 0 ? std::round(rng.uniform() * grid) / grid : rng.uniform();
      x.push_back(p);
    }
    modal::ModeEstimatorConfig c;
    c.k = k;
    if (modal::estimate_mode(x, c).location != x.point(oracle::mode_index(x, k))) ++mode_mismatch;

    const std::size_t cn = 1 + rng.below(500);
    const std::size_t ck = 1 + rng.below(cn);
    modal::JointSampleSet joint(1);
    for (std::size_t i = 0; i < cn; ++i) {
      const double ctx = rng.uniform();
      joint.push_back(std::clamp(0.3 + 0.4 * ctx + 0.1 * rng.normal(), 0.0, 1.0), {&ctx, 1});
    }
    modal::ConditionalModeConfig cc;
    cc.k = ck;
    cc.m = 10 + rng.below(41);
    const double q = rng.uniform();
    if (modal::conditional_mode(joint, {&q, 1}, cc) != oracle::conditional_mode(joint, {&q, 1}, cc.m, ck)) {
      ++cond_mismatch;
    }
  }
  return {mode_mismatch == 0 && cond_mismatch == 0,
          fmt("mode mismatches %zu/1000, conditional mismatches %zu/1000", mode_mismatch, cond_mismatch)};
}

// 2. Median error at n = 1e5 and log-log slope across three sample sizes.
Outcome estimation_rate() {
  const std::vector<std::size_t> sizes{1000, 10000, 100000};
  std::vector<double> log_n, log_err;
  double final_median = 0.0;
  for (std::size_t n : sizes) {
    std::vector<double> errors;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto x = truncated_normal(n, 0.5, 0.1, modal::derive_seed(0x2A7E, s * 7 + n));
      errors.push_back(std::fabs(modal::estimate_mode(x).location[0] - 0.5));
    }
    final_median = oracle::median(errors);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_err.push_back(std::log(final_median));
  }
  const double slope = oracle::slope(log_n, log_err);
  return {final_median <= 0.03 && slope >= -0.45 && slope <= -0.05,
          fmt("median error at 1e5 = %.4f (<= 0.03), slope = %.3f (in [-0.45, -0.05])", final_median, slope)};
}

// 3. A cluster of floor(k/2) points cannot move the mode; k points can.
Outcome robustness() {
  int small = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto x = truncated_normal(10000, 0.5, 0.1, modal::derive_seed(0x3B, s));
    const std::size_t k = modal::default_k(x.size(), 1);
    modal::SampleSet adv(1);
    for (std::size_t i = 0; i < k / 2; ++i) adv.push_back(0.8);
    small += modal::measure_robustness(x, adv, {}).displacement <= 0.1;
  }
  const auto x = truncated_normal(10000, 0.5, 0.1, 0x3C);
  modal::ModeEstimatorConfig c;
  c.k = 5;
  modal::SampleSet adv(1);
  for (int i = 0; i < 5; ++i) adv.push_back(0.9);
  modal::RobustnessOptions o;
  o.enforce_ell_below_k = false;
  const double moved = modal::measure_robustness(x, adv, c, o).displacement;
  return {small >= 95 && moved >= 0.3,
          fmt("ell = k/2: %d/100 trials within 0.1 (>= 95); ell = k = 5: displacement %.3f (>= 0.3)", small,
              moved)};
}

// 4. Noise calibration, sigma = 0 reduction and the dp_sigma golden.
Outcome privacy() {
  const auto x = truncated_normal(2000, 0.5, 0.1, 0x4D);
  const double clean = modal::estimate_mode(x).location[0];
  modal::PrivacyParams p;
  p.sigma = 0.05;
  const int draws = 10000;
  const auto tiny = truncated_normal(60, 0.5, 0.1, 0x4F);
  const double tiny_clean = modal::estimate_mode(tiny).location[0];
  double psum = 0.0, psq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double d = modal::private_mode(tiny, {}, p, modal::derive_seed(0x50, i))[0] - tiny_clean;
    psum += d;
    psq += d * d;
  }
  const double sd = std::sqrt((psq - psum * psum / draws) / (draws - 1));
  modal::PrivacyParams zero;
  zero.sigma = 0.0;
  const bool exact = modal::private_mode(x, {}, zero, 7)[0] == clean;
  modal::PrivacyParams golden;
  golden.epsilon = 0.5;
  golden.delta_privacy = 0.05;
  const double g = modal::dp_sigma(10000, 1000, golden);
  const bool golden_ok = std::fabs(g - 72.27587850494791) <= 1e-9;
  const bool calibrated = std::fabs(sd / 0.05 - 1.0) <= 0.05;
  return {calibrated && exact && golden_ok,
          fmt("empirical sd %.5f vs 0.05 (within 5%%); sigma=0 exact: %s; dp_sigma golden: %.12f", sd,
              exact ? "yes" : "no", g)};
}

bool strictly_greatest(const std::vector<double>& v, std::size_t i) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j != i && !(v[i] > v[j])) return false;
  }
  return true;
}

// 5. fig2: arm 1 pulled most on the mean curve and in >= 80% of seeds.
Outcome figure2() {
  const auto r = h::run_experiment(h::preset("fig2_contaminated"));
  const auto mean = r.final_mean_pulls();
  int seeds_best = 0;
  for (const auto& s : r.seeds) {
    std::vector<double> last;
    for (const auto& a : s.cumulative_pulls) last.push_back(a.back());
    seeds_best += strictly_greatest(last, 0);
  }
  const double share = static_cast<double>(seeds_best) / static_cast<double>(r.seeds.size());
  return {strictly_greatest(mean, 0) && share >= 0.8,
          fmt("mean final pulls (%.1f, %.1f, %.1f); arm 1 greatest in %d/%zu seeds (>= 80%%)", mean[0], mean[1],
              mean[2], seeds_best, r.seeds.size())};
}

// 6. fig3: close top modes, arm 1 pulled most on the mean curve.
Outcome figure3() {
  const auto c = h::preset("fig3_close_modes");
  std::vector<double> tops;
  for (const auto& arm : c.arms) tops.push_back(modal::true_modes(arm.distribution).front().location[0]);
  double widest = 0.0;
  for (double a : tops) {
    for (double b : tops) widest = std::max(widest, std::fabs(a - b));
  }
  const auto mean = h::run_experiment(c).final_mean_pulls();
  return {widest <= 0.02 && strictly_greatest(mean, 0),
          fmt("largest top-mode gap %.4f (<= 0.02); mean final pulls (%.1f, %.1f, %.1f)", widest, mean[0], mean[1],
              mean[2])};
}

// 7. fig4: arm 3 pulled most; mean regret / t nonincreasing over the last half.
Outcome figure4() {
  const auto c = h::preset("fig4_distance_score");
  const auto r = h::run_experiment(c);
  const auto mean = r.final_mean_pulls();
  bool monotone = true;
  double previous = std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
    const std::size_t t = r.checkpoints[i];
    if (2 * t < c.horizon) continue;
    const double normalized = r.regret[i].mean / static_cast<double>(t);
    monotone = monotone && normalized <= previous;
    previous = normalized;
    ++checked;
  }
  return {strictly_greatest(mean, 2) && monotone,
          fmt("mean final pulls (%.1f, %.1f, %.1f); normalized regret nonincreasing over %zu checkpoints: %s",
              mean[0], mean[1], mean[2], checked, monotone ? "yes" : "no")};
}

// 8. Top-2 of five arms, correct and stopped by the confidence rule.
Outcome top_m() {
  const auto r = h::run_experiment(h::preset("top_m_five_arms"));
  int correct = 0, early = 0, both = 0;
  for (const auto& s : r.seeds) {
    const bool right = s.answer == "0,1";
    correct += right;
    early += s.terminated_early;
    both += right && s.terminated_early;
  }
  const auto need = static_cast<int>(std::ceil(0.95 * static_cast<double>(r.seeds.size())));
  return {both >= need, fmt("correct and early in %d/%zu runs (>= %d); correct %d, early %d", both,
                            r.seeds.size(), need, correct, early)};
}

// 9. Contextual policy matches the analytic optimum on the evaluation grid.
Outcome contextual() {
  const auto r = h::run_experiment(h::preset("contextual_crossing"));
  double worst = 1.0;
  for (const auto& s : r.seeds) worst = std::min(worst, s.accuracy);
  return {worst >= 0.9, fmt("lowest grid agreement over %zu runs %.3f (>= 0.90)", r.seeds.size(), worst)};
}

// 10. Zooming ends within 0.1 of the optimum; phase invariants hold exactly.
Outcome zooming() {
  const auto c = h::preset("zooming_quadratic");
  const auto r = h::run_experiment(c);
  const std::size_t hits = r.answers.count("within_tolerance") ? r.answers.at("within_tolerance") : 0;
  const std::size_t phases = c.horizon / c.zooming.zooming.phase_length;
  std::size_t violations = 0;
  for (const auto& s : r.seeds) {
    if (s.trace.size() != phases) ++violations;
    for (std::size_t j = 0; j < s.trace.size(); ++j) {
      const auto& p = s.trace[j];
      if (p.radius != std::ldexp(c.zooming.zooming.initial_radius, -static_cast<int>(j))) ++violations;
      for (const auto& a : p.active_arms) {
        double sq = 0.0;
        for (std::size_t d = 0; d < a.size(); ++d) {
          sq += (a[d] - p.center[d]) * (a[d] - p.center[d]);
          if (a[d] < c.zooming.lower[d] || a[d] > c.zooming.upper[d]) ++violations;
        }
        if (std::sqrt(sq) > p.radius) ++violations;
      }
    }
  }
  return {hits >= 90 && violations == 0,
          fmt("within 0.1 in %zu/%zu seeds (>= 90); invariant violations %zu", hits, r.seeds.size(), violations)};
}

// 11. Hidden-context stream: the mean moves, the per-half modes do not.
Outcome hidden_context() {
  modal::HiddenContextSpec spec;
  spec.schedule = modal::HiddenContextSpec::step(0.9, 0.1);
  const std::size_t n = 20000;
  const auto v = modal::hidden_context_stream(spec, n, 0xB11);
  const std::vector<double> first(v.begin(), v.begin() + n / 2), second(v.begin() + n / 2, v.end());
  auto mean = [](const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); };
  auto near_mu = [&](const std::vector<double>& x) {
    const double m = modal::estimate_mode(modal::SampleSet::from_scalars(x)).location[0];
    return std::min(std::fabs(m - spec.mu1), std::fabs(m - spec.mu2));
  };
  const double shift = std::fabs(mean(second) - mean(first));
  const double e1 = near_mu(first), e2 = near_mu(second);
  return {shift >= 0.25 && e1 <= 0.05 && e2 <= 0.05,
          fmt("mean shift %.3f (>= 0.25); mode distance to nearest mu %.4f, %.4f (<= 0.05)", shift, e1, e2)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative path -> contents for every regular file under dir.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return out;
}

// 12. Repeated runs write byte-identical CSV/SVG files.
Outcome determinism(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "modal_bandits_acceptance";
  fs::remove_all(root);
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& [name, make] : h::preset_table()) {
    auto c = make();
    c.seeds = std::min<std::size_t>(c.seeds, 3);
    if (c.strategy == h::Strategy::contextual_uniform) c.horizon = 5000;
    const fs::path a = root / name / "a", b = root / name / "b";
    h::write_artifacts(h::run_experiment(c, 1), a);
    h::write_artifacts(h::run_experiment(c, 2), b);
    const auto sa = snapshot(a), sb = snapshot(b);
    compared += sa.size();
    if (sa != sb) differing.push_back(name);
  }
  if (!cli.empty()) {
    for (const char* dir : {"cli_a", "cli_b"}) {
      const std::string cmd = "\"" + cli + "\" run --preset fig2_contaminated --jobs 2 --out \"" +
                              (root / dir).string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) differing.push_back(std::string("cli exit status (") + dir + ")");
    }
    const auto sa = snapshot(root / "cli_a"), sb = snapshot(root / "cli_b");
    compared += sa.size();
    if (sa.empty() || sa != sb) differing.push_back("cli fig2_contaminated");
  }
  fs::remove_all(root);
  std::string list;
  for (const auto& d : differing) list += (list.empty() ? "" : ", ") + d;
  return {differing.empty() && compared > 0,
          fmt("%zu files compared across repeated runs; differing: %s", compared, list.empty() ? "none" : list.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    } else if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N[,N...]] [--cli PATH]\n");
      return 2;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "mode-estimation rate", 300, estimation_rate},
      {3, "robustness to inserted points", 120, robustness},
      {4, "private mode calibration", 30, privacy},
      {5, "contaminated arms (fig2)", 180, figure2},
      {6, "close modes (fig3)", 300, figure3},
      {7, "distance score (fig4)", 300, figure4},
      {8, "top-m identification", 300, top_m},
      {9, "contextual policy", 300, contextual},
      {10, "zooming", 300, zooming},
      {11, "hidden context", 60, hidden_context},
      {12, "determinism", 600, [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d %s  %s: %s [%.1f s of %.0f s]\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
