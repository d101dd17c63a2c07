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

// Synthetic reward environments whose mode sets are known analytically:
// product-form mixtures on [0,1]^D with optional contamination, contextual
// arms whose conditional modes move affinely with the context, a continuum
// of arms indexed by a box, and a hidden-context nonstationary stream.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "modal_bandits/errors.hpp"
#include "modal_bandits/random.hpp"
#include "modal_bandits/sample_set.hpp"
#include "modal_bandits/score.hpp"

namespace modal {

namespace detail {

inline double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}
inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Normal(mean, sd) truncated to [0, 1] by rejection.
inline double truncated_normal_draw(Rng& rng, double mean, double sd) {
  if (sd == 0.0) return std::clamp(mean, 0.0, 1.0);
  for (;;) {
    const double x = rng.normal(mean, sd);
    if (x >= 0.0 && x <= 1.0) return x;
  }
}

inline double truncated_normal_pdf(double x, double mean, double sd) {
  if (x < 0.0 || x > 1.0) return 0.0;
  const double mass = std_normal_cdf((1.0 - mean) / sd) - std_normal_cdf(-mean / sd);
  return std_normal_pdf((x - mean) / sd) / (sd * mass);
}

}  // namespace detail

// One-dimensional base density on a sub-interval of [0, 1].
struct AxisDensity {
  enum class Kind { truncated_normal, uniform, triangular };
  Kind kind = Kind::truncated_normal;
  // truncated_normal: (mean, sd); uniform: [lo, hi]; triangular: lo, peak, hi.
  double lo = 0.0, peak = 0.5, hi = 1.0, mean = 0.5, sd = 0.1;

  static AxisDensity normal(double mean, double sd) {
    AxisDensity a;
    a.kind = Kind::truncated_normal;
    a.mean = mean;
    a.sd = sd;
    return a;
  }
  static AxisDensity uniform(double lo, double hi) {
    AxisDensity a;
    a.kind = Kind::uniform;
    a.lo = lo;
    a.hi = hi;
    return a;
  }
  static AxisDensity triangular(double lo, double peak, double hi) {
    AxisDensity a;
    a.kind = Kind::triangular;
    a.lo = lo;
    a.peak = peak;
    a.hi = hi;
    return a;
  }

  void validate() const {
    switch (kind) {
      case Kind::truncated_normal:
        if (!(sd > 0.0)) throw ValidationError("truncated normal sd must be > 0");
        if (!(mean >= 0.0 && mean <= 1.0)) throw ValidationError("truncated normal mean must lie in [0, 1]");
        break;
      case Kind::uniform:
        if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw ValidationError("uniform bounds must satisfy 0 <= lo < hi <= 1");
        break;
      case Kind::triangular:
        if (!(0.0 <= lo && lo <= peak && peak <= hi && hi <= 1.0 && lo < hi)) {
          throw ValidationError("triangular parameters must satisfy 0 <= lo <= peak <= hi <= 1");
        }
        break;
    }
  }

  double pdf(double x) const {
    switch (kind) {
      case Kind::truncated_normal:
        return detail::truncated_normal_pdf(x, mean, sd);
      case Kind::uniform:
        return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
      case Kind::triangular:
        if (x < lo || x > hi) return 0.0;
        if (x < peak) return 2.0 * (x - lo) / ((hi - lo) * (peak - lo));
        if (x == peak) return 2.0 / (hi - lo);
        return 2.0 * (hi - x) / ((hi - lo) * (hi - peak));
    }
    return 0.0;
  }

  double cdf(double x) const {
    switch (kind) {
      case Kind::truncated_normal: {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double a = detail::std_normal_cdf(-mean / sd);
        const double b = detail::std_normal_cdf((1.0 - mean) / sd);
        return (detail::std_normal_cdf((x - mean) / sd) - a) / (b - a);
      }
      case Kind::uniform:
        return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
      case Kind::triangular:
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        if (x <= peak) return (x - lo) * (x - lo) / ((hi - lo) * (peak - lo));
        return 1.0 - (hi - x) * (hi - x) / ((hi - lo) * (hi - peak));
    }
    return 0.0;
  }

  double sample(Rng& rng) const {
    switch (kind) {
      case Kind::truncated_normal:
        return detail::truncated_normal_draw(rng, mean, sd);
      case Kind::uniform:
        return rng.uniform(lo, hi);
      case Kind::triangular: {
        const double u = rng.uniform();
        const double split = (peak - lo) / (hi - lo);
        if (u < split) return lo + std::sqrt(u * (hi - lo) * (peak - lo));
        return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - peak));
      }
    }
    return 0.0;
  }

  // Location of the density peak; empty for flat (uniform) axes.
  std::optional<double> peak_location() const {
    switch (kind) {
      case Kind::truncated_normal: return mean;
      case Kind::triangular: return peak;
      case Kind::uniform: return std::nullopt;
    }
    return std::nullopt;
  }
};

// Product of independent axis densities.
struct MixtureComponent {
  double weight = 1.0;
  std::vector<AxisDensity> axes;

  double pdf(std::span<const double> x) const {
    double v = 1.0;
    for (std::size_t a = 0; a < axes.size(); ++a) v *= axes[a].pdf(x[a]);
    return v;
  }
};

struct TrueMode {
  Point location;
  double density = 0.0;
};

// A reward density on [0,1]^D given as a finite mixture.
class ArmDistribution {
 public:
  ArmDistribution() = default;
  ArmDistribution(std::size_t dimension, std::vector<MixtureComponent> components)
      : dimension_(dimension), components_(std::move(components)) {}

  // Single truncated-normal component in D = 1.
  static ArmDistribution normal(double mean, double sd) {
    return ArmDistribution(1, {{1.0, {AxisDensity::normal(mean, sd)}}});
  }

  // Mixture of isotropic truncated normals: (weight, mean vector, sd).
  static ArmDistribution normal_mixture(
      std::size_t dimension,
      const std::vector<std::tuple<double, Point, double>>& parts) {
    std::vector<MixtureComponent> comps;
    for (const auto& [w, mean, sd] : parts) {
      if (mean.size() != dimension) throw ShapeError("component mean has wrong dimension");
      MixtureComponent c{w, {}};
      for (double m : mean) c.axes.push_back(AxisDensity::normal(m, sd));
      comps.push_back(std::move(c));
    }
    return ArmDistribution(dimension, std::move(comps));
  }

  std::size_t dimension() const { return dimension_; }
  const std::vector<MixtureComponent>& components() const { return components_; }

  // Weights, dimensions and supports only (no mode search).
  void validate_structure() const {
    if (dimension_ == 0) throw ValidationError("arm dimension must be >= 1");
    if (components_.empty()) throw ValidationError("arm needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
      if (!(c.weight > 0.0)) throw ValidationError("component weights must be positive");
      if (c.axes.size() != dimension_) throw ValidationError("component dimension mismatch");
      for (const auto& a : c.axes) a.validate();
      total += c.weight;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw ValidationError("component weights must sum to 1");
  }

  double density(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& c : components_) v += c.weight * c.pdf(x);
    return v;
  }

  // Marginal CDF (D = 1 only).
  double cdf(double x) const {
    if (dimension_ != 1) throw ShapeError("cdf is defined for D = 1 arms only");
    double v = 0.0;
    for (const auto& c : components_) v += c.weight * c.axes[0].cdf(x);
    return v;
  }

  Point sample(Rng& rng) const {
    double u = rng.uniform();
    std::size_t chosen = components_.size() - 1;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (u < components_[i].weight) {
        chosen = i;
        break;
      }
      u -= components_[i].weight;
    }
    Point x(dimension_);
    for (std::size_t a = 0; a < dimension_; ++a) x[a] = components_[chosen].axes[a].sample(rng);
    return x;
  }

  // Components whose every axis has a peak (uniform axes are flat).
  std::size_t peaked_components() const {
    return static_cast<std::size_t>(std::count_if(
        components_.begin(), components_.end(), [](const MixtureComponent& c) {
          return std::all_of(c.axes.begin(), c.axes.end(),
                             [](const AxisDensity& a) { return a.peak_location().has_value(); });
        }));
  }

 private:
  std::size_t dimension_ = 1;
  std::vector<MixtureComponent> components_;
};

// With probability q a draw comes from the noise sequence instead of the arm:
// a uniformly chosen noise point plus uniform jitter of half-width `dispersion`
// on every coordinate.
struct ContaminationModel {
  double q = 0.0;
  std::vector<Point> noise_points;
  double dispersion = 0.0;

  void validate(std::size_t dimension) const {
    if (!(q >= 0.0 && q < 1.0)) throw ValidationError("contamination probability must lie in [0, 1)");
    if (!(dispersion >= 0.0)) throw ValidationError("dispersion must be >= 0");
    if (q > 0.0 && noise_points.empty()) throw ValidationError("contamination needs noise points");
    for (const auto& p : noise_points) {
      if (p.size() != dimension) throw ValidationError("noise point has wrong dimension");
      for (double v : p) {
        if (v - dispersion < 0.0 || v + dispersion > 1.0) {
          throw ValidationError("jittered noise must stay inside [0, 1]");
        }
      }
    }
  }

  // Density contribution of the noise law (atoms are not representable and
  // contribute 0 here).
  double density(std::span<const double> x) const {
    if (noise_points.empty() || dispersion <= 0.0) return 0.0;
    double v = 0.0;
    const double cell = std::pow(2.0 * dispersion, static_cast<double>(x.size()));
    for (const auto& p : noise_points) {
      bool inside = true;
      for (std::size_t a = 0; a < x.size(); ++a) inside = inside && std::fabs(x[a] - p[a]) <= dispersion;
      if (inside) v += 1.0 / cell;
    }
    return v / static_cast<double>(noise_points.size());
  }
};

struct ArmSpec {
  std::string label;
  ArmDistribution distribution;
  std::optional<ContaminationModel> contamination;
};

inline Point sample_reward(const ArmSpec& arm, Rng& rng) {
  if (arm.contamination && arm.contamination->q > 0.0 && rng.bernoulli(arm.contamination->q)) {
    const auto& c = *arm.contamination;
    Point x = c.noise_points[rng.below(c.noise_points.size())];
    if (c.dispersion > 0.0) {
      for (double& v : x) v += rng.uniform(-c.dispersion, c.dispersion);
    }
    return x;
  }
  return arm.distribution.sample(rng);
}

// (1 - q) f(x) + q * noise(x).
inline double contaminated_density(const ArmSpec& arm, std::span<const double> x) {
  const double clean = arm.distribution.density(x);
  if (!arm.contamination) return clean;
  const auto& c = *arm.contamination;
  return (1.0 - c.q) * clean + c.q * c.density(x);
}

namespace detail {

// Golden-section maximization of a unimodal function on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, int iterations = 80) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

struct GridMode {
  Point location;
  double density;
  double plateau_extent;  // width of the flat run of maximal values
};

// Local maxima of a density on a regular grid over [0,1]^D (D <= 2); a flat
// run of equal maximal values is reported once with its extent.
template <typename F>
std::vector<GridMode> grid_local_maxima(F&& density, std::size_t dimension, std::size_t cells) {
  const double h = 1.0 / static_cast<double>(cells);
  const std::size_t g = cells + 1;
  std::vector<GridMode> out;
  if (dimension == 1) {
    std::vector<double> f(g);
    for (std::size_t i = 0; i < g; ++i) {
      const double x = static_cast<double>(i) * h;
      f[i] = density(std::span<const double>(&x, 1));
    }
    std::size_t i = 0;
    while (i < g) {
      std::size_t j = i;
      while (j + 1 < g && f[j + 1] == f[i]) ++j;
      const bool left_lower = i == 0 || f[i - 1] < f[i];
      const bool right_lower = j + 1 == g || f[j + 1] < f[i];
      if (left_lower && right_lower && f[i] > 0.0) {
        const double mid = static_cast<double>(i + j) / 2.0 * h;
        out.push_back({{mid}, f[i], static_cast<double>(j - i) * h});
      }
      i = j + 1;
    }
    return out;
  }
  if (dimension != 2) throw ParameterError("grid mode search supports D <= 2");
  std::vector<double> f(g * g);
  Point x(2);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      x[0] = static_cast<double>(i) * h;
      x[1] = static_cast<double>(j) * h;
      f[i * g + j] = density(x);
    }
  }
  std::vector<char> seen(g * g, 0);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g * g; ++s) {
    if (seen[s] || f[s] <= 0.0) continue;
    // Flood-fill the run of cells equal to f[s]; it is a local maximum when
    // every 8-neighbor outside the run is strictly lower.
    bool is_max = true;
    std::size_t lo_i = g, hi_i = 0, lo_j = g, hi_j = 0;
    double sum_i = 0.0, sum_j = 0.0;
    std::size_t count = 0;
    stack.assign(1, s);
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const std::size_t ci = c / g, cj = c % g;
      lo_i = std::min(lo_i, ci);
      hi_i = std::max(hi_i, ci);
      lo_j = std::min(lo_j, cj);
      hi_j = std::max(hi_j, cj);
      sum_i += static_cast<double>(ci);
      sum_j += static_cast<double>(cj);
      ++count;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ni = static_cast<std::ptrdiff_t>(ci) + di;
          const auto nj = static_cast<std::ptrdiff_t>(cj) + dj;
          if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(g) ||
              nj >= static_cast<std::ptrdiff_t>(g)) {
            continue;
          }
          const std::size_t nc = static_cast<std::size_t>(ni) * g + static_cast<std::size_t>(nj);
          if (f[nc] == f[s]) {
            if (!seen[nc]) {
              seen[nc] = 1;
              stack.push_back(nc);
            }
          } else if (f[nc] > f[s]) {
            is_max = false;
          }
        }
      }
    }
    if (is_max) {
      const double extent = static_cast<double>(std::max(hi_i - lo_i, hi_j - lo_j)) * h;
      out.push_back({{sum_i / static_cast<double>(count) * h, sum_j / static_cast<double>(count) * h},
                     f[s], extent});
    }
  }
  return out;
}

// Refines a grid maximum: a finer grid around it, then golden-section search
// along each axis.
template <typename F>
Point refine_maximum(F&& density, Point start, double coarse_step) {
  const std::size_t dim = start.size();
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  for (std::size_t round = 0; round < 3; ++round) {
    for (std::size_t a = 0; a < dim; ++a) {
      const double lo = clamp01(start[a] - coarse_step);
      const double hi = clamp01(start[a] + coarse_step);
      auto along = [&](double v) {
        Point p = start;
        p[a] = v;
        return density(std::span<const double>(p));
      };
      const double best = golden_max(along, lo, hi);
      // Keep whichever of the refined point and the interval ends is highest
      // (maxima on the boundary of [0,1]).
      double arg = best, val = along(best);
      for (double edge : {lo, hi}) {
        const double ve = along(edge);
        if (ve > val) {
          val = ve;
          arg = edge;
        }
      }
      start[a] = arg;
    }
  }
  return start;
}

}  // namespace detail

// Modes of an arm density found by dense grid search (step 1e-4 in D = 1,
// 1e-3 followed by local refinement in D = 2), ordered by density.
// Throws ValidationError when a maximal plateau is wider than 1e-3 or when
// fewer modes than peaked components are found (merged peaks).
inline std::vector<TrueMode> true_modes(const ArmDistribution& arm, bool require_separated_peaks = true) {
  arm.validate_structure();
  const std::size_t dim = arm.dimension();
  if (dim > 2) throw ParameterError("true_modes supports D <= 2");
  const std::size_t cells = dim == 1 ? 10000 : 1000;
  const double step = 1.0 / static_cast<double>(cells);
  auto f = [&](std::span<const double> x) { return arm.density(x); };
  const auto grid = detail::grid_local_maxima(f, dim, cells);
  std::vector<TrueMode> modes;
  for (const auto& g : grid) {
    if (g.plateau_extent > 1e-3) {
      throw ValidationError("density has a flat maximal plateau of width " +
                            std::to_string(g.plateau_extent) + "; modes must be points");
    }
    Point loc = detail::refine_maximum(f, g.location, step);
    modes.push_back({loc, arm.density(loc)});
  }
  std::stable_sort(modes.begin(), modes.end(), [](const TrueMode& a, const TrueMode& b) {
    if (a.density != b.density) return a.density > b.density;
    return lex_less(a.location, b.location);
  });
  if (require_separated_peaks && modes.size() < arm.peaked_components()) {
    throw ValidationError("mixture components merge: " + std::to_string(arm.peaked_components()) +
                          " peaked components but " + std::to_string(modes.size()) + " modes");
  }
  return modes;
}

// Structural checks plus the mode search.
inline void validate_arm(const ArmSpec& arm) {
  arm.distribution.validate_structure();
  if (arm.contamination) arm.contamination->validate(arm.distribution.dimension());
  (void)true_modes(arm.distribution);
}

// Global maximizer of the contaminated density (noise plateaus allowed).
inline TrueMode contaminated_top_mode(const ArmSpec& arm) {
  const std::size_t dim = arm.distribution.dimension();
  if (dim > 2) throw ParameterError("contaminated_top_mode supports D <= 2");
  const std::size_t cells = dim == 1 ? 10000 : 1000;
  auto f = [&](std::span<const double> x) { return contaminated_density(arm, x); };
  auto grid = detail::grid_local_maxima(f, dim, cells);
  if (grid.empty()) throw ValidationError("density vanishes on the grid");
  auto best = std::max_element(grid.begin(), grid.end(), [](const auto& a, const auto& b) {
    return a.density < b.density;
  });
  Point loc = best->location;
  if (best->plateau_extent == 0.0) loc = detail::refine_maximum(f, loc, 1.0 / static_cast<double>(cells));
  return {loc, f(loc)};
}

// Finite-armed stochastic environment. Arm i owns an independent generator,
// so its t-th draw X_{i,t} does not depend on which arms were pulled before;
// the same latent streams serve as counterfactual full-pull samples.
class StochasticEnvironment {
 public:
  StochasticEnvironment(std::vector<ArmSpec> arms, std::uint64_t seed)
      : StochasticEnvironment(std::move(arms), seed, {}) {}

  // `stream_seeds[i]`, when given, seeds arm i's generator directly (used to
  // relabel arms without changing their draws).
  StochasticEnvironment(std::vector<ArmSpec> arms, std::uint64_t seed,
                        std::vector<std::uint64_t> stream_seeds)
      : arms_(std::move(arms)), seed_(seed) {
    if (arms_.empty()) throw ParameterError("environment needs at least one arm");
    if (!stream_seeds.empty() && stream_seeds.size() != arms_.size()) {
      throw ShapeError("one stream seed per arm is required");
    }
    dimension_ = arms_.front().distribution.dimension();
    for (std::size_t i = 0; i < arms_.size(); ++i) {
      if (arms_[i].distribution.dimension() != dimension_) {
        throw ShapeError("all arms must share one reward dimension");
      }
      rngs_.emplace_back(stream_seeds.empty() ? derive_seed(seed_, i) : stream_seeds[i]);
      streams_.emplace_back(dimension_);
    }
  }

  std::size_t arms() const { return arms_.size(); }
  std::size_t dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<ArmSpec>& specs() const { return arms_; }

  // X_{arm, t} for t >= 1.
  Point draw(std::size_t arm, std::size_t t) {
    if (arm >= arms_.size()) throw DataError("unknown arm id " + std::to_string(arm));
    if (t == 0) throw ParameterError("time index starts at 1");
    extend(arm, t);
    return streams_[arm].point(t - 1);
  }

  // X_{arm, 1..n}.
  SampleSet stream(std::size_t arm, std::size_t n) {
    if (arm >= arms_.size()) throw DataError("unknown arm id " + std::to_string(arm));
    extend(arm, n);
    return streams_[arm].prefix(n);
  }

 private:
  void extend(std::size_t arm, std::size_t n) {
    while (streams_[arm].size() < n) streams_[arm].push_back(sample_reward(arms_[arm], rngs_[arm]));
  }

  std::vector<ArmSpec> arms_;
  std::uint64_t seed_;
  std::size_t dimension_ = 1;
  std::vector<Rng> rngs_;
  std::vector<SampleSet> streams_;
};

// Score of each arm's true top mode.
inline std::vector<double> true_arm_values(const std::vector<ArmSpec>& arms, const ScoreFunction& score,
                                           std::size_t p = 1) {
  std::vector<double> values;
  for (const auto& arm : arms) {
    const auto modes = true_modes(arm.distribution);
    const std::size_t limit = std::min(p, modes.size());
    Point best = modes.front().location;
    for (std::size_t i = 1; i < limit; ++i) {
      if (lex_less(modes[i].location, best)) best = modes[i].location;
    }
    values.push_back(score(best));
  }
  return values;
}

// --- Hidden nonstationary context -------------------------------------------

struct HiddenContextSpec {
  double mu1 = 0.3;
  double mu2 = 0.7;
  double sigma = 0.05;
  // Probability that context H1 is active at time t (1-based) of t_max.
  std::function<double(std::size_t t, std::size_t t_max)> schedule =
      [](std::size_t, std::size_t) { return 0.5; };

  static std::function<double(std::size_t, std::size_t)> constant(double p) {
    return [p](std::size_t, std::size_t) { return p; };
  }
  // p_before for t <= switch_fraction * t_max, p_after afterwards.
  static std::function<double(std::size_t, std::size_t)> step(double p_before, double p_after,
                                                              double switch_fraction = 0.5) {
    return [=](std::size_t t, std::size_t t_max) {
      return static_cast<double>(t) <= switch_fraction * static_cast<double>(t_max) ? p_before : p_after;
    };
  }
};

// Rewards N(mu_H, sigma^2) truncated to [0,1], with H drawn per step from the
// schedule.
inline std::vector<double> hidden_context_stream(const HiddenContextSpec& spec, std::size_t t_max,
                                                 std::uint64_t seed) {
  if (spec.mu1 == spec.mu2) throw ParameterError("hidden contexts need mu1 != mu2");
  if (!(spec.sigma > 0.0)) throw ParameterError("sigma must be > 0");
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(t_max);
  for (std::size_t t = 1; t <= t_max; ++t) {
    const double p = spec.schedule(t, t_max);
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("schedule probability outside [0, 1]");
    const double mu = rng.uniform() < p ? spec.mu1 : spec.mu2;
    out.push_back(detail::truncated_normal_draw(rng, mu, spec.sigma));
  }
  return out;
}

// --- Contextual arms ---------------------------------------------------------

// Conditional reward law given context x: a mixture of normals truncated to
// [0,1] with means intercept + slope . x.
struct ConditionalComponent {
  double weight = 1.0;
  double intercept = 0.5;
  std::vector<double> slope;
  double sigma = 0.05;

  double mean(std::span<const double> x) const {
    double m = intercept;
    for (std::size_t j = 0; j < slope.size(); ++j) m += slope[j] * x[j];
    return m;
  }
};

struct ContextualArm {
  std::string label;
  std::vector<ConditionalComponent> components;
};

class ContextualEnvironment {
 public:
  ContextualEnvironment(std::vector<ContextualArm> arms, std::size_t context_dimension,
                        std::uint64_t seed)
      : arms_(std::move(arms)), context_dim_(context_dimension), seed_(seed),
        context_rng_(derive_seed(seed, 0xC0)) {
    if (arms_.empty()) throw ParameterError("environment needs at least one arm");
    if (context_dim_ == 0) throw ParameterError("context dimension must be >= 1");
    for (std::size_t i = 0; i < arms_.size(); ++i) {
      double total = 0.0;
      for (const auto& c : arms_[i].components) {
        if (c.slope.size() != context_dim_) throw ShapeError("slope length must equal context dimension");
        if (!(c.sigma > 0.0) || !(c.weight > 0.0)) throw ValidationError("bad conditional component");
        total += c.weight;
      }
      if (arms_[i].components.empty() || std::fabs(total - 1.0) > 1e-9) {
        throw ValidationError("conditional component weights must sum to 1");
      }
      arm_rngs_.emplace_back(derive_seed(seed, i + 1));
    }
  }

  std::size_t arms() const { return arms_.size(); }
  std::size_t context_dimension() const { return context_dim_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<ContextualArm>& specs() const { return arms_; }

  // Context drawn uniformly from [0,1]^d.
  Point next_context() {
    Point x(context_dim_);
    for (double& v : x) v = context_rng_.uniform();
    return x;
  }

  double draw(std::size_t arm, std::span<const double> x) {
    if (arm >= arms_.size()) throw DataError("unknown arm id " + std::to_string(arm));
    Rng& rng = arm_rngs_[arm];
    const auto& comps = arms_[arm].components;
    double u = rng.uniform();
    std::size_t chosen = comps.size() - 1;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (u < comps[i].weight) {
        chosen = i;
        break;
      }
      u -= comps[i].weight;
    }
    return detail::truncated_normal_draw(rng, std::clamp(comps[chosen].mean(x), 0.0, 1.0),
                                         comps[chosen].sigma);
  }

  // f(r | x).
  double conditional_density(std::size_t arm, double r, std::span<const double> x) const {
    double v = 0.0;
    for (const auto& c : arms_.at(arm).components) {
      v += c.weight * detail::truncated_normal_pdf(r, std::clamp(c.mean(x), 0.0, 1.0), c.sigma);
    }
    return v;
  }

  // Top mode of f(. | x): the clamped mean for one component, otherwise grid
  // search with step 1e-4 and refinement.
  double true_conditional_mode(std::size_t arm, std::span<const double> x) const {
    const auto& comps = arms_.at(arm).components;
    if (comps.size() == 1) return std::clamp(comps.front().mean(x), 0.0, 1.0);
    auto f = [&](std::span<const double> r) { return conditional_density(arm, r[0], x); };
    const auto grid = detail::grid_local_maxima(f, 1, 10000);
    auto best = std::max_element(grid.begin(), grid.end(),
                                 [](const auto& a, const auto& b) { return a.density < b.density; });
    return detail::refine_maximum(f, best->location, 1e-4)[0];
  }

  // argmax_i score(mode(f_i(. | x))); ties to the lowest id.
  std::size_t optimal_arm(std::span<const double> x, const ScoreFunction& score = ScoreFunction::identity()) const {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms_.size(); ++i) {
      const double m = true_conditional_mode(i, x);
      const double v = score(std::span<const double>(&m, 1));
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    return best;
  }

 private:
  std::vector<ContextualArm> arms_;
  std::size_t context_dim_;
  std::uint64_t seed_;
  Rng context_rng_;
  std::vector<Rng> arm_rngs_;
};

// Two arms whose conditional modes cross at x = 0.5 (context dimension 1):
// arm 0 has mode 0.2 + 0.6x, arm 1 has mode 0.8 - 0.6x.
inline std::vector<ContextualArm> crossing_arms(double sigma = 0.05) {
  return {
      {"Arm 1", {{1.0, 0.2, {0.6}, sigma}}},
      {"Arm 2", {{1.0, 0.8, {-0.6}, sigma}}},
  };
}

// --- Continuum of arms -------------------------------------------------------

// Arms are points of an axis-aligned box; arm a emits N(mode(a), sd^2)
// truncated to [0,1].
class ContinuumEnvironment {
 public:
  using ModeFunction = std::function<double(std::span<const double>)>;

  ContinuumEnvironment(Point lower, Point upper, ModeFunction mode_function, double sd,
                       std::uint64_t seed)
      : lower_(std::move(lower)), upper_(std::move(upper)), mode_(std::move(mode_function)),
        sd_(sd), seed_(seed), rng_(derive_seed(seed, 0xA7)) {
    if (lower_.empty() || lower_.size() != upper_.size()) throw ShapeError("bad arm-space box");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i])) throw ParameterError("arm-space box must have lower < upper");
    }
    if (!(sd_ > 0.0)) throw ParameterError("reward sd must be > 0");
  }

  std::size_t arm_dimension() const { return lower_.size(); }
  std::uint64_t seed() const { return seed_; }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }

  bool contains(std::span<const double> a) const {
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (a[i] < lower_[i] || a[i] > upper_[i]) return false;
    }
    return true;
  }

  double mode_at(std::span<const double> a) const { return std::clamp(mode_(a), 0.0, 1.0); }

  double draw(std::span<const double> a) {
    if (a.size() != lower_.size()) throw ShapeError("arm dimension mismatch");
    return detail::truncated_normal_draw(rng_, mode_at(a), sd_);
  }

  Rng& rng() { return rng_; }

 private:
  Point lower_, upper_;
  ModeFunction mode_;
  double sd_;
  std::uint64_t seed_;
  Rng rng_;
};

// mode(a) = peak - curvature * |a - optimum|^2.
inline ContinuumEnvironment::ModeFunction quadratic_landscape(Point optimum, double peak = 0.9,
                                                              double curvature = 0.8) {
  return [optimum = std::move(optimum), peak, curvature](std::span<const double> a) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - optimum[i]) * (a[i] - optimum[i]);
    return peak - curvature * sq;
  };
}

}  // namespace modal
