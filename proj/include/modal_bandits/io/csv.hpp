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

// Plain-text formats: comma-separated values, UTF-8, LF line endings, '.'
// decimals, numbers in shortest round-trip form.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "modal_bandits/conditional_modes.hpp"
#include "modal_bandits/contextual.hpp"
#include "modal_bandits/errors.hpp"
#include "modal_bandits/mode_estimation.hpp"
#include "modal_bandits/sample_set.hpp"

namespace modal::io {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

inline bool parse_number(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

}  // namespace detail

// Rows of numbers, one point per line. A first line that does not parse as
// numbers is taken as a header. Blank lines and lines starting with '#' are
// skipped. All rows must have the same width.
// With `empty_dimension` > 0 an input without data rows yields an empty set of
// that dimension instead of an error.
inline SampleSet read_points(std::istream& in, const std::string& source = "input",
                             std::size_t empty_dimension = 0) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool seen_row = false;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = detail::split(t);
    std::vector<double> row;
    bool numeric = true;
    for (auto f : fields) {
      double v = 0.0;
      if (!detail::parse_number(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (!seen_row && width == 0) {
        width = fields.size();
        continue;
      }
      throw DataError(source + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) +
                      " fields, found " + std::to_string(row.size()));
    }
    seen_row = true;
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (flat.empty() && empty_dimension > 0) return SampleSet(empty_dimension);
  if (!seen_row) throw DataError(source + ": no data rows");
  return SampleSet(width, std::move(flat));
}

inline SampleSet read_points(const std::filesystem::path& path, std::size_t empty_dimension = 0) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_points(in, path.string(), empty_dimension);
}

inline void write_points(std::ostream& out, const SampleSet& samples, bool header = true) {
  if (header) {
    for (std::size_t a = 0; a < samples.dimension(); ++a) out << (a ? "," : "") << "x_" << a + 1;
    out << '\n';
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto p = samples[i];
    for (std::size_t a = 0; a < p.size(); ++a) out << (a ? "," : "") << format_number(p[a]);
    out << '\n';
  }
}

// Columns location_1..location_D, density, k, n.
inline void write_estimates(std::ostream& out, const std::vector<ModeEstimate>& estimates,
                            std::size_t dimension) {
  for (std::size_t a = 0; a < dimension; ++a) out << "location_" << a + 1 << ',';
  out << "density,k,n\n";
  for (const auto& e : estimates) {
    for (double v : e.location) out << format_number(v) << ',';
    out << format_number(e.density) << ',' << e.k_used << ',' << e.n_used << '\n';
  }
}

// Columns reward, ctx_1..ctx_d.
inline void write_joint(std::ostream& out, const JointSampleSet& samples) {
  out << "reward";
  for (std::size_t j = 0; j < samples.context_dimension(); ++j) out << ",ctx_" << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << format_number(samples.reward(i));
    for (double v : samples.context(i)) out << ',' << format_number(v);
    out << '\n';
  }
}

inline JointSampleSet read_joint(std::istream& in, const std::string& source = "input") {
  const SampleSet rows = read_points(in, source);
  if (rows.dimension() < 2) throw DataError(source + ": joint samples need a reward and a context");
  JointSampleSet out(rows.dimension() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto r = rows[i];
    out.push_back(r[0], r.subspan(1));
  }
  return out;
}

// A policy directory holds arm_<i>.csv joint samples and policy.json with the
// conditional-mode settings and score.
inline void save_policy(const std::filesystem::path& dir, const ContextualPolicy& policy) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < policy.arms(); ++i) {
    std::ofstream out(dir / ("arm_" + std::to_string(i) + ".csv"), std::ios::binary);
    write_joint(out, policy.samples()[i]);
    if (!out) throw Error("failed to write policy samples to " + dir.string());
  }
  const auto& c = policy.config();
  nlohmann::ordered_json j;
  j["arms"] = policy.arms();
  j["context_dimension"] = policy.context_dimension();
  j["grid_m"] = c.m;
  if (c.k) j["k"] = *c.k;
  j["delta"] = c.delta;
  j["epsilon_level"] = c.epsilon_level;
  j["p"] = c.p;
  j["alpha"] = c.alpha;
  j["beta_coefficient"] = c.beta_coefficient;
  j["context_scale"] = c.context_scale;
  j["score"] = {{"kind", policy.score().name()},
                {"scale", policy.score().scale()},
                {"offset", policy.score().offset()},
                {"table_x", policy.score().table_x()},
                {"table_y", policy.score().table_y()}};
  std::ofstream out(dir / "policy.json", std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed to write " + (dir / "policy.json").string());
}

inline ContextualPolicy load_policy(const std::filesystem::path& dir) {
  std::ifstream in(dir / "policy.json");
  if (!in) throw DataError("cannot open " + (dir / "policy.json").string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("policy.json: " + std::string(e.what()));
  }
  ConditionalModeConfig c;
  c.m = j.at("grid_m").get<std::size_t>();
  if (j.contains("k")) c.k = j.at("k").get<std::size_t>();
  c.delta = j.at("delta").get<double>();
  c.epsilon_level = j.at("epsilon_level").get<double>();
  c.p = j.at("p").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.beta_coefficient = j.at("beta_coefficient").get<double>();
  c.context_scale = j.at("context_scale").get<std::vector<double>>();
  const auto& sj = j.at("score");
  const std::string kind = sj.at("kind").get<std::string>();
  const std::size_t d = j.at("context_dimension").get<std::size_t>();
  ScoreFunction score;
  if (kind == "table") {
    score = ScoreFunction::table(sj.at("table_x").get<std::vector<double>>(),
                                 sj.at("table_y").get<std::vector<double>>());
  } else if (kind == "distance_from_origin") {
    score = ScoreFunction::distance_from_origin(1);
  } else if (kind == "negated_distance") {
    score = ScoreFunction::negated_distance(1);
  } else {
    score = ScoreFunction::identity();
  }
  score = score.with_normalization(sj.at("scale").get<double>(), sj.at("offset").get<double>());
  std::vector<JointSampleSet> samples;
  const std::size_t arms = j.at("arms").get<std::size_t>();
  for (std::size_t i = 0; i < arms; ++i) {
    const auto path = dir / ("arm_" + std::to_string(i) + ".csv");
    std::ifstream arm_in(path);
    if (!arm_in) throw DataError("cannot open " + path.string());
    samples.push_back(read_joint(arm_in, path.string()));
    if (samples.back().context_dimension() != d) throw ShapeError(path.string() + ": context dimension mismatch");
  }
  return ContextualPolicy(std::move(samples), std::move(c), std::move(score));
}

}  // namespace modal::io
