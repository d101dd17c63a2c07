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

// Minimal line charts: axes, ticks, legend and one polyline per series, with
// an optional mean +/- sd band. Output depends only on the data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace modal::harness {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> spread;  // optional, same length as y
};

struct ChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 640;
  int height = 400;
  std::size_t max_points = 400;  // polylines are thinned to about this many vertices
};

namespace detail {

inline std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string tick_label(double v) {
  char buf[32];
  const double a = std::fabs(v);
  if (a != 0.0 && (a >= 1e5 || a < 1e-3)) {
    std::snprintf(buf, sizeof buf, "%.2g", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.4g", v);
  }
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
inline double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double base = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * base >= raw) return m * base;
  }
  return 10.0 * base;
}

inline std::vector<std::size_t> thin(std::size_t n, std::size_t max_points) {
  std::vector<std::size_t> idx;
  if (n == 0) return idx;
  const std::size_t step = std::max<std::size_t>(1, (n + max_points - 1) / std::max<std::size_t>(1, max_points));
  for (std::size_t i = 0; i < n; i += step) idx.push_back(i);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return colors[i % 7];
}

}  // namespace detail

inline std::string line_chart(const std::vector<Series>& series, const ChartOptions& opt) {
  const double left = 64, right = 16, top = 36, bottom = 48;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double sp = s.spread.empty() ? 0.0 : s.spread[i];
      const double lo = s.y[i] - sp, hi = s.y[i] + sp;
      if (first) {
        xmin = xmax = s.x[i];
        ymin = lo;
        ymax = hi;
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, lo);
      ymax = std::max(ymax, hi);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ystep = detail::nice_step(ymax - ymin, 5);
  ymin = std::floor(ymin / ystep) * ystep;
  ymax = std::ceil(ymax / ystep) * ystep;
  const double xstep = detail::nice_step(xmax - xmin, 6);

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };
  using detail::svg_number;

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
    << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << opt.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << detail::escape_xml(opt.title) << "</text>\n";
  for (double y = ymin; y <= ymax + 1e-9 * ystep; y += ystep) {
    o << "<line x1=\"" << svg_number(left) << "\" y1=\"" << svg_number(py(y)) << "\" x2=\"" << svg_number(left + pw)
      << "\" y2=\"" << svg_number(py(y)) << "\" stroke=\"#e0e0e0\"/>\n";
    o << "<text x=\"" << svg_number(left - 6) << "\" y=\"" << svg_number(py(y) + 4)
      << "\" text-anchor=\"end\">" << detail::tick_label(y) << "</text>\n";
  }
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep; x += xstep) {
    o << "<line x1=\"" << svg_number(px(x)) << "\" y1=\"" << svg_number(top + ph) << "\" x2=\"" << svg_number(px(x))
      << "\" y2=\"" << svg_number(top + ph + 4) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << svg_number(px(x)) << "\" y=\"" << svg_number(top + ph + 16)
      << "\" text-anchor=\"middle\">" << detail::tick_label(x) << "</text>\n";
  }
  o << "<rect x=\"" << svg_number(left) << "\" y=\"" << svg_number(top) << "\" width=\"" << svg_number(pw)
    << "\" height=\"" << svg_number(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << svg_number(left + pw / 2) << "\" y=\"" << opt.height - 8 << "\" text-anchor=\"middle\">"
    << detail::escape_xml(opt.x_label) << "</text>\n";
  o << "<text x=\"14\" y=\"" << svg_number(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << svg_number(top + ph / 2) << ")\">" << detail::escape_xml(opt.y_label) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const auto idx = detail::thin(s.x.size(), opt.max_points);
    if (!s.spread.empty() && !idx.empty()) {
      o << "<polygon fill=\"" << detail::palette(si) << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
      for (std::size_t i : idx) o << svg_number(px(s.x[i])) << ',' << svg_number(py(s.y[i] + s.spread[i])) << ' ';
      for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        o << svg_number(px(s.x[*it])) << ',' << svg_number(py(s.y[*it] - s.spread[*it])) << ' ';
      }
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << detail::palette(si) << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i : idx) o << svg_number(px(s.x[i])) << ',' << svg_number(py(s.y[i])) << ' ';
    o << "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(si);
    o << "<line x1=\"" << svg_number(left + 10) << "\" y1=\"" << svg_number(ly) << "\" x2=\"" << svg_number(left + 30)
      << "\" y2=\"" << svg_number(ly) << "\" stroke=\"" << detail::palette(si) << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << svg_number(left + 36) << "\" y=\"" << svg_number(ly + 4) << "\">"
      << detail::escape_xml(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace modal::harness
