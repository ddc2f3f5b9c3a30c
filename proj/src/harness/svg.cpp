// Copyright 2026 The gradissect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gradissect/harness/svg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "gradissect/core/error.hpp"
#include "gradissect/harness/csv.hpp"

namespace gradissect::harness {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

}  // namespace

std::string svg_plot(std::span<const PlotSeries> series, const std::string& title, bool log_y) {
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kLeft) + "\" y=\"20\" font-size=\"13\">" + escape(title) + "</text>\n";
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0;
    const double fy = y0 + (y1 - y0) * k / 4.0;
    const double ly = log_y ? std::pow(10.0, fy) : fy;
    out += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
           short_num(fx) + "</text>\n";
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(ly) + 4) + "\" text-anchor=\"end\">" +
           short_num(ly) + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\">step</text>\n";
  out += std::string("<text x=\"14\" y=\"") + num(kTop + ph / 2) + "\" transform=\"rotate(-90 14 " +
         num(kTop + ph / 2) + ")\" text-anchor=\"middle\">" + (log_y ? "loss (log)" : "loss") + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (log_y && s.y[i] <= 0.0)) continue;
      points += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(k + 1);
    out += "<line x1=\"" + num(kWidth - kRight + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(kWidth - kRight + 30) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(kWidth - kRight + 34) + "\" y=\"" + num(ly) + "\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::vector<PlotSeries> seed_mean_series(std::span<const RunRecord> records, const std::string& experiment) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    if (r.meta.experiment != experiment) continue;
    if (!groups.contains(r.meta.method)) order.push_back(r.meta.method);
    groups[r.meta.method].push_back(&r);
  }
  std::vector<PlotSeries> out;
  for (const std::string& method : order) {
    const auto& runs = groups[method];
    std::size_t n = runs.front()->rows.size();
    for (const RunRecord* r : runs) n = std::min(n, r->rows.size());
    PlotSeries s{method, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const RunRecord* r : runs) sum += r->rows[i].loss;
      s.x.push_back(static_cast<double>(runs.front()->rows[i].step));
      s.y.push_back(sum / static_cast<double>(runs.size()));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::filesystem::path> emit_svg(std::span<const RunRecord> records, const std::filesystem::path& dir,
                                            const std::string& stem, bool log_y) {
  require(!records.empty(), "emit_svg: records must be non-empty");
  std::vector<std::string> experiments;
  for (const RunRecord& r : records) {
    if (std::find(experiments.begin(), experiments.end(), r.meta.experiment) == experiments.end()) {
      experiments.push_back(r.meta.experiment);
    }
  }
  std::vector<std::filesystem::path> paths;
  for (const std::string& e : experiments) {
    const auto series = seed_mean_series(records, e);
    const std::filesystem::path p = dir / (stem + "_" + sanitize(e) + ".svg");
    write_text_file(p, svg_plot(series, e, log_y));
    paths.push_back(p);
  }
  return paths;
}

}  // namespace gradissect::harness
