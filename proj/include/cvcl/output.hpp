// Copyright 2026 The cvcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cvcl/common.hpp"

namespace cvcl {

/// Locale-free scientific formatting with 17 significant digits, enough for
/// exact double round-trips and byte-stable reruns.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

/// CSV table with a fixed column set. Non-finite values are rejected unless
/// the column is explicitly allowed to diverge.
class CsvTable {
 public:
  struct Column {
    std::string name;
    bool may_diverge = false;
  };

  explicit CsvTable(std::vector<Column> columns) : columns_(std::move(columns)) {}

  void add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
      throw numeric_error("CsvTable: row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!std::isfinite(values[i]) && !columns_[i].may_diverge)
        throw numeric_error("CsvTable: non-finite value in column '" +
                            columns_[i].name + "'");
    rows_.push_back(values);
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out += ',';
      out += columns_[i].name;
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += format_real(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("cannot write '" + path + "'");
    f << to_string();
  }

  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Minimal polyline SVG plot, no plotting dependency. Axis ticks carry
/// numeric labels; input order gives the polyline order.
inline std::string render_svg_polyline(const std::vector<double>& xs,
                                       const std::vector<double>& ys,
                                       const std::string& x_label,
                                       const std::string& y_label,
                                       const std::string& title) {
  if (xs.size() != ys.size() || xs.empty())
    throw error("render_svg_polyline: need matching non-empty series");
  const double w = 800, h = 500, ml = 90, mr = 30, mt = 50, mb = 60;
  double x0 = *std::min_element(xs.begin(), xs.end());
  double x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end());
  double y1 = *std::max_element(ys.begin(), ys.end());
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return std::string(buf);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n";
  svg += "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" + title +
         "</text>\n";
  // axes
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(h - mb) + "\" x2=\"" + num(w - mr) +
         "\" y2=\"" + num(h - mb) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) +
         "\" y2=\"" + num(h - mb) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 + (y1 - y0) * i / 4.0;
    svg += "<line x1=\"" + num(px(fx)) + "\" y1=\"" + num(h - mb) + "\" x2=\"" +
           num(px(fx)) + "\" y2=\"" + num(h - mb + 6) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(px(fx)) + "\" y=\"" + num(h - mb + 22) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + num(fx) + "</text>\n";
    svg += "<line x1=\"" + num(ml - 6) + "\" y1=\"" + num(py(fy)) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(py(fy)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(ml - 10) + "\" y=\"" + num(py(fy) + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + num(fy) + "</text>\n";
  }
  svg += "<text x=\"" + num((ml + w - mr) / 2) + "\" y=\"" + num(h - 14) +
         "\" text-anchor=\"middle\" font-size=\"14\">" + x_label + "</text>\n";
  svg += "<text x=\"20\" y=\"" + num((mt + h - mb) / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
         num((mt + h - mb) / 2) + ")\">" + y_label + "</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) svg += ' ';
    svg += num(px(xs[i])) + "," + num(py(ys[i]));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error("cannot write '" + path + "'");
  f << content;
}

}  // namespace cvcl
