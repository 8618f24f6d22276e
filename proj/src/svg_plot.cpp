// Copyright 2026 The aggclear authors
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

#include "aggclear/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace aggclear {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool to_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = value;
  return true;
}

std::string fmt(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

int find_column(const CsvTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    if (table.header[i] == name) return static_cast<int>(i);
  return -1;
}

// Smallest of 1/2/5 * 10^k not below `raw`.
double nice_step(double raw) {
  if (raw <= 0.0) return 1.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) return mag * m;
  }
  return mag * 10.0;
}

struct Series {
  std::string label;
  std::vector<double> values;  // one per group, NaN when absent
};

const char* kPalette[] = {"#4472c4", "#c0504d", "#70ad47",
                          "#8064a2", "#f2a33c", "#4bacc6"};

}  // namespace

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != table.header.size())
      throw std::runtime_error("csv row has " + std::to_string(fields.size()) +
                               " fields, header has " +
                               std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::string render_bar_chart_svg(const CsvTable& table) {
  const double width = 800, height = 480;
  const double left = 70, right = 24, top = 32, bottom = 64;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  int group_col = find_column(table, "n_bids");
  if (group_col < 0 && !table.header.empty()) group_col = 0;
  int ratio_col = find_column(table, "block_ratio");
  int hit_col = find_column(table, "hit_rate_pct");
  int exact_col = find_column(table, "t_exact_s");
  int agg_col = find_column(table, "t_agg_s");

  // Hit-rate tables use the block ratio as the series dimension; everything
  // else folds a second ratio into the group label so rows stay distinct.
  std::vector<std::string> distinct_ratios;
  if (ratio_col >= 0) {
    for (const auto& row : table.rows) {
      const std::string& r = row[static_cast<std::size_t>(ratio_col)];
      if (std::find(distinct_ratios.begin(), distinct_ratios.end(), r) ==
          distinct_ratios.end())
        distinct_ratios.push_back(r);
    }
  }
  bool ratio_in_group = hit_col < 0 && distinct_ratios.size() > 1;
  auto group_of = [&](const std::vector<std::string>& row) {
    std::string g = row[static_cast<std::size_t>(group_col)];
    if (ratio_in_group)
      g += " @" + row[static_cast<std::size_t>(ratio_col)];
    return g;
  };

  // Ordered distinct group labels.
  std::vector<std::string> groups;
  for (const auto& row : table.rows) {
    std::string g = group_of(row);
    if (std::find(groups.begin(), groups.end(), g) == groups.end())
      groups.push_back(g);
  }
  auto group_index = [&](const std::string& g) {
    return static_cast<std::size_t>(
        std::find(groups.begin(), groups.end(), g) - groups.begin());
  };

  std::vector<Series> series;
  std::string y_label;
  auto nan = std::nan("");
  if (hit_col >= 0) {
    y_label = "hit_rate_pct";
    // One series per distinct block ratio.
    if (distinct_ratios.empty()) distinct_ratios.push_back("");
    for (const auto& r : distinct_ratios) {
      Series s;
      s.label = r.empty() ? "hit rate" : "blocks " + r;
      s.values.assign(groups.size(), nan);
      series.push_back(std::move(s));
    }
    for (const auto& row : table.rows) {
      std::string r =
          ratio_col >= 0 ? row[static_cast<std::size_t>(ratio_col)] : "";
      std::size_t si = static_cast<std::size_t>(
          std::find(distinct_ratios.begin(), distinct_ratios.end(), r) -
          distinct_ratios.begin());
      double v;
      if (to_number(row[static_cast<std::size_t>(hit_col)], &v))
        series[si].values[group_index(group_of(row))] = v;
    }
  } else if (exact_col >= 0 && agg_col >= 0) {
    y_label = "seconds";
    Series exact{"exact", std::vector<double>(groups.size(), nan)};
    Series agg{"aggregated", std::vector<double>(groups.size(), nan)};
    for (const auto& row : table.rows) {
      std::size_t gi = group_index(group_of(row));
      double v;
      if (to_number(row[static_cast<std::size_t>(exact_col)], &v))
        exact.values[gi] = v;
      if (to_number(row[static_cast<std::size_t>(agg_col)], &v))
        agg.values[gi] = v;
    }
    series.push_back(std::move(exact));
    series.push_back(std::move(agg));
  } else {
    // Generic: every numeric column besides the group column.
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (static_cast<int>(c) == group_col) continue;
      bool numeric = !table.rows.empty();
      for (const auto& row : table.rows) {
        double v;
        if (!to_number(row[c], &v)) {
          numeric = false;
          break;
        }
      }
      if (!numeric) continue;
      Series s{table.header[c], std::vector<double>(groups.size(), nan)};
      for (const auto& row : table.rows) {
        double v;
        to_number(row[c], &v);
        s.values[group_index(group_of(row))] = v;
      }
      series.push_back(std::move(s));
    }
  }

  double max_value = 0.0;
  for (const auto& s : series)
    for (double v : s.values)
      if (!std::isnan(v)) max_value = std::max(max_value, v);
  double step = nice_step(max_value / 5.0);
  double y_max = max_value > 0.0 ? step * std::ceil(max_value / step) : 1.0;

  auto y_px = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";

  // axes + horizontal grid
  for (double v = 0.0; v <= y_max + 1e-9; v += step) {
    double y = y_px(v);
    svg << "<line x1=\"" << left << "\" y1=\"" << fmt(y) << "\" x2=\""
        << left + plot_w << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    if (step <= 0.0) break;
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\" stroke=\"#333333\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h
      << "\" stroke=\"#333333\"/>\n";

  // bars
  if (!groups.empty() && !series.empty()) {
    double group_w = plot_w / static_cast<double>(groups.size());
    double slot_w = group_w / static_cast<double>(series.size() + 1);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      double gx = left + group_w * static_cast<double>(gi);
      for (std::size_t si = 0; si < series.size(); ++si) {
        double v = series[si].values[gi];
        if (std::isnan(v)) continue;
        double x = gx + slot_w * (0.5 + static_cast<double>(si));
        double y = y_px(v);
        svg << "<rect class=\"bar\" x=\"" << fmt(x) << "\" y=\"" << fmt(y)
            << "\" width=\"" << fmt(slot_w) << "\" height=\""
            << fmt(top + plot_h - y) << "\" fill=\""
            << kPalette[si % std::size(kPalette)] << "\"/>\n";
      }
      svg << "<text x=\"" << fmt(gx + group_w / 2) << "\" y=\""
          << fmt(top + plot_h + 18) << "\" text-anchor=\"middle\">"
          << groups[gi] << "</text>\n";
    }
  }

  // axis titles
  if (group_col >= 0 && !table.header.empty()) {
    svg << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\""
        << fmt(height - 16) << "\" text-anchor=\"middle\">"
        << table.header[static_cast<std::size_t>(group_col)] << "</text>\n";
  }
  if (!y_label.empty()) {
    svg << "<text x=\"16\" y=\"" << fmt(top + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt(top + plot_h / 2) << ")\">" << y_label << "</text>\n";
  }

  // legend
  if (series.size() > 1) {
    double lx = left + plot_w - 150;
    double ly = top + 6;
    for (std::size_t si = 0; si < series.size(); ++si) {
      svg << "<rect class=\"legend\" x=\"" << fmt(lx) << "\" y=\""
          << fmt(ly + 18 * static_cast<double>(si)) << "\" width=\"12\" "
          << "height=\"12\" fill=\"" << kPalette[si % std::size(kPalette)]
          << "\"/>\n";
      svg << "<text x=\"" << fmt(lx + 18) << "\" y=\""
          << fmt(ly + 18 * static_cast<double>(si) + 10) << "\">"
          << series[si].label << "</text>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace aggclear
