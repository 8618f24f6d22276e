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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aggclear {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Minimal reader for the CSVs this project writes (comma separated, no
/// quoting). Throws std::runtime_error when a row's field count does not
/// match the header.
CsvTable parse_csv(std::istream& in);

/// Renders a hit-rate or timing CSV as a deterministic grouped bar chart.
/// Groups follow the n_bids column; series are t_exact_s/t_agg_s for timing
/// tables, one series per block_ratio for hit-rate tables, and every numeric
/// column otherwise. An empty table yields an empty-axes document.
std::string render_bar_chart_svg(const CsvTable& table);

}  // namespace aggclear
