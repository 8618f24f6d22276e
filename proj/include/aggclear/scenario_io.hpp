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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aggclear/market_model.hpp"

namespace aggclear {

/// Raised on unreadable files or malformed scenario documents.
class ScenarioIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario document:
///   {"num_periods": T,
///    "hourly_bids": [{"id","period","quantity","price","min_ratio","startup_cost"}],
///    "block_bids":  [{"id","first_period","last_period","quantity","price"}]}
/// Numeric ids are coerced to their decimal string form on input.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& s, const std::string& path);

/// Solution document: {"status", "tsw", "x": {id: fraction},
/// "u": {id: 0|1}, "metadata": {...}}. The metadata block carries solver
/// statistics and, for two-step runs, step1_tsw, distinguished_ids, rhs and
/// timings_ms.
nlohmann::json solution_to_json(const ClearingSolution& sol);

/// Decomposition map, for debugging aggregation: {aggregated_id: [ids]}.
nlohmann::json decomposition_to_json(
    const std::map<BidId, std::vector<BidId>>& components);

}  // namespace aggclear
