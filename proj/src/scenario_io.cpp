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

#include "aggclear/scenario_io.hpp"

#include <fstream>

#include "aggclear/two_step.hpp"

namespace aggclear {

namespace {

using nlohmann::json;

BidId id_from(const json& value, const char* where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer())
    return std::to_string(value.get<long long>());
  throw ScenarioIoError(std::string(where) + ": id must be a string or integer");
}

double number_from(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw ScenarioIoError(std::string(where) + ": missing numeric field '" +
                          key + "'");
  return it->get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number())
    throw ScenarioIoError(std::string("field '") + key + "' must be numeric");
  return it->get<double>();
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioIoError("scenario: not a JSON object");
  Scenario s;
  s.num_periods =
      static_cast<int>(number_from(doc, "num_periods", "scenario"));

  if (auto it = doc.find("hourly_bids"); it != doc.end()) {
    if (!it->is_array())
      throw ScenarioIoError("scenario: hourly_bids must be an array");
    for (const auto& item : *it) {
      HourlyBid bid;
      bid.id = id_from(item.value("id", json()), "hourly bid");
      bid.period = static_cast<int>(number_from(item, "period", "hourly bid"));
      bid.quantity = number_from(item, "quantity", "hourly bid");
      bid.price = number_from(item, "price", "hourly bid");
      bid.min_ratio = number_or(item, "min_ratio", 0.0);
      bid.startup_cost = number_or(item, "startup_cost", 0.0);
      s.hourly_bids.push_back(std::move(bid));
    }
  }
  if (auto it = doc.find("block_bids"); it != doc.end()) {
    if (!it->is_array())
      throw ScenarioIoError("scenario: block_bids must be an array");
    for (const auto& item : *it) {
      BlockBid bid;
      bid.id = id_from(item.value("id", json()), "block bid");
      bid.first_period =
          static_cast<int>(number_from(item, "first_period", "block bid"));
      bid.last_period =
          static_cast<int>(number_from(item, "last_period", "block bid"));
      bid.quantity = number_from(item, "quantity", "block bid");
      bid.price = number_from(item, "price", "block bid");
      s.block_bids.push_back(std::move(bid));
    }
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json hourly = json::array();
  for (const auto& bid : s.hourly_bids) {
    hourly.push_back({{"id", bid.id},
                      {"period", bid.period},
                      {"quantity", bid.quantity},
                      {"price", bid.price},
                      {"min_ratio", bid.min_ratio},
                      {"startup_cost", bid.startup_cost}});
  }
  json blocks = json::array();
  for (const auto& bid : s.block_bids) {
    blocks.push_back({{"id", bid.id},
                      {"first_period", bid.first_period},
                      {"last_period", bid.last_period},
                      {"quantity", bid.quantity},
                      {"price", bid.price}});
  }
  return json{{"num_periods", s.num_periods},
              {"hourly_bids", std::move(hourly)},
              {"block_bids", std::move(blocks)}};
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioIoError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ScenarioIoError(path + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario_file(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioIoError("cannot open " + path + " for writing");
  out << scenario_to_json(s).dump(2) << "\n";
}

json solution_to_json(const ClearingSolution& sol) {
  json x = json::object();
  for (const auto& [id, value] : sol.x) x[id] = value;
  json u = json::object();
  for (const auto& [id, value] : sol.u_hourly) u[id] = value;
  for (const auto& [id, value] : sol.u_block) u[id] = value;

  json metadata = {{"solver",
                    {{"nodes_explored", sol.stats.nodes_explored},
                     {"nodes_pruned", sol.stats.nodes_pruned},
                     {"node_limit_hit", sol.stats.node_limit_hit},
                     {"time_ms", sol.stats.time_ms}}}};
  if (sol.two_step) {
    const TwoStepTrace& trace = *sol.two_step;
    json distinguished = json::array();
    for (const auto& set : trace.distinguished) {
      json ids = json::array();
      for (const auto& id : set.ids) ids.push_back(id);
      distinguished.push_back(std::move(ids));
    }
    metadata["step1_tsw"] = trace.step1_tsw;
    metadata["distinguished_ids"] = std::move(distinguished);
    metadata["rhs"] = trace.rhs;
    metadata["timings_ms"] = {{"aggregate", trace.aggregate_ms},
                              {"step1", trace.step1_ms},
                              {"step2", trace.step2_ms}};
    metadata["fallback_exact"] = trace.fallback_exact;
    json step1_u = json::object();
    for (const auto& [id, value] : trace.step1_u_block) step1_u[id] = value;
    metadata["step1_u_block"] = std::move(step1_u);
  }

  return json{{"status", to_string(sol.status)},
              {"tsw", sol.tsw},
              {"x", std::move(x)},
              {"u", std::move(u)},
              {"metadata", std::move(metadata)}};
}

json decomposition_to_json(
    const std::map<BidId, std::vector<BidId>>& components) {
  json doc = json::object();
  for (const auto& [agg_id, ids] : components) {
    json list = json::array();
    for (const auto& id : ids) list.push_back(id);
    doc[agg_id] = std::move(list);
  }
  return doc;
}

}  // namespace aggclear
