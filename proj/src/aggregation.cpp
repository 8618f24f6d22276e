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

#include "aggclear/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace aggclear {

namespace {

void require_uniform(std::span<const HourlyBid> bids, const char* who) {
  if (bids.empty())
    throw std::invalid_argument(std::string(who) + ": empty bid list");
  int period = bids.front().period;
  bool demand = bids.front().is_demand();
  for (const auto& b : bids) {
    if (b.period != period)
      throw std::invalid_argument(std::string(who) + ": mixed periods");
    if (b.is_demand() != demand)
      throw std::invalid_argument(std::string(who) +
                                  ": mixed demand/supply signs");
  }
}

// Merit order: descending price for demand, ascending for supply; ids break
// ties.
std::vector<HourlyBid> merit_sorted(std::span<const HourlyBid> bids) {
  std::vector<HourlyBid> sorted(bids.begin(), bids.end());
  bool demand = sorted.front().is_demand();
  std::sort(sorted.begin(), sorted.end(),
            [demand](const HourlyBid& a, const HourlyBid& b) {
              if (a.price != b.price)
                return demand ? a.price > b.price : a.price < b.price;
              return natural_id_less(a.id, b.id);
            });
  return sorted;
}

}  // namespace

HourlyBid AggregatedBid::to_hourly() const {
  HourlyBid bid;
  bid.id = id;
  bid.period = period;
  bid.quantity = quantity;
  bid.price = price;
  bid.min_ratio = min_ratio;
  bid.startup_cost = startup_cost;
  return bid;
}

AggregatedBid aggregate_bids(std::span<const HourlyBid> bids, BidId id) {
  require_uniform(bids, "aggregate_bids");

  AggregatedBid agg;
  agg.id = std::move(id);
  agg.period = bids.front().period;
  if (bids.size() == 1) {
    // exact identity; the weighted mean would reintroduce rounding
    const auto& bid = bids.front();
    agg.quantity = bid.quantity;
    agg.price = bid.price;
    agg.min_ratio = bid.min_ratio;
    agg.startup_cost = bid.startup_cost;
    agg.component_ids = {bid.id};
    return agg;
  }
  double qty = 0.0;
  double price_qty = 0.0;
  double ratio_qty = 0.0;
  for (const auto& b : bids) {
    qty += b.quantity;
    price_qty += b.price * b.quantity;
    ratio_qty += b.min_ratio * b.quantity;
    agg.startup_cost += b.startup_cost;
    agg.component_ids.push_back(b.id);
  }
  agg.quantity = qty;
  agg.price = price_qty / qty;
  agg.min_ratio = ratio_qty / qty;
  return agg;
}

int default_bin_count(std::size_t bid_count) {
  return std::max(1, static_cast<int>(std::ceil(
                         std::sqrt(static_cast<double>(bid_count)))));
}

std::vector<std::vector<HourlyBid>> nominal_partition(
    std::span<const HourlyBid> bids, int bins) {
  require_uniform(bids, "nominal_partition");
  if (bins < 1)
    throw std::invalid_argument("nominal_partition: bins must be >= 1");

  auto sorted = merit_sorted(bids);
  double lo = sorted.front().price;
  double hi = lo;
  for (const auto& b : sorted) {
    lo = std::min(lo, b.price);
    hi = std::max(hi, b.price);
  }

  double width = (hi - lo) / bins;
  auto bin_of = [&](double price) {
    if (width <= 0.0) return 0;
    int idx = static_cast<int>((price - lo) / width);
    return std::clamp(idx, 0, bins - 1);
  };

  std::vector<std::vector<HourlyBid>> by_bin(static_cast<std::size_t>(bins));
  for (const auto& b : sorted)
    by_bin[static_cast<std::size_t>(bin_of(b.price))].push_back(b);

  // merit_sorted already ordered bids within each bin; order the bins the
  // same way (demand: high-price bins first).
  std::vector<std::vector<HourlyBid>> clusters;
  bool demand = sorted.front().is_demand();
  for (int k = 0; k < bins; ++k) {
    auto& bin = by_bin[static_cast<std::size_t>(demand ? bins - 1 - k : k)];
    if (!bin.empty()) clusters.push_back(std::move(bin));
  }
  return clusters;
}

std::vector<std::vector<HourlyBid>> pairwise_partition(
    std::span<const HourlyBid> bids, int group_size) {
  require_uniform(bids, "pairwise_partition");
  if (group_size < 1)
    throw std::invalid_argument("pairwise_partition: group size must be >= 1");

  auto sorted = merit_sorted(bids);
  std::vector<std::vector<HourlyBid>> clusters;
  for (std::size_t i = 0; i < sorted.size();
       i += static_cast<std::size_t>(group_size)) {
    std::size_t end =
        std::min(sorted.size(), i + static_cast<std::size_t>(group_size));
    clusters.emplace_back(sorted.begin() + static_cast<std::ptrdiff_t>(i),
                          sorted.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return clusters;
}

AggregatedScenario build_aggregated_scenario(const Scenario& s,
                                             const ClearingConfig& cfg) {
  AggregatedScenario out;
  out.scenario.num_periods = s.num_periods;
  out.scenario.block_bids = s.block_bids;

  std::unordered_set<std::string> taken;
  for (const auto& b : s.hourly_bids) taken.insert(b.id);
  for (const auto& b : s.block_bids) taken.insert(b.id);
  int counter = 0;
  auto next_id = [&] {
    std::string id;
    do {
      id = "A" + std::to_string(++counter);
    } while (taken.count(id) > 0);
    return id;
  };

  auto by_period = hourly_indices_by_period(s);
  for (int t = 0; t < s.num_periods; ++t) {
    for (bool demand : {true, false}) {
      std::vector<HourlyBid> side;
      for (int i : by_period[static_cast<std::size_t>(t)]) {
        const auto& bid = s.hourly_bids[static_cast<std::size_t>(i)];
        if (bid.is_demand() == demand) side.push_back(bid);
      }
      if (side.empty()) continue;

      std::vector<std::vector<HourlyBid>> clusters;
      if (cfg.aggregation.kind == AggregationMode::Kind::Pairwise) {
        clusters = pairwise_partition(side, cfg.aggregation.pairwise_n);
      } else {
        int bins = cfg.aggregation.bins.value_or(default_bin_count(side.size()));
        clusters = nominal_partition(side, bins);
      }
      for (const auto& cluster : clusters) {
        auto agg = aggregate_bids(cluster, next_id());
        out.scenario.hourly_bids.push_back(agg.to_hourly());
        out.components.emplace(agg.id, std::move(agg.component_ids));
      }
    }
  }
  return out;
}

}  // namespace aggclear
