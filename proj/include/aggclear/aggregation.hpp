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
#include <span>
#include <vector>

#include "aggclear/market_model.hpp"

namespace aggclear {

/// Synthetic bid replacing a cluster of same-period, same-side hourly bids:
/// quantity and start-up cost are summed, price and minimum ratio are
/// quantity-weighted means. Component ids are kept so the aggregate can be
/// decomposed again after the first clearing step.
struct AggregatedBid {
  BidId id;
  int period = 0;
  double quantity = 0.0;
  double price = 0.0;
  double min_ratio = 0.0;
  double startup_cost = 0.0;
  std::vector<BidId> component_ids;

  HourlyBid to_hourly() const;
};

/// Aggregates a non-empty cluster. All bids must share one period and one
/// quantity sign (std::invalid_argument otherwise). A singleton cluster
/// aggregates to a bid with identical (Q, P, r, F).
AggregatedBid aggregate_bids(std::span<const HourlyBid> bids, BidId id = "A");

/// Partitions same-period, same-side bids into at most `bins` equal-width
/// price bins over [min price, max price]; empty bins are dropped. Clusters
/// are returned in merit order (descending price for demand, ascending for
/// supply), bids within a cluster likewise.
std::vector<std::vector<HourlyBid>> nominal_partition(
    std::span<const HourlyBid> bids, int bins);

/// Partitions same-period, same-side bids into consecutive groups of
/// `group_size` in merit order.
std::vector<std::vector<HourlyBid>> pairwise_partition(
    std::span<const HourlyBid> bids, int group_size);

/// Default nominal bin count for one period/side: ceil(sqrt(count)).
int default_bin_count(std::size_t bid_count);

struct AggregatedScenario {
  Scenario scenario;  // aggregated hourly bids + original block bids
  std::map<BidId, std::vector<BidId>> components;  // aggregated id -> originals
};

/// Aggregates every (period, side) group of hourly bids per cfg.aggregation.
/// Block bids are copied verbatim and never aggregated. Aggregated ids are
/// "A1", "A2", ... assigned period-major, demand before supply, clusters in
/// merit order (renumbered past any clashing original id).
AggregatedScenario build_aggregated_scenario(const Scenario& s,
                                             const ClearingConfig& cfg = {});

}  // namespace aggclear
