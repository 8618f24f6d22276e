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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aggclear/market_model.hpp"

namespace aggclear::testing {

inline HourlyBid hourly(std::string id, int period, double quantity,
                        double price, double min_ratio = 0.0,
                        double startup_cost = 0.0) {
  HourlyBid bid;
  bid.id = std::move(id);
  bid.period = period;
  bid.quantity = quantity;
  bid.price = price;
  bid.min_ratio = min_ratio;
  bid.startup_cost = startup_cost;
  return bid;
}

inline BlockBid block(std::string id, int first, int last, double quantity,
                      double price) {
  BlockBid bid;
  bid.id = std::move(id);
  bid.first_period = first;
  bid.last_period = last;
  bid.quantity = quantity;
  bid.price = price;
  return bid;
}

// The six demand and six supply offers of the single-period worked example.
inline Scenario worked_example() {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {
      hourly("1", 0, 23.0, 78.0),  hourly("2", 0, 67.0, 65.0),
      hourly("3", 0, 27.0, 57.0),  hourly("4", 0, 30.0, 55.0),
      hourly("5", 0, 91.0, 45.0),  hourly("6", 0, 90.0, 42.0),
      hourly("7", 0, -96.0, 40.0), hourly("8", 0, -71.0, 42.0),
      hourly("9", 0, -41.0, 47.0), hourly("10", 0, -80.0, 52.0),
      hourly("11", 0, -99.0, 57.0), hourly("12", 0, -99.0, 58.0),
  };
  return s;
}

// Its known optimum: bids 1-4 and 7-8 fully accepted, bid 5 at 20/91,
// everything else rejected.
inline ClearingSolution worked_example_optimum() {
  ClearingSolution sol;
  sol.status = SolveStatus::Optimal;
  sol.x = {{"1", 1.0}, {"2", 1.0},       {"3", 1.0},  {"4", 1.0},
           {"5", 20.0 / 91.0}, {"6", 0.0}, {"7", 1.0},  {"8", 1.0},
           {"9", 0.0}, {"10", 0.0},      {"11", 0.0}, {"12", 0.0}};
  for (const auto& [id, _] : sol.x) sol.u_hourly[id] = 1;
  sol.tsw = 3416.0;
  return sol;
}

// Small random instances for property tests. Quantities and prices follow
// the worked example's magnitude; binaries (blocks, min ratios, start-up
// costs) are optional and capped.
struct RandomInstanceOptions {
  int max_bids_per_side = 8;
  int max_periods = 1;
  int max_blocks = 0;
  double min_ratio_prob = 0.0;
  double startup_prob = 0.0;
  int max_binaries = 32;
};

inline Scenario random_instance(std::mt19937_64& rng,
                                const RandomInstanceOptions& opt) {
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * unit(); };
  auto below = [&](int n) {
    return std::min(n - 1, static_cast<int>(unit() * n));
  };

  Scenario s;
  s.num_periods = 1 + below(opt.max_periods);
  int id = 0;
  int binaries = 0;
  for (int t = 0; t < s.num_periods; ++t) {
    int n_demand = 1 + below(opt.max_bids_per_side);
    int n_supply = 1 + below(opt.max_bids_per_side);
    for (int i = 0; i < n_demand + n_supply; ++i) {
      bool demand = i < n_demand;
      double qty = range(20.0, 100.0);
      HourlyBid bid = hourly("h" + std::to_string(id++), t,
                             demand ? qty : -qty, range(40.0, 80.0));
      if (binaries < opt.max_binaries && unit() < opt.min_ratio_prob) {
        bid.min_ratio = range(0.1, 0.9);
        ++binaries;
      }
      if (bid.min_ratio == 0.0 && binaries < opt.max_binaries &&
          unit() < opt.startup_prob) {
        bid.startup_cost = range(10.0, 300.0);
        ++binaries;
      }
      s.hourly_bids.push_back(bid);
    }
  }
  int blocks = opt.max_blocks > 0 ? below(opt.max_blocks + 1) : 0;
  for (int k = 0; k < blocks && binaries < opt.max_binaries; ++k) {
    int len = 1 + below(s.num_periods);
    int first = below(s.num_periods - len + 1);
    bool demand = unit() < 0.5;
    double qty = range(20.0, 100.0);
    s.block_bids.push_back(block("blk" + std::to_string(k), first,
                                 first + len - 1, demand ? qty : -qty,
                                 range(40.0, 80.0)));
    ++binaries;
  }
  return s;
}

}  // namespace aggclear::testing
