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

#include "aggclear/market_model.hpp"

namespace aggclear {

/// Parameters of the pseudo-random scenario generator. Defaults follow the
/// magnitude of typical day-ahead order books: prices 40-80 EUR/MWh,
/// quantities 20-100 MWh.
struct GeneratorParams {
  int n_demand = 50;   // demand bids per period
  int n_supply = 50;   // supply bids per period
  int num_periods = 1;
  double block_ratio = 0.0;  // blocks = round(ratio * (n_demand + n_supply))
  double price_min = 40.0;
  double price_max = 80.0;
  double qty_min = 20.0;
  double qty_max = 100.0;
  double min_ratio_prob = 0.0;  // chance an hourly bid gets a minimum ratio
  double min_ratio_min = 0.1;
  double min_ratio_max = 0.9;
  double startup_prob = 0.0;    // chance an hourly bid gets a start-up cost
  double startup_min = 10.0;
  double startup_max = 300.0;
  std::uint64_t seed = 0;
};

/// Deterministic generation: the same params produce a bit-identical
/// scenario. Hourly bid ids are "d<k>" / "s<k>", block ids "b<k>". Block
/// bids draw a uniform consecutive span within 0..T-1 and split demand and
/// supply 50/50. Throws std::invalid_argument on invalid ranges.
Scenario generate(const GeneratorParams& params);

/// Mixes experiment coordinates into a per-case seed (splitmix64-based).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c);

}  // namespace aggclear
