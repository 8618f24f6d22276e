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

#include "aggclear/scenario_gen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace aggclear {

namespace {

// mt19937_64 with an explicit [0,1) mapping keeps the stream independent of
// the standard library's distribution implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // uniform integer in [0, n)
  int below(int n) {
    return std::min(n - 1, static_cast<int>(unit() * n));
  }

 private:
  std::mt19937_64 rng_;
};

void validate(const GeneratorParams& p) {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (p.n_demand < 0 || p.n_supply < 0) fail("generate: negative bid count");
  if (p.num_periods < 1) fail("generate: num_periods must be >= 1");
  if (!(p.block_ratio >= 0.0 && p.block_ratio <= 1.0))
    fail("generate: block_ratio out of [0,1]");
  if (!(p.price_min <= p.price_max)) fail("generate: bad price range");
  if (!(0.0 < p.qty_min && p.qty_min <= p.qty_max))
    fail("generate: bad quantity range");
  if (!(p.min_ratio_prob >= 0.0 && p.min_ratio_prob <= 1.0))
    fail("generate: bad min_ratio_prob");
  if (!(0.0 < p.min_ratio_min && p.min_ratio_min <= p.min_ratio_max &&
        p.min_ratio_max <= 1.0))
    fail("generate: bad min_ratio range");
  if (!(p.startup_prob >= 0.0 && p.startup_prob <= 1.0))
    fail("generate: bad startup_prob");
  if (!(0.0 <= p.startup_min && p.startup_min <= p.startup_max))
    fail("generate: bad startup range");
}

}  // namespace

Scenario generate(const GeneratorParams& p) {
  validate(p);

  Uniform rng(p.seed);
  Scenario s;
  s.num_periods = p.num_periods;

  int demand_count = 0;
  int supply_count = 0;
  auto make_hourly = [&](int period, bool demand) {
    HourlyBid bid;
    bid.id = demand ? "d" + std::to_string(demand_count++)
                    : "s" + std::to_string(supply_count++);
    bid.period = period;
    double qty = rng.range(p.qty_min, p.qty_max);
    bid.quantity = demand ? qty : -qty;
    bid.price = rng.range(p.price_min, p.price_max);
    if (p.min_ratio_prob > 0.0 && rng.unit() < p.min_ratio_prob)
      bid.min_ratio = rng.range(p.min_ratio_min, p.min_ratio_max);
    if (p.startup_prob > 0.0 && rng.unit() < p.startup_prob)
      bid.startup_cost = rng.range(p.startup_min, p.startup_max);
    return bid;
  };

  for (int t = 0; t < p.num_periods; ++t) {
    for (int i = 0; i < p.n_demand; ++i)
      s.hourly_bids.push_back(make_hourly(t, true));
    for (int i = 0; i < p.n_supply; ++i)
      s.hourly_bids.push_back(make_hourly(t, false));
  }

  long n_blocks = std::lround(p.block_ratio * (p.n_demand + p.n_supply));
  for (long k = 0; k < n_blocks; ++k) {
    BlockBid blk;
    blk.id = "b" + std::to_string(k);
    int len = 1 + rng.below(p.num_periods);
    blk.first_period = rng.below(p.num_periods - len + 1);
    blk.last_period = blk.first_period + len - 1;
    bool demand = rng.unit() < 0.5;
    double qty = rng.range(p.qty_min, p.qty_max);
    blk.quantity = demand ? qty : -qty;
    blk.price = rng.range(p.price_min, p.price_max);
    s.block_bids.push_back(blk);
  }
  return s;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
  // splitmix64 steps over the combined coordinates
  std::uint64_t z = base;
  for (std::uint64_t v : {a, b, c}) {
    z += 0x9e3779b97f4a7c15ULL + v;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
  }
  return z;
}

}  // namespace aggclear
