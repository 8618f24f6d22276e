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

#include <cmath>
#include <optional>
#include <vector>

#include "aggclear/market_model.hpp"
#include "aggclear/merit_order.hpp"

namespace aggclear::testing {

// Brute-force reference for max sum(price*qty*x) s.t. sum(qty*x) = target,
// x in [0,1]: enumerates every vertex support (all variables at a bound,
// at most one fractional). Independent of the greedy merit-order path.
inline std::optional<double> lp_vertex_oracle(
    const std::vector<double>& quantity, const std::vector<double>& price,
    double target, double tol = 1e-7) {
  const int n = static_cast<int>(quantity.size());
  std::optional<double> best;

  auto consider = [&](double objective) {
    if (!best || objective > *best) best = objective;
  };

  for (int mask = 0; mask < (1 << n); ++mask) {
    double balance = 0.0;
    double objective = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        balance += quantity[static_cast<std::size_t>(i)];
        objective += quantity[static_cast<std::size_t>(i)] *
                     price[static_cast<std::size_t>(i)];
      }
    }
    if (std::abs(balance - target) <= tol) consider(objective);
    for (int f = 0; f < n; ++f) {
      if (mask & (1 << f)) continue;  // fractional var is outside the mask
      double w = quantity[static_cast<std::size_t>(f)];
      if (w == 0.0) continue;
      double x = (target - balance) / w;
      if (x < -1e-12 || x > 1.0 + 1e-12) continue;
      x = std::min(std::max(x, 0.0), 1.0);
      consider(objective +
               x * w * price[static_cast<std::size_t>(f)]);
    }
  }
  return best;
}

// Exhaustive reference for the full problem: tries every 0/1 assignment of
// the scenario's binaries and dispatches the rest by merit order.
inline ClearingSolution enumeration_oracle(const Scenario& s,
                                           const ClearingConfig& cfg,
                                           const RhsVector& rhs) {
  std::vector<const HourlyBid*> hourly_binaries;
  for (const auto& bid : s.hourly_bids)
    if (bid.has_binary()) hourly_binaries.push_back(&bid);
  const int k =
      static_cast<int>(s.block_bids.size() + hourly_binaries.size());

  ClearingSolution best;
  best.status = SolveStatus::Infeasible;
  for (long mask = 0; mask < (1L << k); ++mask) {
    FixedBinaryAssignment fixed;
    int bit = 0;
    for (const auto& blk : s.block_bids)
      fixed.u_block[blk.id] = (mask >> bit++) & 1;
    for (const auto* bid : hourly_binaries)
      fixed.u_hourly[bid->id] = (mask >> bit++) & 1;
    ClearingSolution sol = clear_all_periods(s, fixed, rhs, cfg);
    if (sol.status != SolveStatus::Optimal) continue;
    if (best.status == SolveStatus::Infeasible || sol.tsw > best.tsw)
      best = sol;
  }
  return best;
}

inline ClearingSolution enumeration_oracle(const Scenario& s,
                                           const ClearingConfig& cfg = {}) {
  return enumeration_oracle(s, cfg, zero_rhs(s));
}

}  // namespace aggclear::testing
