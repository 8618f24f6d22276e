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
#include <map>
#include <span>
#include <vector>

#include "aggclear/market_model.hpp"

namespace aggclear {

/// Values for every binary indicator of a scenario: all block bids, and the
/// hourly bids that carry a binary (min_ratio > 0 or startup_cost > 0).
struct FixedBinaryAssignment {
  std::map<BidId, int> u_hourly;
  std::map<BidId, int> u_block;
};

/// Per-period target of the balance equation, length num_periods. The
/// original problem uses all zeros; the second clearing step compensates
/// fixed bids through nonzero entries.
using RhsVector = std::vector<double>;

RhsVector zero_rhs(const Scenario& s);

/// Result of dispatching the hourly bids of one period.
struct PeriodDispatch {
  bool feasible = false;
  std::map<BidId, double> x;  // every input bid, 0 for switched-off units
  double welfare = 0.0;       // sum Q*P*x; start-up costs are not included
};

/// Welfare-maximal continuous dispatch of one period's hourly bids, meeting
/// sum Q_i x_i = rhs. Bids fixed to u = 0 get x = 0; bids fixed to u = 1 with
/// min_ratio r are dispatched on x in [r, 1] via the substitution
/// x = r + (1-r) y. The remaining single-equality box LP is solved greedily
/// by marginal welfare per MWh of balance movement; equal prices are filled
/// lower id first.
///
/// All bids must belong to the same period, and every binary-carrying bid
/// must appear in `fixed` (std::invalid_argument otherwise). An unreachable
/// rhs yields feasible = false.
PeriodDispatch clear_period(std::span<const HourlyBid> bids,
                            const FixedBinaryAssignment& fixed, double rhs,
                            const ClearingConfig& cfg = {});

/// Dispatches every period of a scenario once all binaries are fixed. Block
/// bids with u = 1 contribute their quantity to each covered period's balance
/// and their welfare to the total; start-up costs of switched-on hourly units
/// are subtracted. Returns status Infeasible when any period is unreachable.
ClearingSolution clear_all_periods(const Scenario& s,
                                   const FixedBinaryAssignment& fixed,
                                   const RhsVector& rhs,
                                   const ClearingConfig& cfg = {});

ClearingSolution clear_all_periods(const Scenario& s,
                                   const FixedBinaryAssignment& fixed,
                                   const ClearingConfig& cfg = {});

namespace detail {

/// One variable of the single-balance LP: maximize sum price*weight*y
/// subject to sum weight*y = target, y in [0,1]. `weight` is the signed
/// balance contribution at y = 1.
struct MeritVar {
  double price = 0.0;
  double weight = 0.0;
  std::uint32_t tag = 0;  // caller-defined back reference
};

struct MeritOutcome {
  bool feasible = false;
  double objective = 0.0;
};

/// Core greedy solve. `vars` must be sorted ascending by price (ties in the
/// caller's preferred order); y_out must have vars.size() entries. `slack`
/// is the absolute feasibility tolerance on the reachable interval.
MeritOutcome solve_single_balance(std::span<const MeritVar> vars,
                                  double target, std::span<double> y_out,
                                  double slack);

}  // namespace detail

}  // namespace aggclear
