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
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aggclear {

using BidId = std::string;

/// Orders "2" before "10": all-digit ids compare numerically (by length,
/// then lexicographically), everything else falls back to plain string order.
bool natural_id_less(const std::string& a, const std::string& b);

/// Single-period order. Sign of `quantity` encodes the side: positive is
/// demand (consumption), negative is supply (production). A bid with
/// `min_ratio > 0` or `startup_cost > 0` carries a binary on/off indicator:
/// when the unit is on, the accepted fraction x must lie in [min_ratio, 1];
/// when off, x = 0 and no start-up cost is incurred.
struct HourlyBid {
  BidId id;
  int period = 0;
  double quantity = 0.0;      // MWh, > 0 demand, < 0 supply
  double price = 0.0;         // EUR/MWh
  double min_ratio = 0.0;     // in [0,1]
  double startup_cost = 0.0;  // EUR, >= 0

  bool is_demand() const { return quantity > 0.0; }
  bool has_binary() const { return min_ratio > 0.0 || startup_cost > 0.0; }
};

/// Fill-or-kill order spanning the consecutive periods
/// [first_period, last_period]. The same quantity and price apply to every
/// covered period; the bid is accepted in all of them or in none.
struct BlockBid {
  BidId id;
  int first_period = 0;
  int last_period = 0;  // inclusive
  double quantity = 0.0;
  double price = 0.0;

  bool covers(int t) const { return first_period <= t && t <= last_period; }
  int span() const { return last_period - first_period + 1; }
  bool is_demand() const { return quantity > 0.0; }
};

/// A full auction instance.
struct Scenario {
  int num_periods = 1;
  std::vector<HourlyBid> hourly_bids;
  std::vector<BlockBid> block_bids;
};

enum class SolveStatus { Optimal, Approximate, Infeasible };

const char* to_string(SolveStatus status);

/// Branch-and-bound counters attached to solver results.
struct SolveStats {
  std::int64_t nodes_explored = 0;
  std::int64_t nodes_pruned = 0;
  bool node_limit_hit = false;
  double time_ms = 0.0;
};

struct TwoStepTrace;  // defined in two_step.hpp

/// Acceptance indicators for every bid of a scenario.
///
/// `x` has an entry for every hourly bid. `u_hourly` has an entry for every
/// hourly bid as well; bids without a binary (min_ratio = 0, startup_cost = 0)
/// always report u = 1, which keeps the box constraint r*u <= x <= u
/// meaningful for all bids. `u_block` covers every block bid.
struct ClearingSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::map<BidId, double> x;
  std::map<BidId, int> u_hourly;
  std::map<BidId, int> u_block;
  double tsw = 0.0;
  SolveStats stats;
  std::shared_ptr<const TwoStepTrace> two_step;  // set by clear_two_step only
};

/// How hourly bids are grouped before aggregation.
struct AggregationMode {
  enum class Kind { Pairwise, NominalBins };
  Kind kind = Kind::NominalBins;
  int pairwise_n = 2;        // bids per group in merit order
  std::optional<int> bins;   // price bins per period/side; unset = ceil(sqrt(count))
};

AggregationMode pairwise_mode(int n);
AggregationMode nominal_mode(std::optional<int> bins = std::nullopt);

struct ClearingConfig {
  double balance_tolerance = 1e-6;   // MWh, absolute per-period slack
  double price_tie_epsilon = 1e-9;   // EUR/MWh
  AggregationMode aggregation;
  double epsilon_threshold = 1e-3;   // relative TSW fraction for hit-rate
  std::int64_t node_limit = 10'000'000;
};

struct ValidationIssue {
  std::string message;
  BidId bid_id;  // empty for scenario-level issues
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant of a scenario: positive period count,
/// globally unique ids, periods in range, nonzero quantities, finite prices,
/// min_ratio in [0,1], startup_cost >= 0, block ranges well formed.
ValidationReport validate_scenario(const Scenario& s);

/// Checks that a solution is feasible for a scenario: x in [0,1],
/// r*u <= x <= u for every hourly bid, and per-period balance within
/// cfg.balance_tolerance. Indicators missing from the solution are reported.
ValidationReport check_solution(const Scenario& s, const ClearingSolution& sol,
                                const ClearingConfig& cfg = {});

/// Total social welfare of a candidate solution:
///   sum_t sum_i Q_ti P_ti x_ti + sum_j |T_j| Q_j P_j u_j - sum_ti u_ti F_ti.
/// Throws std::invalid_argument when an indicator needed by the formula is
/// missing (x for any hourly bid, u for binary-carrying bids and blocks).
double total_social_welfare(const Scenario& s, const ClearingSolution& sol);

/// Signed power balance residual of period t:
///   sum_i Q_ti x_ti + sum_{j: t in T_j} Q_j u_j.
/// Zero (within tolerance) for a feasible market solution.
double balance_residual(const Scenario& s, const ClearingSolution& sol, int t);

/// Hourly bid indices grouped by period, in input order.
std::vector<std::vector<int>> hourly_indices_by_period(const Scenario& s);

}  // namespace aggclear
