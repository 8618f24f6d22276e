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
#include <optional>
#include <span>
#include <vector>

#include "aggclear/aggregation.hpp"
#include "aggclear/market_model.hpp"
#include "aggclear/merit_order.hpp"

namespace aggclear {

/// Outcome of the first clearing step for one period.
/// Partial* means exactly one aggregated bid has 0 < x < 1 (beyond a 1e-9
/// tolerance); AllBinary means every indicator is 0 or 1; Degenerate covers
/// two or more partial bids (possible only under price ties or forced
/// minimum-ratio bounds).
enum class FirstStepOutcome { PartialDemand, PartialSupply, AllBinary, Degenerate };

const char* to_string(FirstStepOutcome outcome);

/// The aggregated bids of one period whose components stay free in the
/// second clearing step. For Partial* outcomes: the partial bid plus the
/// nearest fully-accepted and fully-rejected opposite-side bids by price.
/// For AllBinary: the accepted and rejected bid nearest the crossing on each
/// side (up to four). Missing candidates are omitted. For Degenerate: every
/// partial bid together with its opposite-side companions.
struct DistinguishedSet {
  FirstStepOutcome outcome = FirstStepOutcome::AllBinary;
  std::optional<BidId> partial;
  std::optional<BidId> accepted_demand;
  std::optional<BidId> rejected_demand;
  std::optional<BidId> accepted_supply;
  std::optional<BidId> rejected_supply;
  std::vector<BidId> ids;  // union of the above, deterministic order
};

FirstStepOutcome classify_first_step(const Scenario& aggregated,
                                     const ClearingSolution& first_step,
                                     int period);

DistinguishedSet select_distinguished(const Scenario& aggregated,
                                      const ClearingSolution& first_step,
                                      int period,
                                      const ClearingConfig& cfg = {});

/// Per-period balance targets for the second step. Every original bid whose
/// aggregate is not distinguished is fixed to its aggregate's rounded
/// indicator, block bids keep their first-step indicators, and
///   rhs_t = -( sum_fixed-hourly Q x_fixed + sum_fixed-blocks-covering-t Q u ).
RhsVector compute_imbalance_rhs(
    const Scenario& s, const ClearingSolution& first_step,
    std::span<const DistinguishedSet> distinguished,
    const std::map<BidId, std::vector<BidId>>& components);

/// Everything derived from the first clearing step that the second step
/// needs: the fixing plan, the free bids and the compensated rhs.
struct TwoStepPlan {
  std::vector<DistinguishedSet> distinguished;  // one per period
  std::map<BidId, int> fixed_x;                 // original hourly id -> 0/1
  Scenario free_scenario;                       // free originals, no blocks
  RhsVector rhs;
};

TwoStepPlan build_two_step_plan(
    const Scenario& s, const ClearingSolution& first_step,
    const AggregatedScenario& aggregated, const ClearingConfig& cfg = {});

/// Diagnostic record of one two-step run, attached to the returned solution.
struct TwoStepTrace {
  double step1_tsw = 0.0;
  std::map<BidId, double> step1_x;        // aggregated indicators
  std::map<BidId, int> step1_u_block;     // block indicators fixed after step 1
  std::vector<DistinguishedSet> distinguished;
  std::map<BidId, std::vector<BidId>> components;
  RhsVector rhs;
  double aggregate_ms = 0.0;
  double step1_ms = 0.0;
  double step2_ms = 0.0;
  bool fallback_exact = false;  // second step infeasible, full exact solve used
  SolveStats step1_stats;
  SolveStats step2_stats;
};

/// Second step + merge, split out so the infeasible-rhs fallback is testable:
/// solves the plan's free scenario against its rhs, merges fixed and free
/// indicators, and evaluates the result on the original scenario. When the
/// free subproblem is infeasible, falls back to a full exact solve of `s`
/// and marks trace->fallback_exact.
ClearingSolution finish_two_step(const Scenario& s, const ClearingConfig& cfg,
                                 const TwoStepPlan& plan,
                                 const ClearingSolution& first_step,
                                 std::shared_ptr<TwoStepTrace> trace);

/// The full aggregation-based approximation: aggregate, clear the aggregated
/// scenario exactly, classify and select distinguished bids per period, fix
/// every other original bid, compensate the imbalance through the rhs, clear
/// the free originals, and merge. The returned solution is feasible for the
/// original scenario and carries a TwoStepTrace.
ClearingSolution clear_two_step(const Scenario& s,
                                const ClearingConfig& cfg = {});

}  // namespace aggclear
