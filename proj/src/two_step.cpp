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

#include "aggclear/two_step.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "aggclear/exact_solver.hpp"

namespace aggclear {

namespace {

constexpr double kPartialTol = 1e-9;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct AggView {
  const HourlyBid* bid;
  double x;
};

std::vector<AggView> period_aggregates(const Scenario& aggregated,
                                       const ClearingSolution& first_step,
                                       int period) {
  std::vector<AggView> views;
  for (const auto& bid : aggregated.hourly_bids) {
    if (bid.period != period) continue;
    auto it = first_step.x.find(bid.id);
    if (it == first_step.x.end())
      throw std::invalid_argument("first-step solution misses indicator for " +
                                  bid.id);
    views.push_back({&bid, it->second});
  }
  return views;
}

bool is_partial(double x) { return x > kPartialTol && x < 1.0 - kPartialTol; }
bool is_accepted(double x) { return x >= 1.0 - kPartialTol; }
bool is_rejected(double x) { return x <= kPartialTol; }

int round_indicator(double x) { return x > 0.5 ? 1 : 0; }

// Candidate with the price nearest `from` on the given half-line; ties go to
// the lower id.
struct Nearest {
  const AggView* view = nullptr;

  void offer(const AggView& v, bool prefer_higher_price) {
    if (view == nullptr) {
      view = &v;
      return;
    }
    double best = view->bid->price;
    double p = v.bid->price;
    if (p == best) {
      if (natural_id_less(v.bid->id, view->bid->id)) view = &v;
    } else if (prefer_higher_price ? p > best : p < best) {
      view = &v;
    }
  }
};

std::optional<BidId> nearest_accepted_below(const std::vector<AggView>& views,
                                            bool demand_side, double price,
                                            double tie_eps) {
  Nearest best;
  for (const auto& v : views)
    if (v.bid->is_demand() == demand_side && is_accepted(v.x) &&
        v.bid->price < price + tie_eps)
      best.offer(v, /*prefer_higher_price=*/true);
  if (best.view == nullptr) return std::nullopt;
  return best.view->bid->id;
}

std::optional<BidId> nearest_rejected_above(const std::vector<AggView>& views,
                                            bool demand_side, double price,
                                            double tie_eps) {
  Nearest best;
  for (const auto& v : views)
    if (v.bid->is_demand() == demand_side && is_rejected(v.x) &&
        v.bid->price > price - tie_eps)
      best.offer(v, /*prefer_higher_price=*/false);
  if (best.view == nullptr) return std::nullopt;
  return best.view->bid->id;
}

std::optional<BidId> nearest_accepted_above(const std::vector<AggView>& views,
                                            bool demand_side, double price,
                                            double tie_eps) {
  Nearest best;
  for (const auto& v : views)
    if (v.bid->is_demand() == demand_side && is_accepted(v.x) &&
        v.bid->price > price - tie_eps)
      best.offer(v, /*prefer_higher_price=*/false);
  if (best.view == nullptr) return std::nullopt;
  return best.view->bid->id;
}

std::optional<BidId> nearest_rejected_below(const std::vector<AggView>& views,
                                            bool demand_side, double price,
                                            double tie_eps) {
  Nearest best;
  for (const auto& v : views)
    if (v.bid->is_demand() == demand_side && is_rejected(v.x) &&
        v.bid->price < price + tie_eps)
      best.offer(v, /*prefer_higher_price=*/true);
  if (best.view == nullptr) return std::nullopt;
  return best.view->bid->id;
}

// Crossing-side extremes for the all-binary outcome: the cheapest accepted /
// dearest rejected demand bid and the dearest accepted / cheapest rejected
// supply bid.
std::optional<BidId> boundary_bid(const std::vector<AggView>& views,
                                  bool demand_side, bool accepted) {
  Nearest best;
  bool prefer_higher = demand_side != accepted;
  for (const auto& v : views) {
    if (v.bid->is_demand() != demand_side) continue;
    if (accepted ? !is_accepted(v.x) : !is_rejected(v.x)) continue;
    best.offer(v, prefer_higher);
  }
  if (best.view == nullptr) return std::nullopt;
  return best.view->bid->id;
}

void append_unique(std::vector<BidId>& ids, const std::optional<BidId>& id) {
  if (!id) return;
  if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
}

FirstStepOutcome classify(const std::vector<AggView>& views) {
  int partial_demand = 0;
  int partial_supply = 0;
  for (const auto& v : views) {
    if (!is_partial(v.x)) continue;
    (v.bid->is_demand() ? partial_demand : partial_supply) += 1;
  }
  int total = partial_demand + partial_supply;
  if (total == 0) return FirstStepOutcome::AllBinary;
  if (total > 1) return FirstStepOutcome::Degenerate;
  return partial_demand == 1 ? FirstStepOutcome::PartialDemand
                             : FirstStepOutcome::PartialSupply;
}

}  // namespace

const char* to_string(FirstStepOutcome outcome) {
  switch (outcome) {
    case FirstStepOutcome::PartialDemand: return "partial_demand";
    case FirstStepOutcome::PartialSupply: return "partial_supply";
    case FirstStepOutcome::AllBinary: return "all_binary";
    case FirstStepOutcome::Degenerate: return "degenerate";
  }
  return "unknown";
}

FirstStepOutcome classify_first_step(const Scenario& aggregated,
                                     const ClearingSolution& first_step,
                                     int period) {
  return classify(period_aggregates(aggregated, first_step, period));
}

DistinguishedSet select_distinguished(const Scenario& aggregated,
                                      const ClearingSolution& first_step,
                                      int period, const ClearingConfig& cfg) {
  auto views = period_aggregates(aggregated, first_step, period);
  double eps = cfg.price_tie_epsilon;

  DistinguishedSet set;
  set.outcome = classify(views);

  auto companions_of = [&](const AggView& partial) {
    bool opposite = !partial.bid->is_demand();
    double p = partial.bid->price;
    // For a partial demand bid: the nearest accepted supply bid priced below
    // it and the nearest rejected supply bid priced above it. Mirrored when
    // the partial bid is on the supply side.
    std::optional<BidId> accepted =
        partial.bid->is_demand()
            ? nearest_accepted_below(views, opposite, p, eps)
            : nearest_accepted_above(views, opposite, p, eps);
    std::optional<BidId> rejected =
        partial.bid->is_demand()
            ? nearest_rejected_above(views, opposite, p, eps)
            : nearest_rejected_below(views, opposite, p, eps);
    return std::pair(accepted, rejected);
  };

  switch (set.outcome) {
    case FirstStepOutcome::PartialDemand:
    case FirstStepOutcome::PartialSupply: {
      const AggView* partial = nullptr;
      for (const auto& v : views)
        if (is_partial(v.x)) partial = &v;
      set.partial = partial->bid->id;
      auto [accepted, rejected] = companions_of(*partial);
      if (partial->bid->is_demand()) {
        set.accepted_supply = accepted;
        set.rejected_supply = rejected;
      } else {
        set.accepted_demand = accepted;
        set.rejected_demand = rejected;
      }
      append_unique(set.ids, set.partial);
      append_unique(set.ids, accepted);
      append_unique(set.ids, rejected);
      break;
    }
    case FirstStepOutcome::AllBinary: {
      set.accepted_demand = boundary_bid(views, true, true);
      set.rejected_demand = boundary_bid(views, true, false);
      set.accepted_supply = boundary_bid(views, false, true);
      set.rejected_supply = boundary_bid(views, false, false);
      append_unique(set.ids, set.accepted_demand);
      append_unique(set.ids, set.rejected_demand);
      append_unique(set.ids, set.accepted_supply);
      append_unique(set.ids, set.rejected_supply);
      break;
    }
    case FirstStepOutcome::Degenerate: {
      // Conservative superset: keep every partial bid free, each with its
      // opposite-side companions.
      std::vector<const AggView*> partials;
      for (const auto& v : views)
        if (is_partial(v.x)) partials.push_back(&v);
      std::sort(partials.begin(), partials.end(),
                [](const AggView* a, const AggView* b) {
                  return natural_id_less(a->bid->id, b->bid->id);
                });
      for (const auto* p : partials) append_unique(set.ids, p->bid->id);
      for (const auto* p : partials) {
        auto [accepted, rejected] = companions_of(*p);
        append_unique(set.ids, accepted);
        append_unique(set.ids, rejected);
      }
      break;
    }
  }
  return set;
}

RhsVector compute_imbalance_rhs(
    const Scenario& s, const ClearingSolution& first_step,
    std::span<const DistinguishedSet> distinguished,
    const std::map<BidId, std::vector<BidId>>& components) {
  std::unordered_set<std::string> free_aggregates;
  for (const auto& set : distinguished)
    for (const auto& id : set.ids) free_aggregates.insert(id);

  std::unordered_map<std::string, const HourlyBid*> originals;
  for (const auto& bid : s.hourly_bids) originals.emplace(bid.id, &bid);

  RhsVector rhs(static_cast<std::size_t>(std::max(s.num_periods, 0)), 0.0);
  for (const auto& [agg_id, comp_ids] : components) {
    if (free_aggregates.count(agg_id) > 0) continue;
    auto xit = first_step.x.find(agg_id);
    if (xit == first_step.x.end())
      throw std::invalid_argument("compute_imbalance_rhs: no indicator for " +
                                  agg_id);
    if (round_indicator(xit->second) == 0) continue;
    for (const auto& comp_id : comp_ids) {
      auto oit = originals.find(comp_id);
      if (oit == originals.end())
        throw std::invalid_argument("compute_imbalance_rhs: unknown component " +
                                    comp_id);
      rhs[static_cast<std::size_t>(oit->second->period)] -=
          oit->second->quantity;
    }
  }
  for (const auto& blk : s.block_bids) {
    auto uit = first_step.u_block.find(blk.id);
    if (uit == first_step.u_block.end())
      throw std::invalid_argument(
          "compute_imbalance_rhs: no block indicator for " + blk.id);
    if (uit->second != 1) continue;
    for (int t = blk.first_period; t <= blk.last_period; ++t)
      rhs[static_cast<std::size_t>(t)] -= blk.quantity;
  }
  return rhs;
}

TwoStepPlan build_two_step_plan(const Scenario& s,
                                const ClearingSolution& first_step,
                                const AggregatedScenario& aggregated,
                                const ClearingConfig& cfg) {
  TwoStepPlan plan;
  for (int t = 0; t < s.num_periods; ++t)
    plan.distinguished.push_back(
        select_distinguished(aggregated.scenario, first_step, t, cfg));

  std::unordered_set<std::string> free_aggregates;
  for (const auto& set : plan.distinguished)
    for (const auto& id : set.ids) free_aggregates.insert(id);

  for (const auto& [agg_id, comp_ids] : aggregated.components) {
    if (free_aggregates.count(agg_id) > 0) continue;
    int value = round_indicator(first_step.x.at(agg_id));
    for (const auto& comp_id : comp_ids) plan.fixed_x[comp_id] = value;
  }

  plan.free_scenario.num_periods = s.num_periods;
  for (const auto& bid : s.hourly_bids)
    if (plan.fixed_x.count(bid.id) == 0)
      plan.free_scenario.hourly_bids.push_back(bid);

  plan.rhs = compute_imbalance_rhs(s, first_step, plan.distinguished,
                                   aggregated.components);
  return plan;
}

ClearingSolution finish_two_step(const Scenario& s, const ClearingConfig& cfg,
                                 const TwoStepPlan& plan,
                                 const ClearingSolution& first_step,
                                 std::shared_ptr<TwoStepTrace> trace) {
  auto t0 = Clock::now();
  ClearingSolution second = solve_exact(plan.free_scenario, cfg, plan.rhs);
  if (trace) {
    trace->step2_ms = ms_since(t0);
    trace->step2_stats = second.stats;
  }

  if (second.status == SolveStatus::Infeasible) {
    // The decomposed bid set cannot compensate the fixed imbalance; fall
    // back to clearing the original problem exactly.
    ClearingSolution full = solve_exact(s, cfg);
    if (trace) {
      trace->fallback_exact = true;
      trace->step2_ms = ms_since(t0);
      full.two_step = trace;
    }
    return full;
  }

  ClearingSolution merged;
  merged.status = SolveStatus::Approximate;
  std::unordered_map<std::string, const HourlyBid*> originals;
  for (const auto& bid : s.hourly_bids) originals.emplace(bid.id, &bid);
  for (const auto& [id, value] : plan.fixed_x) {
    merged.x[id] = value;
    merged.u_hourly[id] = originals.at(id)->has_binary() ? value : 1;
  }
  for (const auto& [id, x] : second.x) merged.x[id] = x;
  for (const auto& [id, u] : second.u_hourly) merged.u_hourly[id] = u;
  merged.u_block = first_step.u_block;
  merged.tsw = total_social_welfare(s, merged);
  merged.stats = second.stats;
  merged.two_step = trace;
  return merged;
}

ClearingSolution clear_two_step(const Scenario& s, const ClearingConfig& cfg) {
  auto trace = std::make_shared<TwoStepTrace>();

  auto t0 = Clock::now();
  AggregatedScenario aggregated = build_aggregated_scenario(s, cfg);
  trace->aggregate_ms = ms_since(t0);
  trace->components = aggregated.components;

  auto t1 = Clock::now();
  ClearingSolution first = solve_exact(aggregated.scenario, cfg);
  trace->step1_ms = ms_since(t1);
  trace->step1_stats = first.stats;
  trace->step1_tsw = first.tsw;
  trace->step1_x = first.x;
  trace->step1_u_block = first.u_block;

  if (first.status == SolveStatus::Infeasible) {
    ClearingSolution full = solve_exact(s, cfg);
    trace->fallback_exact = true;
    full.two_step = trace;
    return full;
  }

  TwoStepPlan plan = build_two_step_plan(s, first, aggregated, cfg);
  trace->distinguished = plan.distinguished;
  trace->rhs = plan.rhs;

  ClearingSolution merged = finish_two_step(s, cfg, plan, first, trace);
  merged.stats.time_ms =
      trace->aggregate_ms + trace->step1_ms + trace->step2_ms;
  return merged;
}

}  // namespace aggclear
