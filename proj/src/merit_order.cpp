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

#include "aggclear/merit_order.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aggclear {

namespace detail {

MeritOutcome solve_single_balance(std::span<const MeritVar> vars,
                                  double target, std::span<double> y_out,
                                  double slack) {
  double hi = 0.0;
  double lo = 0.0;
  for (const auto& v : vars) {
    if (v.weight > 0.0)
      hi += v.weight;
    else
      lo += v.weight;
  }
  if (target > hi + slack || target < lo - slack) return {false, 0.0};

  // Start from the all-demand-accepted, all-supply-rejected point (balance
  // hi) and buy the cheapest reductions first: dropping a demand bid or
  // switching a supply bid on both move the balance down at a per-MWh cost
  // equal to the bid price. vars arrive sorted by ascending price.
  double need = std::max(hi - target, 0.0);
  double objective = 0.0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    double cap = std::abs(v.weight);
    double y = v.weight > 0.0 ? 1.0 : 0.0;
    if (need > 0.0 && cap > 0.0) {
      double take = std::min(cap, need);
      need -= take;
      y = v.weight > 0.0 ? 1.0 - take / cap : take / cap;
    }
    y_out[i] = y;
    objective += v.price * v.weight * y;
  }
  return {true, objective};
}

}  // namespace detail

RhsVector zero_rhs(const Scenario& s) {
  return RhsVector(static_cast<std::size_t>(std::max(s.num_periods, 0)), 0.0);
}

namespace {

struct SubVar {
  detail::MeritVar var;
  int bid_index = 0;
  double min_ratio = 0.0;
};

}  // namespace

PeriodDispatch clear_period(std::span<const HourlyBid> bids,
                            const FixedBinaryAssignment& fixed, double rhs,
                            const ClearingConfig& cfg) {
  PeriodDispatch result;
  if (!bids.empty()) {
    int period = bids.front().period;
    for (const auto& b : bids)
      if (b.period != period)
        throw std::invalid_argument("clear_period: bids span periods");
  }

  double baseline_qty = 0.0;
  double baseline_welfare = 0.0;
  std::vector<SubVar> subs;
  subs.reserve(bids.size());

  for (int i = 0; i < static_cast<int>(bids.size()); ++i) {
    const auto& bid = bids[static_cast<std::size_t>(i)];
    double lo_ratio = 0.0;
    if (bid.has_binary()) {
      auto it = fixed.u_hourly.find(bid.id);
      if (it == fixed.u_hourly.end())
        throw std::invalid_argument("clear_period: binary bid " + bid.id +
                                    " has no fixed indicator");
      if (it->second == 0) {
        result.x[bid.id] = 0.0;
        continue;
      }
      lo_ratio = bid.min_ratio;
      baseline_qty += lo_ratio * bid.quantity;
      baseline_welfare += lo_ratio * bid.quantity * bid.price;
    }
    double weight = (1.0 - lo_ratio) * bid.quantity;
    if (weight == 0.0) {
      result.x[bid.id] = lo_ratio;  // min_ratio = 1, fully forced
      continue;
    }
    subs.push_back({{bid.price, weight, static_cast<std::uint32_t>(i)},
                    i,
                    lo_ratio});
  }

  // The sweep consumes balance reductions cheapest first: switching supply
  // on and backing demand off both cost their price per MWh. At equal
  // prices, acceptance goes to lower ids first, so supply enters in id
  // order and demand leaves in reverse id order.
  std::sort(subs.begin(), subs.end(), [&](const SubVar& a, const SubVar& b) {
    if (a.var.price != b.var.price) return a.var.price < b.var.price;
    bool a_demand = a.var.weight > 0.0;
    bool b_demand = b.var.weight > 0.0;
    if (a_demand != b_demand) return !a_demand;
    const BidId& a_id = bids[static_cast<std::size_t>(a.bid_index)].id;
    const BidId& b_id = bids[static_cast<std::size_t>(b.bid_index)].id;
    return a_demand ? natural_id_less(b_id, a_id) : natural_id_less(a_id, b_id);
  });

  std::vector<detail::MeritVar> vars(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) vars[i] = subs[i].var;
  std::vector<double> y(vars.size(), 0.0);

  auto outcome = detail::solve_single_balance(vars, rhs - baseline_qty, y,
                                              cfg.balance_tolerance);
  if (!outcome.feasible) return result;  // feasible = false

  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto& bid = bids[static_cast<std::size_t>(subs[i].bid_index)];
    double r = subs[i].min_ratio;
    result.x[bid.id] = r + (1.0 - r) * y[i];
  }
  result.welfare = outcome.objective + baseline_welfare;
  result.feasible = true;
  return result;
}

ClearingSolution clear_all_periods(const Scenario& s,
                                   const FixedBinaryAssignment& fixed,
                                   const RhsVector& rhs,
                                   const ClearingConfig& cfg) {
  if (static_cast<int>(rhs.size()) != s.num_periods)
    throw std::invalid_argument("clear_all_periods: rhs size != num_periods");

  ClearingSolution sol;
  sol.status = SolveStatus::Infeasible;

  std::vector<double> block_shift(rhs.size(), 0.0);
  double block_welfare = 0.0;
  for (const auto& blk : s.block_bids) {
    auto it = fixed.u_block.find(blk.id);
    if (it == fixed.u_block.end())
      throw std::invalid_argument("clear_all_periods: block bid " + blk.id +
                                  " has no fixed indicator");
    sol.u_block[blk.id] = it->second;
    if (it->second == 1) {
      for (int t = blk.first_period; t <= blk.last_period; ++t)
        block_shift[static_cast<std::size_t>(t)] += blk.quantity;
      block_welfare += blk.quantity * blk.price * blk.span();
    }
  }

  double welfare = 0.0;
  auto by_period = hourly_indices_by_period(s);
  std::vector<HourlyBid> period_bids;
  for (int t = 0; t < s.num_periods; ++t) {
    period_bids.clear();
    for (int i : by_period[static_cast<std::size_t>(t)])
      period_bids.push_back(s.hourly_bids[static_cast<std::size_t>(i)]);
    double target = rhs[static_cast<std::size_t>(t)] -
                    block_shift[static_cast<std::size_t>(t)];
    auto dispatch = clear_period(period_bids, fixed, target, cfg);
    if (!dispatch.feasible) return sol;
    welfare += dispatch.welfare;
    sol.x.merge(dispatch.x);
  }

  double startup = 0.0;
  for (const auto& bid : s.hourly_bids) {
    if (bid.has_binary()) {
      int u = fixed.u_hourly.at(bid.id);
      sol.u_hourly[bid.id] = u;
      if (u == 1) startup += bid.startup_cost;
    } else {
      sol.u_hourly[bid.id] = 1;
    }
  }

  sol.tsw = welfare + block_welfare - startup;
  sol.status = SolveStatus::Optimal;
  return sol;
}

ClearingSolution clear_all_periods(const Scenario& s,
                                   const FixedBinaryAssignment& fixed,
                                   const ClearingConfig& cfg) {
  return clear_all_periods(s, fixed, zero_rhs(s), cfg);
}

}  // namespace aggclear
