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

#include "aggclear/market_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace aggclear {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

bool natural_id_less(const std::string& a, const std::string& b) {
  if (all_digits(a) && all_digits(b)) {
    if (a.size() != b.size()) return a.size() < b.size();
  }
  return a < b;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Approximate: return "approximate";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

AggregationMode pairwise_mode(int n) {
  AggregationMode m;
  m.kind = AggregationMode::Kind::Pairwise;
  m.pairwise_n = n;
  return m;
}

AggregationMode nominal_mode(std::optional<int> bins) {
  AggregationMode m;
  m.kind = AggregationMode::Kind::NominalBins;
  m.bins = bins;
  return m;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    if (!issue.bid_id.empty()) out << "[" << issue.bid_id << "] ";
    out << issue.message << "\n";
  }
  return out.str();
}

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport report;
  auto add = [&](std::string msg, BidId id = {}) {
    report.issues.push_back({std::move(msg), std::move(id)});
  };

  if (s.num_periods < 1) add("num_periods must be >= 1");

  std::unordered_set<std::string> seen;
  auto check_unique = [&](const BidId& id) {
    if (id.empty()) add("empty bid id", id);
    if (!seen.insert(id).second) add("duplicate bid id", id);
  };

  for (const auto& bid : s.hourly_bids) {
    check_unique(bid.id);
    if (bid.period < 0 || bid.period >= s.num_periods)
      add("period out of range", bid.id);
    if (bid.quantity == 0.0 || !std::isfinite(bid.quantity))
      add("quantity must be nonzero and finite", bid.id);
    if (!std::isfinite(bid.price)) add("price must be finite", bid.id);
    if (!(bid.min_ratio >= 0.0 && bid.min_ratio <= 1.0))
      add("min_ratio out of [0,1]", bid.id);
    if (!(bid.startup_cost >= 0.0) || !std::isfinite(bid.startup_cost))
      add("startup_cost must be >= 0", bid.id);
  }

  for (const auto& bid : s.block_bids) {
    check_unique(bid.id);
    if (bid.first_period > bid.last_period)
      add("periods not consecutive: first_period > last_period", bid.id);
    if (bid.first_period < 0 || bid.last_period >= s.num_periods)
      add("period out of range", bid.id);
    if (bid.quantity == 0.0 || !std::isfinite(bid.quantity))
      add("quantity must be nonzero and finite", bid.id);
    if (!std::isfinite(bid.price)) add("price must be finite", bid.id);
  }

  return report;
}

ValidationReport check_solution(const Scenario& s, const ClearingSolution& sol,
                                const ClearingConfig& cfg) {
  ValidationReport report;
  auto add = [&](std::string msg, BidId id = {}) {
    report.issues.push_back({std::move(msg), std::move(id)});
  };
  constexpr double kBoxTol = 1e-9;

  for (const auto& bid : s.hourly_bids) {
    auto xit = sol.x.find(bid.id);
    if (xit == sol.x.end()) {
      add("missing x indicator", bid.id);
      continue;
    }
    double x = xit->second;
    auto uit = sol.u_hourly.find(bid.id);
    if (uit == sol.u_hourly.end()) {
      if (bid.has_binary()) add("missing u indicator", bid.id);
      // implicit u = 1 for bids without a binary
      if (x < -kBoxTol || x > 1.0 + kBoxTol) add("x out of [0,1]", bid.id);
      continue;
    }
    int u = uit->second;
    if (u != 0 && u != 1) add("u not in {0,1}", bid.id);
    double lo = bid.min_ratio * u;
    double hi = static_cast<double>(u);
    if (x < lo - kBoxTol || x > hi + kBoxTol)
      add("x violates r*u <= x <= u", bid.id);
  }

  for (const auto& bid : s.block_bids) {
    auto it = sol.u_block.find(bid.id);
    if (it == sol.u_block.end())
      add("missing u indicator", bid.id);
    else if (it->second != 0 && it->second != 1)
      add("u not in {0,1}", bid.id);
  }

  if (report.ok()) {
    for (int t = 0; t < s.num_periods; ++t) {
      double residual = balance_residual(s, sol, t);
      if (std::abs(residual) > cfg.balance_tolerance) {
        std::ostringstream msg;
        msg << "balance residual " << residual << " in period " << t;
        add(msg.str());
      }
    }
  }

  return report;
}

double total_social_welfare(const Scenario& s, const ClearingSolution& sol) {
  double welfare = 0.0;
  for (const auto& bid : s.hourly_bids) {
    auto xit = sol.x.find(bid.id);
    if (xit == sol.x.end())
      throw std::invalid_argument("total_social_welfare: missing x for bid " +
                                  bid.id);
    welfare += bid.quantity * bid.price * xit->second;
    if (bid.startup_cost > 0.0) {
      auto uit = sol.u_hourly.find(bid.id);
      if (uit == sol.u_hourly.end())
        throw std::invalid_argument(
            "total_social_welfare: missing u for bid " + bid.id);
      welfare -= bid.startup_cost * uit->second;
    }
  }
  for (const auto& bid : s.block_bids) {
    auto uit = sol.u_block.find(bid.id);
    if (uit == sol.u_block.end())
      throw std::invalid_argument(
          "total_social_welfare: missing u for block bid " + bid.id);
    welfare += bid.quantity * bid.price * bid.span() * uit->second;
  }
  return welfare;
}

double balance_residual(const Scenario& s, const ClearingSolution& sol,
                        int t) {
  if (t < 0 || t >= s.num_periods)
    throw std::invalid_argument("balance_residual: period out of range");
  double residual = 0.0;
  for (const auto& bid : s.hourly_bids) {
    if (bid.period != t) continue;
    auto xit = sol.x.find(bid.id);
    if (xit != sol.x.end()) residual += bid.quantity * xit->second;
  }
  for (const auto& bid : s.block_bids) {
    if (!bid.covers(t)) continue;
    auto uit = sol.u_block.find(bid.id);
    if (uit != sol.u_block.end()) residual += bid.quantity * uit->second;
  }
  return residual;
}

std::vector<std::vector<int>> hourly_indices_by_period(const Scenario& s) {
  std::vector<std::vector<int>> by_period(
      static_cast<std::size_t>(std::max(s.num_periods, 0)));
  for (int i = 0; i < static_cast<int>(s.hourly_bids.size()); ++i) {
    int t = s.hourly_bids[static_cast<std::size_t>(i)].period;
    if (t >= 0 && t < s.num_periods)
      by_period[static_cast<std::size_t>(t)].push_back(i);
  }
  return by_period;
}

}  // namespace aggclear
