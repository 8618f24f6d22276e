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

#include "aggclear/exact_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace aggclear {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double prune_cutoff(double incumbent) {
  return incumbent + std::max(1e-9, 1e-10 * std::abs(incumbent));
}

// Branch-and-bound engine over all binary indicators. Per-period merit
// variables (hourly bids and one pseudo-bid per covering block) are sorted
// once at construction; every node rebuilds the active variable set in that
// order, so no sorting happens during the search.
class Engine {
 public:
  Engine(const Scenario& s, const ClearingConfig& cfg, RhsVector rhs)
      : s_(s), cfg_(cfg), rhs_(std::move(rhs)) {
    const std::size_t periods = static_cast<std::size_t>(s_.num_periods);

    // Collect binaries: every block, every hourly bid with a binary.
    for (int i = 0; i < static_cast<int>(s_.block_bids.size()); ++i) {
      const auto& blk = s_.block_bids[static_cast<std::size_t>(i)];
      binaries_.push_back({true, i, std::abs(blk.quantity * blk.price)});
    }
    for (int i = 0; i < static_cast<int>(s_.hourly_bids.size()); ++i) {
      const auto& bid = s_.hourly_bids[static_cast<std::size_t>(i)];
      if (bid.has_binary())
        binaries_.push_back({false, i, std::abs(bid.quantity * bid.price)});
    }
    std::sort(binaries_.begin(), binaries_.end(),
              [&](const BinaryRef& a, const BinaryRef& b) {
                if (a.impact != b.impact) return a.impact > b.impact;
                return natural_id_less(id_of(a), id_of(b));
              });
    status_.assign(binaries_.size(), -1);

    std::vector<int> block_binary(s_.block_bids.size(), -1);
    std::vector<int> hourly_binary(s_.hourly_bids.size(), -1);
    for (int b = 0; b < static_cast<int>(binaries_.size()); ++b) {
      const auto& ref = binaries_[static_cast<std::size_t>(b)];
      (ref.is_block ? block_binary : hourly_binary)[static_cast<std::size_t>(
          ref.index)] = b;
    }

    // Per-period merit entries, presorted by (price, id).
    entries_.resize(periods);
    for (int i = 0; i < static_cast<int>(s_.hourly_bids.size()); ++i) {
      const auto& bid = s_.hourly_bids[static_cast<std::size_t>(i)];
      if (bid.period < 0 || bid.period >= s_.num_periods) continue;
      entries_[static_cast<std::size_t>(bid.period)].push_back(
          {bid.price, bid.quantity, bid.min_ratio, i,
           hourly_binary[static_cast<std::size_t>(i)]});
    }
    for (int i = 0; i < static_cast<int>(s_.block_bids.size()); ++i) {
      const auto& blk = s_.block_bids[static_cast<std::size_t>(i)];
      for (int t = std::max(blk.first_period, 0);
           t <= std::min(blk.last_period, s_.num_periods - 1); ++t) {
        entries_[static_cast<std::size_t>(t)].push_back(
            {blk.price, blk.quantity, 0.0, -1,
             block_binary[static_cast<std::size_t>(i)]});
      }
    }
    // Same ordering as clear_period's sweep: price ascending, ties resolved
    // so that acceptance goes to lower ids first.
    std::size_t max_entries = 0;
    for (auto& period : entries_) {
      std::sort(period.begin(), period.end(),
                [&](const Entry& a, const Entry& b) {
                  if (a.price != b.price) return a.price < b.price;
                  bool a_demand = a.quantity > 0.0;
                  bool b_demand = b.quantity > 0.0;
                  if (a_demand != b_demand) return !a_demand;
                  return a_demand ? natural_id_less(entry_id(b), entry_id(a))
                                  : natural_id_less(entry_id(a), entry_id(b));
                });
      max_entries = std::max(max_entries, period.size());
    }

    vars_.reserve(max_entries);
    var_binary_.reserve(max_entries);
    y_.assign(max_entries, 0.0);
    shift_.assign(periods, 0.0);
    frac_sum_.assign(binaries_.size(), 0.0);
    frac_cnt_.assign(binaries_.size(), 0);
  }

  std::size_t binary_count() const { return binaries_.size(); }

  int binary_for_id(const BidId& id) const {
    for (int b = 0; b < static_cast<int>(binaries_.size()); ++b)
      if (id_of(binaries_[static_cast<std::size_t>(b)]) == id) return b;
    return -1;
  }

  void set_status(int binary, int value) {
    status_[static_cast<std::size_t>(binary)] =
        static_cast<signed char>(value);
  }

  // Upper bound on the best completion of the current status vector:
  // unfixed blocks become independent per-period bids with x in [0,1],
  // unfixed hourly binaries become plain bids without start-up cost.
  // With everything fixed this is the exact completion value.
  double bound(bool collect_fracs) {
    if (collect_fracs) {
      std::fill(frac_sum_.begin(), frac_sum_.end(), 0.0);
      std::fill(frac_cnt_.begin(), frac_cnt_.end(), 0);
    }
    std::fill(shift_.begin(), shift_.end(), 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < binaries_.size(); ++b) {
      if (status_[b] != 1) continue;
      const auto& ref = binaries_[b];
      if (ref.is_block) {
        const auto& blk = s_.block_bids[static_cast<std::size_t>(ref.index)];
        for (int t = blk.first_period; t <= blk.last_period; ++t)
          shift_[static_cast<std::size_t>(t)] += blk.quantity;
        total += blk.quantity * blk.price * blk.span();
      } else {
        total -=
            s_.hourly_bids[static_cast<std::size_t>(ref.index)].startup_cost;
      }
    }

    for (int t = 0; t < s_.num_periods; ++t) {
      vars_.clear();
      var_binary_.clear();
      double baseline_qty = 0.0;
      double baseline_welfare = 0.0;
      for (const auto& e : entries_[static_cast<std::size_t>(t)]) {
        if (e.binary >= 0) {
          signed char st = status_[static_cast<std::size_t>(e.binary)];
          if (st == 0) continue;
          if (st == 1) {
            if (e.hourly_index < 0) continue;  // block: already in shift_
            baseline_qty += e.min_ratio * e.quantity;
            baseline_welfare += e.min_ratio * e.quantity * e.price;
            double w = (1.0 - e.min_ratio) * e.quantity;
            if (w != 0.0) {
              vars_.push_back({e.price, w, 0});
              var_binary_.push_back(-1);
            }
            continue;
          }
          // unfixed: relaxed to a plain bid
          vars_.push_back({e.price, e.quantity, 0});
          var_binary_.push_back(e.binary);
          continue;
        }
        vars_.push_back({e.price, e.quantity, 0});
        var_binary_.push_back(-1);
      }

      double target = rhs_[static_cast<std::size_t>(t)] -
                      shift_[static_cast<std::size_t>(t)] - baseline_qty;
      auto outcome = detail::solve_single_balance(
          vars_, target, std::span<double>(y_.data(), vars_.size()),
          cfg_.balance_tolerance);
      if (!outcome.feasible) return kNegInf;
      total += outcome.objective + baseline_welfare;

      if (collect_fracs) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
          int b = var_binary_[i];
          if (b >= 0) {
            frac_sum_[static_cast<std::size_t>(b)] += y_[i];
            frac_cnt_[static_cast<std::size_t>(b)] += 1;
          }
        }
      }
    }
    return total;
  }

  double frac_of(int binary) const {
    std::size_t b = static_cast<std::size_t>(binary);
    return frac_cnt_[b] > 0 ? frac_sum_[b] / frac_cnt_[b] : 0.5;
  }

  ClearingSolution search() {
    auto start = std::chrono::steady_clock::now();
    incumbent_ = kNegInf;
    best_.assign(binaries_.size(), 0);
    bool has_incumbent = false;

    // Cheap warm start: everything switched off is feasible whenever the
    // rhs is reachable by the always-on bids alone.
    std::fill(status_.begin(), status_.end(), 0);
    double all_off = bound(false);
    if (all_off > kNegInf) {
      incumbent_ = all_off;
      has_incumbent = true;
    }
    std::fill(status_.begin(), status_.end(), -1);

    aborted_ = false;
    found_ = has_incumbent;
    dfs(0);

    ClearingSolution sol;
    sol.stats.nodes_explored = nodes_;
    sol.stats.nodes_pruned = pruned_;
    sol.stats.node_limit_hit = aborted_;
    if (found_) {
      FixedBinaryAssignment fixed;
      for (std::size_t b = 0; b < binaries_.size(); ++b) {
        const auto& ref = binaries_[b];
        int u = best_[b];
        if (ref.is_block)
          fixed.u_block[s_.block_bids[static_cast<std::size_t>(ref.index)].id] =
              u;
        else
          fixed.u_hourly
              [s_.hourly_bids[static_cast<std::size_t>(ref.index)].id] = u;
      }
      sol = clear_all_periods(s_, fixed, rhs_, cfg_);
      sol.stats.nodes_explored = nodes_;
      sol.stats.nodes_pruned = pruned_;
      sol.stats.node_limit_hit = aborted_;
      if (sol.status == SolveStatus::Optimal && aborted_)
        sol.status = SolveStatus::Approximate;
    } else {
      sol.status = SolveStatus::Infeasible;
    }
    sol.stats.time_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return sol;
  }

 private:
  struct BinaryRef {
    bool is_block;
    int index;
    double impact;
  };

  struct Entry {
    double price;
    double quantity;
    double min_ratio;
    int hourly_index;  // -1 for block pseudo-entries
    int binary;        // index into binaries_, -1 if none
  };

  const BidId& id_of(const BinaryRef& ref) const {
    return ref.is_block
               ? s_.block_bids[static_cast<std::size_t>(ref.index)].id
               : s_.hourly_bids[static_cast<std::size_t>(ref.index)].id;
  }

  const BidId& entry_id(const Entry& e) const {
    return e.hourly_index >= 0
               ? s_.hourly_bids[static_cast<std::size_t>(e.hourly_index)].id
               : s_.block_bids
                     [static_cast<std::size_t>(
                         binaries_[static_cast<std::size_t>(e.binary)].index)]
                         .id;
  }

  void dfs(std::size_t depth) {
    if (aborted_) return;
    ++nodes_;
    if (nodes_ > cfg_.node_limit) {
      aborted_ = true;
      return;
    }
    bool at_leaf = depth == binaries_.size();
    double b = bound(!at_leaf);
    if (found_ && b <= prune_cutoff(incumbent_)) {
      ++pruned_;
      return;
    }
    if (b == kNegInf) {
      ++pruned_;
      return;
    }
    if (at_leaf) {
      incumbent_ = b;
      best_.assign(status_.begin(), status_.end());
      found_ = true;
      return;
    }
    int next = static_cast<int>(depth);
    int first = frac_of(next) >= 0.5 ? 1 : 0;
    for (int attempt = 0; attempt < 2; ++attempt) {
      int v = attempt == 0 ? first : 1 - first;
      status_[static_cast<std::size_t>(next)] = static_cast<signed char>(v);
      dfs(depth + 1);
      status_[static_cast<std::size_t>(next)] = -1;
    }
  }

  const Scenario& s_;
  const ClearingConfig& cfg_;
  RhsVector rhs_;
  std::vector<BinaryRef> binaries_;
  std::vector<std::vector<Entry>> entries_;
  std::vector<signed char> status_;
  std::vector<signed char> best_;

  // scratch
  std::vector<detail::MeritVar> vars_;
  std::vector<int> var_binary_;
  std::vector<double> y_;
  std::vector<double> shift_;
  std::vector<double> frac_sum_;
  std::vector<int> frac_cnt_;

  double incumbent_ = kNegInf;
  bool found_ = false;
  bool aborted_ = false;
  std::int64_t nodes_ = 0;
  std::int64_t pruned_ = 0;
};

}  // namespace

ClearingSolution solve_exact(const Scenario& s, const ClearingConfig& cfg) {
  return solve_exact(s, cfg, zero_rhs(s));
}

ClearingSolution solve_exact(const Scenario& s, const ClearingConfig& cfg,
                             const RhsVector& rhs) {
  if (static_cast<int>(rhs.size()) != s.num_periods)
    throw std::invalid_argument("solve_exact: rhs size != num_periods");
  Engine engine(s, cfg, rhs);
  return engine.search();
}

double upper_bound(const Scenario& s, const PartialAssignment& partial,
                   const ClearingConfig& cfg) {
  return upper_bound(s, partial, cfg, zero_rhs(s));
}

double upper_bound(const Scenario& s, const PartialAssignment& partial,
                   const ClearingConfig& cfg, const RhsVector& rhs) {
  if (static_cast<int>(rhs.size()) != s.num_periods)
    throw std::invalid_argument("upper_bound: rhs size != num_periods");
  Engine engine(s, cfg, rhs);
  for (const auto& [id, u] : partial.u) {
    if (u != 0 && u != 1)
      throw std::invalid_argument("upper_bound: u must be 0 or 1 for " + id);
    int b = engine.binary_for_id(id);
    if (b < 0)
      throw std::invalid_argument("upper_bound: " + id +
                                  " does not carry a binary");
    engine.set_status(b, u);
  }
  return engine.bound(false);
}

}  // namespace aggclear
