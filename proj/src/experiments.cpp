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

#include "aggclear/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "aggclear/exact_solver.hpp"
#include "aggclear/scenario_gen.hpp"
#include "aggclear/two_step.hpp"

namespace aggclear {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::min<std::size_t>(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

GeneratorParams case_params(const ExperimentGrid& grid, int n_bids,
                            double block_ratio, std::uint64_t case_index) {
  GeneratorParams p;
  p.n_demand = n_bids;
  p.n_supply = n_bids;
  p.num_periods = grid.periods;
  p.block_ratio = block_ratio;
  p.seed = mix_seed(grid.seed, static_cast<std::uint64_t>(n_bids),
                    static_cast<std::uint64_t>(std::llround(block_ratio * 1e6)),
                    case_index);
  return p;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string format_row(const char* fmt, ...) {
  char buffer[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  return buffer;
}

}  // namespace

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AGGCLEAR_THREADS")) {
    long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

std::vector<HitRateRow> run_hitrate(const ExperimentGrid& grid, int cases,
                                    std::ostream* log) {
  unsigned threads = resolve_thread_count(grid.threads);
  std::vector<HitRateRow> rows;

  struct CaseResult {
    bool ok = false;
    double gap = 0.0;
    std::string error;
  };

  for (int n_bids : grid.n_bids) {
    for (double ratio : grid.block_ratios) {
      std::vector<CaseResult> results(static_cast<std::size_t>(cases));
      parallel_for(
          static_cast<std::size_t>(cases), threads, [&](std::size_t k) {
            auto& result = results[k];
            try {
              Scenario scenario =
                  generate(case_params(grid, n_bids, ratio, k));
              ClearingSolution exact = solve_exact(scenario, grid.config);
              if (exact.status != SolveStatus::Optimal) {
                result.error = "exact solve not optimal (" +
                               std::string(to_string(exact.status)) + ")";
                return;
              }
              ClearingSolution approx = clear_two_step(scenario, grid.config);
              double denom = std::max(std::abs(exact.tsw), 1e-9);
              result.gap = std::max((exact.tsw - approx.tsw) / denom, 0.0);
              result.ok = true;
            } catch (const std::exception& e) {
              result.error = e.what();
            }
          });

      HitRateRow row;
      row.n_bids = n_bids;
      row.block_ratio = ratio;
      double gap_sum = 0.0;
      int hits = 0;
      for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        if (!r.ok) {
          row.cases_failed += 1;
          if (log)
            *log << "hitrate case " << k << " (n_bids=" << n_bids
                 << ", block_ratio=" << ratio << ") failed: " << r.error
                 << "\n";
          continue;
        }
        row.cases_ok += 1;
        gap_sum += r.gap;
        if (r.gap < grid.config.epsilon_threshold) ++hits;
      }
      if (row.cases_ok > 0) {
        row.hit_rate_pct = 100.0 * hits / row.cases_ok;
        row.mean_rel_gap_pct = 100.0 * gap_sum / row.cases_ok;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TimingRow> run_timing(const ExperimentGrid& grid, int reps,
                                  std::ostream* log) {
  unsigned threads = resolve_thread_count(grid.threads);
  std::vector<TimingRow> rows;

  struct RepResult {
    double t_exact = 0.0;
    double t_agg = 0.0;
    bool node_limit_hit = false;
  };

  for (int n_bids : grid.n_bids) {
    for (double ratio : grid.block_ratios) {
      std::vector<RepResult> results(static_cast<std::size_t>(reps));
      parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t k) {
        Scenario scenario = generate(case_params(grid, n_bids, ratio, k));
        auto t0 = Clock::now();
        ClearingSolution exact = solve_exact(scenario, grid.config);
        results[k].t_exact = seconds_since(t0);
        auto t1 = Clock::now();
        clear_two_step(scenario, grid.config);
        results[k].t_agg = seconds_since(t1);
        results[k].node_limit_hit = exact.stats.node_limit_hit;
      });

      TimingRow row;
      row.n_bids = n_bids;
      row.block_ratio = ratio;
      std::vector<double> exact_times, agg_times;
      for (const auto& r : results) {
        exact_times.push_back(r.t_exact);
        agg_times.push_back(r.t_agg);
        row.node_limit_hit = row.node_limit_hit || r.node_limit_hit;
      }
      row.t_exact_s = median(exact_times);
      row.t_agg_s = median(agg_times);
      row.speedup = row.t_agg_s > 0.0 ? row.t_exact_s / row.t_agg_s : 0.0;
      if (row.node_limit_hit && log)
        *log << "timing cell n_bids=" << n_bids << ", block_ratio=" << ratio
             << ": exact solver hit its node limit\n";
      rows.push_back(row);
    }
  }
  return rows;
}

void write_hitrate_csv(std::ostream& out,
                       const std::vector<HitRateRow>& rows) {
  out << "n_bids,block_ratio,hit_rate_pct,mean_rel_gap_pct\n";
  for (const auto& row : rows) {
    out << format_row("%d,%g,%.1f,%.4f\n", row.n_bids, row.block_ratio,
                      row.hit_rate_pct, row.mean_rel_gap_pct);
  }
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "n_bids,block_ratio,t_exact_s,t_agg_s,speedup,note\n";
  for (const auto& row : rows) {
    out << format_row("%d,%g,%.6f,%.6f,%.2f,%s\n", row.n_bids,
                      row.block_ratio, row.t_exact_s, row.t_agg_s, row.speedup,
                      row.node_limit_hit ? "node_limit" : "");
  }
}

}  // namespace aggclear
