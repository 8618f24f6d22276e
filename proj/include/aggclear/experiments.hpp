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
#include <iosfwd>
#include <string>
#include <vector>

#include "aggclear/market_model.hpp"

namespace aggclear {

/// One experiment battery: a grid of (bids per side) x (block ratio) cells.
struct ExperimentGrid {
  std::vector<int> n_bids = {100, 250, 500};  // per side, per period
  std::vector<double> block_ratios = {0.1};
  int periods = 5;
  std::uint64_t seed = 1;
  ClearingConfig config;        // aggregation mode, eps, node limit
  unsigned threads = 0;         // 0 = AGGCLEAR_THREADS or hardware
};

struct HitRateRow {
  int n_bids = 0;
  double block_ratio = 0.0;
  double hit_rate_pct = 0.0;
  double mean_rel_gap_pct = 0.0;
  int cases_ok = 0;
  int cases_failed = 0;  // excluded from the rates, logged separately
};

/// Solves `cases` random scenarios per cell with both methods and reports the
/// share whose two-step TSW lands within config.epsilon_threshold of the
/// exact TSW. Cases whose exact solve is not proven optimal (node limit) are
/// excluded and counted in cases_failed; failures are logged to `log` when
/// given.
std::vector<HitRateRow> run_hitrate(const ExperimentGrid& grid, int cases,
                                    std::ostream* log = nullptr);

struct TimingRow {
  int n_bids = 0;
  double block_ratio = 0.0;
  double t_exact_s = 0.0;  // median over repetitions
  double t_agg_s = 0.0;
  double speedup = 0.0;    // t_exact / t_agg
  bool node_limit_hit = false;
};

/// Times both methods on `reps` fresh scenarios per cell and reports
/// medians. Rows where the exact solver ran into its node limit are flagged.
std::vector<TimingRow> run_timing(const ExperimentGrid& grid, int reps,
                                  std::ostream* log = nullptr);

// CSV emission. Deterministic for a fixed seed and grid (timing values
// excepted, which depend on the machine).
void write_hitrate_csv(std::ostream& out, const std::vector<HitRateRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

/// Worker pool size: `requested` when nonzero, otherwise the AGGCLEAR_THREADS
/// environment variable, otherwise hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

}  // namespace aggclear
