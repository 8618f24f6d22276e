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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aggclear/exact_solver.hpp"
#include "aggclear/experiments.hpp"
#include "aggclear/scenario_gen.hpp"
#include "aggclear/scenario_io.hpp"
#include "aggclear/svg_plot.hpp"
#include "aggclear/two_step.hpp"

namespace {

using namespace aggclear;

constexpr int kExitFileError = 1;
constexpr int kExitValidationError = 2;
constexpr int kExitInfeasible = 3;

struct AggregationFlags {
  int bins = 0;      // --bins K
  int pairwise = 0;  // --pairwise n

  AggregationMode mode() const {
    if (pairwise > 0) return pairwise_mode(pairwise);
    if (bins > 0) return nominal_mode(bins);
    return nominal_mode();  // automatic bin count
  }
};

void add_aggregation_flags(CLI::App* cmd, AggregationFlags* flags) {
  auto* bins = cmd->add_option("--bins", flags->bins,
                               "nominal aggregation with K price bins")
                   ->check(CLI::PositiveNumber);
  auto* pairwise =
      cmd->add_option(
             "--pairwise", flags->pairwise,
             "aggregate groups of n bids in merit order instead of price bins")
          ->check(CLI::PositiveNumber);
  bins->excludes(pairwise);
}

int write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return kExitFileError;
  }
  out << text;
  return 0;
}

int run_clear(const std::string& scenario_path, const std::string& method,
              const AggregationFlags& aggregation, double eps,
              std::int64_t node_limit, const std::string& out_path) {
  Scenario scenario;
  try {
    scenario = load_scenario_file(scenario_path);
  } catch (const ScenarioIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFileError;
  }

  auto report = validate_scenario(scenario);
  if (!report.ok()) {
    std::cerr << "invalid scenario:\n" << report.to_string();
    return kExitValidationError;
  }

  ClearingConfig cfg;
  cfg.aggregation = aggregation.mode();
  cfg.epsilon_threshold = eps;
  if (node_limit > 0) cfg.node_limit = node_limit;

  ClearingSolution solution = method == "exact"
                                  ? solve_exact(scenario, cfg)
                                  : clear_two_step(scenario, cfg);
  int rc = write_or_print(solution_to_json(solution).dump(2) + "\n", out_path);
  if (rc != 0) return rc;
  if (solution.status == SolveStatus::Infeasible) {
    std::cerr << "infeasible scenario\n";
    return kExitInfeasible;
  }
  return 0;
}

int run_generate(const GeneratorParams& params, const std::string& out_path) {
  Scenario scenario;
  try {
    scenario = generate(params);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationError;
  }
  return write_or_print(scenario_to_json(scenario).dump(2) + "\n", out_path);
}

ExperimentGrid make_grid(const std::vector<int>& bids,
                         const std::vector<double>& ratios, int periods,
                         std::uint64_t seed, double eps,
                         std::int64_t node_limit,
                         const AggregationFlags& aggregation,
                         unsigned threads) {
  ExperimentGrid grid;
  if (!bids.empty()) grid.n_bids = bids;
  if (!ratios.empty()) grid.block_ratios = ratios;
  grid.periods = periods;
  grid.seed = seed;
  grid.threads = threads;
  grid.config.aggregation = aggregation.mode();
  grid.config.epsilon_threshold = eps;
  if (node_limit > 0) grid.config.node_limit = node_limit;
  return grid;
}

int run_plot(const std::string& csv_path, const std::string& svg_path) {
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << "error: cannot open " << csv_path << "\n";
    return kExitFileError;
  }
  CsvTable table;
  try {
    table = parse_csv(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << csv_path << ": " << e.what() << "\n";
    return kExitFileError;
  }
  return write_or_print(render_bar_chart_svg(table), svg_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"day-ahead market clearing: exact and aggregation-based"};
  app.require_subcommand(1);

  // clear
  std::string scenario_path, method = "exact", out_path;
  AggregationFlags clear_agg;
  double clear_eps = 1e-3;
  std::int64_t clear_node_limit = 0;
  auto* clear = app.add_subcommand("clear", "clear one scenario file");
  clear->add_option("--scenario", scenario_path, "scenario JSON file")
      ->required();
  clear->add_option("--method", method, "exact | aggregated")
      ->check(CLI::IsMember({"exact", "aggregated"}));
  add_aggregation_flags(clear, &clear_agg);
  clear->add_option("--eps", clear_eps, "relative TSW threshold");
  clear->add_option("--node-limit", clear_node_limit,
                    "branch-and-bound node limit");
  clear->add_option("--out", out_path, "write the solution here (else stdout)");

  // generate
  GeneratorParams gen_params;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "emit a random scenario");
  gen->add_option("--demand", gen_params.n_demand, "demand bids per period");
  gen->add_option("--supply", gen_params.n_supply, "supply bids per period");
  gen->add_option("--periods", gen_params.num_periods, "time periods");
  gen->add_option("--block-ratio", gen_params.block_ratio,
                  "blocks per supply+demand bid");
  gen->add_option("--price-min", gen_params.price_min, "");
  gen->add_option("--price-max", gen_params.price_max, "");
  gen->add_option("--qty-min", gen_params.qty_min, "");
  gen->add_option("--qty-max", gen_params.qty_max, "");
  gen->add_option("--min-ratio-prob", gen_params.min_ratio_prob, "");
  gen->add_option("--startup-prob", gen_params.startup_prob, "");
  gen->add_option("--seed", gen_params.seed, "");
  gen->add_option("--out", gen_out, "output file (else stdout)");

  // hitrate
  std::vector<int> hr_bids;
  std::vector<double> hr_ratios;
  int hr_periods = 5, hr_cases = 50;
  double hr_eps = 1e-3;
  std::uint64_t hr_seed = 1;
  std::int64_t hr_node_limit = 0;
  unsigned hr_threads = 0;
  bool hr_full = false;
  AggregationFlags hr_agg;
  std::string hr_csv;
  auto* hitrate = app.add_subcommand(
      "hitrate", "hit-rate battery: two-step TSW vs exact TSW");
  hitrate->add_option("--bids", hr_bids, "grid of bids per side")->delimiter(',');
  hitrate->add_option("--block-ratios", hr_ratios, "grid of block ratios")->delimiter(',');
  hitrate->add_option("--periods", hr_periods, "");
  hitrate->add_option("--cases", hr_cases, "cases per grid cell");
  hitrate->add_option("--eps", hr_eps, "success threshold");
  hitrate->add_option("--seed", hr_seed, "");
  hitrate->add_option("--node-limit", hr_node_limit, "");
  hitrate->add_option("--threads", hr_threads,
                      "worker pool size (AGGCLEAR_THREADS otherwise)");
  hitrate->add_flag("--full", hr_full,
                    "large grid: 100..1000 bids per side, 250 cases");
  add_aggregation_flags(hitrate, &hr_agg);
  hitrate->add_option("--csv", hr_csv, "output CSV (else stdout)");

  // timing
  std::vector<int> tm_bids;
  std::vector<double> tm_ratios;
  int tm_periods = 5, tm_reps = 3;
  std::uint64_t tm_seed = 1;
  std::int64_t tm_node_limit = 100000;  // safety valve at large sizes
  unsigned tm_threads = 1;
  AggregationFlags tm_agg;
  std::string tm_csv;
  auto* timing =
      app.add_subcommand("timing", "wall-clock battery: exact vs aggregated");
  timing->add_option("--bids", tm_bids, "grid of bids per side")->delimiter(',');
  timing->add_option("--block-ratios", tm_ratios, "grid of block ratios")->delimiter(',');
  timing->add_option("--periods", tm_periods, "");
  timing->add_option("--reps", tm_reps, "repetitions per cell");
  timing->add_option("--seed", tm_seed, "");
  timing->add_option("--node-limit", tm_node_limit,
                     "branch-and-bound node limit (0 = solver default)");
  timing->add_option("--threads", tm_threads,
                     "worker pool size; keep 1 for clean timings");
  add_aggregation_flags(timing, &tm_agg);
  timing->add_option("--csv", tm_csv, "output CSV (else stdout)");

  // plot
  std::string plot_csv, plot_svg;
  auto* plot = app.add_subcommand("plot", "render a battery CSV as SVG bars");
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--svg", plot_svg, "output SVG (else stdout)");

  CLI11_PARSE(app, argc, argv);

  if (clear->parsed())
    return run_clear(scenario_path, method, clear_agg, clear_eps,
                     clear_node_limit, out_path);
  if (gen->parsed()) return run_generate(gen_params, gen_out);
  if (hitrate->parsed()) {
    if (hr_full) {
      if (hr_bids.empty()) hr_bids = {100, 250, 500, 1000};
      if (hitrate->count("--cases") == 0) hr_cases = 250;
    }
    auto grid = make_grid(hr_bids, hr_ratios, hr_periods, hr_seed, hr_eps,
                          hr_node_limit, hr_agg, hr_threads);
    auto rows = run_hitrate(grid, hr_cases, &std::cerr);
    std::ostringstream csv;
    write_hitrate_csv(csv, rows);
    return write_or_print(csv.str(), hr_csv);
  }
  if (timing->parsed()) {
    auto grid = make_grid(tm_bids, tm_ratios, tm_periods, tm_seed,
                          /*eps=*/1e-3, tm_node_limit, tm_agg, tm_threads);
    if (tm_bids.empty()) grid.n_bids = {1000, 2000};
    if (tm_ratios.empty()) grid.block_ratios = {0.05};
    auto rows = run_timing(grid, tm_reps, &std::cerr);
    std::ostringstream csv;
    write_timing_csv(csv, rows);
    return write_or_print(csv.str(), tm_csv);
  }
  if (plot->parsed()) return run_plot(plot_csv, plot_svg);
  return 0;
}
