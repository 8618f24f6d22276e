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

#include <cmath>
#include <random>

#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace aggclear;
using namespace aggclear::testing;

TEST_CASE("solve_exact reproduces the worked example optimum") {
  auto sol = solve_exact(worked_example());
  REQUIRE(sol.status == SolveStatus::Optimal);
  auto expected = worked_example_optimum();
  for (const auto& [id, x] : expected.x)
    CHECK(sol.x.at(id) == doctest::Approx(x).epsilon(5e-4));
  CHECK(sol.tsw == doctest::Approx(3416.0).epsilon(1e-9));
  CHECK(std::abs(balance_residual(worked_example(), sol, 0)) <= 1e-6);
  CHECK(check_solution(worked_example(), sol).ok());
}

TEST_CASE("a profitable block bid is switched on") {
  Scenario s = worked_example();
  s.block_bids = {block("blk", 0, 0, 5.0, 100.0)};
  auto sol = solve_exact(s);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.u_block.at("blk") == 1);

  auto oracle = enumeration_oracle(s);
  CHECK(sol.tsw == doctest::Approx(oracle.tsw).epsilon(1e-9));
  // switching the block on displaces 5 MWh of marginal demand at 45
  CHECK(sol.tsw == doctest::Approx(3416.0 + 5.0 * 100.0 - 5.0 * 45.0));
}

TEST_CASE("an empty scenario clears trivially") {
  Scenario s;
  s.num_periods = 1;
  auto sol = solve_exact(s);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.tsw == 0.0);
  CHECK(sol.x.empty());
}

TEST_CASE("unreachable rhs is infeasible") {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {hourly("d", 0, 5, 50)};
  CHECK(solve_exact(s, {}, RhsVector{10.0}).status ==
        SolveStatus::Infeasible);
  CHECK(solve_exact(s, {}, RhsVector{3.0}).status == SolveStatus::Optimal);
}

TEST_CASE("node limit degrades the status to approximate") {
  Scenario s = worked_example();
  s.block_bids = {block("b1", 0, 0, 5.0, 100.0),
                  block("b2", 0, 0, -6.0, 41.0),
                  block("b3", 0, 0, 7.0, 44.0)};
  ClearingConfig cfg;
  cfg.node_limit = 2;
  auto sol = solve_exact(s, cfg);
  CHECK(sol.stats.node_limit_hit);
  CHECK(sol.status == SolveStatus::Approximate);
  CHECK(check_solution(s, sol).ok());  // incumbent is still feasible

  auto unlimited = solve_exact(s);
  CHECK_FALSE(unlimited.stats.node_limit_hit);
  CHECK(unlimited.status == SolveStatus::Optimal);
  CHECK(unlimited.tsw >= sol.tsw - 1e-9);
}

TEST_CASE("solve_exact matches exhaustive enumeration on random instances") {
  std::mt19937_64 rng(424242);
  RandomInstanceOptions opt;
  opt.max_bids_per_side = 8;
  opt.max_periods = 3;
  opt.max_blocks = 3;
  opt.min_ratio_prob = 0.15;
  opt.startup_prob = 0.15;
  opt.max_binaries = 8;
  for (int trial = 0; trial < 60; ++trial) {
    Scenario s = random_instance(rng, opt);
    auto sol = solve_exact(s);
    auto oracle = enumeration_oracle(s);
    REQUIRE(sol.status == oracle.status);
    if (sol.status != SolveStatus::Optimal) continue;
    CHECK(sol.tsw == doctest::Approx(oracle.tsw)
                         .epsilon(1e-9)
                         .scale(std::max(1.0, std::abs(oracle.tsw))));
    CHECK(check_solution(s, sol).ok());
  }
}

TEST_CASE("upper_bound with everything fixed equals the completion value") {
  Scenario s = worked_example();
  s.hourly_bids[0].startup_cost = 120.0;  // bid 1 now carries a binary
  s.block_bids = {block("blk", 0, 0, -10.0, 43.0)};

  PartialAssignment all;
  all.u["1"] = 1;
  all.u["blk"] = 1;
  FixedBinaryAssignment fixed;
  fixed.u_hourly["1"] = 1;
  fixed.u_block["blk"] = 1;
  auto completion = clear_all_periods(s, fixed);
  REQUIRE(completion.status == SolveStatus::Optimal);
  CHECK(upper_bound(s, all) == doctest::Approx(completion.tsw).epsilon(1e-12));
}

TEST_CASE("upper_bound without binaries equals the exact value") {
  Scenario s = worked_example();
  CHECK(upper_bound(s, {}) ==
        doctest::Approx(solve_exact(s).tsw).epsilon(1e-12));
}

TEST_CASE("upper_bound dominates both completions of an unfixed block") {
  Scenario s = worked_example();
  s.block_bids = {block("blk", 0, 0, 5.0, 100.0)};
  double bound = upper_bound(s, {});
  for (int u : {0, 1}) {
    FixedBinaryAssignment fixed;
    fixed.u_block["blk"] = u;
    auto completion = clear_all_periods(s, fixed);
    REQUIRE(completion.status == SolveStatus::Optimal);
    CHECK(bound >= completion.tsw - 1e-9);
  }
}

TEST_CASE("upper_bound respects a nonzero rhs") {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {hourly("d", 0, 10, 50), hourly("s", 0, -10, 40)};
  // forcing 5 MWh of net demand costs the cheapest supply
  CHECK(upper_bound(s, {}, {}, RhsVector{-5.0}) ==
        doctest::Approx(solve_exact(s, {}, RhsVector{-5.0}).tsw));
  CHECK(upper_bound(s, {}, {}, RhsVector{-100.0}) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("upper_bound rejects ids without a binary") {
  Scenario s = worked_example();
  PartialAssignment partial;
  partial.u["1"] = 1;  // bid 1 has no min_ratio and no startup cost
  CHECK_THROWS_AS(upper_bound(s, partial), std::invalid_argument);
  partial.u = {{"nope", 0}};
  CHECK_THROWS_AS(upper_bound(s, partial), std::invalid_argument);
}

TEST_CASE("fixing one more binary never raises the bound") {
  std::mt19937_64 rng(5150);
  RandomInstanceOptions opt;
  opt.max_bids_per_side = 6;
  opt.max_periods = 2;
  opt.max_blocks = 3;
  opt.min_ratio_prob = 0.2;
  opt.startup_prob = 0.2;
  opt.max_binaries = 6;
  auto unit = [&] { return (rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 60; ++trial) {
    Scenario s = random_instance(rng, opt);
    std::vector<BidId> binaries;
    for (const auto& bid : s.hourly_bids)
      if (bid.has_binary()) binaries.push_back(bid.id);
    for (const auto& blk : s.block_bids) binaries.push_back(blk.id);
    if (binaries.empty()) continue;

    PartialAssignment partial;
    double bound = upper_bound(s, partial);
    for (const auto& id : binaries) {
      partial.u[id] = unit() < 0.5 ? 0 : 1;
      double tightened = upper_bound(s, partial);
      CHECK(tightened <= bound + 1e-9);
      bound = tightened;
    }
  }
}

TEST_CASE("solver statistics are reported") {
  Scenario s = worked_example();
  s.block_bids = {block("blk", 0, 0, 5.0, 100.0)};
  auto sol = solve_exact(s);
  CHECK(sol.stats.nodes_explored > 0);
  CHECK(sol.stats.time_ms >= 0.0);
}
