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

#include <cmath>
#include <random>

#include <doctest.h>

#include "aggclear/scenario_io.hpp"
#include "support/fixtures.hpp"

using namespace aggclear;
using namespace aggclear::testing;

TEST_CASE("validate accepts the worked example") {
  CHECK(validate_scenario(worked_example()).ok());
}

TEST_CASE("validate flags min_ratio out of range") {
  Scenario s = worked_example();
  s.hourly_bids[0].min_ratio = 1.5;
  auto report = validate_scenario(s);
  REQUIRE_FALSE(report.ok());
  CHECK(report.issues[0].message == "min_ratio out of [0,1]");
  CHECK(report.issues[0].bid_id == "1");
}

TEST_CASE("validate flags malformed blocks") {
  Scenario s;
  s.num_periods = 3;
  s.hourly_bids = {hourly("d", 0, 10, 50)};
  s.block_bids = {block("blk", 2, 0, 5, 60)};  // inverted range
  auto report = validate_scenario(s);
  REQUIRE_FALSE(report.ok());
  CHECK(report.issues[0].bid_id == "blk");

  s.block_bids = {block("blk", 1, 3, 5, 60)};  // past the horizon
  CHECK_FALSE(validate_scenario(s).ok());
}

TEST_CASE("validate flags duplicates, zero quantities, bad periods") {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {hourly("a", 0, 10, 50), hourly("a", 0, -5, 40),
                   hourly("z", 0, 0.0, 40), hourly("p", 2, 5, 40)};
  auto report = validate_scenario(s);
  CHECK(report.issues.size() == 3);
}

TEST_CASE("welfare of the worked example optimum is 3416") {
  Scenario s = worked_example();
  ClearingSolution sol = worked_example_optimum();

  // independent term-by-term evaluation
  double expected = 0.0;
  for (const auto& bid : s.hourly_bids)
    expected += bid.quantity * bid.price * sol.x.at(bid.id);
  CHECK(total_social_welfare(s, sol) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(total_social_welfare(s, sol) == doctest::Approx(3416.0).epsilon(1e-9));
}

TEST_CASE("welfare of the all-zero solution is 0") {
  Scenario s = worked_example();
  ClearingSolution sol;
  for (const auto& bid : s.hourly_bids) {
    sol.x[bid.id] = 0.0;
    sol.u_hourly[bid.id] = 0;
  }
  CHECK(total_social_welfare(s, sol) == 0.0);
}

TEST_CASE("welfare of one accepted demand bid") {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {hourly("d", 0, 10, 5)};
  ClearingSolution sol;
  sol.x["d"] = 1.0;
  sol.u_hourly["d"] = 1;
  CHECK(total_social_welfare(s, sol) == 50.0);
}

TEST_CASE("welfare requires an indicator for every bid") {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {hourly("d", 0, 10, 5)};
  ClearingSolution sol;
  CHECK_THROWS_AS(total_social_welfare(s, sol), std::invalid_argument);

  s.hourly_bids[0].startup_cost = 100.0;
  sol.x["d"] = 1.0;  // x present, u missing on a binary bid
  CHECK_THROWS_AS(total_social_welfare(s, sol), std::invalid_argument);
}

TEST_CASE("block welfare counts every covered period and startups subtract") {
  Scenario s;
  s.num_periods = 3;
  s.hourly_bids = {hourly("d", 1, 10, 50, 0.0, 75.0)};
  s.block_bids = {block("blk", 0, 2, -4, 30)};
  ClearingSolution sol;
  sol.x["d"] = 1.0;
  sol.u_hourly["d"] = 1;
  sol.u_block["blk"] = 1;
  // 10*50 - 75 + 3*(-4*30)
  CHECK(total_social_welfare(s, sol) == doctest::Approx(500.0 - 75.0 - 360.0));
}

TEST_CASE("balance residual of the worked example optimum is zero") {
  CHECK(std::abs(balance_residual(worked_example(), worked_example_optimum(),
                                  0)) <= 1e-6);
}

TEST_CASE("balance residual of the all-zero solution is zero") {
  Scenario s = worked_example();
  ClearingSolution sol;
  for (const auto& bid : s.hourly_bids) {
    sol.x[bid.id] = 0.0;
    sol.u_hourly[bid.id] = 0;
  }
  CHECK(balance_residual(s, sol, 0) == 0.0);
}

TEST_CASE("balance residual with everything accepted is -158") {
  Scenario s = worked_example();
  ClearingSolution sol;
  for (const auto& bid : s.hourly_bids) {
    sol.x[bid.id] = 1.0;
    sol.u_hourly[bid.id] = 1;
  }
  CHECK(balance_residual(s, sol, 0) == doctest::Approx(328.0 - 486.0));
}

TEST_CASE("flipping a block bid moves each covered period's residual by Q") {
  Scenario s;
  s.num_periods = 4;
  s.hourly_bids = {hourly("d", 0, 10, 50)};
  s.block_bids = {block("blk", 1, 2, -7, 45)};
  ClearingSolution sol;
  sol.x["d"] = 0.5;
  sol.u_hourly["d"] = 1;
  sol.u_block["blk"] = 0;
  double before1 = balance_residual(s, sol, 1);
  double before3 = balance_residual(s, sol, 3);
  sol.u_block["blk"] = 1;
  CHECK(balance_residual(s, sol, 1) - before1 == doctest::Approx(-7.0));
  CHECK(balance_residual(s, sol, 2) == doctest::Approx(-7.0));
  CHECK(balance_residual(s, sol, 3) == before3);
}

TEST_CASE("welfare is linear in each acceptance fraction") {
  Scenario s = worked_example();
  std::mt19937_64 rng(7);
  ClearingSolution sol;
  for (const auto& bid : s.hourly_bids) {
    sol.x[bid.id] = (rng() >> 11) * 0x1.0p-53;
    sol.u_hourly[bid.id] = 1;
  }
  double base = total_social_welfare(s, sol);
  for (const auto& bid : s.hourly_bids) {
    ClearingSolution scaled = sol;
    double lambda = 0.25;
    double delta = (lambda - 1.0) * sol.x.at(bid.id);
    scaled.x[bid.id] = lambda * sol.x.at(bid.id);
    CHECK(total_social_welfare(s, scaled) ==
          doctest::Approx(base + delta * bid.quantity * bid.price)
              .epsilon(1e-9));
  }
}

TEST_CASE("check_solution catches box and balance violations") {
  Scenario s;
  s.num_periods = 1;
  s.hourly_bids = {hourly("d", 0, 10, 50, 0.4), hourly("s", 0, -10, 40)};
  ClearingSolution sol;
  sol.x = {{"d", 1.0}, {"s", 1.0}};
  sol.u_hourly = {{"d", 1}, {"s", 1}};
  CHECK(check_solution(s, sol).ok());

  sol.x["d"] = 0.2;  // below min_ratio while on
  CHECK_FALSE(check_solution(s, sol).ok());

  sol.x["d"] = 0.0;
  sol.u_hourly["d"] = 0;
  CHECK_FALSE(check_solution(s, sol).ok());  // balance -10 now
}

TEST_CASE("scenario json round-trips and coerces numeric ids") {
  Scenario s = worked_example();
  s.block_bids = {block("b0", 0, 0, 5, 60)};
  Scenario back = scenario_from_json(scenario_to_json(s));
  REQUIRE(back.hourly_bids.size() == s.hourly_bids.size());
  REQUIRE(back.block_bids.size() == 1);
  CHECK(back.num_periods == s.num_periods);
  for (std::size_t i = 0; i < s.hourly_bids.size(); ++i) {
    CHECK(back.hourly_bids[i].id == s.hourly_bids[i].id);
    CHECK(back.hourly_bids[i].quantity == s.hourly_bids[i].quantity);
    CHECK(back.hourly_bids[i].price == s.hourly_bids[i].price);
  }

  auto doc = nlohmann::json::parse(R"({
    "num_periods": 2,
    "hourly_bids": [{"id": 7, "period": 1, "quantity": -3.5, "price": 41}],
    "block_bids": []
  })");
  Scenario coerced = scenario_from_json(doc);
  CHECK(coerced.hourly_bids[0].id == "7");
  CHECK(coerced.hourly_bids[0].min_ratio == 0.0);
}

TEST_CASE("scenario json rejects malformed documents") {
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse("[1,2]")),
                  ScenarioIoError);
  CHECK_THROWS_AS(
      scenario_from_json(nlohmann::json::parse(
          R"({"num_periods": 1, "hourly_bids": [{"id": "a"}]})")),
      ScenarioIoError);
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/path.json"),
                  ScenarioIoError);
}

TEST_CASE("worked example data file matches the in-code fixture") {
  Scenario from_file =
      load_scenario_file(std::string(AGGCLEAR_TEST_DATA) +
                         "/worked_example.json");
  Scenario in_code = worked_example();
  REQUIRE(from_file.hourly_bids.size() == in_code.hourly_bids.size());
  for (std::size_t i = 0; i < in_code.hourly_bids.size(); ++i) {
    CHECK(from_file.hourly_bids[i].id == in_code.hourly_bids[i].id);
    CHECK(from_file.hourly_bids[i].quantity == in_code.hourly_bids[i].quantity);
    CHECK(from_file.hourly_bids[i].price == in_code.hourly_bids[i].price);
  }
}

TEST_CASE("natural id order") {
  CHECK(natural_id_less("2", "10"));
  CHECK_FALSE(natural_id_less("10", "2"));
  CHECK(natural_id_less("A2", "A3"));
  CHECK(natural_id_less("A10", "A2"));  // lexicographic for non-digit ids
  CHECK(natural_id_less("d1", "s1"));
}
