// Copyright 2026 The edgearo Authors
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

#include "edgearo/baselines.hpp"

#include <gtest/gtest.h>

#include "edgearo/ccg.hpp"
#include "edgearo/errors.hpp"
#include "test_support.hpp"

namespace edgearo {
namespace {

using testing::random_instance;
using testing::rel_close;
using testing::single_pair;

milp::SolveParams tight() {
  milp::SolveParams p;
  p.mip_gap = 1e-9;
  return p;
}

TEST(Deterministic, SinglePairServesNominalDemand) {
  const auto sol = solve_deterministic(single_pair(5.0, 3.0, 1, 1), tight());
  EXPECT_NEAR(sol.objective, 1.3, 1e-9);
  EXPECT_EQ(sol.plan.placed[0], 1);
  EXPECT_NEAR(sol.plan.procured[0], 5.0, 1e-9);
}

TEST(Deterministic, FreeDroppingPlacesNothing) {
  auto inst = random_instance(3, 3, 3, 1, 1);
  for (auto& p : inst.unmet_penalty) p = 0.0;
  const auto sol = solve_deterministic(inst, tight());
  EXPECT_EQ(sol.plan, FirstStagePlan::empty(3));
  EXPECT_NEAR(sol.objective, 0.0, 1e-12);
}

TEST(Deterministic, MatchesCcgOnDegenerateSet) {
  const auto inst = random_instance(21, 3, 3, 0, 0);
  CcgOptions opt;
  opt.eps = 1e-8;
  opt.master_params = opt.subproblem_params = tight();
  EXPECT_TRUE(rel_close(solve_deterministic(inst, tight()).objective,
                        run_ccg(inst, opt).objective, 1e-6));
}

TEST(Stochastic, SingleNominalScenarioIsDeterministic) {
  const auto inst = random_instance(22, 3, 3, 1, 1);
  const Scenario nominal{inst.nominal_demand, {0, 0, 0}};
  const auto so = solve_stochastic(inst, ScenarioSet::uniform({nominal}),
                                   tight());
  const auto det = solve_deterministic(inst, tight());
  EXPECT_TRUE(rel_close(so.objective, det.objective, 1e-9));
  const auto dup = solve_stochastic(
      inst, ScenarioSet::uniform({nominal, nominal}), tight());
  EXPECT_TRUE(rel_close(dup.objective, det.objective, 1e-9));
}

TEST(Stochastic, ExpectationBelowWorstCase) {
  const auto inst = random_instance(23, 3, 3, 2, 1);
  std::vector<Scenario> all;
  for (const auto& v : enumerate_vertices(inst.uncertainty, 3, 3)) {
    all.push_back(scenario_from_vertex(inst, v));
  }
  const auto so = solve_stochastic(inst, ScenarioSet::uniform(all), tight());
  CcgOptions opt;
  opt.eps = 1e-8;
  opt.master_params = opt.subproblem_params = tight();
  EXPECT_LE(so.objective, run_ccg(inst, opt).objective + 1e-6);
}

TEST(Stochastic, NestedSetsGiveMonotoneOptimum) {
  // Weights stay 1/6 and the removed mass moves to a zero-demand scenario
  // of cost 0, so the optimum is over a partial sum that can only shrink.
  const auto inst = random_instance(24, 3, 3, 2, 1);
  TrainingConfig cfg;
  cfg.num_scenarios = 6;
  auto full = generate_training_scenarios(inst, cfg);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t keep = full.items.size(); keep >= 1; --keep) {
    ScenarioSet subset;
    for (std::size_t n = 0; n < keep; ++n) subset.items.push_back(full.items[n]);
    const Scenario empty{std::vector<double>(3, 0.0), {0, 0, 0}};
    subset.items.push_back({empty, 1.0 - keep / 6.0});
    for (std::size_t n = 0; n < keep; ++n) subset.items[n].probability = 1.0 / 6;
    const double obj = solve_stochastic(inst, subset, tight()).objective;
    EXPECT_LE(obj, prev + 1e-9);
    prev = obj;
  }
}

TEST(Stochastic, RejectsBadSets) {
  const auto inst = random_instance(25, 2, 2, 1, 1);
  EXPECT_THROW(solve_stochastic(inst, ScenarioSet{}), InvalidInput);
  ScenarioSet bad = ScenarioSet::uniform({{inst.nominal_demand, {0, 0}}});
  bad.items[0].probability = 0.5;
  EXPECT_THROW(solve_stochastic(inst, bad), InvalidInput);
  auto many = ScenarioSet::uniform(std::vector<Scenario>(
      10, Scenario{inst.nominal_demand, {0, 0}}));
  EXPECT_THROW(solve_stochastic(inst, many, {}, 5), InvalidInput);
}

TEST(Training, ScenariosStayInBoxAndRespectFailureBudget) {
  const auto inst = random_instance(26, 4, 5, 2, 2);
  TrainingConfig cfg;
  cfg.num_scenarios = 300;
  cfg.correlation = 0.4;
  const auto set = generate_training_scenarios(inst, cfg);
  ASSERT_EQ(set.items.size(), 300u);
  set.validate(inst);
  for (const auto& ws : set.items) {
    int zs = 0;
    for (auto z : ws.scenario.failed) zs += z;
    EXPECT_LE(zs, 2);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_GE(ws.scenario.demand[i], inst.nominal_demand[i]);
      EXPECT_LE(ws.scenario.demand[i],
                inst.nominal_demand[i] + inst.deviation[i]);
    }
  }
  const auto again = generate_training_scenarios(inst, cfg);
  EXPECT_EQ(again.items[17].scenario, set.items[17].scenario);
}

ProblemInstance two_area_instance() {
  ProblemInstance inst = single_pair(20.0, 0.0, 0, 0);
  inst.num_areas = 2;
  inst.num_nodes = 2;
  inst.price = {0.01, 0.01};
  inst.capacity = {24.0, 30.0};
  inst.install_cost = {0.1, 0.1};
  inst.storage_cost = {0.0, 0.0};
  inst.initial_placement = {0, 0};
  inst.delay = Matrix<double>(2, 2);
  inst.delay(0, 0) = 1.0;
  inst.delay(0, 1) = 5.0;
  inst.delay(1, 0) = 1.0;
  inst.delay(1, 1) = 3.0;
  inst.eligible = Matrix<std::uint8_t>(2, 2, 1);
  inst.unmet_penalty = {0.5, 0.5};
  inst.nominal_demand = {10.0, 20.0};
  inst.deviation = {0.0, 0.0};
  return inst;
}

TEST(Heuristic, SingleChoiceTakesAllDemand) {
  const auto plan = heuristic_placement(single_pair(5.0, 0.0, 0, 0));
  EXPECT_EQ(plan.placed[0], 1);
  EXPECT_EQ(plan.procured[0], 5.0);
}

TEST(Heuristic, SpillsToSecondClosestNode) {
  // Area 1 (demand 20) goes first and takes 20 of node 0's 24 units; area 0
  // (demand 10) gets the remaining 4 there and 6 at node 1.
  const auto inst = two_area_instance();
  const auto plan = heuristic_placement(inst);
  EXPECT_EQ(plan.placed, (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(plan.procured, (std::vector<double>{24.0, 6.0}));
}

TEST(Heuristic, BudgetForOnePlacementOnly) {
  auto inst = two_area_instance();
  inst.budget = 0.1;
  const auto plan = heuristic_placement(inst);
  EXPECT_EQ(plan.placed[0] + plan.placed[1], 1);
  EXPECT_EQ(plan.procured[0] + plan.procured[1], 0.0);
}

TEST(Heuristic, PlansAreFeasibleAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_instance(500 + seed, 4, 4, 2, 1);
    const auto plan = heuristic_placement(inst);
    EXPECT_TRUE(is_feasible_plan(inst, plan, true));
    EXPECT_EQ(plan, heuristic_placement(inst));
  }
}

TEST(Planners, EmitFeasiblePlans) {
  const auto inst = random_instance(600, 4, 4, 2, 2);
  EXPECT_TRUE(is_feasible_plan(inst, solve_deterministic(inst).plan, true));
  TrainingConfig cfg;
  cfg.num_scenarios = 20;
  const auto so = solve_stochastic(inst, generate_training_scenarios(inst, cfg));
  EXPECT_TRUE(is_feasible_plan(inst, so.plan, true));
}

}  // namespace
}  // namespace edgearo
