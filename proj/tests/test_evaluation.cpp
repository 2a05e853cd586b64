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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "edgearo/errors.hpp"
#include "edgearo/evaluation.hpp"
#include "test_support.hpp"

namespace edgearo {
namespace {

using testing::random_instance;
using testing::random_plan;
using testing::rel_close;
using testing::single_pair;

FirstStagePlan one_node(double y) { return {{1}, {y}}; }

TEST(Recourse, ServesUpToProcurementThenDrops) {
  const ProblemInstance inst = single_pair(7.0, 0.0, 0, 0);
  const RecourseOutcome r =
      solve_recourse(inst, one_node(5.0), Scenario{{7.0}, {0}});
  EXPECT_NEAR(r.allocation(0, 0), 5.0, 1e-9);
  EXPECT_NEAR(r.unmet[0], 2.0, 1e-9);
  EXPECT_NEAR(r.cost, 2.0, 1e-9);  // 0.5 * 2 + 0.1 * 2 * 5
}

TEST(Recourse, AllFailedDropsEverything) {
  const ProblemInstance inst = random_instance(3, 3, 3, 1, 3);
  const FirstStagePlan plan = random_plan(inst, 4);
  Scenario s{{4.0, 5.0, 6.0}, {1, 1, 1}};
  const RecourseOutcome r = solve_recourse(inst, plan, s);
  double expect = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.unmet[i], s.demand[i], 1e-9);
    expect += inst.unmet_penalty[i] * s.demand[i];
  }
  EXPECT_NEAR(r.cost, expect, 1e-9);
}

TEST(Recourse, ZeroDemandCostsNothing) {
  const ProblemInstance inst = random_instance(5, 3, 2, 1, 1);
  const RecourseOutcome r = solve_recourse(
      inst, random_plan(inst, 6), Scenario{{0.0, 0.0, 0.0}, {0, 0}});
  EXPECT_NEAR(r.cost, 0.0, 1e-12);
}

TEST(Recourse, MonotoneInDemand) {
  const ProblemInstance inst = random_instance(7, 4, 3, 2, 1);
  const FirstStagePlan plan = random_plan(inst, 8);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int rep = 0; rep < 30; ++rep) {
    Scenario lo{{u(rng), u(rng), u(rng), u(rng)}, {0, 0, 0, 0}};
    lo.failed = {static_cast<std::uint8_t>(rep % 2), 0, 0};
    Scenario hi = lo;
    for (double& d : hi.demand) d += u(rng) / 3.0;
    EXPECT_LE(solve_recourse(inst, plan, lo).cost,
              solve_recourse(inst, plan, hi).cost + 1e-9);
  }
}

class TestScenarios : public ::testing::TestWithParam<DemandDistribution> {};

TEST_P(TestScenarios, StayInsideTheBoxAndFailureBudget) {
  const ProblemInstance inst = random_instance(11, 6, 5, 3, 2);
  EvaluationConfig cfg;
  cfg.num_scenarios = 1000;
  cfg.distribution = GetParam();
  cfg.k_test = 2;
  cfg.seed = 12;
  const auto scenarios = generate_test_scenarios(inst, cfg);
  ASSERT_EQ(scenarios.size(), 1000u);
  std::vector<double> mean(6, 0.0);
  for (const Scenario& s : scenarios) {
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_GE(s.demand[i], inst.nominal_demand[i]);
      EXPECT_LE(s.demand[i], inst.nominal_demand[i] + inst.deviation[i]);
      mean[i] += s.demand[i] / 1000.0;
    }
    EXPECT_LE(std::accumulate(s.failed.begin(), s.failed.end(), 0), 2);
  }
  // All three families are centred near the middle of the box.
  for (std::size_t i = 0; i < 6; ++i) {
    const double mid = inst.nominal_demand[i] + inst.deviation[i] / 2.0;
    EXPECT_NEAR(mean[i], mid, 0.1 * inst.deviation[i]);
  }
}

INSTANTIATE_TEST_SUITE_P(Families, TestScenarios,
                         ::testing::Values(DemandDistribution::kLognormal,
                                           DemandDistribution::kNormal,
                                           DemandDistribution::kUniform));

TEST(TestScenarioGeneration, ZeroFailureBudgetMeansNoFailures) {
  const ProblemInstance inst = random_instance(13, 3, 4, 1, 2);
  EvaluationConfig cfg;
  cfg.num_scenarios = 200;
  cfg.k_test = 0;
  for (const Scenario& s : generate_test_scenarios(inst, cfg)) {
    EXPECT_EQ(std::accumulate(s.failed.begin(), s.failed.end(), 0), 0);
  }
}

TEST(TestScenarioGeneration, SameSeedSameList) {
  const ProblemInstance inst = random_instance(14, 4, 4, 2, 2);
  EvaluationConfig cfg;
  cfg.num_scenarios = 50;
  cfg.seed = 77;
  EXPECT_EQ(generate_test_scenarios(inst, cfg),
            generate_test_scenarios(inst, cfg));
  EvaluationConfig other = cfg;
  other.seed = 78;
  EXPECT_NE(generate_test_scenarios(inst, cfg),
            generate_test_scenarios(inst, other));
}

TEST(TestScenarioGeneration, RejectsFailureBudgetAboveNodes) {
  const ProblemInstance inst = random_instance(15, 2, 2, 1, 1);
  EvaluationConfig cfg;
  cfg.k_test = 3;
  EXPECT_THROW(generate_test_scenarios(inst, cfg), InvalidInput);
  EXPECT_THROW(parse_distribution("gamma"), InvalidInput);
}

TEST(MonteCarlo, IdenticalScenariosGiveEqualMeanAndMax) {
  const ProblemInstance inst = random_instance(16, 3, 3, 1, 1);
  const FirstStagePlan plan = random_plan(inst, 17);
  const Scenario s{{5.0, 6.0, 7.0}, {0, 1, 0}};
  const EvaluationReport rep =
      monte_carlo(inst, plan, std::vector<Scenario>(5, s));
  const double single =
      provisioning_cost(inst, plan) + solve_recourse(inst, plan, s).cost;
  EXPECT_NEAR(rep.average, single, 1e-9);
  EXPECT_NEAR(rep.worst, single, 1e-9);
}

TEST(MonteCarlo, EmptyPlanPaysScaledPenaltyOnEveryUnit) {
  const ProblemInstance inst = random_instance(18, 3, 3, 2, 1);
  EvaluationConfig cfg;
  cfg.num_scenarios = 40;
  const auto scenarios = generate_test_scenarios(inst, cfg);
  const double psi = 2.5;
  const EvaluationReport rep = monte_carlo(
      inst, FirstStagePlan::empty(3), scenarios, psi);
  double mean = 0.0;
  for (std::size_t n = 0; n < scenarios.size(); ++n) {
    double c = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      c += psi * inst.unmet_penalty[i] * scenarios[n].demand[i];
    }
    EXPECT_NEAR(rep.scenario_costs[n], c, 1e-9);
    mean += c / scenarios.size();
  }
  EXPECT_NEAR(rep.average, mean, 1e-9);
  EXPECT_NEAR(rep.provisioning, 0.0, 1e-12);
}

TEST(MonteCarlo, RobustPlanBeatsDeterministicUnderCertainFailure) {
  // Nominal demand 5, no deviation, one node that can fail.
  const ProblemInstance inst = single_pair(5.0, 0.0, 0, 1);
  const CcgResult aro = run_ccg(inst);
  EXPECT_EQ(aro.plan.placed[0], 0);
  const PlanSolution det = solve_deterministic(inst);
  EXPECT_EQ(det.plan, one_node(5.0));

  const std::vector<Scenario> failed(10, Scenario{{5.0}, {1}});
  EXPECT_NEAR(monte_carlo(inst, aro.plan, failed).average, 2.5, 1e-9);
  EXPECT_NEAR(monte_carlo(inst, det.plan, failed).average, 2.8, 1e-9);
}

TEST(MonteCarlo, RejectsBadInput) {
  const ProblemInstance inst = single_pair(5.0, 0.0, 0, 1);
  const std::vector<Scenario> one(1, Scenario{{5.0}, {0}});
  EXPECT_THROW(monte_carlo(inst, one_node(5.0), {}), InvalidInput);
  EXPECT_THROW(monte_carlo(inst, one_node(5.0), one, 0.0), InvalidInput);
  EXPECT_THROW(monte_carlo(inst, FirstStagePlan{{0}, {3.0}}, one),
               InvalidInput);
  EXPECT_THROW(monte_carlo(inst, one_node(5.0), {Scenario{{1.0, 2.0}, {0}}}),
               InvalidInput);
}

TEST(Certify, MatchesTheCcgObjective) {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const ProblemInstance inst = random_instance(seed, 3, 3, 2, 1);
    CcgOptions opt;
    opt.eps = 1e-9;
    const CcgResult r = run_ccg(inst, opt);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(certify_worst_case(inst, r.plan), r.objective,
                1e-6 * std::max(1.0, r.objective))
        << "seed " << seed;
  }
}

TEST(Certify, DeterministicPlanIsNoBetterThanRobust) {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    const ProblemInstance inst = random_instance(seed, 3, 4, 2, 1);
    CcgOptions opt;
    opt.eps = 1e-9;
    const CcgResult aro = run_ccg(inst, opt);
    const PlanSolution det = solve_deterministic(inst);
    EXPECT_GE(certify_worst_case(inst, det.plan), aro.objective - 1e-6)
        << "seed " << seed;
  }
}

TEST(Certify, EmptyPlanClosedForm) {
  for (std::uint64_t seed = 40; seed < 46; ++seed) {
    const ProblemInstance inst = random_instance(seed, 5, 3, 2, 1);
    std::vector<double> extra;
    double base = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      base += inst.unmet_penalty[i] * inst.nominal_demand[i];
      extra.push_back(inst.unmet_penalty[i] * inst.deviation[i]);
    }
    std::sort(extra.rbegin(), extra.rend());
    const double expect = base + extra[0] + extra[1];
    EXPECT_NEAR(certify_worst_case(inst, FirstStagePlan::empty(3)), expect,
                1e-6 * expect);
  }
}

TEST(Certify, BoundsTheEmpiricalMaxAndIsAttainedAtTheWorstVertex) {
  for (std::uint64_t seed = 50; seed < 58; ++seed) {
    const ProblemInstance inst = random_instance(seed, 4, 3, 2, 1);
    const FirstStagePlan plan = random_plan(inst, seed + 1);
    EvaluationConfig cfg;
    cfg.num_scenarios = 300;
    cfg.seed = seed;
    cfg.distribution = seed % 2 ? DemandDistribution::kUniform
                                : DemandDistribution::kLognormal;
    // Independent draws can exceed the demand budget; only scenarios inside
    // the uncertainty set are covered by the certificate.
    std::vector<Scenario> inside;
    for (Scenario& s : generate_test_scenarios(inst, cfg)) {
      if (in_uncertainty_set(inst, s)) inside.push_back(std::move(s));
    }
    ASSERT_GT(inside.size(), 50u);
    const EvaluationReport rep = monte_carlo(inst, plan, inside);
    const double certified = certify_worst_case(inst, plan);
    EXPECT_LE(rep.average, rep.worst + 1e-12);
    EXPECT_LE(rep.worst, certified + 1e-6) << "seed " << seed;

    const SubproblemSolution sub = solve_subproblem_duality(inst, plan);
    const EvaluationReport at_worst = monte_carlo(inst, plan, {sub.worst});
    EXPECT_NEAR(at_worst.worst, certified, 1e-6 * std::max(1.0, certified));
  }
}

TEST(PolicyReplay, NeverBeatsReoptimizedRecourse) {
  const ProblemInstance inst = random_instance(60, 3, 3, 2, 1);
  const AdrSolution adr = solve_adr(inst);
  EvaluationConfig cfg;
  cfg.num_scenarios = 100;
  const auto scenarios = generate_test_scenarios(inst, cfg);
  const EvaluationReport lp = monte_carlo(inst, adr.plan, scenarios);
  const EvaluationReport rule =
      monte_carlo_policy(inst, adr.plan, adr.policy, scenarios);
  for (std::size_t n = 0; n < scenarios.size(); ++n) {
    EXPECT_LE(lp.scenario_costs[n], rule.scenario_costs[n] + 1e-6);
  }
  EXPECT_LE(rule.worst, adr.objective + 1e-6);
}

TEST(Summary, CarriesTheReportedFields) {
  EvaluationReport rep;
  rep.method = "det";
  rep.scenario_costs = {1.0, 3.0};
  rep.unmet_totals = {0.0, 1.0};
  rep.average = 2.0;
  rep.worst = 3.0;
  rep.provisioning = 0.5;
  const Json doc = report_summary(rep);
  EXPECT_EQ(doc["method"], "det");
  EXPECT_DOUBLE_EQ(doc["avg"].get<double>(), 2.0);
  EXPECT_TRUE(doc["certified_worst"].is_null());
  EXPECT_EQ(scenarios_to_csv(rep), "scenario,cost,unmet\n0,1,0\n1,3,1\n");
}

TEST(Methods, NamesRoundTrip) {
  for (const char* name :
       {"ccg-duality", "ccg-kkt", "adr", "extensive", "det", "so", "heu"}) {
    EXPECT_STREQ(to_string(parse_method(name)), name);
  }
  EXPECT_THROW(parse_method("ccg"), InvalidInput);
  for (const char* axis :
       {"K", "Gamma", "beta", "Psi", "alpha", "B", "Dmax", "I", "J"}) {
    EXPECT_STREQ(to_string(parse_axis(axis)), axis);
  }
  EXPECT_THROW(parse_axis("tau"), InvalidInput);
}

TEST(Methods, EveryMethodReturnsAFeasiblePlan) {
  const ProblemInstance inst = random_instance(61, 3, 3, 1, 1);
  MethodOptions opt;
  opt.training.num_scenarios = 20;
  for (Method m : {Method::kCcgDuality, Method::kCcgKkt, Method::kAdr,
                   Method::kExtensive, Method::kDet, Method::kSo,
                   Method::kHeu}) {
    const MethodOutcome out = solve_with_method(inst, m, opt);
    EXPECT_TRUE(is_feasible_plan(inst, out.plan, true)) << to_string(m);
    EXPECT_TRUE(out.converged) << to_string(m);
  }
}

SweepOptions quick_sweep() {
  SweepOptions opt;
  opt.method.eps = 1e-9;
  opt.evaluation.num_scenarios = 20;
  return opt;
}

std::vector<double> objectives(const std::vector<SweepRow>& rows) {
  std::vector<double> out;
  for (const SweepRow& r : rows) {
    EXPECT_EQ(r.status, "ok");
    out.push_back(r.objective);
  }
  return out;
}

TEST(Sweep, ObjectiveGrowsWithFailureBudget) {
  const ProblemInstance inst = random_instance(70, 3, 3, 1, 0);
  const auto obj = objectives(sensitivity_sweep(
      inst, SweepAxis::kK, {0, 1, 2}, {Method::kCcgDuality}, quick_sweep()));
  ASSERT_EQ(obj.size(), 3u);
  EXPECT_TRUE(std::is_sorted(obj.begin(), obj.end(),
                             [](double a, double b) { return a < b - 1e-6; }))
      << obj[0] << " " << obj[1] << " " << obj[2];
}

TEST(Sweep, ObjectiveGrowsWithDemandBudget) {
  const ProblemInstance inst = random_instance(71, 3, 3, 0, 1);
  const auto obj =
      objectives(sensitivity_sweep(inst, SweepAxis::kGamma, {0, 1, 2, 3},
                                   {Method::kCcgDuality}, quick_sweep()));
  for (std::size_t n = 1; n < obj.size(); ++n) {
    EXPECT_GE(obj[n], obj[n - 1] - 1e-6);
  }
}

TEST(Sweep, ObjectiveGrowsAsDelayLimitShrinks) {
  ProblemInstance inst = random_instance(72, 3, 3, 1, 1);
  const auto obj =
      objectives(sensitivity_sweep(inst, SweepAxis::kDmax, {6.0, 4.0, 2.0, 0.5},
                                   {Method::kCcgDuality}, quick_sweep()));
  for (std::size_t n = 1; n < obj.size(); ++n) {
    EXPECT_GE(obj[n], obj[n - 1] - 1e-6);
  }
}

TEST(Sweep, BadCellIsRecordedAndTheRestRuns) {
  const ProblemInstance inst = random_instance(73, 2, 2, 1, 1);
  const auto rows =
      sensitivity_sweep(inst, SweepAxis::kK, {1, 5, 0},
                        {Method::kDet, Method::kHeu}, quick_sweep());
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_NE(rows[2].status.find("error"), std::string::npos);
  EXPECT_TRUE(std::isnan(rows[2].objective));
  EXPECT_EQ(rows[5].status, "ok");
  const std::string csv = sweep_to_csv(SweepAxis::kK, rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "axis,value,method,status,objective,provisioning,average,worst,"
            "certified_worst,seconds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Sweep, PenaltyScaleModes) {
  const ProblemInstance inst = random_instance(74, 3, 3, 1, 1);
  SweepOptions both = quick_sweep();
  SweepOptions eval_only = quick_sweep();
  eval_only.psi_in_planning = false;
  const auto a = sensitivity_sweep(inst, SweepAxis::kPsi, {0.5, 2.0},
                                   {Method::kCcgDuality}, both);
  const auto b = sensitivity_sweep(inst, SweepAxis::kPsi, {0.5, 2.0},
                                   {Method::kCcgDuality}, eval_only);
  // Planning ignores Psi in the second mode.
  EXPECT_NEAR(b[0].objective, b[1].objective, 1e-9);
  EXPECT_GE(a[1].objective, a[0].objective - 1e-6);
  // The plan chosen for the scaled penalties is minimax-optimal for them.
  EXPECT_LE(a[1].certified_worst, b[1].certified_worst + 1e-6);
}

TEST(Sweep, AreaAndNodePrefixes) {
  const ProblemInstance inst = random_instance(75, 4, 4, 2, 1);
  const ProblemInstance two = apply_axis(inst, SweepAxis::kI, 2);
  EXPECT_EQ(two.num_areas, 2u);
  EXPECT_EQ(two.nominal_demand[1], inst.nominal_demand[1]);
  const ProblemInstance nodes = apply_axis(inst, SweepAxis::kJ, 3);
  EXPECT_EQ(nodes.num_nodes, 3u);
  EXPECT_EQ(nodes.capacity[2], inst.capacity[2]);
  EXPECT_THROW(apply_axis(inst, SweepAxis::kJ, 0), InvalidInput);
  EXPECT_THROW(apply_axis(inst, SweepAxis::kGamma, 1.5), InvalidInput);
  const ProblemInstance wide = apply_axis(inst, SweepAxis::kAlpha, 0.3);
  EXPECT_NEAR(wide.deviation[0], 0.3 * inst.nominal_demand[0], 1e-12);
}

}  // namespace
}  // namespace edgearo
