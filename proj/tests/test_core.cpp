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

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "edgearo/errors.hpp"
#include "edgearo/instance.hpp"
#include "edgearo/io.hpp"
#include "test_support.hpp"

namespace edgearo {
namespace {

using testing::random_instance;
using testing::single_pair;

// Pascal's triangle, summed by hand.
std::size_t bounded_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> c(n + 1);
  for (std::size_t r = 0; r <= n; ++r) {
    c[r].assign(r + 1, 1);
    for (std::size_t s = 1; s < r; ++s) c[r][s] = c[r - 1][s - 1] + c[r - 1][s];
  }
  std::size_t total = 0;
  for (std::size_t s = 0; s <= std::min(n, k); ++s) total += c[n][s];
  return total;
}

TEST(DemandFromG, FullDeviation) {
  ProblemInstance inst = single_pair(10.0, 6.0, 1, 0);
  const std::vector<double> one{1.0};
  EXPECT_DOUBLE_EQ(demand_from_g(inst, one)[0], 16.0);
  const std::vector<double> zero{0.0};
  EXPECT_DOUBLE_EQ(demand_from_g(inst, zero)[0], 10.0);
}

TEST(DemandFromG, TwoAreasAtSixtyPercent) {
  ProblemInstance inst = random_instance(1, 2, 1, 1, 0);
  inst.nominal_demand = {5.0, 40.0};
  inst.deviation = {3.0, 24.0};
  const std::vector<double> g{1.0, 0.0};
  const auto lam = demand_from_g(inst, g);
  EXPECT_DOUBLE_EQ(lam[0], 8.0);
  EXPECT_DOUBLE_EQ(lam[1], 40.0);
}

TEST(DemandFromG, RejectsOutsideTheSet) {
  ProblemInstance inst = random_instance(2, 3, 1, 1, 0);
  const std::vector<double> over_budget{1.0, 0.5, 0.0};
  const std::vector<double> above_box{1.2, 0.0, 0.0};
  const std::vector<double> negative{-0.1, 0.0, 0.0};
  const std::vector<double> short_g{1.0};
  EXPECT_THROW(demand_from_g(inst, over_budget), InvalidInput);
  EXPECT_THROW(demand_from_g(inst, above_box), InvalidInput);
  EXPECT_THROW(demand_from_g(inst, negative), InvalidInput);
  EXPECT_THROW(demand_from_g(inst, short_g), InvalidInput);
  const std::vector<double> at_tol{1.0 + 5e-10, 0.0, 0.0};
  EXPECT_NO_THROW(demand_from_g(inst, at_tol));
}

TEST(DemandFromG, Monotone) {
  ProblemInstance inst = random_instance(3, 4, 1, 4, 0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> g(4), h(4);
    for (std::size_t i = 0; i < 4; ++i) {
      g[i] = u(rng);
      h[i] = g[i] + (1.0 - g[i]) * u(rng);
    }
    const auto a = demand_from_g(inst, g);
    const auto b = demand_from_g(inst, h);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(a[i], b[i]);
  }
}

TEST(Vertices, SmallCounts) {
  EXPECT_EQ(enumerate_vertices({1, 1}, 2, 2).size(), 9u);
  EXPECT_EQ(enumerate_vertices({0, 0}, 4, 3).size(), 1u);
  EXPECT_EQ(enumerate_vertices({3, 0}, 3, 3).size(), 8u);
  const auto nominal = enumerate_vertices({0, 0}, 2, 2);
  EXPECT_EQ(nominal[0].g, (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(nominal[0].z, (std::vector<std::uint8_t>{0, 0}));
}

TEST(Vertices, CountMatchesBinomialSumAndListIsClean) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 50) {
    const std::size_t I = std::uniform_int_distribution<int>(1, 9)(rng);
    const std::size_t J = std::uniform_int_distribution<int>(1, 9)(rng);
    const int gamma = std::uniform_int_distribution<int>(0, I)(rng);
    const int k = std::uniform_int_distribution<int>(0, J)(rng);
    const std::size_t expect =
        bounded_subsets(I, gamma) * bounded_subsets(J, k);
    if (expect > 10000) continue;
    ++checked;
    const UncertaintyModel u{gamma, k};
    EXPECT_EQ(vertex_count(u, I, J), expect);
    const auto verts = enumerate_vertices(u, I, J);
    ASSERT_EQ(verts.size(), expect);
    std::set<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>>
        seen;
    for (const Vertex& v : verts) {
      ASSERT_EQ(v.g.size(), I);
      ASSERT_EQ(v.z.size(), J);
      EXPECT_LE(std::accumulate(v.g.begin(), v.g.end(), 0), gamma);
      EXPECT_LE(std::accumulate(v.z.begin(), v.z.end(), 0), k);
      EXPECT_TRUE(seen.insert({v.g, v.z}).second);
    }
  }
}

TEST(Vertices, CapIsEnforced) {
  EXPECT_THROW(enumerate_vertices({5, 2}, 20, 20, 1000),
               EnumerationInfeasible);
  EXPECT_NO_THROW(enumerate_vertices({1, 1}, 2, 2, 9));
  EXPECT_THROW(enumerate_vertices({1, 1}, 2, 2, 8), EnumerationInfeasible);
}

TEST(Provisioning, Arithmetic) {
  const ProblemInstance inst = single_pair(5.0, 0.0, 0, 0);
  EXPECT_DOUBLE_EQ(provisioning_cost(inst, FirstStagePlan::empty(1)), 0.0);
  const FirstStagePlan plan{{1}, {5.0}};
  EXPECT_NEAR(provisioning_cost(inst, plan), 0.3, 1e-12);
  EXPECT_TRUE(is_feasible_plan(inst, plan, true));
}

TEST(Provisioning, StorageCountsEvenWhenAlreadyPlaced) {
  ProblemInstance inst = single_pair(5.0, 0.0, 0, 0);
  inst.initial_placement = {1};
  inst.storage_cost = {0.05};
  EXPECT_NEAR(inst.placement_cost(0), 0.05, 1e-12);
}

TEST(Plans, FeasibilityChecks) {
  ProblemInstance inst = single_pair(5.0, 0.0, 0, 0);
  EXPECT_FALSE(is_feasible_plan(inst, {{0}, {1.0}}, true));   // y without t
  EXPECT_FALSE(is_feasible_plan(inst, {{1}, {11.0}}, true));  // above C
  EXPECT_FALSE(is_feasible_plan(inst, {{1}, {2.5}}, true));   // fractional
  EXPECT_TRUE(is_feasible_plan(inst, {{1}, {2.5}}, false));
  inst.budget = 0.2;
  EXPECT_FALSE(is_feasible_plan(inst, {{1}, {5.0}}, true));   // over budget
}

TEST(Validate, RejectsBrokenInstances) {
  const ProblemInstance good = random_instance(6, 3, 3, 1, 1);
  EXPECT_NO_THROW(good.validate());
  auto broken = [&](auto mutate) {
    ProblemInstance bad = good;
    mutate(bad);
    EXPECT_THROW(bad.validate(), InvalidInput);
  };
  broken([](ProblemInstance& p) { p.price[0] = -1.0; });
  broken([](ProblemInstance& p) { p.capacity.pop_back(); });
  broken([](ProblemInstance& p) { p.delay(0, 0) = -0.5; });
  broken([](ProblemInstance& p) { p.uncertainty.gamma = 4; });
  broken([](ProblemInstance& p) { p.uncertainty.failure_budget = -1; });
  broken([](ProblemInstance& p) { p.nominal_demand[1] = -2.0; });
  broken([](ProblemInstance& p) { p.num_areas = 0; });
}

TEST(Subset, KeepsOrderAndClampsBudgets) {
  const ProblemInstance inst = random_instance(7, 4, 4, 3, 3);
  const std::vector<std::size_t> areas{2, 0};
  const std::vector<std::size_t> nodes{3, 1};
  const ProblemInstance sub = subset_instance(inst, areas, nodes);
  EXPECT_EQ(sub.num_areas, 2u);
  EXPECT_EQ(sub.num_nodes, 2u);
  EXPECT_EQ(sub.nominal_demand[0], inst.nominal_demand[2]);
  EXPECT_EQ(sub.capacity[0], inst.capacity[3]);
  EXPECT_EQ(sub.delay(1, 0), inst.delay(0, 3));
  EXPECT_EQ(sub.uncertainty.gamma, 2);
  EXPECT_EQ(sub.uncertainty.failure_budget, 2);
}

TEST(Eligibility, DerivedFromDelayLimit) {
  ProblemInstance inst = random_instance(8, 2, 2, 1, 1);
  inst.delay(0, 0) = 12.0;
  inst.delay(0, 1) = 10.0;
  inst.delay(1, 0) = 3.0;
  inst.delay(1, 1) = 10.5;
  apply_max_delay(inst, 10.0);
  EXPECT_EQ(inst.eligible(0, 0), 0);
  EXPECT_EQ(inst.eligible(0, 1), 1);
  EXPECT_EQ(inst.eligible(1, 0), 1);
  EXPECT_EQ(inst.eligible(1, 1), 0);
  apply_max_delay(inst, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(inst.eligible(i, j), 1);
  }
}

// ---- JSON ---------------------------------------------------------------

TEST(InstanceJson, RoundTrip) {
  ProblemInstance inst = random_instance(9, 3, 2, 2, 1);
  inst.initial_placement = {1, 0};
  inst.storage_cost = {0.01, 0.02};
  apply_max_delay(inst, 4.0);
  const ProblemInstance back = instance_from_json(instance_to_json(inst));
  EXPECT_EQ(back.price, inst.price);
  EXPECT_EQ(back.capacity, inst.capacity);
  EXPECT_EQ(back.initial_placement, inst.initial_placement);
  EXPECT_EQ(back.storage_cost, inst.storage_cost);
  EXPECT_EQ(back.delay, inst.delay);
  EXPECT_EQ(back.eligible, inst.eligible);
  EXPECT_EQ(back.unmet_penalty, inst.unmet_penalty);
  EXPECT_EQ(back.deviation, inst.deviation);
  EXPECT_EQ(back.max_delay, 4.0);
  EXPECT_EQ(back.uncertainty.gamma, 2);
  EXPECT_EQ(back.uncertainty.failure_budget, 1);
  EXPECT_EQ(instance_to_json(back).dump(), instance_to_json(inst).dump());
}

Json minimal_doc() {
  return Json::parse(R"({
    "areas": 2, "nodes": 2,
    "prices": [0.04, 0.05], "capacities": [32, 48],
    "placement_costs": [0.1, 0.2],
    "delays": [[0, 4], [4, 0]],
    "beta": 0.1, "unmet_penalty": 0.5, "budget": 20,
    "nominal_demand": [10, 20], "alpha": 0.6,
    "gamma": 1, "failure_budget": 1, "dmax": 3
  })");
}

TEST(InstanceJson, AcceptsCompactForms) {
  const ProblemInstance inst = instance_from_json(minimal_doc());
  EXPECT_EQ(inst.unmet_penalty, (std::vector<double>{0.5, 0.5}));
  EXPECT_NEAR(inst.deviation[1], 12.0, 1e-12);
  EXPECT_EQ(inst.delay(0, 1), 4.0);
  EXPECT_EQ(inst.eligible(0, 0), 1);
  EXPECT_EQ(inst.eligible(0, 1), 0);  // derived from dmax
  EXPECT_TRUE(std::isinf(
      instance_from_json([] {
        Json d = minimal_doc();
        d["dmax"] = nullptr;
        d["delays"] = {0, 4, 4, 0};
        return d;
      }()).max_delay));
}

TEST(InstanceJson, RejectsMalformedDocuments) {
  auto rejects = [](auto mutate) {
    Json d = minimal_doc();
    mutate(d);
    EXPECT_THROW(instance_from_json(d), InvalidInput) << d.dump();
  };
  rejects([](Json& d) { d.erase("prices"); });
  rejects([](Json& d) { d["prices"] = {0.04}; });
  rejects([](Json& d) { d["delays"] = {0, 4, 4}; });
  rejects([](Json& d) { d["gamma"] = 3; });
  rejects([](Json& d) { d["budget"] = "lots"; });
  rejects([](Json& d) { d["capacities"] = {32, -1}; });
}

TEST(PlanJson, RoundTripAndFiles) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "edgearo_core_test";
  std::filesystem::remove_all(dir);
  PlanRecord rec{{{1, 0, 1}, {4.0, 0.0, 7.0}}, "ccg-duality", 12.5};
  write_json(dir / "nested" / "plan.json", plan_to_json(rec));
  const PlanRecord back = load_plan(dir / "nested" / "plan.json");
  EXPECT_EQ(back.plan, rec.plan);
  EXPECT_EQ(back.method, "ccg-duality");
  EXPECT_DOUBLE_EQ(back.objective, 12.5);
  // No temp files left behind.
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "nested")) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1u);

  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(read_json(dir / "bad.json"), InvalidInput);
  EXPECT_THROW(read_json(dir / "missing.json"), InvalidInput);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace edgearo
