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

// Comparison planners: deterministic (nominal demand, no failures),
// two-stage stochastic (expected recourse over a weighted scenario set) and
// a greedy nearest-node heuristic.

#pragma once

#include <cstdint>
#include <vector>

#include "edgearo/instance.hpp"
#include "edgearo/milp.hpp"

namespace edgearo {

struct WeightedScenario {
  Scenario scenario;
  double probability = 0.0;
};

struct ScenarioSet {
  std::vector<WeightedScenario> items;

  /// Equal weights over `scenarios`.
  static ScenarioSet uniform(std::vector<Scenario> scenarios);
  /// Throws InvalidInput unless nonempty, dimensions match, weights are
  /// nonnegative and sum to one within 1e-9.
  void validate(const ProblemInstance& instance) const;
};

struct PlanSolution {
  FirstStagePlan plan;
  double objective = 0.0;
  double lower_bound = 0.0;
  bool limit_hit = false;
  double seconds = 0.0;
};

PlanSolution solve_deterministic(const ProblemInstance& instance,
                                 const milp::SolveParams& params = {},
                                 bool integer_procurement = true);

inline constexpr std::size_t kDefaultScenarioCap = 5000;

PlanSolution solve_stochastic(const ProblemInstance& instance,
                              const ScenarioSet& training,
                              const milp::SolveParams& params = {},
                              std::size_t scenario_cap = kDefaultScenarioCap,
                              bool integer_procurement = true);

/// Areas by decreasing nominal demand; each walks its eligible nodes by
/// increasing delay, opening a node when the budget covers its placement
/// cost, using already procured slack first, then buying whole units while
/// capacity and budget allow. Ties go to the lowest index.
FirstStagePlan heuristic_placement(const ProblemInstance& instance);

struct TrainingConfig {
  std::size_t num_scenarios = 100;
  // Demand ~ N(lam_bar + lam_tilde / 2, Sigma) truncated to the box, with
  // sd_i = sd_ratio * lam_tilde_i and a common pairwise correlation.
  double sd_ratio = 0.25;
  double correlation = 0.0;
  // Failures uniform over sets of at most this many nodes; negative means
  // the instance's failure budget.
  int failure_budget = -1;
  std::uint64_t seed = 1;
};

ScenarioSet generate_training_scenarios(const ProblemInstance& instance,
                                        const TrainingConfig& config);

}  // namespace edgearo
