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

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgearo/errors.hpp"
#include "edgearo/formulation.hpp"
#include "edgearo/sampling.hpp"

namespace edgearo {

using milp::LinExpr;

namespace {

PlanSolution finish(const FirstStageVars& fs, const milp::SolveResult& r,
                    const char* what) {
  if (r.status == milp::SolveStatus::kBackendError) {
    throw BackendError(std::string(what) + ": " + r.message);
  }
  if (!r.has_solution) {
    throw BackendError(std::string(what) + " returned no solution (" +
                       milp::to_string(r.status) + ")");
  }
  PlanSolution out;
  out.plan = read_plan(fs, r);
  out.objective = r.objective;
  out.lower_bound = std::min(r.bound, r.objective);
  out.limit_hit = !r.optimal();
  out.seconds = r.seconds;
  return out;
}

}  // namespace

ScenarioSet ScenarioSet::uniform(std::vector<Scenario> scenarios) {
  ScenarioSet set;
  const double w = scenarios.empty() ? 0.0 : 1.0 / scenarios.size();
  for (Scenario& s : scenarios) set.items.push_back({std::move(s), w});
  return set;
}

void ScenarioSet::validate(const ProblemInstance& instance) const {
  if (items.empty()) throw InvalidInput("scenario set is empty");
  double total = 0.0;
  for (const WeightedScenario& ws : items) {
    if (ws.scenario.demand.size() != instance.num_areas ||
        ws.scenario.failed.size() != instance.num_nodes) {
      throw InvalidInput("scenario dimensions do not match the instance");
    }
    if (!(ws.probability >= 0.0)) {
      throw InvalidInput("scenario probabilities must be nonnegative");
    }
    total += ws.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("scenario probabilities must sum to 1");
  }
}

PlanSolution solve_deterministic(const ProblemInstance& instance,
                                 const milp::SolveParams& params,
                                 bool integer_procurement) {
  instance.validate();
  milp::Model m;
  const FirstStageVars fs = add_first_stage(m, instance, integer_procurement);
  const Scenario nominal{instance.nominal_demand,
                         std::vector<std::uint8_t>(instance.num_nodes, 0)};
  const RecourseBlock b = add_recourse_block(m, instance, fs, nominal);
  m.set_objective(fs.cost + b.cost, milp::ObjSense::kMinimize);
  return finish(fs, milp::solve(m, params), "deterministic model");
}

PlanSolution solve_stochastic(const ProblemInstance& instance,
                              const ScenarioSet& training,
                              const milp::SolveParams& params,
                              std::size_t scenario_cap,
                              bool integer_procurement) {
  instance.validate();
  training.validate(instance);
  if (training.items.size() > scenario_cap) {
    throw InvalidInput("scenario set of " +
                       std::to_string(training.items.size()) +
                       " exceeds cap " + std::to_string(scenario_cap));
  }
  milp::Model m;
  const FirstStageVars fs = add_first_stage(m, instance, integer_procurement);
  LinExpr expected;
  for (const WeightedScenario& ws : training.items) {
    if (ws.probability == 0.0) continue;
    const RecourseBlock b = add_recourse_block(m, instance, fs, ws.scenario);
    expected += ws.probability * b.cost;
  }
  m.set_objective(fs.cost + expected, milp::ObjSense::kMinimize);
  return finish(fs, milp::solve(m, params), "stochastic model");
}

FirstStagePlan heuristic_placement(const ProblemInstance& instance) {
  instance.validate();
  const std::size_t I = instance.num_areas;
  const std::size_t J = instance.num_nodes;
  constexpr double kTol = 1e-9;
  FirstStagePlan plan = FirstStagePlan::empty(J);
  std::vector<double> load(J, 0.0);
  double budget_left = instance.budget;

  std::vector<std::size_t> areas(I);
  std::iota(areas.begin(), areas.end(), 0);
  std::stable_sort(areas.begin(), areas.end(), [&](std::size_t a, std::size_t b) {
    return instance.nominal_demand[a] > instance.nominal_demand[b];
  });
  for (std::size_t i : areas) {
    double remaining = instance.nominal_demand[i];
    std::vector<std::size_t> nodes;
    for (std::size_t j = 0; j < J; ++j) {
      if (instance.eligible(i, j) && instance.capacity[j] > 0.0) {
        nodes.push_back(j);
      }
    }
    std::stable_sort(nodes.begin(), nodes.end(),
                     [&](std::size_t a, std::size_t b) {
                       return instance.delay(i, a) < instance.delay(i, b);
                     });
    for (std::size_t j : nodes) {
      if (remaining <= kTol) break;
      if (!plan.placed[j]) {
        if (instance.placement_cost(j) > budget_left + kTol) continue;
        plan.placed[j] = 1;
        budget_left -= instance.placement_cost(j);
      }
      const double slack = plan.procured[j] - load[j];
      if (slack > 0.0) {
        const double take = std::min(remaining, slack);
        load[j] += take;
        remaining -= take;
      }
      if (remaining <= kTol) break;
      double units = std::min(std::ceil(remaining - kTol),
                              std::floor(instance.capacity[j] -
                                         plan.procured[j] + kTol));
      if (instance.price[j] > 0.0) {
        units = std::min(units,
                         std::floor((budget_left + kTol) / instance.price[j]));
      }
      units = std::max(units, 0.0);
      plan.procured[j] += units;
      budget_left -= units * instance.price[j];
      const double take = std::min(remaining, units);
      load[j] += take;
      remaining -= take;
    }
  }
  return plan;
}

ScenarioSet generate_training_scenarios(const ProblemInstance& instance,
                                        const TrainingConfig& config) {
  instance.validate();
  if (config.num_scenarios == 0) {
    throw InvalidInput("training set needs at least one scenario");
  }
  if (!(config.correlation > -1.0 / std::max<double>(1.0, instance.num_areas - 1.0)) ||
      config.correlation >= 1.0) {
    throw InvalidInput("correlation must keep the covariance positive definite");
  }
  const std::size_t I = instance.num_areas;
  const int kfail = config.failure_budget < 0
                        ? instance.uncertainty.failure_budget
                        : config.failure_budget;
  Rng rng(config.seed);
  std::normal_distribution<double> stdnorm(0.0, 1.0);

  Eigen::VectorXd mean(I), lo(I), hi(I), sd(I);
  for (std::size_t i = 0; i < I; ++i) {
    lo[i] = instance.nominal_demand[i];
    hi[i] = lo[i] + instance.deviation[i];
    mean[i] = lo[i] + instance.deviation[i] / 2.0;
    sd[i] = config.sd_ratio * instance.deviation[i];
  }
  Eigen::MatrixXd corr =
      Eigen::MatrixXd::Constant(I, I, config.correlation);
  corr.diagonal().setOnes();
  const Eigen::MatrixXd chol = corr.llt().matrixL();

  std::vector<Scenario> scenarios;
  scenarios.reserve(config.num_scenarios);
  constexpr int kMaxRejections = 10000;
  for (std::size_t n = 0; n < config.num_scenarios; ++n) {
    Scenario s;
    s.demand.assign(I, 0.0);
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxRejections && !accepted; ++attempt) {
      Eigen::VectorXd w(I);
      for (std::size_t i = 0; i < I; ++i) w[i] = stdnorm(rng);
      const Eigen::VectorXd x = mean + sd.cwiseProduct(chol * w);
      accepted = true;
      for (std::size_t i = 0; i < I; ++i) {
        if (x[i] < lo[i] || x[i] > hi[i]) {
          accepted = false;
          break;
        }
        s.demand[i] = x[i];
      }
    }
    if (!accepted) {
      // Joint window too small for rejection; fall back to independent
      // truncated marginals.
      for (std::size_t i = 0; i < I; ++i) {
        s.demand[i] = truncated_normal(mean[i], sd[i], lo[i], hi[i], rng);
      }
    }
    s.failed = sample_failures(instance.num_nodes, kfail, rng);
    scenarios.push_back(std::move(s));
  }
  return ScenarioSet::uniform(std::move(scenarios));
}

}  // namespace edgearo
