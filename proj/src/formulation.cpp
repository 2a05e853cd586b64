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

#include "edgearo/formulation.hpp"

#include <cmath>

namespace edgearo {

using milp::LinExpr;
using milp::VarId;

FirstStageVars add_first_stage(milp::Model& model,
                               const ProblemInstance& instance,
                               bool integer_procurement) {
  FirstStageVars fs;
  for (std::size_t j = 0; j < instance.num_nodes; ++j) {
    const double cap = instance.capacity[j];
    const VarId t = model.add_binary("t_" + std::to_string(j));
    const VarId y =
        integer_procurement
            ? model.add_integer(0.0, std::floor(cap), "y_" + std::to_string(j))
            : model.add_continuous(0.0, cap, "y_" + std::to_string(j));
    fs.placed.push_back(t);
    fs.procured.push_back(y);
    model.add_le(LinExpr(y) - LinExpr(t, cap), 0.0);
    fs.cost.add(y, instance.price[j]);
    fs.cost.add(t, instance.placement_cost(j));
  }
  model.add_le(fs.cost, instance.budget, "budget");
  return fs;
}

RecourseBlock add_recourse_block(milp::Model& model,
                                 const ProblemInstance& instance,
                                 const FirstStageVars& fs,
                                 const Scenario& scenario,
                                 double penalty_scale) {
  const std::size_t I = instance.num_areas;
  const std::size_t J = instance.num_nodes;
  RecourseBlock block;
  block.allocation = Matrix<VarId>(I, J);
  for (std::size_t i = 0; i < I; ++i) {
    const VarId q = model.add_continuous();
    block.unmet.push_back(q);
    block.cost.add(q, penalty_scale * instance.unmet_penalty[i]);
    LinExpr cover(q);
    for (std::size_t j = 0; j < J; ++j) {
      const double ub = instance.eligible(i, j) ? instance.capacity[j] : 0.0;
      const VarId x = model.add_continuous(0.0, ub);
      block.allocation(i, j) = x;
      block.cost.add(x, instance.beta * instance.delay(i, j));
      cover.add(x, 1.0);
    }
    model.add_ge(cover, scenario.demand[i]);
  }
  for (std::size_t j = 0; j < J; ++j) {
    LinExpr load;
    for (std::size_t i = 0; i < I; ++i) load.add(block.allocation(i, j), 1.0);
    if (scenario.failed[j]) {
      model.add_le(load, 0.0);
    } else {
      model.add_le(load - LinExpr(fs.placed[j], instance.capacity[j]), 0.0);
    }
    model.add_le(load - LinExpr(fs.procured[j]), 0.0);
  }
  return block;
}

FirstStagePlan read_plan(const FirstStageVars& vars,
                         const milp::SolveResult& result) {
  FirstStagePlan plan;
  for (std::size_t j = 0; j < vars.placed.size(); ++j) {
    plan.placed.push_back(result.value(vars.placed[j]) > 0.5 ? 1 : 0);
    // Integer y comes back with solver noise; snap it. Continuous y is kept
    // as is apart from clamping tiny negatives.
    double y = result.value(vars.procured[j]);
    const double r = std::round(y);
    if (std::abs(y - r) < 1e-6) y = r;
    plan.procured.push_back(std::max(0.0, y));
  }
  return plan;
}

}  // namespace edgearo
