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

#include "edgearo/recourse.hpp"

#include <algorithm>

#include "edgearo/errors.hpp"

namespace edgearo {

using milp::LinExpr;
using milp::VarId;

RecourseModel build_recourse_lp(const ProblemInstance& instance,
                                const FirstStagePlan& plan,
                                const Scenario& scenario,
                                double penalty_scale) {
  const std::size_t I = instance.num_areas;
  const std::size_t J = instance.num_nodes;
  if (plan.placed.size() != J || plan.procured.size() != J ||
      scenario.demand.size() != I || scenario.failed.size() != J) {
    throw InvalidInput("recourse: plan/scenario dimensions do not match");
  }
  RecourseModel rm;
  rm.allocation = Matrix<VarId>(I, J);
  LinExpr cost;
  for (std::size_t i = 0; i < I; ++i) {
    const VarId q = rm.model.add_continuous();
    rm.unmet.push_back(q);
    cost.add(q, penalty_scale * instance.unmet_penalty[i]);
    LinExpr cover(q);
    for (std::size_t j = 0; j < J; ++j) {
      const double ub = instance.eligible(i, j) ? instance.capacity[j] : 0.0;
      const VarId x = rm.model.add_continuous(0.0, ub);
      rm.allocation(i, j) = x;
      cost.add(x, instance.beta * instance.delay(i, j));
      cover.add(x, 1.0);
    }
    rm.model.add_ge(cover, scenario.demand[i]);
  }
  for (std::size_t j = 0; j < J; ++j) {
    LinExpr load;
    for (std::size_t i = 0; i < I; ++i) load.add(rm.allocation(i, j), 1.0);
    const double open = (plan.placed[j] && !scenario.failed[j])
                            ? instance.capacity[j]
                            : 0.0;
    rm.model.add_le(load, open);
    rm.model.add_le(load, plan.procured[j]);
  }
  rm.model.set_objective(cost, milp::ObjSense::kMinimize);
  return rm;
}

RecourseOutcome solve_recourse(const ProblemInstance& instance,
                               const FirstStagePlan& plan,
                               const Scenario& scenario,
                               double penalty_scale) {
  const RecourseModel rm =
      build_recourse_lp(instance, plan, scenario, penalty_scale);
  const milp::SolveResult r = milp::solve(rm.model);
  if (!r.optimal()) {
    throw BackendError(std::string("recourse LP not optimal: ") +
                       milp::to_string(r.status));
  }
  RecourseOutcome out;
  out.allocation = Matrix<double>(instance.num_areas, instance.num_nodes);
  for (std::size_t i = 0; i < instance.num_areas; ++i) {
    out.unmet.push_back(std::max(0.0, r.value(rm.unmet[i])));
    for (std::size_t j = 0; j < instance.num_nodes; ++j) {
      out.allocation(i, j) = std::max(0.0, r.value(rm.allocation(i, j)));
    }
  }
  out.cost = r.objective;
  return out;
}

}  // namespace edgearo
