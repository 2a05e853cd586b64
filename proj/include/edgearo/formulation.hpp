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

// Model fragments shared by the master problem, the extensive forms and the
// baselines: first-stage variables with budget and capacity coupling, and one
// recourse block (x, q) per scenario.

#pragma once

#include <vector>

#include "edgearo/instance.hpp"
#include "edgearo/milp.hpp"

namespace edgearo {

struct FirstStageVars {
  std::vector<milp::VarId> placed;    // t_j
  std::vector<milp::VarId> procured;  // y_j
  milp::LinExpr cost;                 // sum p y + sum h t
};

/// Adds t (binary), y (integer unless `integer_procurement` is false),
/// y_j <= C_j t_j and the budget row.
FirstStageVars add_first_stage(milp::Model& model,
                               const ProblemInstance& instance,
                               bool integer_procurement = true);

struct RecourseBlock {
  Matrix<milp::VarId> allocation;  // x_ij
  std::vector<milp::VarId> unmet;  // q_i
  milp::LinExpr cost;              // sum P q + beta sum d x
};

/// Adds x, q for `scenario` linked to the first-stage variables:
///   sum_i x_ij <= C_j t_j (1 - z_j),  sum_i x_ij <= y_j,
///   sum_j x_ij + q_i >= lambda_i,     0 <= x_ij <= a_ij C_j.
/// Penalties are multiplied by `penalty_scale`.
RecourseBlock add_recourse_block(milp::Model& model,
                                 const ProblemInstance& instance,
                                 const FirstStageVars& first_stage,
                                 const Scenario& scenario,
                                 double penalty_scale = 1.0);

FirstStagePlan read_plan(const FirstStageVars& vars,
                         const milp::SolveResult& result);

}  // namespace edgearo
