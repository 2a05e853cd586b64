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

// Second-stage allocation for a fixed plan and a revealed scenario:
//
//   min  sum_i P_i q_i + beta sum_ij d_ij x_ij
//   s.t. sum_i x_ij <= min(y_j, C_j t_j (1 - z_j))
//        sum_j x_ij + q_i >= lambda_i
//        0 <= x_ij <= a_ij C_j,  q >= 0
//
// Always feasible (x = 0, q = lambda).

#pragma once

#include "edgearo/instance.hpp"
#include "edgearo/milp.hpp"

namespace edgearo {

/// The LP above as a model; exposed so tests can inspect its duals.
struct RecourseModel {
  milp::Model model;
  Matrix<milp::VarId> allocation;
  std::vector<milp::VarId> unmet;
};

RecourseModel build_recourse_lp(const ProblemInstance& instance,
                                const FirstStagePlan& plan,
                                const Scenario& scenario,
                                double penalty_scale = 1.0);

/// Solves the allocation LP. Throws BackendError if the solver does not
/// report optimality.
RecourseOutcome solve_recourse(const ProblemInstance& instance,
                               const FirstStagePlan& plan,
                               const Scenario& scenario,
                               double penalty_scale = 1.0);

}  // namespace edgearo
