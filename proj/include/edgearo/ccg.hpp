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

// Exact two-stage robust planning by column-and-constraint generation.
//
// The master problem holds one recourse block per scenario found so far and
// yields a lower bound. For the master's plan, a worst-case subproblem
// max_{(lambda,z)} min_{x,q} (recourse cost) yields an upper bound and the
// next scenario. Two subproblem oracles are provided: the inner LP replaced
// by its dual (bilinear terms linearized with big-M), and the inner LP
// replaced by its KKT conditions (complementarity linearized with binaries).
// solve_extensive_form enumerates every vertex up front and serves as the
// exactness oracle on small instances.

#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgearo/instance.hpp"
#include "edgearo/milp.hpp"

namespace edgearo {

enum class SubproblemOracle { kDuality, kKkt };

struct MasterSolution {
  FirstStagePlan plan;
  double eta = 0.0;
  double objective = 0.0;    // incumbent objective
  double lower_bound = 0.0;  // solver's proven bound
  double seconds = 0.0;
};

/// Optimal dual values of the inner LP at the worst scenario.
struct DualCertificate {
  std::vector<double> demand;          // s_i
  std::vector<double> capacity;        // u1_j
  std::vector<double> procurement;     // u2_j
  Matrix<double> eligibility;          // pi_ij
  std::vector<double> failure_product; // U_j = z_j u1_j
  std::vector<double> demand_product;  // v_i = g_i s_i
};

struct SubproblemSolution {
  Vertex vertex;
  Scenario worst;
  double value = 0.0;  // objective at the returned scenario
  double bound = 0.0;  // proven upper bound on the worst-case value
  // Set when the solve hit a limit; `bound` is still valid.
  bool degraded = false;
  // Set when a dual bound was found tight and the model was re-solved with a
  // tenfold bound.
  bool bound_enlarged = false;
  std::optional<DualCertificate> certificate;
  double seconds = 0.0;
};

MasterSolution solve_master(const ProblemInstance& instance,
                            std::span<const Scenario> pool,
                            const milp::SolveParams& params = {},
                            bool integer_procurement = true);

SubproblemSolution solve_subproblem_duality(
    const ProblemInstance& instance, const FirstStagePlan& plan,
    const milp::SolveParams& params = {});

SubproblemSolution solve_subproblem_kkt(const ProblemInstance& instance,
                                        const FirstStagePlan& plan,
                                        const milp::SolveParams& params = {});

SubproblemSolution solve_subproblem(SubproblemOracle oracle,
                                    const ProblemInstance& instance,
                                    const FirstStagePlan& plan,
                                    const milp::SolveParams& params = {});

struct CcgOptions {
  SubproblemOracle oracle = SubproblemOracle::kDuality;
  double eps = 1e-4;  // relative UB/LB gap
  int max_iterations = 500;
  milp::SolveParams master_params;
  milp::SolveParams subproblem_params;
  bool integer_procurement = true;
  std::optional<double> time_limit;  // whole run, seconds
};

struct CcgIteration {
  int iteration = 0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;
  double master_seconds = 0.0;
  double subproblem_seconds = 0.0;
  bool repeated_vertex = false;
};

struct CcgState {
  int iteration = 0;  // rounds completed (one master + one subproblem each)
  double lower_bound = -std::numeric_limits<double>::infinity();
  double upper_bound = std::numeric_limits<double>::infinity();
  double eps = 0.0;
  std::vector<Scenario> pool;
  std::vector<Vertex> pool_vertices;
  std::vector<CcgIteration> trace;
};

struct CcgResult {
  FirstStagePlan plan;  // plan attaining the final upper bound
  double objective = 0.0;
  CcgState state;
  bool converged = false;
  bool repeated_vertex = false;  // terminated on a scenario already pooled
  bool degraded = false;         // some subproblem hit a limit
};

/// Relative gap (UB - LB) / UB, or the absolute gap when UB < 1e-9.
double ccg_gap(double upper, double lower);
bool gap_closed(double upper, double lower, double eps);

CcgResult run_ccg(const ProblemInstance& instance,
                  const CcgOptions& options = {});

struct ExtensiveSolution {
  FirstStagePlan plan;
  double objective = 0.0;
  double lower_bound = 0.0;
  std::size_t num_vertices = 0;
  double seconds = 0.0;
};

/// One recourse block per vertex of the uncertainty set. Throws
/// EnumerationInfeasible above `vertex_cap` vertices.
ExtensiveSolution solve_extensive_form(
    const ProblemInstance& instance, const milp::SolveParams& params = {},
    std::size_t vertex_cap = 4096, bool integer_procurement = true);

/// CSV with header iteration,LB,UB,gap,master_seconds,subproblem_seconds.
std::string trace_to_csv(const std::vector<CcgIteration>& trace);

}  // namespace edgearo
