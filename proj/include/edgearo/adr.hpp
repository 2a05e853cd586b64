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

// Affine decision rules. Recourse is restricted to
//
//   x_ij(lambda, z) = sum_e A_ije lambda_e + sum_l B_ijl z_l + D_ij
//   q_i(lambda, z)  = sum_e E_ie lambda_e + sum_l F_il z_l + G_i
//
// and every constraint that must hold for all (lambda, z) is replaced by the
// LP dual of its worst case over the relaxed set
// { g in [0,1]^I, sum g <= gamma, z in [0,1]^J, sum z <= K }. A robust row
//   c0 + sum_e alpha_e g_e + sum_l zeta_l z_l <= rhs
// becomes
//   c0 + gamma mu + sum_e eta_e + K nu + sum_l sigma_l <= rhs,
//   mu + eta_e >= alpha_e,  nu + sigma_l >= zeta_l,  mu, eta, nu, sigma >= 0.
// The worst case of a linear function over the relaxed failure box equals the
// worst case over binary failures, so the relaxation adds no conservatism.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "edgearo/formulation.hpp"
#include "edgearo/instance.hpp"
#include "edgearo/io.hpp"
#include "edgearo/milp.hpp"

namespace edgearo {

struct AffinePolicy {
  std::size_t num_areas = 0;
  std::size_t num_nodes = 0;
  std::vector<double> demand_gain;   // A, index (i * J + j) * I + e
  std::vector<double> failure_gain;  // B, index (i * J + j) * J + l
  Matrix<double> intercept;          // D (I x J)
  Matrix<double> unmet_demand_gain;  // E (I x I)
  Matrix<double> unmet_failure_gain; // F (I x J)
  std::vector<double> unmet_intercept;  // G
  double worst_case_bound = 0.0;     // phi

  static AffinePolicy zero(std::size_t num_areas, std::size_t num_nodes);

  double& a(std::size_t i, std::size_t j, std::size_t e) {
    return demand_gain[(i * num_nodes + j) * num_areas + e];
  }
  double a(std::size_t i, std::size_t j, std::size_t e) const {
    return demand_gain[(i * num_nodes + j) * num_areas + e];
  }
  double& b(std::size_t i, std::size_t j, std::size_t l) {
    return failure_gain[(i * num_nodes + j) * num_nodes + l];
  }
  double b(std::size_t i, std::size_t j, std::size_t l) const {
    return failure_gain[(i * num_nodes + j) * num_nodes + l];
  }
};

/// Applies the affine rules at `scenario`. The cost uses the instance's delay
/// and penalty data.
RecourseOutcome evaluate_policy(const ProblemInstance& instance,
                                const AffinePolicy& policy,
                                const Scenario& scenario);

/// Robust constraint families, in assembly order.
enum class AdrFamily {
  kObjective = 0,       // recourse cost <= phi
  kFailureCapacity = 1, // sum_i x_ij <= C_j t_j (1 - z_j)
  kProcurement = 2,     // sum_i x_ij <= y_j
  kDemandCover = 3,     // sum_j x_ij + q_i >= lambda_i
  kUnmetNonneg = 4,     // q_i >= 0
  kAllocNonneg = 5,     // x_ij >= 0
  kAllocCap = 6,        // x_ij <= a_ij C_j
};
inline constexpr int kAdrFamilies = 7;

struct AdrFamilyCount {
  int robust_constraints = 0;
  int rows = 0;
  int dual_variables = 0;
};

struct AdrOptions {
  bool integer_procurement = true;
  // Symmetric box on policy coefficients; none by default.
  std::optional<double> coefficient_bound;
};

struct AdrModel {
  milp::Model model;
  FirstStageVars first_stage;
  std::vector<milp::VarId> a, b, e, f, g;
  Matrix<milp::VarId> d;
  milp::VarId phi;
  std::array<AdrFamilyCount, kAdrFamilies> families{};
  int first_stage_rows = 0;
  int first_stage_variables = 0;
  int policy_variables = 0;
};

AdrModel assemble_adr_milp(const ProblemInstance& instance,
                           const AdrOptions& options = {});

struct AdrSolution {
  FirstStagePlan plan;
  AffinePolicy policy;
  double objective = 0.0;
  double lower_bound = 0.0;
  bool limit_hit = false;
  double seconds = 0.0;
};

AdrSolution solve_adr(const ProblemInstance& instance,
                      const milp::SolveParams& params = {},
                      const AdrOptions& options = {});

/// Size of the assembled model against the closed-form counts
///   constraints IJ(4I+4J+11) + 4I(I+1) + 3J(J+4) + 5
///   variables   IJ(2I+2J+13) + I(3I+J+3) + J(2J+7).
/// Counting convention: constraints are the linear rows of the model plus
/// one nonnegativity constraint per dual multiplier; variables are all
/// columns (first stage, phi, policy coefficients, multipliers).
struct AdrSizeAudit {
  std::size_t num_areas = 0;
  std::size_t num_nodes = 0;
  long model_rows = 0;
  long model_columns = 0;
  long dual_variables = 0;
  long counted_constraints = 0;
  long counted_variables = 0;
  long formula_constraints = 0;
  long formula_variables = 0;
  bool matches() const {
    return counted_constraints == formula_constraints &&
           counted_variables == formula_variables;
  }
};

long adr_formula_constraints(long I, long J);
long adr_formula_variables(long I, long J);

AdrSizeAudit audit_adr_size(std::size_t num_areas, std::size_t num_nodes);

Json policy_to_json(const AffinePolicy& policy);
AffinePolicy policy_from_json(const Json& doc);

}  // namespace edgearo
