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

// Out-of-sample evaluation: replay a fixed plan against sampled scenarios by
// re-optimizing the recourse LP, certify its exact worst case with the
// duality subproblem, and sweep one instance parameter across methods.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "edgearo/adr.hpp"
#include "edgearo/baselines.hpp"
#include "edgearo/ccg.hpp"
#include "edgearo/instance.hpp"
#include "edgearo/io.hpp"
#include "edgearo/recourse.hpp"

namespace edgearo {

enum class DemandDistribution { kLognormal, kNormal, kUniform };

DemandDistribution parse_distribution(const std::string& name);
const char* to_string(DemandDistribution d);

struct EvaluationConfig {
  std::size_t num_scenarios = 1000;
  DemandDistribution distribution = DemandDistribution::kLognormal;
  // Failures uniform over sets of at most k_test nodes; negative means the
  // instance's failure budget.
  int k_test = -1;
  double psi = 1.0;  // penalty scale applied at evaluation
  std::uint64_t seed = 1;
  double lognormal_sigma = 0.25;  // median lam_bar + lam_tilde / 2
  double normal_sd_ratio = 0.25;  // sd = ratio * lam_tilde, mean mid-box
};

/// Demands i.i.d. per area from the truncated distribution on
/// [lam_bar, lam_bar + lam_tilde]; failures uniform over the bounded sets.
std::vector<Scenario> generate_test_scenarios(const ProblemInstance& instance,
                                              const EvaluationConfig& config);

struct EvaluationReport {
  std::string method;
  std::vector<double> scenario_costs;  // provisioning + recourse
  std::vector<double> unmet_totals;    // sum_i q_i per scenario
  double average = 0.0;
  double worst = 0.0;  // empirical max
  double certified_worst = std::numeric_limits<double>::quiet_NaN();
  double provisioning = 0.0;
  double average_unmet = 0.0;
};

EvaluationReport monte_carlo(const ProblemInstance& instance,
                             const FirstStagePlan& plan,
                             const std::vector<Scenario>& scenarios,
                             double psi = 1.0);

/// Same statistics, but each scenario applies the affine policy instead of
/// re-optimizing the recourse.
EvaluationReport monte_carlo_policy(const ProblemInstance& instance,
                                    const FirstStagePlan& plan,
                                    const AffinePolicy& policy,
                                    const std::vector<Scenario>& scenarios,
                                    double psi = 1.0);

/// Provisioning cost plus the proven bound of the duality subproblem: the
/// plan's exact worst case over the uncertainty set, up to the MIP gap.
double certify_worst_case(const ProblemInstance& instance,
                          const FirstStagePlan& plan,
                          const milp::SolveParams& params = {});

/// Copy of `instance` with every unmet penalty multiplied by `psi`.
ProblemInstance scale_penalties(const ProblemInstance& instance, double psi);

// ---- method dispatch -------------------------------------------------------

enum class Method { kCcgDuality, kCcgKkt, kAdr, kExtensive, kDet, kSo, kHeu };

Method parse_method(const std::string& name);
const char* to_string(Method m);

struct MethodOptions {
  double eps = 1e-4;
  milp::SolveParams params;
  int max_iterations = 500;
  std::optional<double> time_limit;
  bool integer_procurement = true;
  TrainingConfig training;
  std::size_t vertex_cap = 4096;
};

struct MethodOutcome {
  Method method = Method::kCcgDuality;
  FirstStagePlan plan;
  double objective = 0.0;
  bool converged = true;  // false on CCG nonconvergence or a hit limit
  double seconds = 0.0;
  std::optional<CcgResult> ccg;
  std::optional<AffinePolicy> policy;
};

MethodOutcome solve_with_method(const ProblemInstance& instance, Method method,
                                const MethodOptions& options = {});

// ---- sensitivity sweeps ----------------------------------------------------

enum class SweepAxis { kK, kGamma, kBeta, kPsi, kAlpha, kBudget, kDmax, kI, kJ };

SweepAxis parse_axis(const std::string& name);
const char* to_string(SweepAxis a);

/// Returns `base` with the axis set to `value`. I and J take prefixes of the
/// base instance's areas / nodes so that values are nested.
ProblemInstance apply_axis(const ProblemInstance& base, SweepAxis axis,
                           double value, bool psi_in_planning = true);

struct SweepOptions {
  MethodOptions method;
  EvaluationConfig evaluation;
  bool psi_in_planning = true;  // false: Psi rescales evaluation only
  bool certify = true;
};

struct SweepRow {
  double value = 0.0;
  Method method = Method::kCcgDuality;
  std::string status = "ok";  // or the error message for this cell
  double objective = std::numeric_limits<double>::quiet_NaN();
  double provisioning = std::numeric_limits<double>::quiet_NaN();
  double average = std::numeric_limits<double>::quiet_NaN();
  double worst = std::numeric_limits<double>::quiet_NaN();
  double certified_worst = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
};

/// One row per (value, method); a failing cell records its error and the
/// sweep continues.
std::vector<SweepRow> sensitivity_sweep(const ProblemInstance& base,
                                        SweepAxis axis,
                                        const std::vector<double>& values,
                                        const std::vector<Method>& methods,
                                        const SweepOptions& options = {});

std::string sweep_to_csv(SweepAxis axis, const std::vector<SweepRow>& rows);
std::string scenarios_to_csv(const EvaluationReport& report);
Json report_summary(const EvaluationReport& report);

}  // namespace edgearo
