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

// Problem data for resilient edge service placement: the deterministic
// parameters, the joint demand/failure uncertainty set, first-stage plans,
// scenarios and recourse outcomes.
//
// Uncertainty set:
//   D = { lambda : lambda_i = lam_bar_i + g_i * lam_tilde_i, g in [0,1]^I,
//         sum_i g_i <= gamma }
//   Z = { z in {0,1}^J : sum_j z_j <= failure_budget }
// Worst cases are attained at binary g because gamma is integral, so vertex
// enumeration only ever produces binary (g, z) pairs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "edgearo/matrix.hpp"

namespace edgearo {

/// Absolute tolerance for box/budget membership checks.
inline constexpr double kFeasTol = 1e-9;

/// Default cap on the number of enumerated vertices.
inline constexpr std::size_t kDefaultVertexCap = 1'000'000;

struct UncertaintyModel {
  int gamma = 0;           // demand budget, 0 <= gamma <= I
  int failure_budget = 0;  // K, 0 <= K <= J
};

struct ProblemInstance {
  std::size_t num_areas = 0;  // I
  std::size_t num_nodes = 0;  // J

  std::vector<double> price;               // p_j
  std::vector<double> capacity;            // C_j
  std::vector<double> install_cost;        // f_j
  std::vector<std::uint8_t> initial_placement;  // l0_j
  std::vector<double> storage_cost;        // s_j
  Matrix<double> delay;                    // d_ij in ms
  Matrix<std::uint8_t> eligible;           // a_ij
  double beta = 0.0;                       // delay penalty
  std::vector<double> unmet_penalty;       // P_i
  double budget = 0.0;                     // B
  std::vector<double> nominal_demand;      // lam_bar_i
  std::vector<double> deviation;           // lam_tilde_i
  double max_delay = std::numeric_limits<double>::infinity();  // Dmax
  UncertaintyModel uncertainty;

  /// h_j = f_j (1 - l0_j) + s_j.
  double placement_cost(std::size_t j) const {
    return install_cost[j] * (initial_placement[j] ? 0.0 : 1.0) +
           storage_cost[j];
  }
  double max_penalty() const;

  /// Throws InvalidInput when any dimension, sign, or range invariant fails.
  void validate() const;
};

struct FirstStagePlan {
  std::vector<std::uint8_t> placed;  // t_j
  std::vector<double> procured;      // y_j

  static FirstStagePlan empty(std::size_t num_nodes) {
    return {std::vector<std::uint8_t>(num_nodes, 0),
            std::vector<double>(num_nodes, 0.0)};
  }
  friend bool operator==(const FirstStagePlan&,
                         const FirstStagePlan&) = default;
};

struct Scenario {
  std::vector<double> demand;         // lambda_i
  std::vector<std::uint8_t> failed;   // z_j
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct RecourseOutcome {
  Matrix<double> allocation;  // x_ij
  std::vector<double> unmet;  // q_i
  double cost = 0.0;          // sum P q + beta sum d x
};

/// A vertex of conv(D) x conv(Z) as its binary generators.
struct Vertex {
  std::vector<std::uint8_t> g;
  std::vector<std::uint8_t> z;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// lambda_i = lam_bar_i + g_i lam_tilde_i; rejects g outside [0,1]^I or with
/// sum g > gamma.
std::vector<double> demand_from_g(const ProblemInstance& instance,
                                  std::span<const double> g);

Scenario scenario_from_vertex(const ProblemInstance& instance,
                              const Vertex& vertex);

/// (sum_{k<=gamma} C(I,k)) * (sum_{k<=K} C(J,k)), saturating at SIZE_MAX.
std::size_t vertex_count(const UncertaintyModel& uncertainty,
                         std::size_t num_areas, std::size_t num_nodes);

/// Every binary (g, z) with sum g <= gamma and sum z <= K. Throws
/// EnumerationInfeasible when the count exceeds `cap`.
std::vector<Vertex> enumerate_vertices(const UncertaintyModel& uncertainty,
                                       std::size_t num_areas,
                                       std::size_t num_nodes,
                                       std::size_t cap = kDefaultVertexCap);

/// sum_j p_j y_j + sum_j h_j t_j.
double provisioning_cost(const ProblemInstance& instance,
                         const FirstStagePlan& plan);

/// Recourse objective sum_i P_i q_i + beta sum_ij d_ij x_ij.
double second_stage_cost(const ProblemInstance& instance,
                         const Matrix<double>& allocation,
                         std::span<const double> unmet);

/// Budget, capacity coupling and (optionally) integrality of y.
bool is_feasible_plan(const ProblemInstance& instance,
                      const FirstStagePlan& plan, bool integer_procurement,
                      double tol = 1e-6);

/// Whether `scenario` lies in D x Z (within kFeasTol).
bool in_uncertainty_set(const ProblemInstance& instance,
                        const Scenario& scenario);

/// Restricts an instance to the given area and node index lists, keeping
/// order. Budgets gamma/K are clamped to the new dimensions.
ProblemInstance subset_instance(const ProblemInstance& instance,
                                std::span<const std::size_t> areas,
                                std::span<const std::size_t> nodes);

/// Recomputes a_ij = [d_ij <= dmax] and stores dmax on the instance.
void apply_max_delay(ProblemInstance& instance, double dmax);

}  // namespace edgearo
