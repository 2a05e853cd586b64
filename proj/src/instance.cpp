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

#include "edgearo/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "edgearo/errors.hpp"
#include "edgearo/topology.hpp"

namespace edgearo {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

template <typename T>
void require_size(const std::vector<T>& v, std::size_t n, const char* name) {
  require(v.size() == n, std::string(name) + ": expected length " +
                             std::to_string(n) + ", got " +
                             std::to_string(v.size()));
}

void require_nonnegative(std::span<const double> v, const char* name) {
  for (double x : v) {
    require(std::isfinite(x) && x >= 0.0,
            std::string(name) + " must be finite and nonnegative");
  }
}

// Number of k-subsets of n items for k = 0..limit, saturating.
std::size_t binomial_prefix_sum(std::size_t n, std::size_t limit) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  unsigned __int128 total = 0;
  unsigned __int128 term = 1;  // C(n, 0)
  for (std::size_t k = 0; k <= std::min(n, limit); ++k) {
    total += term;
    if (total >= kMax) return kMax;
    // C(n, k+1) = C(n, k) (n - k) / (k + 1), exact in this order.
    term = term * (n - k) / (k + 1);
  }
  return static_cast<std::size_t>(total);
}

// All binary vectors of length n with at most `limit` ones, in order of
// increasing cardinality then lexicographic position.
std::vector<std::vector<std::uint8_t>> bounded_subsets(std::size_t n,
                                                       std::size_t limit) {
  std::vector<std::vector<std::uint8_t>> out;
  const std::size_t kmax = std::min(n, limit);
  for (std::size_t k = 0; k <= kmax; ++k) {
    std::vector<std::uint8_t> mask(n, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), 1);
    // prev_permutation walks 1...10...0 down to 0...01...1.
    do {
      out.push_back(mask);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return out;
}

}  // namespace

double ProblemInstance::max_penalty() const {
  double m = 0.0;
  for (double p : unmet_penalty) m = std::max(m, p);
  return m;
}

void ProblemInstance::validate() const {
  const std::size_t I = num_areas;
  const std::size_t J = num_nodes;
  require(I >= 1 && J >= 1, "instance needs at least one area and one node");
  require_size(price, J, "prices");
  require_size(capacity, J, "capacities");
  require_size(install_cost, J, "placement_costs");
  require_size(storage_cost, J, "storage_costs");
  require_size(initial_placement, J, "initial_placement");
  require_size(unmet_penalty, I, "unmet_penalty");
  require_size(nominal_demand, I, "nominal_demand");
  require_size(deviation, I, "deviation");
  require(delay.rows() == I && delay.cols() == J, "delays must be I x J");
  require(eligible.rows() == I && eligible.cols() == J,
          "eligibility must be I x J");
  require_nonnegative(price, "prices");
  require_nonnegative(capacity, "capacities");
  require_nonnegative(install_cost, "placement_costs");
  require_nonnegative(storage_cost, "storage_costs");
  require_nonnegative(unmet_penalty, "unmet_penalty");
  require_nonnegative(nominal_demand, "nominal_demand");
  require_nonnegative(deviation, "deviation");
  require_nonnegative(delay.flat(), "delays");
  for (auto a : eligible.flat()) require(a <= 1, "eligibility must be 0/1");
  for (auto l : initial_placement) {
    require(l <= 1, "initial_placement must be 0/1");
  }
  require(std::isfinite(beta) && beta >= 0.0, "beta must be nonnegative");
  require(std::isfinite(budget) && budget >= 0.0,
          "budget must be nonnegative");
  require(!(max_delay < 0.0), "dmax must be nonnegative");
  require(uncertainty.gamma >= 0 &&
              static_cast<std::size_t>(uncertainty.gamma) <= I,
          "gamma must lie in [0, I]");
  require(uncertainty.failure_budget >= 0 &&
              static_cast<std::size_t>(uncertainty.failure_budget) <= J,
          "failure_budget must lie in [0, J]");
}

std::vector<double> demand_from_g(const ProblemInstance& instance,
                                  std::span<const double> g) {
  require(g.size() == instance.num_areas, "g must have length I");
  double total = 0.0;
  for (double gi : g) {
    require(gi >= -kFeasTol && gi <= 1.0 + kFeasTol, "g outside [0,1]");
    total += gi;
  }
  require(total <= instance.uncertainty.gamma + kFeasTol,
          "sum of g exceeds gamma");
  std::vector<double> lambda(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    lambda[i] = instance.nominal_demand[i] + g[i] * instance.deviation[i];
  }
  return lambda;
}

Scenario scenario_from_vertex(const ProblemInstance& instance,
                              const Vertex& vertex) {
  std::vector<double> g(vertex.g.begin(), vertex.g.end());
  return {demand_from_g(instance, g), vertex.z};
}

std::size_t vertex_count(const UncertaintyModel& uncertainty,
                         std::size_t num_areas, std::size_t num_nodes) {
  const std::size_t d = binomial_prefix_sum(
      num_areas, static_cast<std::size_t>(std::max(uncertainty.gamma, 0)));
  const std::size_t f = binomial_prefix_sum(
      num_nodes,
      static_cast<std::size_t>(std::max(uncertainty.failure_budget, 0)));
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  if (d != 0 && f > kMax / d) return kMax;
  return d * f;
}

std::vector<Vertex> enumerate_vertices(const UncertaintyModel& uncertainty,
                                       std::size_t num_areas,
                                       std::size_t num_nodes,
                                       std::size_t cap) {
  const std::size_t count = vertex_count(uncertainty, num_areas, num_nodes);
  if (count > cap) {
    throw EnumerationInfeasible("enumeration infeasible: " +
                                std::to_string(count) +
                                " vertices exceed cap " + std::to_string(cap));
  }
  const auto gs = bounded_subsets(
      num_areas, static_cast<std::size_t>(uncertainty.gamma));
  const auto zs = bounded_subsets(
      num_nodes, static_cast<std::size_t>(uncertainty.failure_budget));
  std::vector<Vertex> out;
  out.reserve(count);
  for (const auto& g : gs) {
    for (const auto& z : zs) out.push_back({g, z});
  }
  return out;
}

double provisioning_cost(const ProblemInstance& instance,
                         const FirstStagePlan& plan) {
  double cost = 0.0;
  for (std::size_t j = 0; j < instance.num_nodes; ++j) {
    cost += instance.price[j] * plan.procured[j];
    if (plan.placed[j]) cost += instance.placement_cost(j);
  }
  return cost;
}

double second_stage_cost(const ProblemInstance& instance,
                         const Matrix<double>& allocation,
                         std::span<const double> unmet) {
  double cost = 0.0;
  for (std::size_t i = 0; i < instance.num_areas; ++i) {
    cost += instance.unmet_penalty[i] * unmet[i];
    for (std::size_t j = 0; j < instance.num_nodes; ++j) {
      cost += instance.beta * instance.delay(i, j) * allocation(i, j);
    }
  }
  return cost;
}

bool is_feasible_plan(const ProblemInstance& instance,
                      const FirstStagePlan& plan, bool integer_procurement,
                      double tol) {
  if (plan.placed.size() != instance.num_nodes ||
      plan.procured.size() != instance.num_nodes) {
    return false;
  }
  for (std::size_t j = 0; j < instance.num_nodes; ++j) {
    const double y = plan.procured[j];
    if (plan.placed[j] > 1) return false;
    if (y < -tol) return false;
    if (y > instance.capacity[j] * plan.placed[j] + tol) return false;
    if (integer_procurement && std::abs(y - std::round(y)) > tol) return false;
  }
  return provisioning_cost(instance, plan) <= instance.budget + tol;
}

bool in_uncertainty_set(const ProblemInstance& instance,
                        const Scenario& scenario) {
  if (scenario.demand.size() != instance.num_areas ||
      scenario.failed.size() != instance.num_nodes) {
    return false;
  }
  double gsum = 0.0;
  for (std::size_t i = 0; i < instance.num_areas; ++i) {
    const double lo = instance.nominal_demand[i];
    const double dev = instance.deviation[i];
    const double lam = scenario.demand[i];
    if (lam < lo - kFeasTol || lam > lo + dev + kFeasTol) return false;
    if (dev > 0.0) gsum += (lam - lo) / dev;
  }
  if (gsum > instance.uncertainty.gamma + 1e-7) return false;
  int zsum = 0;
  for (auto z : scenario.failed) zsum += z;
  return zsum <= instance.uncertainty.failure_budget;
}

ProblemInstance subset_instance(const ProblemInstance& instance,
                                std::span<const std::size_t> areas,
                                std::span<const std::size_t> nodes) {
  ProblemInstance out;
  out.num_areas = areas.size();
  out.num_nodes = nodes.size();
  for (std::size_t j : nodes) {
    require(j < instance.num_nodes, "node index out of range");
    out.price.push_back(instance.price[j]);
    out.capacity.push_back(instance.capacity[j]);
    out.install_cost.push_back(instance.install_cost[j]);
    out.initial_placement.push_back(instance.initial_placement[j]);
    out.storage_cost.push_back(instance.storage_cost[j]);
  }
  out.delay = Matrix<double>(areas.size(), nodes.size());
  out.eligible = Matrix<std::uint8_t>(areas.size(), nodes.size());
  for (std::size_t a = 0; a < areas.size(); ++a) {
    const std::size_t i = areas[a];
    require(i < instance.num_areas, "area index out of range");
    out.unmet_penalty.push_back(instance.unmet_penalty[i]);
    out.nominal_demand.push_back(instance.nominal_demand[i]);
    out.deviation.push_back(instance.deviation[i]);
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      out.delay(a, b) = instance.delay(i, nodes[b]);
      out.eligible(a, b) = instance.eligible(i, nodes[b]);
    }
  }
  out.beta = instance.beta;
  out.budget = instance.budget;
  out.max_delay = instance.max_delay;
  out.uncertainty.gamma =
      std::min<int>(instance.uncertainty.gamma, static_cast<int>(areas.size()));
  out.uncertainty.failure_budget = std::min<int>(
      instance.uncertainty.failure_budget, static_cast<int>(nodes.size()));
  return out;
}

void apply_max_delay(ProblemInstance& instance, double dmax) {
  instance.max_delay = dmax;
  instance.eligible = derive_eligibility(instance.delay, dmax);
}

}  // namespace edgearo
