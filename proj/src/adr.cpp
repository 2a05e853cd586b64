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

#include "edgearo/adr.hpp"

#include "edgearo/errors.hpp"

namespace edgearo {

using milp::LinExpr;
using milp::VarId;

namespace {

// A constraint that must hold for every (g, z):
//   constant + sum_e demand[e] g_e + sum_l failure[l] z_l <= rhs
// with every coefficient affine in the decision variables.
struct RobustRow {
  LinExpr constant;
  std::vector<LinExpr> demand;   // length I
  std::vector<LinExpr> failure;  // length J
  LinExpr rhs;
};

RobustRow empty_row(std::size_t I, std::size_t J) {
  return {LinExpr(), std::vector<LinExpr>(I), std::vector<LinExpr>(J),
          LinExpr()};
}

// Adds the dual certificate of one robust row and returns its counts.
AdrFamilyCount add_robust_row(milp::Model& m, const RobustRow& row,
                              int gamma, int failure_budget) {
  AdrFamilyCount c;
  c.robust_constraints = 1;
  const VarId mu = m.add_continuous();
  const VarId nu = m.add_continuous();
  c.dual_variables += 2;
  LinExpr lhs = row.constant;
  lhs.add(mu, gamma);
  lhs.add(nu, failure_budget);
  for (const LinExpr& alpha : row.demand) {
    const VarId eta = m.add_continuous();
    ++c.dual_variables;
    lhs.add(eta, 1.0);
    m.add_ge(LinExpr(eta) + LinExpr(mu) - alpha, 0.0);
    ++c.rows;
  }
  for (const LinExpr& zeta : row.failure) {
    const VarId sigma = m.add_continuous();
    ++c.dual_variables;
    lhs.add(sigma, 1.0);
    m.add_ge(LinExpr(sigma) + LinExpr(nu) - zeta, 0.0);
    ++c.rows;
  }
  m.add_le(lhs - row.rhs, 0.0);
  ++c.rows;
  return c;
}

void accumulate(AdrFamilyCount& total, const AdrFamilyCount& add) {
  total.robust_constraints += add.robust_constraints;
  total.rows += add.rows;
  total.dual_variables += add.dual_variables;
}

}  // namespace

AffinePolicy AffinePolicy::zero(std::size_t I, std::size_t J) {
  AffinePolicy p;
  p.num_areas = I;
  p.num_nodes = J;
  p.demand_gain.assign(I * J * I, 0.0);
  p.failure_gain.assign(I * J * J, 0.0);
  p.intercept = Matrix<double>(I, J);
  p.unmet_demand_gain = Matrix<double>(I, I);
  p.unmet_failure_gain = Matrix<double>(I, J);
  p.unmet_intercept.assign(I, 0.0);
  return p;
}

RecourseOutcome evaluate_policy(const ProblemInstance& instance,
                                const AffinePolicy& p,
                                const Scenario& scenario) {
  const std::size_t I = p.num_areas;
  const std::size_t J = p.num_nodes;
  if (scenario.demand.size() != I || scenario.failed.size() != J) {
    throw InvalidInput("evaluate_policy: scenario dimensions mismatch");
  }
  RecourseOutcome out;
  out.allocation = Matrix<double>(I, J);
  out.unmet.assign(I, 0.0);
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      double x = p.intercept(i, j);
      for (std::size_t e = 0; e < I; ++e) x += p.a(i, j, e) * scenario.demand[e];
      for (std::size_t l = 0; l < J; ++l) x += p.b(i, j, l) * scenario.failed[l];
      out.allocation(i, j) = x;
    }
    double q = p.unmet_intercept[i];
    for (std::size_t e = 0; e < I; ++e) {
      q += p.unmet_demand_gain(i, e) * scenario.demand[e];
    }
    for (std::size_t l = 0; l < J; ++l) {
      q += p.unmet_failure_gain(i, l) * scenario.failed[l];
    }
    out.unmet[i] = q;
  }
  if (instance.num_areas == I && instance.num_nodes == J) {
    out.cost = second_stage_cost(instance, out.allocation, out.unmet);
  }
  return out;
}

AdrModel assemble_adr_milp(const ProblemInstance& inst,
                           const AdrOptions& options) {
  inst.validate();
  const std::size_t I = inst.num_areas;
  const std::size_t J = inst.num_nodes;
  const int gamma = inst.uncertainty.gamma;
  const int kfail = inst.uncertainty.failure_budget;
  AdrModel am;
  milp::Model& m = am.model;

  am.first_stage = add_first_stage(m, inst, options.integer_procurement);
  am.first_stage_rows = m.num_constraints();
  am.first_stage_variables = m.num_variables();
  const FirstStageVars& fs = am.first_stage;

  const double lo = options.coefficient_bound ? -*options.coefficient_bound
                                              : -milp::kInf;
  const double hi = options.coefficient_bound ? *options.coefficient_bound
                                              : milp::kInf;
  auto coef = [&] { return m.add_continuous(lo, hi); };
  for (std::size_t k = 0; k < I * J * I; ++k) am.a.push_back(coef());
  for (std::size_t k = 0; k < I * J * J; ++k) am.b.push_back(coef());
  am.d = Matrix<VarId>(I, J);
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) am.d(i, j) = coef();
  }
  for (std::size_t k = 0; k < I * I; ++k) am.e.push_back(coef());
  for (std::size_t k = 0; k < I * J; ++k) am.f.push_back(coef());
  for (std::size_t k = 0; k < I; ++k) am.g.push_back(coef());
  am.policy_variables = m.num_variables() - am.first_stage_variables;
  am.phi = m.add_continuous(-milp::kInf, milp::kInf, "phi");

  auto A = [&](std::size_t i, std::size_t j, std::size_t e) {
    return am.a[(i * J + j) * I + e];
  };
  auto B = [&](std::size_t i, std::size_t j, std::size_t l) {
    return am.b[(i * J + j) * J + l];
  };

  // x_ij and q_i as robust rows (with rhs 0): constant part at nominal
  // demand, demand part scaled by the deviations.
  auto x_row = [&](std::size_t i, std::size_t j) {
    RobustRow r = empty_row(I, J);
    r.constant.add(am.d(i, j), 1.0);
    for (std::size_t e = 0; e < I; ++e) {
      r.constant.add(A(i, j, e), inst.nominal_demand[e]);
      r.demand[e].add(A(i, j, e), inst.deviation[e]);
    }
    for (std::size_t l = 0; l < J; ++l) r.failure[l].add(B(i, j, l), 1.0);
    return r;
  };
  auto q_row = [&](std::size_t i) {
    RobustRow r = empty_row(I, J);
    r.constant.add(am.g[i], 1.0);
    for (std::size_t e = 0; e < I; ++e) {
      r.constant.add(am.e[i * I + e], inst.nominal_demand[e]);
      r.demand[e].add(am.e[i * I + e], inst.deviation[e]);
    }
    for (std::size_t l = 0; l < J; ++l) r.failure[l].add(am.f[i * J + l], 1.0);
    return r;
  };
  auto add_scaled = [&](RobustRow& into, const RobustRow& from, double s) {
    LinExpr c = from.constant;
    c *= s;
    into.constant += c;
    for (std::size_t e = 0; e < I; ++e) into.demand[e] += s * from.demand[e];
    for (std::size_t l = 0; l < J; ++l) into.failure[l] += s * from.failure[l];
  };
  auto push = [&](AdrFamily family, const RobustRow& row) {
    accumulate(am.families[static_cast<int>(family)],
               add_robust_row(m, row, gamma, kfail));
  };

  // Recourse cost <= phi.
  {
    RobustRow row = empty_row(I, J);
    for (std::size_t i = 0; i < I; ++i) {
      add_scaled(row, q_row(i), inst.unmet_penalty[i]);
      for (std::size_t j = 0; j < J; ++j) {
        const double w = inst.beta * inst.delay(i, j);
        if (w != 0.0) add_scaled(row, x_row(i, j), w);
      }
    }
    row.rhs = LinExpr(am.phi);
    push(AdrFamily::kObjective, row);
  }
  // sum_i x_ij + C_j t_j z_j <= C_j t_j.
  for (std::size_t j = 0; j < J; ++j) {
    RobustRow row = empty_row(I, J);
    for (std::size_t i = 0; i < I; ++i) add_scaled(row, x_row(i, j), 1.0);
    row.failure[j].add(fs.placed[j], inst.capacity[j]);
    row.rhs = LinExpr(fs.placed[j], inst.capacity[j]);
    push(AdrFamily::kFailureCapacity, row);
  }
  // sum_i x_ij <= y_j.
  for (std::size_t j = 0; j < J; ++j) {
    RobustRow row = empty_row(I, J);
    for (std::size_t i = 0; i < I; ++i) add_scaled(row, x_row(i, j), 1.0);
    row.rhs = LinExpr(fs.procured[j]);
    push(AdrFamily::kProcurement, row);
  }
  // lambda_i - sum_j x_ij - q_i <= 0.
  for (std::size_t i = 0; i < I; ++i) {
    RobustRow row = empty_row(I, J);
    for (std::size_t j = 0; j < J; ++j) add_scaled(row, x_row(i, j), -1.0);
    add_scaled(row, q_row(i), -1.0);
    row.constant.add(inst.nominal_demand[i]);
    row.demand[i].add(inst.deviation[i]);
    push(AdrFamily::kDemandCover, row);
  }
  // -q_i <= 0.
  for (std::size_t i = 0; i < I; ++i) {
    RobustRow row = empty_row(I, J);
    add_scaled(row, q_row(i), -1.0);
    push(AdrFamily::kUnmetNonneg, row);
  }
  // -x_ij <= 0.
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      RobustRow row = empty_row(I, J);
      add_scaled(row, x_row(i, j), -1.0);
      push(AdrFamily::kAllocNonneg, row);
    }
  }
  // x_ij <= a_ij C_j.
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      RobustRow row = x_row(i, j);
      row.rhs = LinExpr(inst.eligible(i, j) ? inst.capacity[j] : 0.0);
      push(AdrFamily::kAllocCap, row);
    }
  }

  m.set_objective(fs.cost + LinExpr(am.phi), milp::ObjSense::kMinimize);
  return am;
}

AdrSolution solve_adr(const ProblemInstance& instance,
                      const milp::SolveParams& params,
                      const AdrOptions& options) {
  const AdrModel am = assemble_adr_milp(instance, options);
  const milp::SolveResult r = milp::solve(am.model, params);
  if (r.status == milp::SolveStatus::kBackendError) {
    throw BackendError("ADR: " + r.message);
  }
  if (!r.has_solution) {
    throw BackendError(std::string("ADR returned no solution (") +
                       milp::to_string(r.status) + ")");
  }
  const std::size_t I = instance.num_areas;
  const std::size_t J = instance.num_nodes;
  AdrSolution out;
  out.plan = read_plan(am.first_stage, r);
  out.objective = r.objective;
  out.lower_bound = std::min(r.bound, r.objective);
  out.limit_hit = !r.optimal();
  out.seconds = r.seconds;
  AffinePolicy& p = out.policy;
  p = AffinePolicy::zero(I, J);
  for (std::size_t k = 0; k < am.a.size(); ++k) p.demand_gain[k] = r.value(am.a[k]);
  for (std::size_t k = 0; k < am.b.size(); ++k) {
    p.failure_gain[k] = r.value(am.b[k]);
  }
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) p.intercept(i, j) = r.value(am.d(i, j));
    for (std::size_t e = 0; e < I; ++e) {
      p.unmet_demand_gain(i, e) = r.value(am.e[i * I + e]);
    }
    for (std::size_t l = 0; l < J; ++l) {
      p.unmet_failure_gain(i, l) = r.value(am.f[i * J + l]);
    }
    p.unmet_intercept[i] = r.value(am.g[i]);
  }
  p.worst_case_bound = r.value(am.phi);
  return out;
}

long adr_formula_constraints(long I, long J) {
  return I * J * (4 * I + 4 * J + 11) + 4 * I * (I + 1) + 3 * J * (J + 4) + 5;
}

long adr_formula_variables(long I, long J) {
  return I * J * (2 * I + 2 * J + 13) + I * (3 * I + J + 3) + J * (2 * J + 7);
}

AdrSizeAudit audit_adr_size(std::size_t num_areas, std::size_t num_nodes) {
  // Counts depend on dimensions only; any valid data will do.
  ProblemInstance inst;
  inst.num_areas = num_areas;
  inst.num_nodes = num_nodes;
  inst.price.assign(num_nodes, 0.04);
  inst.capacity.assign(num_nodes, 32.0);
  inst.install_cost.assign(num_nodes, 0.1);
  inst.storage_cost.assign(num_nodes, 0.0);
  inst.initial_placement.assign(num_nodes, 0);
  inst.delay = Matrix<double>(num_areas, num_nodes, 1.0);
  inst.eligible = Matrix<std::uint8_t>(num_areas, num_nodes, 1);
  inst.beta = 0.1;
  inst.unmet_penalty.assign(num_areas, 0.5);
  inst.budget = 20.0;
  inst.nominal_demand.assign(num_areas, 10.0);
  inst.deviation.assign(num_areas, 6.0);
  inst.uncertainty = {1, 1};
  const AdrModel am = assemble_adr_milp(inst);

  AdrSizeAudit audit;
  audit.num_areas = num_areas;
  audit.num_nodes = num_nodes;
  audit.model_rows = am.model.num_constraints();
  audit.model_columns = am.model.num_variables();
  for (const AdrFamilyCount& c : am.families) {
    audit.dual_variables += c.dual_variables;
  }
  audit.counted_constraints = audit.model_rows + audit.dual_variables;
  audit.counted_variables = audit.model_columns;
  audit.formula_constraints = adr_formula_constraints(
      static_cast<long>(num_areas), static_cast<long>(num_nodes));
  audit.formula_variables = adr_formula_variables(
      static_cast<long>(num_areas), static_cast<long>(num_nodes));
  return audit;
}

Json policy_to_json(const AffinePolicy& p) {
  Json doc;
  doc["areas"] = p.num_areas;
  doc["nodes"] = p.num_nodes;
  doc["A_shape"] = {p.num_areas, p.num_nodes, p.num_areas};
  doc["A"] = p.demand_gain;
  doc["B_shape"] = {p.num_areas, p.num_nodes, p.num_nodes};
  doc["B"] = p.failure_gain;
  doc["D_shape"] = {p.num_areas, p.num_nodes};
  doc["D"] = std::vector<double>(p.intercept.flat().begin(),
                                 p.intercept.flat().end());
  doc["E_shape"] = {p.num_areas, p.num_areas};
  doc["E"] = std::vector<double>(p.unmet_demand_gain.flat().begin(),
                                 p.unmet_demand_gain.flat().end());
  doc["F_shape"] = {p.num_areas, p.num_nodes};
  doc["F"] = std::vector<double>(p.unmet_failure_gain.flat().begin(),
                                 p.unmet_failure_gain.flat().end());
  doc["G"] = p.unmet_intercept;
  doc["phi"] = p.worst_case_bound;
  return doc;
}

AffinePolicy policy_from_json(const Json& doc) {
  try {
    const std::size_t I = doc.at("areas").get<std::size_t>();
    const std::size_t J = doc.at("nodes").get<std::size_t>();
    AffinePolicy p = AffinePolicy::zero(I, J);
    auto fill = [&](const char* key, std::span<double> dst) {
      const auto v = doc.at(key).get<std::vector<double>>();
      if (v.size() != dst.size()) {
        throw InvalidInput(std::string("policy: '") + key +
                           "' has the wrong length");
      }
      std::copy(v.begin(), v.end(), dst.begin());
    };
    fill("A", p.demand_gain);
    fill("B", p.failure_gain);
    fill("D", p.intercept.flat());
    fill("E", p.unmet_demand_gain.flat());
    fill("F", p.unmet_failure_gain.flat());
    fill("G", p.unmet_intercept);
    p.worst_case_bound = doc.at("phi").get<double>();
    return p;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("policy: ") + e.what());
  }
}

}  // namespace edgearo
