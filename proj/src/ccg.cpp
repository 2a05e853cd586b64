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

#include "edgearo/ccg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "edgearo/errors.hpp"
#include "edgearo/formulation.hpp"

namespace edgearo {

using milp::LinExpr;
using milp::ObjSense;
using milp::SolveResult;
using milp::SolveStatus;
using milp::VarId;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_solution(const SolveResult& r, const char* what) {
  if (r.status == SolveStatus::kBackendError) {
    throw BackendError(std::string(what) + ": " + r.message);
  }
  if (!r.has_solution) {
    throw BackendError(std::string(what) + " returned no solution (" +
                       milp::to_string(r.status) + ")");
  }
}

std::vector<std::uint8_t> read_bits(const SolveResult& r,
                                    const std::vector<VarId>& vars) {
  std::vector<std::uint8_t> bits;
  for (VarId v : vars) bits.push_back(r.value(v) > 0.5 ? 1 : 0);
  return bits;
}

void check_plan(const ProblemInstance& instance, const FirstStagePlan& plan) {
  if (plan.placed.size() != instance.num_nodes ||
      plan.procured.size() != instance.num_nodes) {
    throw InvalidInput("plan dimensions do not match the instance");
  }
}

// Upper bound for the dual prices u1, u2, pi. Capping them at the largest
// unmet penalty keeps an optimal dual: s_i <= P_i, so any value above max P
// already satisfies every row it appears in, and lowering it cannot reduce
// the objective because its coefficients are nonpositive.
double dual_cap(const ProblemInstance& instance) {
  return instance.max_penalty();
}

SubproblemSolution duality_once(const ProblemInstance& inst,
                                const FirstStagePlan& plan,
                                const milp::SolveParams& params, double cap) {
  const std::size_t I = inst.num_areas;
  const std::size_t J = inst.num_nodes;
  milp::Model m;
  std::vector<VarId> s, v, g, u1, u2, U, z;
  Matrix<VarId> pi(I, J);
  LinExpr obj;
  LinExpr gsum, zsum;
  for (std::size_t i = 0; i < I; ++i) {
    const double P = inst.unmet_penalty[i];
    s.push_back(m.add_continuous(0.0, P, "s_" + std::to_string(i)));
    g.push_back(m.add_binary("g_" + std::to_string(i)));
    v.push_back(m.add_continuous(0.0, P, "v_" + std::to_string(i)));
    // v = s g with s in [0, P].
    m.add_le(LinExpr(v[i]) - LinExpr(s[i]), 0.0);
    m.add_le(LinExpr(v[i]) - LinExpr(g[i], P), 0.0);
    m.add_ge(LinExpr(v[i]) - LinExpr(s[i]) - LinExpr(g[i], P), -P);
    obj.add(s[i], inst.nominal_demand[i]);
    obj.add(v[i], inst.deviation[i]);
    gsum.add(g[i], 1.0);
  }
  for (std::size_t j = 0; j < J; ++j) {
    const double ct = inst.capacity[j] * plan.placed[j];
    u1.push_back(m.add_continuous(0.0, cap, "u1_" + std::to_string(j)));
    u2.push_back(m.add_continuous(0.0, cap, "u2_" + std::to_string(j)));
    z.push_back(m.add_binary("z_" + std::to_string(j)));
    U.push_back(m.add_continuous(0.0, cap, "U_" + std::to_string(j)));
    // U = z u1 with u1 in [0, cap].
    m.add_le(LinExpr(U[j]) - LinExpr(u1[j]), 0.0);
    m.add_le(LinExpr(U[j]) - LinExpr(z[j], cap), 0.0);
    m.add_ge(LinExpr(U[j]) - LinExpr(u1[j]) - LinExpr(z[j], cap), -cap);
    obj.add(U[j], ct);
    obj.add(u1[j], -ct);
    obj.add(u2[j], -plan.procured[j]);
    zsum.add(z[j], 1.0);
  }
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      pi(i, j) = m.add_continuous(0.0, cap);
      const double ac = inst.eligible(i, j) ? inst.capacity[j] : 0.0;
      obj.add(pi(i, j), -ac);
      m.add_le(LinExpr(s[i]) - LinExpr(u1[j]) - LinExpr(u2[j]) -
                   LinExpr(pi(i, j)),
               inst.beta * inst.delay(i, j));
    }
  }
  m.add_le(gsum, inst.uncertainty.gamma, "demand_budget");
  m.add_le(zsum, inst.uncertainty.failure_budget, "failure_budget");
  m.set_objective(obj, ObjSense::kMaximize);

  const SolveResult r = milp::solve(m, params);
  require_solution(r, "duality subproblem");

  SubproblemSolution out;
  out.vertex = {read_bits(r, g), read_bits(r, z)};
  out.worst = scenario_from_vertex(inst, out.vertex);
  out.value = r.objective;
  out.bound = std::max(r.bound, r.objective);
  out.degraded = !r.optimal();
  out.seconds = r.seconds;
  DualCertificate c;
  c.eligibility = Matrix<double>(I, J);
  for (std::size_t i = 0; i < I; ++i) {
    c.demand.push_back(r.value(s[i]));
    c.demand_product.push_back(r.value(v[i]));
    for (std::size_t j = 0; j < J; ++j) c.eligibility(i, j) = r.value(pi(i, j));
  }
  for (std::size_t j = 0; j < J; ++j) {
    c.capacity.push_back(r.value(u1[j]));
    c.procurement.push_back(r.value(u2[j]));
    c.failure_product.push_back(r.value(U[j]));
  }
  out.certificate = std::move(c);
  return out;
}

}  // namespace

MasterSolution solve_master(const ProblemInstance& instance,
                            std::span<const Scenario> pool,
                            const milp::SolveParams& params,
                            bool integer_procurement) {
  milp::Model m;
  const FirstStageVars fs = add_first_stage(m, instance, integer_procurement);
  const VarId eta = m.add_continuous(0.0, milp::kInf, "eta");
  for (const Scenario& sc : pool) {
    const RecourseBlock b = add_recourse_block(m, instance, fs, sc);
    m.add_ge(LinExpr(eta) - b.cost, 0.0);
  }
  m.set_objective(fs.cost + LinExpr(eta), ObjSense::kMinimize);
  const SolveResult r = milp::solve(m, params);
  if (r.status == SolveStatus::kInfeasible) {
    throw InvalidInput("master problem infeasible: inconsistent instance");
  }
  require_solution(r, "master problem");
  MasterSolution out;
  out.plan = read_plan(fs, r);
  out.eta = r.value(eta);
  out.objective = r.objective;
  out.lower_bound = std::min(r.bound, r.objective);
  out.seconds = r.seconds;
  return out;
}

SubproblemSolution solve_subproblem_duality(const ProblemInstance& instance,
                                            const FirstStagePlan& plan,
                                            const milp::SolveParams& params) {
  check_plan(instance, plan);
  const double cap = dual_cap(instance);
  SubproblemSolution out = duality_once(instance, plan, params, cap);
  // Only u1_j of a placed, surviving node carries an objective coefficient;
  // if one of those sits on the cap, confirm with a looser cap.
  bool tight = false;
  for (std::size_t j = 0; j < instance.num_nodes; ++j) {
    if (plan.placed[j] && !out.vertex.z[j] &&
        out.certificate->capacity[j] >= cap - 1e-7 && cap > 0.0) {
      tight = true;
    }
  }
  if (tight) {
    SubproblemSolution wide = duality_once(instance, plan, params, 10.0 * cap);
    wide.seconds += out.seconds;
    wide.bound_enlarged = true;
    return wide;
  }
  return out;
}

SubproblemSolution solve_subproblem_kkt(const ProblemInstance& inst,
                                        const FirstStagePlan& plan,
                                        const milp::SolveParams& params) {
  check_plan(inst, plan);
  const std::size_t I = inst.num_areas;
  const std::size_t J = inst.num_nodes;
  const double dcap = dual_cap(inst);
  milp::Model m;
  Matrix<VarId> x(I, J), pi(I, J);
  std::vector<VarId> q, s, g, u1, u2, z;
  LinExpr obj, gsum, zsum;

  for (std::size_t i = 0; i < I; ++i) {
    q.push_back(m.add_continuous(0.0, milp::kInf, "q_" + std::to_string(i)));
    s.push_back(m.add_continuous(0.0, inst.unmet_penalty[i],
                                 "s_" + std::to_string(i)));
    g.push_back(m.add_binary("g_" + std::to_string(i)));
    obj.add(q[i], inst.unmet_penalty[i]);
    gsum.add(g[i], 1.0);
  }
  for (std::size_t j = 0; j < J; ++j) {
    u1.push_back(m.add_continuous(0.0, dcap, "u1_" + std::to_string(j)));
    u2.push_back(m.add_continuous(0.0, dcap, "u2_" + std::to_string(j)));
    z.push_back(m.add_binary("z_" + std::to_string(j)));
    zsum.add(z[j], 1.0);
  }
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      const double ac = inst.eligible(i, j) ? inst.capacity[j] : 0.0;
      x(i, j) = m.add_continuous(0.0, ac);
      pi(i, j) = m.add_continuous(0.0, dcap);
      obj.add(x(i, j), inst.beta * inst.delay(i, j));
    }
  }

  // Primal feasibility and the complementarity pairs on the node rows.
  for (std::size_t j = 0; j < J; ++j) {
    const double ct = inst.capacity[j] * plan.placed[j];
    const double y = plan.procured[j];
    LinExpr load;
    for (std::size_t i = 0; i < I; ++i) load.add(x(i, j), 1.0);
    // slack1 = C t (1 - z) - load >= 0
    const LinExpr slack1 = LinExpr(ct) - LinExpr(z[j], ct) - load;
    const LinExpr slack2 = LinExpr(y) - load;
    m.add_ge(slack1, 0.0);
    m.add_ge(slack2, 0.0);
    const VarId b1 = m.add_binary();
    const VarId b2 = m.add_binary();
    m.add_le(LinExpr(u1[j]) - LinExpr(b1, dcap), 0.0);
    m.add_le(slack1 + LinExpr(b1, ct), ct);
    m.add_le(LinExpr(u2[j]) - LinExpr(b2, dcap), 0.0);
    m.add_le(slack2 + LinExpr(b2, y), y);
  }
  // Demand rows.
  for (std::size_t i = 0; i < I; ++i) {
    const double lam_bar = inst.nominal_demand[i];
    const double lam_dev = inst.deviation[i];
    double served_max = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      if (inst.eligible(i, j)) served_max += inst.capacity[j];
    }
    LinExpr cover(q[i]);
    for (std::size_t j = 0; j < J; ++j) cover.add(x(i, j), 1.0);
    // slack3 = cover - lam_bar - lam_dev g >= 0
    const LinExpr slack3 = cover - LinExpr(lam_bar) - LinExpr(g[i], lam_dev);
    m.add_ge(slack3, 0.0);
    const double m3 = lam_bar + lam_dev + served_max;
    const VarId b3 = m.add_binary();
    m.add_le(LinExpr(s[i]) - LinExpr(b3, inst.unmet_penalty[i]), 0.0);
    m.add_le(slack3 + LinExpr(b3, m3), m3);
    // q_i complements the reduced cost P_i - s_i.
    const double mq = lam_bar + lam_dev;
    const VarId b6 = m.add_binary();
    m.add_le(LinExpr(q[i]) - LinExpr(b6, mq), 0.0);
    m.add_le(LinExpr(inst.unmet_penalty[i]) - LinExpr(s[i]) +
                 LinExpr(b6, inst.unmet_penalty[i]),
             inst.unmet_penalty[i]);
  }
  // Allocation bounds and allocation reduced costs.
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      const double ac = inst.eligible(i, j) ? inst.capacity[j] : 0.0;
      const double bd = inst.beta * inst.delay(i, j);
      const VarId b4 = m.add_binary();
      m.add_le(LinExpr(pi(i, j)) - LinExpr(b4, dcap), 0.0);
      // slack4 = ac - x <= ac (1 - b4)
      m.add_le(LinExpr(ac) - LinExpr(x(i, j)) + LinExpr(b4, ac), ac);
      // reduced cost beta d - s + u1 + u2 + pi >= 0
      const LinExpr reduced = LinExpr(bd) - LinExpr(s[i]) + LinExpr(u1[j]) +
                              LinExpr(u2[j]) + LinExpr(pi(i, j));
      m.add_ge(reduced, 0.0);
      const double m5 = bd + 3.0 * dcap;
      const VarId b5 = m.add_binary();
      m.add_le(LinExpr(x(i, j)) - LinExpr(b5, ac), 0.0);
      m.add_le(reduced + LinExpr(b5, m5), m5);
    }
  }
  m.add_le(gsum, inst.uncertainty.gamma, "demand_budget");
  m.add_le(zsum, inst.uncertainty.failure_budget, "failure_budget");
  m.set_objective(obj, ObjSense::kMaximize);

  const SolveResult r = milp::solve(m, params);
  require_solution(r, "KKT subproblem");
  SubproblemSolution out;
  out.vertex = {read_bits(r, g), read_bits(r, z)};
  out.worst = scenario_from_vertex(inst, out.vertex);
  out.value = r.objective;
  out.bound = std::max(r.bound, r.objective);
  out.degraded = !r.optimal();
  out.seconds = r.seconds;
  return out;
}

SubproblemSolution solve_subproblem(SubproblemOracle oracle,
                                    const ProblemInstance& instance,
                                    const FirstStagePlan& plan,
                                    const milp::SolveParams& params) {
  return oracle == SubproblemOracle::kDuality
             ? solve_subproblem_duality(instance, plan, params)
             : solve_subproblem_kkt(instance, plan, params);
}

double ccg_gap(double upper, double lower) {
  if (upper < 1e-9) return upper - lower;
  return (upper - lower) / upper;
}

bool gap_closed(double upper, double lower, double eps) {
  if (upper < 1e-9) return upper - lower <= 1e-9;
  return (upper - lower) / upper <= eps;
}

CcgResult run_ccg(const ProblemInstance& instance, const CcgOptions& options) {
  if (!(options.eps > 0.0)) throw InvalidInput("eps must be positive");
  instance.validate();
  const auto start = Clock::now();
  CcgResult result;
  CcgState& st = result.state;
  st.eps = options.eps;
  bool have_incumbent = false;
  milp::SolveParams master_params = options.master_params;
  milp::SolveParams sub_params = options.subproblem_params;

  while (st.iteration < options.max_iterations) {
    if (options.time_limit && seconds_since(start) > *options.time_limit) break;
    CcgIteration it;
    it.iteration = st.iteration + 1;

    const MasterSolution master = solve_master(
        instance, st.pool, master_params, options.integer_procurement);
    st.lower_bound = std::max(st.lower_bound, master.lower_bound);
    it.master_seconds = master.seconds;

    const SubproblemSolution sub = solve_subproblem(
        options.oracle, instance, master.plan, sub_params);
    it.subproblem_seconds = sub.seconds;
    result.degraded = result.degraded || sub.degraded;
    const double candidate = provisioning_cost(instance, master.plan) +
                             sub.bound;
    if (!have_incumbent || candidate < st.upper_bound) {
      st.upper_bound = candidate;
      result.plan = master.plan;
      have_incumbent = true;
    }
    ++st.iteration;

    const bool repeated =
        std::find(st.pool_vertices.begin(), st.pool_vertices.end(),
                  sub.vertex) != st.pool_vertices.end();
    it.lower_bound = st.lower_bound;
    it.upper_bound = st.upper_bound;
    it.gap = ccg_gap(st.upper_bound, st.lower_bound);
    it.repeated_vertex = repeated;
    st.trace.push_back(it);

    if (gap_closed(st.upper_bound, st.lower_bound, options.eps)) {
      result.converged = true;
      result.repeated_vertex = repeated;
      break;
    }
    if (repeated) {
      // The master already prices this scenario, so LB >= UB up to the MIP
      // gaps. Tighten them and retry; at the floor, stop.
      constexpr double kGapFloor = 1e-9;
      if (master_params.mip_gap <= kGapFloor &&
          sub_params.mip_gap <= kGapFloor) {
        result.repeated_vertex = true;
        break;
      }
      const double target = std::min(options.eps, 1e-3) / 10.0;
      master_params.mip_gap =
          std::max(kGapFloor, std::min(master_params.mip_gap / 10.0, target));
      sub_params.mip_gap =
          std::max(kGapFloor, std::min(sub_params.mip_gap / 10.0, target));
      continue;
    }
    st.pool.push_back(sub.worst);
    st.pool_vertices.push_back(sub.vertex);
  }
  result.objective = st.upper_bound;
  return result;
}

ExtensiveSolution solve_extensive_form(const ProblemInstance& instance,
                                       const milp::SolveParams& params,
                                       std::size_t vertex_cap,
                                       bool integer_procurement) {
  instance.validate();
  const auto vertices =
      enumerate_vertices(instance.uncertainty, instance.num_areas,
                         instance.num_nodes, vertex_cap);
  milp::Model m;
  const FirstStageVars fs = add_first_stage(m, instance, integer_procurement);
  const VarId eta = m.add_continuous(0.0, milp::kInf, "eta");
  for (const Vertex& v : vertices) {
    const RecourseBlock b =
        add_recourse_block(m, instance, fs, scenario_from_vertex(instance, v));
    m.add_ge(LinExpr(eta) - b.cost, 0.0);
  }
  m.set_objective(fs.cost + LinExpr(eta), ObjSense::kMinimize);
  const SolveResult r = milp::solve(m, params);
  require_solution(r, "extensive form");
  ExtensiveSolution out;
  out.plan = read_plan(fs, r);
  out.objective = r.objective;
  out.lower_bound = std::min(r.bound, r.objective);
  out.num_vertices = vertices.size();
  out.seconds = r.seconds;
  return out;
}

std::string trace_to_csv(const std::vector<CcgIteration>& trace) {
  std::ostringstream os;
  os.precision(12);
  os << "iteration,LB,UB,gap,master_seconds,subproblem_seconds\n";
  for (const CcgIteration& it : trace) {
    os << it.iteration << ',' << it.lower_bound << ',' << it.upper_bound << ','
       << it.gap << ',' << it.master_seconds << ',' << it.subproblem_seconds
       << '\n';
  }
  return os.str();
}

}  // namespace edgearo
