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

#include "edgearo/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "edgearo/errors.hpp"
#include "edgearo/sampling.hpp"

namespace edgearo {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

int as_count(double value, std::size_t upper, const char* what) {
  const double r = std::round(value);
  if (!std::isfinite(value) || std::abs(value - r) > 1e-9 || r < 0 ||
      r > static_cast<double>(upper)) {
    std::ostringstream os;
    os << what << " must be an integer in [0, " << upper << "], got "
       << value;
    throw InvalidInput(os.str());
  }
  return static_cast<int>(r);
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

DemandDistribution parse_distribution(const std::string& name) {
  if (name == "lognormal") return DemandDistribution::kLognormal;
  if (name == "normal") return DemandDistribution::kNormal;
  if (name == "uniform") return DemandDistribution::kUniform;
  throw InvalidInput("unknown distribution '" + name +
                     "' (lognormal, normal, uniform)");
}

const char* to_string(DemandDistribution d) {
  switch (d) {
    case DemandDistribution::kLognormal: return "lognormal";
    case DemandDistribution::kNormal: return "normal";
    case DemandDistribution::kUniform: return "uniform";
  }
  return "?";
}

std::vector<Scenario> generate_test_scenarios(const ProblemInstance& instance,
                                              const EvaluationConfig& config) {
  instance.validate();
  const std::size_t I = instance.num_areas;
  const std::size_t J = instance.num_nodes;
  const int k = config.k_test < 0 ? instance.uncertainty.failure_budget
                                  : config.k_test;
  if (static_cast<std::size_t>(k) > J) {
    throw InvalidInput("k_test exceeds the number of nodes");
  }
  if (!(config.lognormal_sigma > 0) || !(config.normal_sd_ratio > 0)) {
    throw InvalidInput("distribution spread must be positive");
  }

  Rng rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Scenario> out;
  out.reserve(config.num_scenarios);
  for (std::size_t n = 0; n < config.num_scenarios; ++n) {
    Scenario s;
    s.demand.resize(I);
    for (std::size_t i = 0; i < I; ++i) {
      const double lo = instance.nominal_demand[i];
      const double dev = instance.deviation[i];
      if (dev <= 0.0) {
        s.demand[i] = lo;
        continue;
      }
      const double hi = lo + dev;
      switch (config.distribution) {
        case DemandDistribution::kLognormal:
          s.demand[i] = truncated_lognormal(lo + dev / 2.0,
                                            config.lognormal_sigma, lo, hi,
                                            rng);
          break;
        case DemandDistribution::kNormal:
          s.demand[i] = truncated_normal(lo + dev / 2.0,
                                         config.normal_sd_ratio * dev, lo,
                                         hi, rng);
          break;
        case DemandDistribution::kUniform:
          s.demand[i] = lo + dev * unit(rng);
          break;
      }
    }
    s.failed = sample_failures(J, k, rng);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

template <typename Recourse>
EvaluationReport replay(const ProblemInstance& instance,
                        const FirstStagePlan& plan,
                        const std::vector<Scenario>& scenarios, double psi,
                        Recourse&& recourse) {
  if (scenarios.empty()) throw InvalidInput("no evaluation scenarios");
  if (!(psi > 0) || !std::isfinite(psi)) {
    throw InvalidInput("penalty scale must be positive");
  }
  if (!is_feasible_plan(instance, plan, false)) {
    throw InvalidInput("plan is infeasible for this instance");
  }
  EvaluationReport report;
  report.provisioning = provisioning_cost(instance, plan);
  report.scenario_costs.reserve(scenarios.size());
  report.unmet_totals.reserve(scenarios.size());
  for (const Scenario& s : scenarios) {
    if (s.demand.size() != instance.num_areas ||
        s.failed.size() != instance.num_nodes) {
      throw InvalidInput("scenario dimensions do not match the instance");
    }
    const RecourseOutcome r = recourse(s);
    report.scenario_costs.push_back(report.provisioning + r.cost);
    report.unmet_totals.push_back(
        std::accumulate(r.unmet.begin(), r.unmet.end(), 0.0));
  }
  const double n = static_cast<double>(scenarios.size());
  report.average = std::accumulate(report.scenario_costs.begin(),
                                   report.scenario_costs.end(), 0.0) / n;
  report.worst = *std::max_element(report.scenario_costs.begin(),
                                   report.scenario_costs.end());
  report.average_unmet = std::accumulate(report.unmet_totals.begin(),
                                         report.unmet_totals.end(), 0.0) / n;
  return report;
}

}  // namespace

EvaluationReport monte_carlo(const ProblemInstance& instance,
                             const FirstStagePlan& plan,
                             const std::vector<Scenario>& scenarios,
                             double psi) {
  return replay(instance, plan, scenarios, psi, [&](const Scenario& s) {
    return solve_recourse(instance, plan, s, psi);
  });
}

EvaluationReport monte_carlo_policy(const ProblemInstance& instance,
                                    const FirstStagePlan& plan,
                                    const AffinePolicy& policy,
                                    const std::vector<Scenario>& scenarios,
                                    double psi) {
  if (policy.num_areas != instance.num_areas ||
      policy.num_nodes != instance.num_nodes) {
    throw InvalidInput("policy shape does not match the instance");
  }
  const ProblemInstance scaled =
      psi == 1.0 ? instance : scale_penalties(instance, psi);
  return replay(instance, plan, scenarios, psi, [&](const Scenario& s) {
    return evaluate_policy(scaled, policy, s);
  });
}

double certify_worst_case(const ProblemInstance& instance,
                          const FirstStagePlan& plan,
                          const milp::SolveParams& params) {
  const SubproblemSolution sub =
      solve_subproblem_duality(instance, plan, params);
  return provisioning_cost(instance, plan) + sub.bound;
}

ProblemInstance scale_penalties(const ProblemInstance& instance, double psi) {
  if (!(psi > 0) || !std::isfinite(psi)) {
    throw InvalidInput("penalty scale must be positive");
  }
  ProblemInstance out = instance;
  for (double& p : out.unmet_penalty) p *= psi;
  return out;
}

// ---- methods ----------------------------------------------------------------

Method parse_method(const std::string& name) {
  if (name == "ccg-duality") return Method::kCcgDuality;
  if (name == "ccg-kkt") return Method::kCcgKkt;
  if (name == "adr") return Method::kAdr;
  if (name == "extensive") return Method::kExtensive;
  if (name == "det") return Method::kDet;
  if (name == "so") return Method::kSo;
  if (name == "heu") return Method::kHeu;
  throw InvalidInput("unknown method '" + name + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::kCcgDuality: return "ccg-duality";
    case Method::kCcgKkt: return "ccg-kkt";
    case Method::kAdr: return "adr";
    case Method::kExtensive: return "extensive";
    case Method::kDet: return "det";
    case Method::kSo: return "so";
    case Method::kHeu: return "heu";
  }
  return "?";
}

MethodOutcome solve_with_method(const ProblemInstance& instance, Method method,
                                const MethodOptions& options) {
  instance.validate();
  const auto start = std::chrono::steady_clock::now();
  milp::SolveParams params = options.params;
  if (options.time_limit && !params.time_limit) {
    params.time_limit = options.time_limit;
  }

  MethodOutcome out;
  out.method = method;
  switch (method) {
    case Method::kCcgDuality:
    case Method::kCcgKkt: {
      CcgOptions ccg;
      ccg.oracle = method == Method::kCcgKkt ? SubproblemOracle::kKkt
                                             : SubproblemOracle::kDuality;
      ccg.eps = options.eps;
      ccg.max_iterations = options.max_iterations;
      ccg.master_params = options.params;
      ccg.subproblem_params = options.params;
      ccg.integer_procurement = options.integer_procurement;
      ccg.time_limit = options.time_limit;
      CcgResult r = run_ccg(instance, ccg);
      out.plan = r.plan;
      out.objective = r.objective;
      out.converged = r.converged;
      out.ccg = std::move(r);
      break;
    }
    case Method::kAdr: {
      AdrOptions adr;
      adr.integer_procurement = options.integer_procurement;
      AdrSolution r = solve_adr(instance, params, adr);
      out.plan = r.plan;
      out.objective = r.objective;
      out.converged = !r.limit_hit;
      out.policy = std::move(r.policy);
      break;
    }
    case Method::kExtensive: {
      const ExtensiveSolution r = solve_extensive_form(
          instance, params, options.vertex_cap, options.integer_procurement);
      out.plan = r.plan;
      out.objective = r.objective;
      break;
    }
    case Method::kDet: {
      const PlanSolution r =
          solve_deterministic(instance, params, options.integer_procurement);
      out.plan = r.plan;
      out.objective = r.objective;
      out.converged = !r.limit_hit;
      break;
    }
    case Method::kSo: {
      const ScenarioSet training =
          generate_training_scenarios(instance, options.training);
      const PlanSolution r =
          solve_stochastic(instance, training, params, kDefaultScenarioCap,
                           options.integer_procurement);
      out.plan = r.plan;
      out.objective = r.objective;
      out.converged = !r.limit_hit;
      break;
    }
    case Method::kHeu: {
      out.plan = heuristic_placement(instance);
      out.objective = provisioning_cost(instance, out.plan);
      break;
    }
  }
  out.seconds = elapsed_since(start);
  return out;
}

// ---- sweeps -----------------------------------------------------------------

SweepAxis parse_axis(const std::string& name) {
  if (name == "K") return SweepAxis::kK;
  if (name == "Gamma" || name == "gamma") return SweepAxis::kGamma;
  if (name == "beta") return SweepAxis::kBeta;
  if (name == "Psi" || name == "psi") return SweepAxis::kPsi;
  if (name == "alpha") return SweepAxis::kAlpha;
  if (name == "B") return SweepAxis::kBudget;
  if (name == "Dmax") return SweepAxis::kDmax;
  if (name == "I") return SweepAxis::kI;
  if (name == "J") return SweepAxis::kJ;
  throw InvalidInput("unknown sweep axis '" + name +
                     "' (K, Gamma, beta, Psi, alpha, B, Dmax, I, J)");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kK: return "K";
    case SweepAxis::kGamma: return "Gamma";
    case SweepAxis::kBeta: return "beta";
    case SweepAxis::kPsi: return "Psi";
    case SweepAxis::kAlpha: return "alpha";
    case SweepAxis::kBudget: return "B";
    case SweepAxis::kDmax: return "Dmax";
    case SweepAxis::kI: return "I";
    case SweepAxis::kJ: return "J";
  }
  return "?";
}

ProblemInstance apply_axis(const ProblemInstance& base, SweepAxis axis,
                           double value, bool psi_in_planning) {
  ProblemInstance out = base;
  switch (axis) {
    case SweepAxis::kK:
      out.uncertainty.failure_budget = as_count(value, base.num_nodes, "K");
      break;
    case SweepAxis::kGamma:
      out.uncertainty.gamma = as_count(value, base.num_areas, "Gamma");
      break;
    case SweepAxis::kBeta:
      out.beta = value;
      break;
    case SweepAxis::kPsi:
      if (psi_in_planning) out = scale_penalties(base, value);
      break;
    case SweepAxis::kAlpha:
      for (std::size_t i = 0; i < base.num_areas; ++i) {
        out.deviation[i] = value * base.nominal_demand[i];
      }
      break;
    case SweepAxis::kBudget:
      out.budget = value;
      break;
    case SweepAxis::kDmax:
      apply_max_delay(out, value);
      break;
    case SweepAxis::kI: {
      const int n = as_count(value, base.num_areas, "I");
      if (n == 0) throw InvalidInput("I must be positive");
      std::vector<std::size_t> areas(n), nodes(base.num_nodes);
      std::iota(areas.begin(), areas.end(), std::size_t{0});
      std::iota(nodes.begin(), nodes.end(), std::size_t{0});
      out = subset_instance(base, areas, nodes);
      break;
    }
    case SweepAxis::kJ: {
      const int n = as_count(value, base.num_nodes, "J");
      if (n == 0) throw InvalidInput("J must be positive");
      std::vector<std::size_t> areas(base.num_areas), nodes(n);
      std::iota(areas.begin(), areas.end(), std::size_t{0});
      std::iota(nodes.begin(), nodes.end(), std::size_t{0});
      out = subset_instance(base, areas, nodes);
      break;
    }
  }
  out.validate();
  return out;
}

std::vector<SweepRow> sensitivity_sweep(const ProblemInstance& base,
                                        SweepAxis axis,
                                        const std::vector<double>& values,
                                        const std::vector<Method>& methods,
                                        const SweepOptions& options) {
  if (values.empty()) throw InvalidInput("sweep needs at least one value");
  if (methods.empty()) throw InvalidInput("sweep needs at least one method");
  base.validate();

  // Cells run one after another: every solve goes through the backend's
  // process-wide lock, so worker threads would only queue on it.
  std::vector<SweepRow> rows;
  for (double value : values) {
    for (Method method : methods) {
      SweepRow row;
      row.value = value;
      row.method = method;
      const auto start = std::chrono::steady_clock::now();
      try {
        const ProblemInstance inst =
            apply_axis(base, axis, value, options.psi_in_planning);
        double eval_psi = options.evaluation.psi;
        if (axis == SweepAxis::kPsi) {
          eval_psi = options.psi_in_planning ? 1.0 : value;
        }
        const MethodOutcome planned =
            solve_with_method(inst, method, options.method);
        row.objective = planned.objective;
        row.provisioning = provisioning_cost(inst, planned.plan);
        if (options.evaluation.num_scenarios > 0) {
          const auto scenarios =
              generate_test_scenarios(inst, options.evaluation);
          const EvaluationReport rep =
              monte_carlo(inst, planned.plan, scenarios, eval_psi);
          row.average = rep.average;
          row.worst = rep.worst;
        }
        if (options.certify) {
          const ProblemInstance judged =
              eval_psi == 1.0 ? inst : scale_penalties(inst, eval_psi);
          row.certified_worst = certify_worst_case(judged, planned.plan);
        }
        if (!planned.converged) row.status = "not converged";
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      row.seconds = elapsed_since(start);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string sweep_to_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "axis,value,method,status,objective,provisioning,average,worst,"
        "certified_worst,seconds\n";
  for (const SweepRow& r : rows) {
    os << to_string(axis) << ',' << csv_number(r.value) << ','
       << to_string(r.method) << ',' << csv_quote(r.status) << ','
       << csv_number(r.objective) << ',' << csv_number(r.provisioning) << ','
       << csv_number(r.average) << ',' << csv_number(r.worst) << ','
       << csv_number(r.certified_worst) << ',' << csv_number(r.seconds)
       << '\n';
  }
  return os.str();
}

std::string scenarios_to_csv(const EvaluationReport& report) {
  std::ostringstream os;
  os << "scenario,cost,unmet\n";
  for (std::size_t n = 0; n < report.scenario_costs.size(); ++n) {
    os << n << ',' << csv_number(report.scenario_costs[n]) << ','
       << csv_number(report.unmet_totals[n]) << '\n';
  }
  return os.str();
}

Json report_summary(const EvaluationReport& report) {
  Json doc;
  doc["method"] = report.method;
  doc["avg"] = json_number(report.average);
  doc["worst"] = json_number(report.worst);
  doc["certified_worst"] = json_number(report.certified_worst);
  doc["provisioning"] = json_number(report.provisioning);
  doc["avg_unmet"] = json_number(report.average_unmet);
  doc["num_scenarios"] = report.scenario_costs.size();
  return doc;
}

}  // namespace edgearo
