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

#include "edgearo/milp.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <unordered_map>

#include "Highs.h"
#include "edgearo/errors.hpp"

namespace edgearo::milp {

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const Term& t : other.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (Term& t : terms_) t.coef *= s;
  constant_ *= s;
  return *this;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double s, LinExpr e) { return e *= s; }

VarId Model::add_variable(VarKind kind, double lower, double upper,
                          std::string name) {
  if (lower > upper) {
    throw InvalidInput("variable '" + name + "' has lower > upper");
  }
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  vars_.push_back({kind, lower, upper, std::move(name)});
  return VarId{static_cast<int>(vars_.size()) - 1};
}

std::vector<Term> Model::merge(const LinExpr& expr) const {
  std::vector<Term> out;
  out.reserve(expr.terms().size());
  std::unordered_map<int, std::size_t> slot;
  for (const Term& t : expr.terms()) {
    if (t.var.index < 0 || t.var.index >= num_variables()) {
      throw InvalidInput("expression references an undeclared variable");
    }
    auto [it, inserted] = slot.try_emplace(t.var.index, out.size());
    if (inserted) {
      out.push_back(t);
    } else {
      out[it->second].coef += t.coef;
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

RowId Model::add_constraint(const LinExpr& expr, RowSense sense, double rhs,
                            std::string name) {
  rows_.push_back({merge(expr), sense, rhs - expr.constant(), std::move(name)});
  return RowId{static_cast<int>(rows_.size()) - 1};
}

void Model::set_objective(const LinExpr& expr, ObjSense sense) {
  obj_terms_ = merge(expr);
  obj_constant_ = expr.constant();
  obj_sense_ = sense;
}

void Model::set_bounds(VarId v, double lower, double upper) {
  if (lower > upper) throw InvalidInput("set_bounds: lower > upper");
  vars_.at(v.index).lower = lower;
  vars_.at(v.index).upper = upper;
}

bool Model::is_mip() const {
  return std::any_of(vars_.begin(), vars_.end(), [](const Variable& v) {
    return v.kind != VarKind::kContinuous;
  });
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimitHit: return "limit-hit";
    case SolveStatus::kBackendError: return "backend-error";
  }
  return "unknown";
}

namespace {

std::mutex& solve_mutex() {
  static std::mutex m;
  return m;
}

int thread_cap() {
  if (const char* env = std::getenv("EDGEARO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

double to_highs_bound(double b) {
  if (b >= kInf) return kHighsInf;
  if (b <= -kInf) return -kHighsInf;
  return b;
}

std::string sanitize(const std::string& name, const char prefix, int index) {
  std::string out(1, prefix);
  out += std::to_string(index);
  if (!name.empty()) {
    out += '_';
    for (char c : name) {
      out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    }
  }
  return out;
}

HighsLp to_highs(const Model& model, bool with_names) {
  HighsLp lp;
  const int n = model.num_variables();
  const int m = model.num_constraints();
  lp.num_col_ = n;
  lp.num_row_ = m;
  lp.sense_ = model.objective_sense() == ObjSense::kMinimize
                  ? ::ObjSense::kMinimize
                  : ::ObjSense::kMaximize;
  lp.offset_ = model.objective_constant();
  lp.col_cost_.assign(n, 0.0);
  for (const Term& t : model.objective_terms()) {
    lp.col_cost_[t.var.index] += t.coef;
  }
  lp.col_lower_.resize(n);
  lp.col_upper_.resize(n);
  bool mip = false;
  lp.integrality_.resize(n, HighsVarType::kContinuous);
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    lp.col_lower_[j] = to_highs_bound(v.lower);
    lp.col_upper_[j] = to_highs_bound(v.upper);
    if (v.kind != VarKind::kContinuous) {
      lp.integrality_[j] = HighsVarType::kInteger;
      mip = true;
    }
  }
  if (!mip) lp.integrality_.clear();

  // Row-wise build, then let HiGHS hold it row-wise.
  lp.row_lower_.resize(m);
  lp.row_upper_.resize(m);
  lp.a_matrix_.format_ = MatrixFormat::kRowwise;
  lp.a_matrix_.num_col_ = n;
  lp.a_matrix_.num_row_ = m;
  lp.a_matrix_.start_.assign(1, 0);
  for (int r = 0; r < m; ++r) {
    const Row& row = model.rows()[r];
    switch (row.sense) {
      case RowSense::kLessEqual:
        lp.row_lower_[r] = -kHighsInf;
        lp.row_upper_[r] = row.rhs;
        break;
      case RowSense::kGreaterEqual:
        lp.row_lower_[r] = row.rhs;
        lp.row_upper_[r] = kHighsInf;
        break;
      case RowSense::kEqual:
        lp.row_lower_[r] = row.rhs;
        lp.row_upper_[r] = row.rhs;
        break;
    }
    for (const Term& t : row.terms) {
      lp.a_matrix_.index_.push_back(t.var.index);
      lp.a_matrix_.value_.push_back(t.coef);
    }
    lp.a_matrix_.start_.push_back(
        static_cast<HighsInt>(lp.a_matrix_.index_.size()));
  }
  if (with_names) {
    for (int j = 0; j < n; ++j) {
      lp.col_names_.push_back(sanitize(model.variables()[j].name, 'x', j));
    }
    for (int r = 0; r < m; ++r) {
      lp.row_names_.push_back(sanitize(model.rows()[r].name, 'c', r));
    }
  }
  return lp;
}

void configure(Highs& highs, const SolveParams& params) {
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("threads", thread_cap());
  highs.setOptionValue("random_seed", 0);
  highs.setOptionValue("mip_rel_gap", params.mip_gap);
  highs.setOptionValue("mip_abs_gap", 1e-9);
  if (params.time_limit) highs.setOptionValue("time_limit", *params.time_limit);
}

}  // namespace

std::string backend_name() {
  if (const char* env = std::getenv("EDGEARO_BACKEND")) {
    std::string name(env);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (!name.empty() && name != "highs") {
      throw BackendError("backend '" + name + "' is not compiled in");
    }
  }
  return "highs";
}

SolveResult solve(const Model& model, const SolveParams& params) {
  backend_name();
  const auto start = std::chrono::steady_clock::now();
  SolveResult result;

  std::lock_guard<std::mutex> lock(solve_mutex());
  Highs highs;
  configure(highs, params);
  const bool mip = model.is_mip();
  if (highs.passModel(to_highs(model, false)) == HighsStatus::kError) {
    result.status = SolveStatus::kBackendError;
    result.message = "passModel failed";
    return result;
  }
  HighsStatus run_status = highs.run();
  HighsModelStatus ms = highs.getModelStatus();
  if (ms == HighsModelStatus::kUnboundedOrInfeasible) {
    // Presolve cannot tell them apart; the simplex can.
    highs.setOptionValue("presolve", "off");
    run_status = highs.run();
    ms = highs.getModelStatus();
  }
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  if (run_status == HighsStatus::kError) {
    result.status = SolveStatus::kBackendError;
    result.message = "HiGHS run error: " + highs.modelStatusToString(ms);
    return result;
  }

  switch (ms) {
    case HighsModelStatus::kOptimal:
      result.status = SolveStatus::kOptimal;
      break;
    case HighsModelStatus::kInfeasible:
      result.status = SolveStatus::kInfeasible;
      break;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible:
      result.status = SolveStatus::kUnbounded;
      break;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt:
    case HighsModelStatus::kObjectiveBound:
    case HighsModelStatus::kObjectiveTarget:
      result.status = SolveStatus::kLimitHit;
      break;
    default:
      result.status = SolveStatus::kBackendError;
      result.message = "HiGHS status: " + highs.modelStatusToString(ms);
      return result;
  }

  const HighsInfo& info = highs.getInfo();
  const HighsSolution& sol = highs.getSolution();
  result.has_solution =
      info.primal_solution_status == kSolutionStatusFeasible &&
      sol.value_valid;
  if (result.has_solution) {
    result.primal = sol.col_value;
    result.objective = info.objective_function_value;
  }
  if (mip) {
    result.bound = info.mip_dual_bound;
    if (result.status == SolveStatus::kOptimal && !std::isfinite(result.bound)) {
      result.bound = result.objective;
    }
  } else {
    result.bound = result.objective;
    if (result.status == SolveStatus::kOptimal && sol.dual_valid) {
      result.row_duals = sol.row_dual;
      result.reduced_costs = sol.col_dual;
    }
  }
  if (result.status == SolveStatus::kOptimal && !result.has_solution) {
    result.status = SolveStatus::kBackendError;
    result.message = "optimal status without a primal solution";
  }
  return result;
}

std::vector<double> extract_duals(const Model& model,
                                  const SolveResult& result) {
  if (model.is_mip()) {
    throw InvalidInput("extract_duals: model has integer variables");
  }
  if (!result.optimal() || !result.row_duals) {
    throw InvalidInput("extract_duals: result is not an optimal LP solve");
  }
  return *result.row_duals;
}

double dual_objective(const Model& model, const SolveResult& result) {
  const auto duals = extract_duals(model, result);
  double value = model.objective_constant();
  for (int r = 0; r < model.num_constraints(); ++r) {
    value += model.rows()[r].rhs * duals[r];
  }
  // Reduced costs price the active variable bounds.
  const auto& rc = *result.reduced_costs;
  for (int j = 0; j < model.num_variables(); ++j) {
    const Variable& v = model.variables()[j];
    if (rc[j] == 0.0) continue;
    const double x = result.primal[j];
    const bool at_lower = std::abs(x - v.lower) <= std::abs(x - v.upper);
    value += rc[j] * (at_lower ? v.lower : v.upper);
  }
  return value;
}

void write_lp(const Model& model, const std::filesystem::path& path) {
  std::lock_guard<std::mutex> lock(solve_mutex());
  Highs highs;
  highs.setOptionValue("output_flag", false);
  if (highs.passModel(to_highs(model, true)) == HighsStatus::kError) {
    throw BackendError("write_lp: passModel failed");
  }
  auto target = path;
  if (target.extension() != ".lp") target += ".lp";
  if (highs.writeModel(target.string()) == HighsStatus::kError) {
    throw BackendError("write_lp: cannot write " + target.string());
  }
}

}  // namespace edgearo::milp
