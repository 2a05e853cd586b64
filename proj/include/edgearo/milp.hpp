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

// Backend-agnostic model builder for linear and mixed-integer programs.
//
// Solver modules only see Model / SolveResult. The compiled-in backend is
// HiGHS; EDGEARO_BACKEND selects it by name ("highs") and EDGEARO_THREADS caps
// solver threads (default 1). The adapter is not treated as re-entrant: solves
// are serialized by a process-wide lock, so distinct models may be built and
// solved from different threads.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace edgearo::milp {

enum class VarKind { kContinuous, kInteger, kBinary };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class ObjSense { kMinimize, kMaximize };

inline constexpr double kInf = 1e30;

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

struct RowId {
  int index = -1;
  friend bool operator==(RowId, RowId) = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

/// Sparse affine expression sum coef * var + constant. Duplicate variables are
/// merged when the expression is handed to a Model.
class LinExpr {
 public:
  LinExpr() = default;
  LinExpr(double constant) : constant_(constant) {}  // NOLINT
  LinExpr(VarId v, double coef = 1.0) { terms_.push_back({v, coef}); }  // NOLINT

  LinExpr& add(VarId v, double coef) {
    if (coef != 0.0) terms_.push_back({v, coef});
    return *this;
  }
  LinExpr& add(double c) {
    constant_ += c;
    return *this;
  }
  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(double s);

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double s, LinExpr e);

struct Variable {
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;
  std::string name;
};

struct Row {
  std::vector<Term> terms;  // merged, no duplicates
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

class Model {
 public:
  VarId add_variable(VarKind kind, double lower, double upper,
                     std::string name = {});
  VarId add_continuous(double lower = 0.0, double upper = kInf,
                       std::string name = {}) {
    return add_variable(VarKind::kContinuous, lower, upper, std::move(name));
  }
  VarId add_binary(std::string name = {}) {
    return add_variable(VarKind::kBinary, 0.0, 1.0, std::move(name));
  }
  VarId add_integer(double lower, double upper, std::string name = {}) {
    return add_variable(VarKind::kInteger, lower, upper, std::move(name));
  }

  /// Adds `expr (sense) rhs`; the expression's constant moves to the rhs.
  RowId add_constraint(const LinExpr& expr, RowSense sense, double rhs,
                       std::string name = {});
  RowId add_le(const LinExpr& expr, double rhs, std::string name = {}) {
    return add_constraint(expr, RowSense::kLessEqual, rhs, std::move(name));
  }
  RowId add_ge(const LinExpr& expr, double rhs, std::string name = {}) {
    return add_constraint(expr, RowSense::kGreaterEqual, rhs, std::move(name));
  }
  RowId add_eq(const LinExpr& expr, double rhs, std::string name = {}) {
    return add_constraint(expr, RowSense::kEqual, rhs, std::move(name));
  }

  void set_objective(const LinExpr& expr, ObjSense sense);
  void set_bounds(VarId v, double lower, double upper);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  bool is_mip() const;

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Term>& objective_terms() const { return obj_terms_; }
  double objective_constant() const { return obj_constant_; }
  ObjSense objective_sense() const { return obj_sense_; }

 private:
  std::vector<Term> merge(const LinExpr& expr) const;

  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<Term> obj_terms_;
  double obj_constant_ = 0.0;
  ObjSense obj_sense_ = ObjSense::kMinimize;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimitHit,
                         kBackendError };

const char* to_string(SolveStatus status);

struct SolveParams {
  double mip_gap = 1e-6;                // relative
  std::optional<double> time_limit;     // seconds; none = unlimited
};

struct SolveResult {
  SolveStatus status = SolveStatus::kBackendError;
  /// Objective of the returned primal point (including the constant).
  double objective = 0.0;
  /// Best proven bound: lower bound when minimizing, upper when maximizing.
  /// Equals `objective` for LPs.
  double bound = 0.0;
  bool has_solution = false;
  std::vector<double> primal;
  /// Row duals and reduced costs, LP only, as d(objective)/d(rhs) and
  /// d(objective)/d(bound).
  std::optional<std::vector<double>> row_duals;
  std::optional<std::vector<double>> reduced_costs;
  double seconds = 0.0;
  std::string message;

  double value(VarId v) const { return primal.at(v.index); }
  bool optimal() const { return status == SolveStatus::kOptimal; }
};

SolveResult solve(const Model& model, const SolveParams& params = {});

/// Row duals of an optimally solved pure LP. Throws InvalidInput for models
/// with integer variables or non-optimal results.
std::vector<double> extract_duals(const Model& model,
                                  const SolveResult& result);

/// Dual objective sum rhs_r y_r + sum bound_v * reduced_cost_v (+ constant),
/// used to check strong duality.
double dual_objective(const Model& model, const SolveResult& result);

/// Writes the model in CPLEX LP text format.
void write_lp(const Model& model, const std::filesystem::path& path);

/// Name of the compiled-in backend after applying EDGEARO_BACKEND.
std::string backend_name();

}  // namespace edgearo::milp
