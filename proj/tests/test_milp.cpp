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

#include <gtest/gtest.h>

namespace edgearo::milp {
namespace {

TEST(Milp, LpDualIsObjectiveSensitivityWhenMinimizing) {
  Model m;
  const VarId x = m.add_continuous();
  m.add_ge(x, 3.0);
  m.set_objective(2.0 * LinExpr(x), ObjSense::kMinimize);
  const auto r = solve(m);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.objective, 6.0, 1e-9);
  EXPECT_NEAR(extract_duals(m, r)[0], 2.0, 1e-9);
  EXPECT_NEAR(dual_objective(m, r), 6.0, 1e-9);
}

TEST(Milp, LpDualIsObjectiveSensitivityWhenMaximizing) {
  Model m;
  const VarId x = m.add_continuous();
  const VarId y = m.add_continuous();
  m.add_le(LinExpr(x) + LinExpr(y), 4.0);
  m.add_le(x, 3.0);
  m.set_objective(3.0 * LinExpr(x) + LinExpr(y), ObjSense::kMaximize);
  const auto r = solve(m);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.objective, 10.0, 1e-9);
  const auto d = extract_duals(m, r);
  EXPECT_NEAR(d[0], 1.0, 1e-9);
  EXPECT_NEAR(d[1], 2.0, 1e-9);
  EXPECT_NEAR(dual_objective(m, r), 10.0, 1e-9);
}

TEST(Milp, ReducedCostPricesActiveBound) {
  Model m;
  const VarId x = m.add_continuous(1.0, 5.0);
  m.set_objective(LinExpr(x, 4.0) + LinExpr(7.0), ObjSense::kMinimize);
  const auto r = solve(m);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.objective, 11.0, 1e-9);
  EXPECT_NEAR(dual_objective(m, r), 11.0, 1e-9);
}

TEST(Milp, KnapsackMatchesEnumeration) {
  const double w[] = {3, 4, 5, 6};
  const double v[] = {4, 5, 7, 8};
  Model m;
  LinExpr weight, value;
  for (int k = 0; k < 4; ++k) {
    const VarId b = m.add_binary();
    weight.add(b, w[k]);
    value.add(b, v[k]);
  }
  m.add_le(weight, 10.0);
  m.set_objective(value, ObjSense::kMaximize);
  const auto r = solve(m);
  ASSERT_TRUE(r.optimal());
  double best = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    double tw = 0.0, tv = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (mask >> k & 1) tw += w[k], tv += v[k];
    }
    if (tw <= 10.0) best = std::max(best, tv);
  }
  EXPECT_NEAR(r.objective, best, 1e-9);
  EXPECT_NEAR(r.bound, best, 1e-6);
}

TEST(Milp, IntegerRoundsDownUnderFractionalCap) {
  Model m;
  const VarId x = m.add_integer(0.0, kInf);
  m.add_le(x, 2.5);
  m.set_objective(x, ObjSense::kMaximize);
  const auto r = solve(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.primal[x.index], 2.0, 1e-9);
  EXPECT_NEAR(r.objective, 2.0, 1e-9);
  EXPECT_TRUE(m.is_mip());
}

TEST(Milp, DetectsInfeasible) {
  Model m;
  const VarId x = m.add_continuous(0.0, 1.0);
  m.add_ge(x, 2.0);
  EXPECT_EQ(solve(m).status, SolveStatus::kInfeasible);
}

TEST(Milp, DetectsUnbounded) {
  Model m;
  const VarId x = m.add_continuous();
  m.set_objective(x, ObjSense::kMaximize);
  EXPECT_EQ(solve(m).status, SolveStatus::kUnbounded);
}

}  // namespace
}  // namespace edgearo::milp
