// Copyright 2026 The ccp-alsox Authors
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


#include "ccp/oracle.hpp"

#include <gtest/gtest.h>

#include "ccp/covering.hpp"
#include "ccp/errors.hpp"
#include "test_util.hpp"

namespace ccp {
namespace {

using testing::load;

TEST(Nullspace, ViolatedWithSteeperCost) {
  CcpInstance inst = load("ex34.json");
  inst.cost = {1.0, 2.0};
  const NullspaceVerdict v = check_nullspace_property(inst);
  ASSERT_TRUE(std::holds_alternative<NullspaceViolated>(v));
  EXPECT_GE(std::get<NullspaceViolated>(v).witness.ratio, 0.5 - 1e-9);
}

TEST(Nullspace, BudgetCap) {
  const CcpInstance inst = load("ex34.json");
  EXPECT_TRUE(std::holds_alternative<NullspaceCapExceeded>(check_nullspace_property(inst, 1)));
}

TEST(Oracle, CapExceeded) {
  const CcpInstance inst = covering_tight_family(40, 0.25);
  try {
    exact_solve(inst, 1000);
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapExceeded);
  }
}

TEST(Oracle, InfeasibleInstance) {
  CcpInstance inst = load("exB1.json");
  inst.x_set = make_box({0.0}, {0.5});
  try {
    exact_solve(inst);
    FAIL() << "expected Infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(Oracle, KeptSetIsAdmissible) {
  const CcpInstance inst = load("ex33.json");
  const OracleResult r = exact_solve(inst);
  EXPECT_GE(r.kept.size(), 2u);
  EXPECT_TRUE(is_feasible(inst, r.x_star));
  EXPECT_NEAR(dot(inst.cost, r.x_star), r.v_star, 1e-9);
}

TEST(Covering, TightFamilyRatio) {
  const CcpInstance inst = covering_tight_family(10, 0.25);
  EXPECT_NEAR(exact_solve(inst).v_star, 1.0, 1e-9);
  const CoveringRelaxation rel = covering_relaxation(inst);
  EXPECT_LE(rel.v_rel, 1.0 + 1e-9);
  const ScaledSolution sc = relax_and_scale(inst);
  EXPECT_TRUE(sc.feasible);
  EXPECT_LE(sc.value, 3.0 + 1e-9);
  EXPECT_LE(quantile_lower_bound(inst), 1.0 + 1e-9);
}

}  // namespace
}  // namespace ccp
