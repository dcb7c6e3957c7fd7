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

#include <gtest/gtest.h>

#include "ccp/alsox.hpp"
#include "ccp/covering.hpp"
#include "ccp/cvar.hpp"
#include "ccp/errors.hpp"
#include "ccp/oracle.hpp"
#include "test_util.hpp"

namespace ccp {
namespace {

using testing::load;

TEST(SingleVariable, OracleAlsoXAndCvar) {
  const CcpInstance inst = load("exB1.json");
  EXPECT_NEAR(exact_solve(inst).v_star, 2.0, 1e-9);
  const SolveReport a = also_x(inst);
  EXPECT_TRUE(a.feasible);
  EXPECT_GE(a.objective, 2.0 - 1e-9);
  EXPECT_LE(a.objective, 2.01);
  EXPECT_NEAR(solve_cvar(inst).objective, 8.0 / 3.0, 1e-6);
}

TEST(TwoVariable, AlsoXStopsAtTwoThirds) {
  const CcpInstance inst = load("ex33.json");
  EXPECT_NEAR(exact_solve(inst).v_star, 0.5, 1e-9);
  const SolveReport a = also_x(inst);
  EXPECT_TRUE(a.feasible);
  EXPECT_NEAR(a.objective, 2.0 / 3.0, 1e-2);
  EXPECT_NEAR(solve_cvar(inst).objective, 2.0 / 3.0, 1e-6);
}

TEST(Equality, ExactUnderNullspaceProperty) {
  const CcpInstance inst = load("ex34.json");
  EXPECT_TRUE(std::holds_alternative<NullspaceHolds>(check_nullspace_property(inst)));
  // x = (-1, 1) meets scenarios 1 and 3 at cost 0.
  const OracleResult o = exact_solve(inst);
  EXPECT_NEAR(o.v_star, 0.0, 1e-9);
  EXPECT_NEAR(also_x(inst).objective, o.v_star, 1e-2);
}

TEST(Binary, SetCoveringAndLattice) {
  const CcpInstance b2 = load("exB2.json");
  EXPECT_NEAR(exact_solve(b2).v_star, 1.0, 1e-12);
  EXPECT_NEAR(also_x(b2).objective, 1.0, 1e-12);
  const CcpInstance e32 = load("ex32.json");
  EXPECT_NEAR(exact_solve(e32).v_star, 0.0, 1e-12);
}

TEST(Infeasible, AlsoXFindsNoBudget) {
  const CcpInstance inst = load("exE1.json");
  EXPECT_NEAR(exact_solve(inst).v_star, 1.0, 1e-9);
  try {
    also_x(inst);
    FAIL() << "expected NoFeasibleT";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoFeasibleT);
  }
  try {
    solve_cvar(inst);
    FAIL() << "expected Infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasible);
  }
}

TEST(Covering, TightFamily) {
  const CcpInstance inst = covering_tight_family(10, 0.25);
  EXPECT_NEAR(exact_solve(inst).v_star, 1.0, 1e-9);
  EXPECT_NEAR(also_x(inst).objective, 3.0, 1e-2);
  EXPECT_NEAR(covering_relaxation(inst).v_rel, 1.0, 1e-9);
  EXPECT_LE(relax_and_scale(inst).value, 3.0 + 1e-9);
}

}  // namespace
}  // namespace ccp
