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


#include "ccp/drccp.hpp"

#include <gtest/gtest.h>

#include "ccp/cvar.hpp"
#include "ccp/errors.hpp"
#include "ccp/oracle.hpp"
#include "test_util.hpp"

namespace ccp {
namespace {

using testing::load;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kParse;  // sentinel: nothing thrown
}

TEST(Drccp, ZeroRadiusKeepsTheRegularValue) {
  for (const char* name : {"exB1.json", "ex33.json", "exB4.json"}) {
    const CcpInstance inst = load(name);
    const DrccpSpec spec{inst, 0.0};
    EXPECT_NEAR(worst_case_solve(spec, DrccpMethod::kAlsoX).objective, also_x(inst).objective, 1e-2) << name;
    EXPECT_NEAR(worst_case_solve(spec, DrccpMethod::kCvar).objective, solve_cvar(inst).objective, 1e-2) << name;
  }
}

TEST(Drccp, DualAndShiftAgreeOnNonnegativeX) {
  // Scenario x >= xi_k on x >= 0: dual adds theta|x|, shift moves -1 to -1 + theta.
  const CcpInstance inst = load("exB1.json");
  DrccpSpec dual{inst, 0.1};
  DrccpSpec shift = dual;
  shift.mode = DrccpMode::kShift;
  const CcpInstance a = robustify(dual), b = robustify(shift);
  EXPECT_NEAR(exact_solve(a).v_star, exact_solve(b).v_star, 1e-9);
  EXPECT_NEAR(exact_solve(a).v_star, 2.0 / 0.9, 1e-9);
  EXPECT_NEAR(worst_case_solve(dual, DrccpMethod::kAlsoX).objective,
              worst_case_solve(shift, DrccpMethod::kAlsoX).objective, 1e-2);
}

TEST(Drccp, LargerRadiusCostsMore) {
  const CcpInstance inst = load("ex33.json");
  double prev = -kInf;
  for (double theta : {0.0, 0.05, 0.1, 0.2}) {
    const double v = exact_solve(robustify({inst, theta})).v_star;
    EXPECT_GE(v, prev - 1e-9);
    prev = v;
    const DrccpSpec spec{inst, theta};
    EXPECT_LE(worst_case_solve(spec, DrccpMethod::kAlsoX).objective,
              worst_case_solve(spec, DrccpMethod::kCvar).objective + 1e-2);
  }
}

TEST(Drccp, ModeMismatch) {
  const CcpInstance eq = load("ex34.json");
  EXPECT_EQ(kind_of([&] { robustify({eq, 0.1}); }), ErrorKind::kModeMismatch);
  DrccpSpec shift{load("exB1.json"), 0.1, NormSpec::l2(), DrccpMode::kShift};
  EXPECT_EQ(kind_of([&] { robustify(shift); }), ErrorKind::kModeMismatch);
  DrccpSpec free_x{load("ex34.json"), 0.1, NormSpec::linf(), DrccpMode::kShift};
  EXPECT_EQ(kind_of([&] { robustify(free_x); }), ErrorKind::kModeMismatch);
  EXPECT_EQ(kind_of([&] { robustify({load("exB1.json"), -1.0}); }), ErrorKind::kValidation);
}

TEST(Drccp, BlockParsing) {
  const CcpInstance inst = load("exB1.json");
  const std::string text = testing::read_file(std::string(CCP_INSTANCE_DIR) + "/exB1.json");
  EXPECT_FALSE(parse_drccp_block(text, inst).has_value());
  std::string with = text;
  with.insert(with.find('{') + 1, "\"drccp\": {\"theta\": 0.2, \"mode\": \"shift\", \"norm\": \"linf\"},");
  const auto spec = parse_drccp_block(with, inst);
  ASSERT_TRUE(spec.has_value());
  EXPECT_DOUBLE_EQ(spec->theta, 0.2);
  EXPECT_EQ(spec->mode, DrccpMode::kShift);
}

}  // namespace
}  // namespace ccp
