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

#include "ccp/lp.hpp"

#include <gtest/gtest.h>

#include <random>

#include "ccp/errors.hpp"

namespace ccp {
namespace {

TEST(Lp, MaxOfLowerBounds) {
  LpBuilder b;
  const auto x = b.add_var(-kInf, kInf, 1.0);
  b.add_ge({{x, 1.0}}, 3.0);
  b.add_ge({{x, 1.0}}, 2.0);
  b.add_ge({{x, 1.0}}, 1.0);
  const LpProblem p = b.build();
  const LpOutcome out = solve_lp(p);
  ASSERT_TRUE(out.optimal());
  EXPECT_NEAR(out.value, 3.0, 1e-9);
  std::string why;
  EXPECT_TRUE(verify_certificate(p, out, 1e-6, &why)) << why;
}

TEST(Lp, HingeAtEightThirds) {
  // min (s1+s2+s3)/3 s.t. x >= xi_k - s_k, 0 <= x <= 8/3, s >= 0.
  LpBuilder b;
  const auto x = b.add_var(0.0, 8.0 / 3.0);
  const double xi[3] = {3, 2, 1};
  std::size_t s[3];
  for (int k = 0; k < 3; ++k) {
    s[k] = b.add_var(0.0, kInf, 1.0 / 3.0);
    b.add_le({{x, -1.0}, {s[k], -1.0}}, -xi[k]);
  }
  const LpProblem p = b.build();
  const LpOutcome out = solve_lp(p);
  ASSERT_TRUE(out.optimal());
  EXPECT_NEAR(out.value, 1.0 / 9.0, 1e-9);
  EXPECT_NEAR(out.x[s[0]], 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(out.x[s[1]], 0.0, 1e-9);
  EXPECT_NEAR(out.x[s[2]], 0.0, 1e-9);
  EXPECT_TRUE(verify_certificate(p, out));
}

TEST(Lp, Infeasible) {
  LpBuilder b;
  const auto x = b.add_var(0.0, kInf, 0.0);
  b.add_le({{x, 1.0}}, -1.0);
  EXPECT_EQ(solve_lp(b.build()).status, LpStatus::kInfeasible);
}

TEST(Lp, Unbounded) {
  LpBuilder b;
  const auto x = b.add_var(-kInf, kInf, 1.0);
  b.add_le({{x, 1.0}}, 4.0);
  EXPECT_EQ(solve_lp(b.build()).status, LpStatus::kUnbounded);
}

TEST(Lp, EqualitiesAndFlippedBounds) {
  // min x + 2y s.t. x + y = 1, x <= 0.25 (upper only), y free.
  LpBuilder b;
  const auto x = b.add_var(-kInf, 0.25, 1.0);
  const auto y = b.add_var(-kInf, kInf, 2.0);
  b.add_eq({{x, 1.0}, {y, 1.0}}, 1.0);
  const LpProblem p = b.build();
  const LpOutcome out = solve_lp(p);
  ASSERT_TRUE(out.optimal());
  EXPECT_NEAR(out.x[x], 0.25, 1e-9);
  EXPECT_NEAR(out.x[y], 0.75, 1e-9);
  EXPECT_TRUE(verify_certificate(p, out));
}

TEST(Lp, DimensionError) {
  LpProblem p;
  p.c = {1.0};
  p.lo = {0.0};
  p.hi = {1.0, 2.0};
  EXPECT_THROW(solve_lp(p), Error);
}

TEST(Lp, RandomFeasibleProblemsCertify) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 6, m = 1 + trial % 9;
    LpBuilder b;
    for (std::size_t j = 0; j < n; ++j) b.add_var(trial % 3 == 0 ? -kInf : -1.0, trial % 2 ? 2.0 : kInf, u(rng));
    Vec x0(n);
    for (auto& v : x0) v = 0.5 * (u(rng) + 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      LpBuilder::Row row;
      double ax = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = u(rng);
        row.push_back({j, a});
        ax += a * x0[j];
      }
      if (i % 4 == 3) {
        b.add_eq(row, ax);
      } else {
        b.add_le(row, ax + 0.1 * (u(rng) + 1.0));
      }
    }
    const LpProblem p = b.build();
    const LpOutcome out = solve_lp(p);
    ASSERT_NE(out.status, LpStatus::kInfeasible);
    if (!out.optimal()) continue;
    std::string why;
    EXPECT_TRUE(verify_certificate(p, out, 1e-6, &why)) << "trial " << trial << ": " << why;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
}  // namespace ccp
