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


#include "ccp/geometry.hpp"

#include <gtest/gtest.h>

#include <random>

#include "ccp/errors.hpp"

namespace ccp {
namespace {

// Projection onto a closed convex set is characterized by
// (y - p).(q - p) <= 0 for every q in the set; the simplex is the hull of
// its vertices, so checking those suffices.
TEST(Geometry, SimplexProjectionVariationalInequality) {
  std::mt19937 rng(7);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const double r = 0.5 + (trial % 3);
    Vec y(n);
    for (double& v : y) v = g(rng);
    const Vec p = project(SimplexSet{n, r}, y);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, -1e-12);
      sum += v;
    }
    EXPECT_NEAR(sum, r, 1e-9);
    for (std::size_t i = 0; i < n; ++i) {
      Vec q(n, 0.0);
      q[i] = r;
      double ip = 0.0;
      for (std::size_t j = 0; j < n; ++j) ip += (y[j] - p[j]) * (q[j] - p[j]);
      EXPECT_LE(ip, 1e-9);
    }
  }
}

TEST(Geometry, BoxBudgetFastPathMatchesDykstra) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::size_t n = 4;
  FeasibleSet box = make_box(Vec(n, 0.0), Vec(n, 1.0));
  const Vec c{-1.0, -2.0, -0.5, -3.0};
  for (int trial = 0; trial < 100; ++trial) {
    const double t = -0.2 - 3.0 * (trial % 5) / 5.0;
    Vec y(n);
    for (double& v : y) v = u(rng);
    const Region S(box, &c, t);
    const Vec fast = S.project(y);
    std::vector<SetPart> parts = box.parts;
    parts.push_back(HalfspacesSet{{Halfspace{c, t}}});
    const Vec slow = dykstra_project(parts, y, 100000, 1e-12);
    EXPECT_LT(dist2(fast, slow), 1e-6);
    EXPECT_TRUE(S.contains(fast, 1e-9));
  }
}

TEST(Geometry, AffineProjectionIsOrthogonal) {
  Mat U(1, 3);
  U(0, 0) = 1.0;
  U(0, 1) = 2.0;
  U(0, 2) = -1.0;
  const AffineSet a = make_affine_set(U, {4.0});
  const Vec y{1.0, 1.0, 1.0};
  const Vec p = project(a, y);
  EXPECT_NEAR(p[0] + 2 * p[1] - p[2], 4.0, 1e-12);
  // y - p is parallel to the row.
  const Vec d{y[0] - p[0], y[1] - p[1], y[2] - p[2]};
  EXPECT_NEAR(d[0] * 2.0, d[1], 1e-12);
  EXPECT_NEAR(d[0], -d[2], 1e-12);
}

TEST(Geometry, UnsupportedSetThrows) {
  HalfspacesSet two{{Halfspace{{1.0}, 1.0}, Halfspace{{-1.0}, 1.0}}};
  try {
    project(SetPart{two}, Vec{3.0});
    FAIL() << "expected UnsupportedSet";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedSet);
  }
  std::vector<SetPart> split{HalfspacesSet{{two.rows[0]}}, HalfspacesSet{{two.rows[1]}}};
  EXPECT_NEAR(dykstra_project(split, Vec{3.0})[0], 1.0, 1e-9);
}

}  // namespace
}  // namespace ccp
