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


#include "ccp/elliptical.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccp/errors.hpp"
#include "test_util.hpp"

namespace ccp {
namespace {

using testing::read_file;

EllipticalCcp load_b3() { return load_elliptical(read_file(std::string(CCP_INSTANCE_DIR) + "/exB3.json")); }

TEST(Normal, CdfQuantileRoundTrip) {
  for (double u = -6.0; u <= 6.0; u += 0.25) {
    EXPECT_NEAR(std_normal_quantile(std_normal_cdf(u)), u, 1e-8 * (1 + std::abs(u)));
  }
  EXPECT_NEAR(std_normal_quantile(0.95), 1.6448536269514722, 1e-9);
  EXPECT_NEAR(std_normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_THROW(std_normal_quantile(1.0), Error);
  EXPECT_THROW(std_normal_quantile(-0.1), Error);
}

TEST(Normal, HingeShapePositiveAndDecreasing) {
  const EllipticalGenerator g = EllipticalGenerator::normal();
  double prev = kInf;
  for (double a = -8.0; a <= 8.0; a += 0.01) {
    const double f = hinge_shape(g, a);
    EXPECT_GT(f, 0.0) << a;
    EXPECT_LT(f, prev) << a;
    prev = f;
  }
  // f(0) = phi(0); f(a) + a -> 0 as a -> -inf.
  EXPECT_NEAR(hinge_shape(g, 0.0), 1.0 / std::sqrt(2.0 * M_PI), 1e-15);
  EXPECT_NEAR(hinge_shape(g, -10.0), 10.0, 1e-12);
}

TEST(Elliptical, HingeMatchesMonteCarlo) {
  const EllipticalCcp inst = load_b3();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> z(0.0, 1.0);
  const Vec points[] = {{0.1, 0.2}, {-0.5, 0.7}, {0.3, -0.1}, {0.0, 0.0}};
  for (const Vec& x : points) {
    const int M = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < M; ++i) {
      const double xi1 = inst.mu[0] + z(rng), xi2 = inst.mu[1] + z(rng);
      const double v = std::max(0.0, xi1 * x[0] + xi2 * x[1] - 1.0);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / M;
    const double se = std::sqrt(std::max(0.0, sq / M - mean * mean) / M);
    EXPECT_NEAR(gaussian_hinge(inst, x), mean, 4.0 * se + 1e-12);
  }
}

TEST(Elliptical, HingeGradientMatchesFiniteDifference) {
  const EllipticalCcp inst = load_b3();
  const Vec x{0.2, 0.3};
  Vec grad;
  gaussian_hinge(inst, x, &grad);
  for (std::size_t j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += 1e-6;
    xm[j] -= 1e-6;
    EXPECT_NEAR(grad[j], (gaussian_hinge(inst, xp) - gaussian_hinge(inst, xm)) / 2e-6, 1e-6);
  }
}

// Independent optimum in polar form: along direction phi the margin
// 1 - r (2 cos + sin) - q r is feasible for r <= 1 / (2 cos + sin + q).
double polar_optimum(double q) {
  double best = 0.0;
  for (int i = 0; i < 2000000; ++i) {
    const double phi = 2.0 * M_PI * i / 2000000.0;
    const double gain = std::cos(phi) + 3.0 * std::sin(phi);
    const double den = 2.0 * std::cos(phi) + std::sin(phi) + q;
    if (gain <= 0 || den <= 0) continue;
    best = std::min(best, -gain / den);
  }
  return best;
}

TEST(Elliptical, GaussianExampleValues) {
  const EllipticalCcp inst = load_b3();
  const double q = std_normal_quantile(0.95);
  const ConicSolution exact = solve_conic_exact(inst);
  EXPECT_NEAR(exact.value, polar_optimum(q), 1e-4);
  EXPECT_NEAR(exact.value, -1.55432, 1e-3);
  const SolveReport a = also_x_elliptical(inst);
  EXPECT_TRUE(a.feasible);
  EXPECT_GE(a.objective, -1.43);
  EXPECT_GE(a.objective, exact.value - 1e-6);
}

TEST(Elliptical, RobustMarginNeedsMahalanobis) {
  EllipticalCcp inst = load_b3();
  EXPECT_NO_THROW(robust_conic_margin(inst, {0.1, 0.1}, 0.1));
  inst.wasserstein_norm = NormSpec::l2();
  try {
    robust_conic_margin(inst, {0.1, 0.1}, 0.1);
    FAIL() << "expected NormMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNormMismatch);
  }
  // A larger radius can only shrink the feasible set.
  inst.wasserstein_norm = NormSpec::mahalanobis(inst.sigma);
  EXPECT_GE(solve_conic_exact(inst, 0.1).value, solve_conic_exact(inst, 0.0).value - 1e-6);
}

}  // namespace
}  // namespace ccp
