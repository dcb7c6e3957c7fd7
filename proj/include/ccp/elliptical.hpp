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

// Single linear chance constraint P{ xi'a1(x) <= b1(x) } >= 1 - eps with
// xi elliptical (Gaussian by default), a1(x) = A x + a0, b1(x) = b'x + b0.
//
//   m(x)     = b1(x) - mu'a1(x)
//   sigma(x) = sqrt(a1' Sigma a1)
//   hinge    = E[(xi'a1 - b1)_+] = sigma f(m / sigma),  f(a) = Gbar(a^2/2) - a + a Phi(a)

#ifndef CCP_ELLIPTICAL_HPP_
#define CCP_ELLIPTICAL_HPP_

#include <functional>
#include <optional>
#include <string>

#include "ccp/alsox.hpp"
#include "ccp/model.hpp"
#include "ccp/norm.hpp"

namespace ccp {

enum class NormalFn { kPdf, kCdf, kQuantile };

double std_normal_pdf(double u);
double std_normal_cdf(double u);
// Throws DomainError outside (0, 1).
double std_normal_quantile(double u);
double std_normal(NormalFn kind, double u);

// Standardized generator of the elliptical family. Gbar(a^2/2) plays the
// role of the density in f; for the Gaussian it equals phi(a).
struct EllipticalGenerator {
  std::function<double(double)> pdf, cdf, quantile, gbar;
  bool gaussian = true;

  static EllipticalGenerator normal();
  // Checks that cdf is nondecreasing on a coarse grid; no other validation.
  static EllipticalGenerator custom(std::function<double(double)> pdf, std::function<double(double)> cdf,
                                    std::function<double(double)> quantile, std::function<double(double)> gbar);
};

struct EllipticalCcp {
  std::size_t m = 0, n = 0;
  Vec mu;
  Mat sigma;
  Mat A;  // m x n
  Vec a0;
  Vec b;
  double b0 = 0.0;
  FeasibleSet x_set;
  Vec cost;
  double epsilon = 0.05;
  double theta = 0.0;
  std::optional<NormSpec> wasserstein_norm;
  EllipticalGenerator generator = EllipticalGenerator::normal();
  Mat chol;  // lower factor of sigma, set by finalize_elliptical
};

// Validates shapes and caches the Cholesky factor.
void finalize_elliptical(EllipticalCcp& inst);
EllipticalCcp load_elliptical(const std::string& text);
bool is_elliptical_document(const std::string& text);

struct EllipticalPoint {
  Vec a1;
  double mean_margin = 0.0;  // m(x)
  double sigma = 0.0;
};
EllipticalPoint evaluate_point(const EllipticalCcp& inst, const Vec& x);

// f(a) = Gbar(a^2/2) - a + a Phi(a): positive and strictly decreasing.
double hinge_shape(const EllipticalGenerator& g, double alpha);

// Closed-form hinge loss; sigma = 0 gives (-m)_+. grad may be null.
double gaussian_hinge(const EllipticalCcp& inst, const Vec& x, Vec* grad = nullptr);

// m(x) - Phi^{-1}(1 - eps) sigma(x); x is chance-feasible iff >= 0.
double conic_margin(const EllipticalCcp& inst, const Vec& x, Vec* grad = nullptr);
// m(x) - (Phi^{-1}(1 - eps) + theta) sigma(x). NormMismatch unless the
// instance's Wasserstein norm is Mahalanobis with the instance's Sigma.
double robust_conic_margin(const EllipticalCcp& inst, const Vec& x, double theta, Vec* grad = nullptr);

enum class ExactnessCondition { kNone, kConstantSigma, kConstantMean };
// sigma(x) constant (A = 0) or m(x) constant (b = A' mu).
ExactnessCondition exactness_condition(const EllipticalCcp& inst);

SolveReport also_x_elliptical(const EllipticalCcp& inst, const BisectionConfig& cfg = {});

struct ConicSolution {
  Vec x;
  double value = 0.0;
  double margin = 0.0;
};
// min c'x s.t. margin(x) >= 0 (robust margin when theta > 0), x in X, by
// bisection on c'x <= t with projected ascent on the concave margin.
ConicSolution solve_conic_exact(const EllipticalCcp& inst, double theta = 0.0, double tol = 1e-6);

// Feasibility of x: margin >= -1e-9 (1 + |b1|).
bool elliptical_feasible(const EllipticalCcp& inst, const Vec& x, double theta = 0.0);

}  // namespace ccp

#endif  // CCP_ELLIPTICAL_HPP_
