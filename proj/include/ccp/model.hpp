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

// Finite-support chance-constrained programs:
//   min c'x  s.t.  x in X,  P{ g(x, xi) <= 0 } >= 1 - eps.

#ifndef CCP_MODEL_HPP_
#define CCP_MODEL_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ccp/norm.hpp"
#include "ccp/vec.hpp"

namespace ccp {

// ---- Feasible set X -------------------------------------------------------

struct BoxSet {
  Vec lower, upper;
};

struct Halfspace {
  Vec a;
  double b = 0.0;  // a.x <= b
};

struct HalfspacesSet {
  std::vector<Halfspace> rows;
};

struct NonNegSet {
  std::size_t dim = 0;
};

struct SimplexSet {
  std::size_t dim = 0;
  double sum = 1.0;
};

// Each row u_r of U is one equation u_r.x = h_r.
struct AffineSet {
  Mat U;
  Vec h;
  std::shared_ptr<const Mat> pinv;  // n x m pseudo-inverse of U, built once
};

struct BinarySet {
  std::size_t dim = 0;
};

using SetPart =
    std::variant<BoxSet, HalfspacesSet, NonNegSet, SimplexSet, AffineSet, BinarySet>;

// X is the intersection of its parts (a single part for the plain cases).
struct FeasibleSet {
  std::size_t dim = 0;
  std::vector<SetPart> parts;

  bool is_binary() const;
  bool contains(const Vec& x, double tol) const;
};

AffineSet make_affine_set(Mat U, Vec h);
FeasibleSet make_box(Vec lower, Vec upper);
FeasibleSet make_nonneg(std::size_t dim);
FeasibleSet make_free(std::size_t dim);  // R^n (empty intersection)

// ---- Constraint models ----------------------------------------------------

// g(x, xi_k) = max_j (D_k x - e_k)_j
struct BiAffine {
  std::vector<Mat> D;
  std::vector<Vec> e;
};

// g(x, xi_k) = |d_k.x - e_k|
struct BiAffineEq {
  std::vector<Vec> d;
  Vec e;
};

// g(x, xi_k) = sum_j xi_kj x_j^p - b, evaluated on x >= 0.
struct SeparablePower {
  double p = 2.0;
  std::vector<Vec> xi;
  double b = 0.0;
};

// g(x, xi_k) = max_row (1 - A_k x), A_k >= 0.
struct Covering {
  std::vector<Mat> A;
};

enum class Uncertain { kCoefficients, kRhs, kBoth };

// Worst case of a bi-affine row over an infinity-Wasserstein ball:
// g(x, xi_k) + theta ||a(x)||_*, where a(x) is x, -1 or (x, -1).
struct RobustBiAffine {
  BiAffine base;
  double theta = 0.0;
  NormSpec norm;
  Uncertain uncertain = Uncertain::kCoefficients;
};

using ConstraintModel =
    std::variant<BiAffine, BiAffineEq, SeparablePower, Covering, RobustBiAffine>;

const char* model_name(const ConstraintModel& m);

// ---- Instance -------------------------------------------------------------

struct CcpInstance {
  std::size_t n = 0;
  std::size_t N = 0;
  Vec p;
  ConstraintModel model;
  FeasibleSet x_set;
  Vec cost;
  double epsilon = 0.5;
  bool explicit_probabilities = false;  // false -> p was defaulted to 1/N

  bool equiprobable() const;
  // floor(N eps) with a small guard against 0.3*10 = 2.9999...
  std::size_t max_drops() const;
};

// Throws ValidationError naming the offending field.
void validate(const CcpInstance& inst);

CcpInstance load_instance(const std::string& text);
std::string dump_instance(const CcpInstance& inst);

// Ragged scale used by the default zero tolerance of scenario k.
double scenario_scale(const CcpInstance& inst, std::size_t k);

double evaluate_g(const CcpInstance& inst, const Vec& x, std::size_t k);
// g and one subgradient of g with respect to x.
double evaluate_g_subgrad(const CcpInstance& inst, const Vec& x, std::size_t k, Vec* grad);

// Default tolerance when tol_zero < 0: 1e-8 (1 + scale_k).
double violation_probability(const CcpInstance& inst, const Vec& x, double tol_zero = -1.0);
bool is_feasible(const CcpInstance& inst, const Vec& x);

// Sub-instance on the listed scenarios with renormalized probabilities.
CcpInstance restrict_scenarios(const CcpInstance& inst, const std::vector<std::size_t>& keep);

// ---- Reports --------------------------------------------------------------

struct SolveReport {
  std::string method;
  std::string backend;
  double t_star = 0.0;
  Vec x_star;
  double objective = 0.0;
  bool feasible = false;
  double violation_prob = 1.0;
  long iterations = 0;
  double lower_bound_used = 0.0;
  double upper_bound_used = 0.0;
  double wall_time = 0.0;
  std::vector<std::pair<std::string, double>> settings;
};

inline constexpr double kFeasTol = 1e-9;

}  // namespace ccp

#endif  // CCP_MODEL_HPP_
