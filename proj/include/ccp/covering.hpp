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

// Covering CCPs (A_k x >= e with A_k >= 0): continuous relaxation, the
// relax-and-scale rounding, and the quantile lower bound.

#ifndef CCP_COVERING_HPP_
#define CCP_COVERING_HPP_

#include "ccp/model.hpp"

namespace ccp {

struct CoveringRelaxation {
  double v_rel = 0.0;
  Vec x_hat;
  Vec s_hat;
};

// min c'x  s.t.  sum_i s_i <= floor(N eps),  A_i x >= (1 - s_i) e,  x in X,  s >= 0.
// Throws ValidationError for non-covering or non-equiprobable instances.
CoveringRelaxation covering_relaxation(const CcpInstance& inst);

struct ScaledSolution {
  Vec x;
  double value = 0.0;
  bool feasible = false;
};

// (floor(N eps) + 1) x_hat, clipped back into a box X when present.
ScaledSolution relax_and_scale(const CcpInstance& inst);

// (floor(N eps) + 1)-th smallest of h_k = min{c'x : x in X, g(x, xi_k) <= 0},
// with +inf for infeasible and -inf for unbounded single-scenario problems.
double quantile_lower_bound(const CcpInstance& inst);

// The family with xi_i = e_i for i <= floor(N eps) + 1 and xi_i = e otherwise,
// X = R_+^{floor(N eps)+1}, c = e: optimum 1, ALSO-X value floor(N eps) + 1.
CcpInstance covering_tight_family(std::size_t N, double epsilon);

}  // namespace ccp

#endif  // CCP_COVERING_HPP_
