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

// Exact solvers for small instances: enumeration of kept scenario sets,
// full lattice enumeration for binary X, and the generalized nullspace
// property check for equality models.

#ifndef CCP_ORACLE_HPP_
#define CCP_ORACLE_HPP_

#include <cstddef>
#include <variant>
#include <vector>

#include "ccp/model.hpp"

namespace ccp {

enum class KeptStatus { kOptimal, kInfeasible, kUnbounded };

struct KeptValue {
  KeptStatus status = KeptStatus::kInfeasible;
  double value = kInf;
  Vec x;
};

// min c'x over x in X with g(x, xi_k) <= 0 for every k in kept. LP for
// linear models, lattice scan for binary X, bisection plus subgradient
// feasibility (hinge below 1e-6 after 20000 steps) for nonlinear ones.
KeptValue kept_set_value(const CcpInstance& inst, const std::vector<std::size_t>& kept);

struct OracleResult {
  double v_star = kInf;
  Vec x_star;
  std::vector<std::size_t> kept;
  long subsets = 0;
};

// Throws CapExceeded above subset_cap droppable sets, Infeasible when no
// admissible kept set has a solution.
OracleResult exact_solve(const CcpInstance& inst, long subset_cap = 200000);
OracleResult exact_solve_binary(const CcpInstance& inst);

struct NullspaceWitness {
  Vec x;
  Vec s;
  std::vector<std::size_t> S;
  double ratio = 0.0;  // sum_{i in S} |s_i| / sum_i |s_i|
};

struct NullspaceHolds {
  double worst = 0.0;  // largest ratio seen, < 1/2
};
struct NullspaceViolated {
  NullspaceWitness witness;
};
struct NullspaceCapExceeded {};

using NullspaceVerdict = std::variant<NullspaceHolds, NullspaceViolated, NullspaceCapExceeded>;

// Equiprobable equality instances with N <= 12, n <= 6. budget caps the
// number of LPs solved.
NullspaceVerdict check_nullspace_property(const CcpInstance& inst, long budget = 1000000);

}  // namespace ccp

#endif  // CCP_ORACLE_HPP_
