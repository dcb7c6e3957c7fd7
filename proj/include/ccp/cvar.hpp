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

// CVaR inner approximation:
//   min c'x  s.t.  x in X,  min_{beta <= 0} beta + (1/eps) E(g - beta)_+ <= 0.

#ifndef CCP_CVAR_HPP_
#define CCP_CVAR_HPP_

#include "ccp/alsox.hpp"
#include "ccp/model.hpp"

namespace ccp {

struct CvarSolution {
  Vec x;
  double beta = 0.0;
  double value = 0.0;
  double cvar_slack = 0.0;
};

// beta + (1/eps) sum p_k (g_k(x) - beta)_+ minimized over beta <= 0.
double cvar_slack(const CcpInstance& inst, const Vec& x, double* beta_out = nullptr);

// Throws Infeasible when the CVaR system has no solution.
CvarSolution solve_cvar_exact(const CcpInstance& inst, const BisectionConfig& cfg = {});
SolveReport solve_cvar(const CcpInstance& inst, const BisectionConfig& cfg = {});

// Optimal value of the CVaR lower level at budget t, clamped at 0 (a negative
// optimum only says the budget is loose). Throws InfeasibleBudget if S is empty.
double cvar_lower_value(const CcpInstance& inst, double t, const SgdConfig& sgd = {});

}  // namespace ccp

#endif  // CCP_CVAR_HPP_
