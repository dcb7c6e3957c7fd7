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

// Alternating minimization for the bilinear lower level
//   min sum_k p_k z_k s_k  over x in S_t, s >= g, z in [0,1]^N, p'z >= 1 - eps,
// the ALSO-X+ driver built on it, and a difference-of-convex baseline.

#ifndef CCP_ALSOXPLUS_HPP_
#define CCP_ALSOXPLUS_HPP_

#include <vector>

#include "ccp/alsox.hpp"
#include "ccp/model.hpp"

namespace ccp {

struct AmState {
  Vec x;
  Vec s;
  Vec z;
  double objective = 0.0;  // sum_k p_k z_k s_k
  long iteration = 0;
  bool feasible = false;   // violation_probability(x) <= eps
  std::vector<double> history;  // objective after every half-step
};

// Greedy fill: ascending s, ties toward the higher index, fractional at the
// boundary so that p'z = 1 - eps exactly.
Vec z_update(const Vec& s, const Vec& p, double epsilon);

struct AmConfig {
  double delta2 = 1e-2;
  int max_rounds = 100;
  LowerLevelOptions lower;
};

AmState am(const CcpInstance& inst, double t, const Vec& z0, const AmConfig& cfg = {});

// Objective histories of every AM run started by also_x_plus.
using AmTrace = std::vector<std::vector<double>>;

SolveReport also_x_plus(const CcpInstance& inst, const BisectionConfig& cfg = {},
                        const AmConfig& am_cfg = {}, AmTrace* trace = nullptr);

struct DcConfig {
  double delta2 = 1e-2;
  int max_rounds = 100;
  SgdConfig inner;
};

// Each round minimizes
//   1/4 sum p (z + s)^2 - 1/2 sum p z^k z + 1/2 sum p s^k s
// over the lower-level constraints, with s eliminated as (g(x))_+.
// An empty x0 starts from the (tie-balanced) hinge-loss solution at t.
AmState dc_solve(const CcpInstance& inst, double t, const Vec& x0, const Vec& s0, const Vec& z0,
                 const DcConfig& cfg = {});

}  // namespace ccp

#endif  // CCP_ALSOXPLUS_HPP_
