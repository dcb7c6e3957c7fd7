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

// Bisection on the objective budget t: a budget is accepted when the
// lower-level minimizer at t is chance-feasible.

#ifndef CCP_ALSOX_HPP_
#define CCP_ALSOX_HPP_

#include <functional>
#include <optional>

#include "ccp/lowerlevel.hpp"
#include "ccp/model.hpp"

namespace ccp {

struct BisectionConfig {
  double delta1 = 1e-2;
  std::optional<double> t_lower;
  std::optional<double> t_upper;
  int max_bisections = 200;
  // Largest t tried before giving up; default t_U0 + 1e6 max(1, |t_U0|).
  std::optional<double> infeasibility_cap;
  LowerLevelOptions lower;
};

void check_config(const BisectionConfig& cfg);

struct Probe {
  bool budget_empty = false;
  bool feasible = false;
  Vec x;
  double violation = 1.0;
  double value = 0.0;  // lower-level value, informational
};

using ProbeFn = std::function<Probe(double t)>;

struct BisectionResult {
  double t_lower = 0.0;
  double t_upper = 0.0;
  Probe best;  // probe at t_upper
  long probes = 0;
  double lower_bound_used = 0.0;
  double upper_bound_used = 0.0;
};

// t_lo may be -inf and t_hi +inf; missing sides are found by doubling
// searches. Throws NoFeasibleT when no t up to the cap is accepted.
BisectionResult bisect_budget(const ProbeFn& probe, double t_lo, double t_hi, const BisectionConfig& cfg);

struct Bounds {
  double t_lower = -kInf;
  double t_upper = kInf;
};

// Quantile bound (or covering relaxation) below, CVaR or scaled covering
// relaxation above; either side may be infinite when unavailable.
Bounds default_bounds(const CcpInstance& inst);

SolveReport also_x(const CcpInstance& inst, const BisectionConfig& cfg = {});

// Fills objective, violation and feasibility of a report from its x.
void fill_report(const CcpInstance& inst, SolveReport& rep);

// min c'x over X alone (LP); -inf when unbounded.
double min_cost_over_x(const CcpInstance& inst);

}  // namespace ccp

#endif  // CCP_ALSOX_HPP_
