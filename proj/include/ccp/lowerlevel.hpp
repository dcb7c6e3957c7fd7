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

// Lower-level problem at budget t and scenario weights z:
//   min sum_k p_k z_k s_k  s.t.  x in X, c'x <= t, s_k >= (g(x, xi_k))_+.

#ifndef CCP_LOWERLEVEL_HPP_
#define CCP_LOWERLEVEL_HPP_

#include <optional>
#include <vector>

#include "ccp/lp.hpp"
#include "ccp/model.hpp"
#include "ccp/subgrad.hpp"

namespace ccp {

struct EllipticalCcp;

enum class Backend { kAuto, kLp, kSgd, kEnumeration, kClosedForm };

const char* backend_name(Backend b);

struct LowerLevelSolution {
  Vec x;
  Vec s;
  Vec z;
  double value = 0.0;
  Backend backend = Backend::kAuto;
};

struct LowerLevelOptions {
  Backend hint = Backend::kAuto;
  SgdConfig sgd;
  // Among hinge optima, pick one minimizing the largest single violation
  // (LP: second LP; enumeration: comparison key). Keeps results symmetric.
  bool balance_ties = true;
  std::optional<Vec> warm_start;
};

// True when the model has an exact LP encoding (bi-affine, equality,
// covering, robust bi-affine under L1/LInf).
bool lp_representable(const CcpInstance& inst);
Backend select_backend(const CcpInstance& inst, Backend hint);

// Empty z means all ones. Throws InfeasibleBudget when S is empty.
LowerLevelSolution solve_lower_level(const CcpInstance& inst, double t, const Vec& z = {},
                                     const LowerLevelOptions& opts = {});

// Only z = all ones is accepted (BackendUnavailable otherwise).
LowerLevelSolution solve_lower_level(const EllipticalCcp& inst, double t, const Vec& z = {},
                                     const LowerLevelOptions& opts = {});

// Fills s_k = (g_k(x))_+ and value = sum p z s.
void finalize_solution(const CcpInstance& inst, LowerLevelSolution& sol);

// LP building blocks shared with the CVaR, covering and oracle solvers.
class LpEncoder {
 public:
  // Adds x with the bounds and rows of X, plus c'x <= t when t is given.
  LpEncoder(LpBuilder& lp, const CcpInstance& inst, std::optional<double> t);

  const std::vector<std::size_t>& x() const { return x_; }
  // Adds rows encoding g(x, xi_k) + sum(extra) <= 0.
  void add_scenario(std::size_t k, const LpBuilder::Row& extra);

 private:
  LpBuilder& lp_;
  const CcpInstance& inst_;
  std::vector<std::size_t> x_;
  std::vector<std::size_t> u_;  // robust norm auxiliaries
  double robust_const_ = 0.0;
};

}  // namespace ccp

#endif  // CCP_LOWERLEVEL_HPP_
