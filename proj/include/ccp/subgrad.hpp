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

// Projected subgradient descent over S = X ∩ {c'x <= t}.

#ifndef CCP_SUBGRAD_HPP_
#define CCP_SUBGRAD_HPP_

#include <functional>

#include "ccp/geometry.hpp"
#include "ccp/model.hpp"

namespace ccp {

enum class StepRule { kHarmonic, kConstant };

struct SgdConfig {
  int max_iter = 5000;
  StepRule step_rule = StepRule::kHarmonic;
  // Harmonic: gamma_k = gamma / (k + 1) on the normalized subgradient,
  // k counted from the last restart. Constant: gamma every step.
  double gamma = 1.0;
  bool averaging = true;  // report the best iterate (the last one otherwise)
  double stop_tol = 1e-10;
  int stall_window = 500;
  // On a stall, restart from the best iterate with the step scale multiplied
  // by `shrink`, at most `max_restarts` times.
  bool restarts = true;
  double shrink = 0.5;
  int max_restarts = 40;
  // Stop as soon as the best value drops to this level.
  double target = -kInf;
};

struct SgdResult {
  Vec x;
  double value = 0.0;
  long iterations = 0;
  int restarts = 0;
};

using SubgradOracle = std::function<double(const Vec& x, Vec* grad)>;
using Projector = std::function<Vec(const Vec& y)>;

SgdResult minimize_projected(const SubgradOracle& f, const Projector& proj, const Vec& x0,
                             const SgdConfig& cfg);

// sum_k p_k z_k (g(x, xi_k))_+ and one subgradient (0 at the kink).
double weighted_hinge(const CcpInstance& inst, const Vec& z, const Vec& x, Vec* grad);

// Throws BadStart when x0 cannot be projected into S, NonFinite on NaN/inf.
SgdResult solve_hinge_sgd(const CcpInstance& inst, double t, const Vec& z, const Vec& x0,
                          const SgdConfig& cfg);

struct CvarSgdResult {
  Vec x;
  double beta = 0.0;
  double value = 0.0;
  long iterations = 0;
};

// min sum_k p_k max{g_k(x), beta} - (1 - eps) beta over x in S, beta <= 0.
CvarSgdResult solve_cvar_lower_sgd(const CcpInstance& inst, double t, const Vec& x0, double beta0,
                                   const SgdConfig& cfg);

// A point of S = X ∩ {c'x <= t} near y; throws InfeasibleBudget if S looks empty.
Vec feasible_start(const CcpInstance& inst, double t, const Vec& y);

}  // namespace ccp

#endif  // CCP_SUBGRAD_HPP_
