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

#include "ccp/covering.hpp"

#include <algorithm>
#include <cmath>

#include "ccp/errors.hpp"
#include "ccp/lowerlevel.hpp"
#include "ccp/oracle.hpp"

namespace ccp {

CoveringRelaxation covering_relaxation(const CcpInstance& inst) {
  const auto* cov = std::get_if<Covering>(&inst.model);
  if (cov == nullptr) fail(ErrorKind::kValidation, "constraints: covering relaxation needs a covering model");
  if (!inst.equiprobable()) fail(ErrorKind::kValidation, "probabilities: covering relaxation needs equiprobable scenarios");
  LpBuilder lp;
  LpEncoder enc(lp, inst, std::nullopt);
  for (std::size_t j = 0; j < inst.n; ++j) lp.set_cost(enc.x()[j], inst.cost[j]);
  std::vector<std::size_t> s(inst.N);
  LpBuilder::Row budget;
  for (std::size_t k = 0; k < inst.N; ++k) {
    s[k] = lp.add_var(0.0, kInf);
    enc.add_scenario(k, {{s[k], -1.0}});
    budget.push_back({s[k], 1.0});
  }
  lp.add_le(std::move(budget), static_cast<double>(inst.max_drops()));
  LpOutcome out = solve_lp(lp.build());
  if (out.status == LpStatus::kInfeasible) fail(ErrorKind::kInfeasible, "covering relaxation is infeasible");
  if (out.status == LpStatus::kUnbounded) fail(ErrorKind::kDomain, "covering relaxation is unbounded");
  CoveringRelaxation rel;
  rel.v_rel = out.value;
  rel.x_hat.assign(out.x.begin(), out.x.begin() + static_cast<long>(inst.n));
  for (std::size_t k = 0; k < inst.N; ++k) rel.s_hat.push_back(out.x[s[k]]);
  return rel;
}

ScaledSolution relax_and_scale(const CcpInstance& inst) {
  const CoveringRelaxation rel = covering_relaxation(inst);
  const double f = static_cast<double>(inst.max_drops() + 1);
  ScaledSolution out;
  out.x = rel.x_hat;
  for (double& v : out.x) v *= f;
  for (const auto& part : inst.x_set.parts)
    if (const auto* b = std::get_if<BoxSet>(&part))
      for (std::size_t j = 0; j < inst.n; ++j) out.x[j] = std::clamp(out.x[j], b->lower[j], b->upper[j]);
  out.value = dot(inst.cost, out.x);
  out.feasible = is_feasible(inst, out.x) && inst.x_set.contains(out.x, 1e-9);
  return out;
}

double quantile_lower_bound(const CcpInstance& inst) {
  Vec h(inst.N);
  for (std::size_t k = 0; k < inst.N; ++k) {
    const KeptValue kv = kept_set_value(inst, {k});
    switch (kv.status) {
      case KeptStatus::kOptimal: h[k] = kv.value; break;
      case KeptStatus::kInfeasible: h[k] = kInf; break;
      case KeptStatus::kUnbounded: h[k] = -kInf; break;
    }
  }
  const std::size_t idx = std::min(inst.max_drops(), inst.N - 1);
  std::nth_element(h.begin(), h.begin() + static_cast<long>(idx), h.end());
  return h[idx];
}

CcpInstance covering_tight_family(std::size_t N, double epsilon) {
  CcpInstance inst;
  inst.N = N;
  inst.epsilon = epsilon;
  const std::size_t n = inst.max_drops() + 1;
  if (n > N) fail(ErrorKind::kValidation, "epsilon: family needs floor(N eps) + 1 <= N");
  inst.n = n;
  inst.cost.assign(n, 1.0);
  inst.x_set = make_nonneg(n);
  inst.p.assign(N, 1.0 / static_cast<double>(N));
  Covering cov;
  for (std::size_t i = 0; i < N; ++i) {
    Mat a(1, n, 0.0);
    if (i < n) {
      a(0, i) = 1.0;
    } else {
      for (std::size_t j = 0; j < n; ++j) a(0, j) = 1.0;
    }
    cov.A.push_back(std::move(a));
  }
  inst.model = std::move(cov);
  validate(inst);
  return inst;
}

}  // namespace ccp
