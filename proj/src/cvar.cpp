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

#include "ccp/cvar.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ccp/errors.hpp"
#include "ccp/lp.hpp"

namespace ccp {

double cvar_slack(const CcpInstance& inst, const Vec& x, double* beta_out) {
  Vec g(inst.N);
  for (std::size_t k = 0; k < inst.N; ++k) g[k] = evaluate_g(inst, x, k);
  // Convex piecewise linear in beta; the minimum over beta <= 0 sits at 0 or
  // at a breakpoint.
  double best = kInf, arg = 0.0;
  auto eval = [&](double beta) {
    double s = beta;
    for (std::size_t k = 0; k < inst.N; ++k) s += inst.p[k] * std::max(0.0, g[k] - beta) / inst.epsilon;
    if (s < best) {
      best = s;
      arg = beta;
    }
  };
  eval(0.0);
  for (double v : g)
    if (v < 0.0) eval(v);
  if (beta_out != nullptr) *beta_out = arg;
  return best;
}

namespace {

CvarSolution cvar_by_lp(const CcpInstance& inst) {
  LpBuilder lp;
  LpEncoder enc(lp, inst, std::nullopt);
  for (std::size_t j = 0; j < inst.n; ++j) lp.set_cost(enc.x()[j], inst.cost[j]);
  const std::size_t beta = lp.add_var(-kInf, 0.0);
  LpBuilder::Row budget{{beta, 1.0}};
  for (std::size_t k = 0; k < inst.N; ++k) {
    const std::size_t w = lp.add_var(0.0, kInf);
    enc.add_scenario(k, {{w, -1.0}, {beta, -1.0}});
    budget.push_back({w, inst.p[k] / inst.epsilon});
  }
  lp.add_le(std::move(budget), 0.0);
  LpOutcome out = solve_lp(lp.build());
  if (out.status == LpStatus::kInfeasible) fail(ErrorKind::kInfeasible, "CVaR approximation is infeasible");
  if (out.status == LpStatus::kUnbounded) fail(ErrorKind::kDomain, "CVaR approximation is unbounded below");
  CvarSolution sol;
  sol.x.assign(out.x.begin(), out.x.begin() + static_cast<long>(inst.n));
  sol.value = dot(inst.cost, sol.x);
  sol.cvar_slack = cvar_slack(inst, sol.x, &sol.beta);
  return sol;
}

CvarSolution cvar_by_enumeration(const CcpInstance& inst) {
  const std::size_t n = inst.n;
  CvarSolution best;
  double best_val = kInf;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1UL ? 1.0 : 0.0;
    double beta = 0.0;
    const double slack = cvar_slack(inst, x, &beta);
    if (slack > 1e-9) continue;
    const double v = dot(inst.cost, x);
    if (v < best_val - 1e-12) {
      best_val = v;
      best.x = x;
      best.beta = beta;
      best.cvar_slack = slack;
      best.value = v;
    }
  }
  if (best.x.empty()) fail(ErrorKind::kInfeasible, "CVaR approximation is infeasible");
  return best;
}

CvarSolution cvar_by_bisection(const CcpInstance& inst, const BisectionConfig& cfg) {
  const double tol = 1e-6;
  SgdConfig sgd = cfg.lower.sgd;
  sgd.target = 0.0;
  ProbeFn probe = [&](double t) {
    Probe p;
    CvarSgdResult r;
    try {
      r = solve_cvar_lower_sgd(inst, t, Vec(inst.n, 0.0), 0.0, sgd);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasibleBudget) throw;
      p.budget_empty = true;
      return p;
    }
    p.x = r.x;
    p.value = r.value;
    p.violation = violation_probability(inst, r.x);
    p.feasible = r.value <= tol && p.violation <= inst.epsilon + kFeasTol;
    return p;
  };
  BisectionConfig c = cfg;
  const double lo = cfg.t_lower ? *cfg.t_lower : min_cost_over_x(inst);
  const double hi = cfg.t_upper ? *cfg.t_upper : kInf;
  BisectionResult br;
  try {
    br = bisect_budget(probe, lo, hi, c);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNoFeasibleT) fail(ErrorKind::kInfeasible, "CVaR approximation is infeasible");
    throw;
  }
  CvarSolution sol;
  sol.x = br.best.x;
  sol.value = dot(inst.cost, sol.x);
  sol.cvar_slack = cvar_slack(inst, sol.x, &sol.beta);
  return sol;
}

}  // namespace

CvarSolution solve_cvar_exact(const CcpInstance& inst, const BisectionConfig& cfg) {
  if (inst.x_set.is_binary()) return cvar_by_enumeration(inst);
  if (lp_representable(inst)) return cvar_by_lp(inst);
  return cvar_by_bisection(inst, cfg);
}

SolveReport solve_cvar(const CcpInstance& inst, const BisectionConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CvarSolution sol = solve_cvar_exact(inst, cfg);
  SolveReport rep;
  rep.method = "cvar";
  rep.backend = inst.x_set.is_binary() ? "enumeration" : (lp_representable(inst) ? "lp" : "subgradient");
  rep.x_star = sol.x;
  rep.t_star = sol.value;
  fill_report(inst, rep);
  rep.lower_bound_used = rep.upper_bound_used = rep.objective;
  rep.settings = {{"delta1", cfg.delta1}, {"beta", sol.beta}, {"cvar_slack", sol.cvar_slack}};
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

double cvar_lower_value(const CcpInstance& inst, double t, const SgdConfig& sgd) {
  if (!std::isfinite(t)) fail(ErrorKind::kDomain, "cvar lower level: t must be finite");
  if (inst.x_set.is_binary()) {
    double best = kInf;
    for (unsigned long mask = 0; mask < (1UL << inst.n); ++mask) {
      Vec x(inst.n);
      for (std::size_t j = 0; j < inst.n; ++j) x[j] = (mask >> j) & 1UL ? 1.0 : 0.0;
      if (dot(inst.cost, x) > t + 1e-12 * (1 + std::abs(t))) continue;
      best = std::min(best, inst.epsilon * cvar_slack(inst, x));
    }
    if (!std::isfinite(best)) fail(ErrorKind::kInfeasibleBudget, "no lattice point satisfies c'x <= t");
    return std::max(0.0, best);
  }
  if (lp_representable(inst)) {
    // E[s] - (1 - eps) beta with s_k = beta + w_k, w_k >= (g_k - beta)_+.
    LpBuilder lp;
    LpEncoder enc(lp, inst, t);
    const std::size_t beta = lp.add_var(-kInf, 0.0, inst.epsilon);
    for (std::size_t k = 0; k < inst.N; ++k) {
      const std::size_t w = lp.add_var(0.0, kInf, inst.p[k]);
      enc.add_scenario(k, {{w, -1.0}, {beta, -1.0}});
    }
    LpOutcome out = solve_lp(lp.build());
    if (out.status == LpStatus::kInfeasible) fail(ErrorKind::kInfeasibleBudget, "budget set is empty");
    if (out.status == LpStatus::kUnbounded) return 0.0;
    return std::max(0.0, out.value);
  }
  SgdConfig c = sgd;
  c.target = 0.0;
  CvarSgdResult r = solve_cvar_lower_sgd(inst, t, Vec(inst.n, 0.0), 0.0, c);
  return std::max(0.0, r.value);
}

}  // namespace ccp
