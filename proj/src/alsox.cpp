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

#include "ccp/alsox.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ccp/covering.hpp"
#include "ccp/cvar.hpp"
#include "ccp/errors.hpp"

namespace ccp {

void check_config(const BisectionConfig& cfg) {
  if (!(cfg.delta1 > 0)) fail(ErrorKind::kValidation, "delta1 must be positive");
  if (cfg.t_lower && cfg.t_upper && *cfg.t_lower > *cfg.t_upper)
    fail(ErrorKind::kValidation, "t_lower exceeds t_upper");
  if (cfg.max_bisections < 0) fail(ErrorKind::kValidation, "max_bisections must be >= 0");
}

BisectionResult bisect_budget(const ProbeFn& probe, double lo, double hi, const BisectionConfig& cfg) {
  check_config(cfg);
  BisectionResult res;
  res.lower_bound_used = lo;
  res.upper_bound_used = hi;
  auto run = [&](double t) {
    ++res.probes;
    return probe(t);
  };
  double t_lo = lo, t_hi = kInf;
  bool have = false;

  if (std::isfinite(lo) && !(std::isfinite(hi) && hi <= lo)) {
    Probe p = run(lo);
    if (p.feasible) {
      res.t_lower = res.t_upper = lo;
      res.best = std::move(p);
      return res;
    }
  }
  if (std::isfinite(hi)) {
    Probe p = run(hi);
    if (p.feasible) {
      t_hi = hi;
      res.best = std::move(p);
      have = true;
    } else {
      t_lo = std::max(std::isfinite(t_lo) ? t_lo : hi, hi);
    }
  }
  if (!have) {
    const double base = std::isfinite(hi) ? hi : (std::isfinite(lo) ? lo : 0.0);
    const double cap = cfg.infeasibility_cap ? *cfg.infeasibility_cap : base + 1e6 * std::max(1.0, std::abs(base));
    const double step = std::max(1.0, std::abs(base));
    for (int j = 0;; ++j) {
      double t = base + step * std::ldexp(1.0, j);
      const bool last = t >= cap;
      if (last) t = cap;
      Probe p = run(t);
      if (p.feasible) {
        t_hi = t;
        res.best = std::move(p);
        have = true;
        break;
      }
      t_lo = t;
      if (last) fail(ErrorKind::kNoFeasibleT, "no budget up to the cap gives a chance-feasible lower-level solution");
    }
    res.upper_bound_used = t_hi;
  }
  if (!std::isfinite(t_lo)) {
    const double step = std::max(1.0, std::abs(t_hi));
    const double top = t_hi;
    for (int j = 0; j < 60; ++j) {
      const double t = top - step * std::ldexp(1.0, j);
      Probe p = run(t);
      if (p.budget_empty || !p.feasible) {
        t_lo = t;
        break;
      }
      t_hi = t;
      res.best = std::move(p);
    }
    if (!std::isfinite(t_lo)) t_lo = t_hi;
    res.lower_bound_used = t_lo;
  }
  for (int it = 0; it < cfg.max_bisections && t_hi - t_lo > cfg.delta1; ++it) {
    const double t = 0.5 * (t_lo + t_hi);
    Probe p = run(t);
    if (!p.budget_empty && p.feasible) {
      t_hi = t;
      res.best = std::move(p);
    } else {
      t_lo = t;
    }
  }
  res.t_lower = t_lo;
  res.t_upper = t_hi;
  return res;
}

double min_cost_over_x(const CcpInstance& inst) {
  if (inst.x_set.is_binary()) {
    double v = 0.0;
    for (double c : inst.cost) v += std::min(c, 0.0);
    return v;
  }
  LpBuilder lp;
  LpEncoder enc(lp, inst, std::nullopt);
  for (std::size_t j = 0; j < inst.n; ++j) lp.set_cost(enc.x()[j], inst.cost[j]);
  LpOutcome out = solve_lp(lp.build());
  if (out.status == LpStatus::kInfeasible) fail(ErrorKind::kInfeasible, "X is empty");
  if (out.status == LpStatus::kUnbounded) return -kInf;
  return out.value;
}

Bounds default_bounds(const CcpInstance& inst) {
  Bounds b;
  const bool exact = lp_representable(inst) || inst.x_set.is_binary();
  if (exact) {
    b.t_lower = quantile_lower_bound(inst);
  } else {
    b.t_lower = min_cost_over_x(inst);
  }
  const bool covering = std::holds_alternative<Covering>(inst.model) && inst.equiprobable();
  if (covering) {
    const CoveringRelaxation rel = covering_relaxation(inst);
    b.t_lower = std::max(b.t_lower, rel.v_rel);
    b.t_upper = static_cast<double>(inst.max_drops() + 1) * rel.v_rel;
  }
  if (exact) {
    try {
      b.t_upper = std::min(b.t_upper, solve_cvar_exact(inst).value);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasible && e.kind() != ErrorKind::kDomain) throw;
    }
  }
  if (std::isfinite(b.t_upper) && b.t_lower > b.t_upper) b.t_lower = b.t_upper;
  return b;
}

void fill_report(const CcpInstance& inst, SolveReport& rep) {
  rep.objective = rep.x_star.empty() ? 0.0 : dot(inst.cost, rep.x_star);
  rep.violation_prob = rep.x_star.empty() ? 1.0 : violation_probability(inst, rep.x_star);
  rep.feasible = !rep.x_star.empty() && rep.violation_prob <= inst.epsilon + kFeasTol;
}

SolveReport also_x(const CcpInstance& inst, const BisectionConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg);
  Bounds b;
  if (!cfg.t_lower || !cfg.t_upper) b = default_bounds(inst);
  if (cfg.t_lower) b.t_lower = *cfg.t_lower;
  if (cfg.t_upper) b.t_upper = *cfg.t_upper;

  LowerLevelOptions opts = cfg.lower;
  Backend used = select_backend(inst, opts.hint);
  ProbeFn probe = [&](double t) {
    Probe p;
    LowerLevelSolution sol;
    try {
      sol = solve_lower_level(inst, t, {}, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasibleBudget) throw;
      p.budget_empty = true;
      return p;
    }
    if (used == Backend::kSgd) opts.warm_start = sol.x;
    p.x = sol.x;
    p.value = sol.value;
    p.violation = violation_probability(inst, sol.x);
    p.feasible = p.violation <= inst.epsilon + kFeasTol;
    return p;
  };
  BisectionResult br = bisect_budget(probe, b.t_lower, b.t_upper, cfg);

  SolveReport rep;
  rep.method = "alsox";
  rep.backend = backend_name(used);
  rep.t_star = br.t_upper;
  rep.x_star = br.best.x;
  fill_report(inst, rep);
  rep.iterations = br.probes;
  rep.lower_bound_used = br.lower_bound_used;
  rep.upper_bound_used = br.upper_bound_used;
  rep.settings = {{"delta1", cfg.delta1}, {"t_lower_final", br.t_lower}, {"t_upper_final", br.t_upper}};
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace ccp
