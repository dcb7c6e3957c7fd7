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

#include "ccp/subgrad.hpp"

#include <cmath>

#include "ccp/errors.hpp"

namespace ccp {

namespace {

Vec safe_project(const Projector& proj, const Vec& y) {
  try {
    return proj(y);
  } catch (const NoConvergenceError& e) {
    return e.best();
  }
}

}  // namespace

SgdResult minimize_projected(const SubgradOracle& f, const Projector& proj, const Vec& x0,
                             const SgdConfig& cfg) {
  if (cfg.max_iter < 1) fail(ErrorKind::kValidation, "sgd: max_iter must be >= 1");
  if (!(cfg.gamma > 0)) fail(ErrorKind::kValidation, "sgd: step must be positive");
  const std::size_t n = x0.size();
  Vec x = x0, g(n, 0.0);
  SgdResult res;
  double fx = f(x, &g);
  if (!std::isfinite(fx)) fail(ErrorKind::kNonFinite, "sgd: objective is not finite at the start");
  res.x = x;
  res.value = fx;
  double scale = cfg.gamma * std::max(1.0, norm_inf(x0));
  const double min_scale = scale * 1e-12;
  long since_restart = 0, stall = 0;
  double stall_ref = fx;
  for (long it = 0; it < cfg.max_iter; ++it) {
    if (res.value <= cfg.target) break;
    const double gn = norm2(g);
    if (gn == 0.0) break;  // stationary
    const double step = cfg.step_rule == StepRule::kHarmonic
                            ? scale / static_cast<double>(since_restart + 1)
                            : scale;
    Vec y = x;
    for (std::size_t j = 0; j < n; ++j) y[j] -= step * g[j] / gn;
    x = safe_project(proj, y);
    fx = f(x, &g);
    ++res.iterations;
    ++since_restart;
    if (!std::isfinite(fx) || !all_finite(g)) fail(ErrorKind::kNonFinite, "sgd: objective became non-finite");
    if (fx < res.value || !cfg.averaging) {
      res.value = fx;
      res.x = x;
    }
    if (stall_ref - res.value > cfg.stop_tol * (1.0 + std::abs(stall_ref))) {
      stall_ref = res.value;
      stall = 0;
    } else if (++stall >= cfg.stall_window) {
      if (!cfg.restarts || res.restarts >= cfg.max_restarts || scale * cfg.shrink < min_scale) break;
      ++res.restarts;
      scale *= cfg.shrink;
      since_restart = 0;
      stall = 0;
      x = res.x;
      fx = f(x, &g);
    }
  }
  return res;
}

double weighted_hinge(const CcpInstance& inst, const Vec& z, const Vec& x, Vec* grad) {
  double v = 0.0;
  Vec gk;
  if (grad != nullptr) grad->assign(inst.n, 0.0);
  for (std::size_t k = 0; k < inst.N; ++k) {
    const double w = inst.p[k] * (z[k] < 1e-12 ? 0.0 : z[k]);
    if (w == 0.0) continue;
    const double g = evaluate_g_subgrad(inst, x, k, grad != nullptr ? &gk : nullptr);
    if (g > 0.0) {
      v += w * g;
      if (grad != nullptr)
        for (std::size_t j = 0; j < inst.n; ++j) (*grad)[j] += w * gk[j];
    }
  }
  return v;
}

Vec feasible_start(const CcpInstance& inst, double t, const Vec& y) {
  Region S(inst.x_set, &inst.cost, t);
  Vec x;
  try {
    x = S.project(y);
  } catch (const NoConvergenceError& e) {
    x = e.best();
  }
  if (!all_finite(x) || !S.contains(x, 1e-7))
    fail(ErrorKind::kInfeasibleBudget, "budget set X ∩ {c'x <= t} appears empty");
  return x;
}

SgdResult solve_hinge_sgd(const CcpInstance& inst, double t, const Vec& z, const Vec& x0,
                          const SgdConfig& cfg) {
  if (z.size() != inst.N) fail(ErrorKind::kDimension, "sgd: weight vector size differs from N");
  Vec start;
  try {
    start = feasible_start(inst, t, x0);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInfeasibleBudget) throw;
    fail(ErrorKind::kBadStart, std::string("sgd: start cannot be projected: ") + e.what());
  }
  Region S(inst.x_set, &inst.cost, t);
  SgdConfig c = cfg;
  c.target = std::max(c.target, 0.0);
  return minimize_projected([&](const Vec& x, Vec* g) { return weighted_hinge(inst, z, x, g); },
                            [&](const Vec& y) { return S.project(y); }, start, c);
}

CvarSgdResult solve_cvar_lower_sgd(const CcpInstance& inst, double t, const Vec& x0, double beta0,
                                   const SgdConfig& cfg) {
  if (beta0 > 0) fail(ErrorKind::kBadStart, "cvar sgd: beta0 must be <= 0");
  Vec start = feasible_start(inst, t, x0);
  Region S(inst.x_set, &inst.cost, t);
  const std::size_t n = inst.n;
  start.push_back(beta0);
  auto f = [&](const Vec& v, Vec* grad) {
    Vec x(v.begin(), v.begin() + n), gk;
    const double beta = v[n];
    if (grad != nullptr) grad->assign(n + 1, 0.0);
    double val = -(1.0 - inst.epsilon) * beta;
    double dbeta = -(1.0 - inst.epsilon);
    for (std::size_t k = 0; k < inst.N; ++k) {
      const double g = evaluate_g_subgrad(inst, x, k, grad != nullptr ? &gk : nullptr);
      if (g > beta) {
        val += inst.p[k] * g;
        if (grad != nullptr)
          for (std::size_t j = 0; j < n; ++j) (*grad)[j] += inst.p[k] * gk[j];
      } else {
        val += inst.p[k] * beta;
        dbeta += inst.p[k] * (g < beta ? 1.0 : 0.0);
      }
    }
    if (grad != nullptr) (*grad)[n] = dbeta;
    return val;
  };
  auto proj = [&](const Vec& y) {
    Vec x(y.begin(), y.begin() + n);
    Vec out = S.project(x);
    out.push_back(std::min(0.0, y[n]));
    return out;
  };
  SgdResult r = minimize_projected(f, proj, start, cfg);
  CvarSgdResult out;
  out.x.assign(r.x.begin(), r.x.begin() + n);
  out.beta = r.x[n];
  out.value = r.value;
  out.iterations = r.iterations;
  return out;
}

}  // namespace ccp
