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

#include "ccp/alsoxplus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ccp/errors.hpp"
#include "ccp/geometry.hpp"
#include "ccp/lowerlevel.hpp"

namespace ccp {

namespace {

double bilinear(const Vec& p, const Vec& z, const Vec& s) {
  double v = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) v += p[k] * z[k] * s[k];
  return v;
}

void check_z(const CcpInstance& inst, const Vec& z) {
  if (z.size() != inst.N) fail(ErrorKind::kDimension, "z0 size differs from N");
  double mass = 0.0;
  for (std::size_t k = 0; k < inst.N; ++k) {
    if (!(z[k] >= 0.0 && z[k] <= 1.0)) fail(ErrorKind::kBadStart, "z0 must lie in [0,1]^N");
    mass += inst.p[k] * z[k];
  }
  if (mass < 1.0 - inst.epsilon - 1e-12) fail(ErrorKind::kBadStart, "z0 carries less than 1 - eps mass");
}

}  // namespace

Vec z_update(const Vec& s, const Vec& p, double epsilon) {
  if (s.size() != p.size()) fail(ErrorKind::kDimension, "z_update: s and p differ in size");
  // Values within 1e-9 (relative to the largest) count as ties; LP noise
  // would otherwise decide the order.
  double scale = 1.0;
  for (double v : s) scale = std::max(scale, std::abs(v));
  std::vector<long long> key(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) key[k] = std::llround(s[k] / (1e-9 * scale));
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a > b;
  });
  Vec z(s.size(), 0.0);
  double need = 1.0 - epsilon;
  for (std::size_t k : order) {
    if (need <= 1e-15) break;
    if (p[k] <= need) {
      z[k] = 1.0;
      need -= p[k];
    } else {
      z[k] = need / p[k];
      need = 0.0;
    }
  }
  return z;
}

AmState am(const CcpInstance& inst, double t, const Vec& z0, const AmConfig& cfg) {
  if (!(cfg.delta2 > 0)) fail(ErrorKind::kValidation, "delta2 must be positive");
  check_z(inst, z0);
  AmState st;
  st.z = z0;
  LowerLevelOptions opts = cfg.lower;
  double prev = kInf;
  for (int round = 0; round < cfg.max_rounds; ++round) {
    LowerLevelSolution sol = solve_lower_level(inst, t, st.z, opts);
    double obj = bilinear(inst.p, st.z, sol.s);
    // Inexact backends may return a worse point; keep the previous x then.
    if (!st.x.empty() && !st.history.empty() && obj > st.history.back()) {
      sol.x = st.x;
      sol.s = st.s;
      obj = st.history.back();
    }
    st.x = sol.x;
    st.s = sol.s;
    st.history.push_back(obj);
    if (sol.backend == Backend::kSgd) opts.warm_start = sol.x;
    st.z = z_update(st.s, inst.p, inst.epsilon);
    st.objective = bilinear(inst.p, st.z, st.s);
    st.history.push_back(st.objective);
    st.iteration = round + 1;
    const double delta = std::abs(st.objective - prev);
    prev = st.objective;
    if (delta < cfg.delta2) break;
  }
  st.feasible = violation_probability(inst, st.x) <= inst.epsilon + kFeasTol;
  return st;
}

SolveReport also_x_plus(const CcpInstance& inst, const BisectionConfig& cfg, const AmConfig& am_cfg,
                        AmTrace* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg);
  Bounds b;
  if (!cfg.t_lower || !cfg.t_upper) b = default_bounds(inst);
  if (cfg.t_lower) b.t_lower = *cfg.t_lower;
  if (cfg.t_upper) b.t_upper = *cfg.t_upper;

  LowerLevelOptions opts = cfg.lower;
  const Backend used = select_backend(inst, opts.hint);
  long rescues = 0, rescued = 0;
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
    if (p.feasible) return p;

    ++rescues;
    AmConfig ac = am_cfg;
    ac.lower = opts;
    ac.lower.warm_start = sol.x;
    AmState st = am(inst, t, z_update(sol.s, inst.p, inst.epsilon), ac);
    if (trace != nullptr) trace->push_back(st.history);
    if (st.feasible) {
      ++rescued;
      p.x = st.x;
      p.value = st.objective;
      p.violation = violation_probability(inst, st.x);
      p.feasible = true;
    }
    return p;
  };
  BisectionResult br = bisect_budget(probe, b.t_lower, b.t_upper, cfg);

  SolveReport rep;
  rep.method = "alsox_plus";
  rep.backend = backend_name(used);
  rep.t_star = br.t_upper;
  rep.x_star = br.best.x;
  fill_report(inst, rep);
  rep.iterations = br.probes;
  rep.lower_bound_used = br.lower_bound_used;
  rep.upper_bound_used = br.upper_bound_used;
  rep.settings = {{"delta1", cfg.delta1},
                  {"delta2", am_cfg.delta2},
                  {"am_runs", static_cast<double>(rescues)},
                  {"am_rescues", static_cast<double>(rescued)},
                  {"t_lower_final", br.t_lower},
                  {"t_upper_final", br.t_upper}};
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

AmState dc_solve(const CcpInstance& inst, double t, const Vec& x0, const Vec& s0, const Vec& z0,
                 const DcConfig& cfg) {
  if (!(cfg.delta2 > 0)) fail(ErrorKind::kValidation, "delta2 must be positive");
  check_z(inst, z0);
  Vec x_start = x0.empty() ? solve_lower_level(inst, t).x : x0;
  if (s0.size() != inst.N || x_start.size() != inst.n) fail(ErrorKind::kDimension, "dc start has wrong size");
  const std::size_t n = inst.n, N = inst.N;
  const Region S(inst.x_set, &inst.cost, t);
  std::vector<SetPart> zparts{BoxSet{Vec(N, 0.0), Vec(N, 1.0)}};
  HalfspacesSet mass;
  mass.rows.push_back({Vec(N), -(1.0 - inst.epsilon)});
  for (std::size_t k = 0; k < N; ++k) mass.rows[0].a[k] = -inst.p[k];
  zparts.push_back(mass);
  const Region Z(std::move(zparts), N);

  auto hinge = [&](const Vec& x) {
    Vec s(N);
    for (std::size_t k = 0; k < N; ++k) s[k] = std::max(0.0, evaluate_g(inst, x, k));
    return s;
  };

  AmState st;
  st.x = x_start;
  st.s = s0;
  st.z = z0;
  st.objective = bilinear(inst.p, st.z, st.s);
  st.history.push_back(st.objective);
  for (int round = 0; round < cfg.max_rounds; ++round) {
    const Vec zk = st.z, sk = st.s;
    auto f = [&](const Vec& v, Vec* grad) {
      if (grad != nullptr) grad->assign(n + N, 0.0);
      Vec x(v.begin(), v.begin() + static_cast<long>(n)), gk;
      double val = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        const double zv = v[n + k];
        const double g = evaluate_g_subgrad(inst, x, k, grad != nullptr ? &gk : nullptr);
        const double s = std::max(0.0, g);
        val += inst.p[k] * (0.25 * (zv + s) * (zv + s) - 0.5 * zk[k] * zv + 0.5 * sk[k] * s);
        if (grad != nullptr) {
          (*grad)[n + k] = inst.p[k] * (0.5 * (zv + s) - 0.5 * zk[k]);
          if (g > 0)
            for (std::size_t j = 0; j < n; ++j) (*grad)[j] += inst.p[k] * (0.5 * (zv + s) + 0.5 * sk[k]) * gk[j];
        }
      }
      return val;
    };
    auto proj = [&](const Vec& y) {
      Vec x = S.project(Vec(y.begin(), y.begin() + static_cast<long>(n)));
      const Vec z = Z.project(Vec(y.begin() + static_cast<long>(n), y.end()));
      x.insert(x.end(), z.begin(), z.end());
      return x;
    };
    Vec v0 = st.x;
    v0.insert(v0.end(), st.z.begin(), st.z.end());
    const SgdResult r = minimize_projected(f, proj, proj(v0), cfg.inner);
    st.x.assign(r.x.begin(), r.x.begin() + static_cast<long>(n));
    st.z.assign(r.x.begin() + static_cast<long>(n), r.x.end());
    st.s = hinge(st.x);
    const double obj = bilinear(inst.p, st.z, st.s);
    const double delta = std::abs(obj - st.objective);
    st.objective = obj;
    st.history.push_back(obj);
    st.iteration = round + 1;
    if (delta < cfg.delta2 || obj <= 0.0) break;
  }
  st.feasible = violation_probability(inst, st.x) <= inst.epsilon + kFeasTol;
  return st;
}

}  // namespace ccp
