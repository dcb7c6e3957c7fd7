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

#include "ccp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ccp/alsox.hpp"
#include "ccp/errors.hpp"
#include "ccp/lowerlevel.hpp"
#include "ccp/subgrad.hpp"

namespace ccp {

namespace {

constexpr double kHingeTol = 1e-6;

KeptValue kept_lattice(const CcpInstance& inst, const std::vector<std::size_t>& kept) {
  KeptValue kv;
  const std::size_t n = inst.n;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1UL ? 1.0 : 0.0;
    bool ok = true;
    for (std::size_t k : kept)
      if (evaluate_g(inst, x, k) > 1e-8 * (1.0 + scenario_scale(inst, k))) {
        ok = false;
        break;
      }
    if (!ok) continue;
    const double v = dot(inst.cost, x);
    if (v < kv.value - 1e-12) {
      kv.status = KeptStatus::kOptimal;
      kv.value = v;
      kv.x = x;
    }
  }
  return kv;
}

KeptValue kept_lp(const CcpInstance& inst, const std::vector<std::size_t>& kept) {
  LpBuilder lp;
  LpEncoder enc(lp, inst, std::nullopt);
  for (std::size_t j = 0; j < inst.n; ++j) lp.set_cost(enc.x()[j], inst.cost[j]);
  for (std::size_t k : kept) enc.add_scenario(k, {});
  const LpOutcome out = solve_lp(lp.build());
  KeptValue kv;
  if (out.status == LpStatus::kInfeasible) return kv;
  if (out.status == LpStatus::kUnbounded) {
    kv.status = KeptStatus::kUnbounded;
    kv.value = -kInf;
    return kv;
  }
  kv.status = KeptStatus::kOptimal;
  kv.value = out.value;
  kv.x.assign(out.x.begin(), out.x.begin() + static_cast<long>(inst.n));
  return kv;
}

// Bisection on t with a hinge-minimization feasibility test.
KeptValue kept_nonlinear(const CcpInstance& inst, const std::vector<std::size_t>& kept) {
  const CcpInstance sub = restrict_scenarios(inst, kept);
  SgdConfig cfg;
  cfg.max_iter = 20000;
  cfg.target = kHingeTol * 0.1;
  Vec warm(inst.n, 0.0);
  auto feasible = [&](double t, Vec* x) {
    try {
      SgdResult r = solve_hinge_sgd(sub, t, Vec(sub.N, 1.0), warm, cfg);
      if (r.value > kHingeTol) return false;
      warm = r.x;
      if (x != nullptr) *x = r.x;
      return true;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kInfeasibleBudget) return false;
      throw;
    }
  };

  KeptValue kv;
  double lo = min_cost_over_x(inst);
  Vec x;
  if (std::isfinite(lo) && feasible(lo, &x)) {
    kv.status = KeptStatus::kOptimal;
    kv.value = dot(inst.cost, x);
    kv.x = x;
    return kv;
  }

  CcpInstance neg = inst;
  for (double& c : neg.cost) c = -c;
  const double top = -min_cost_over_x(neg);
  double hi = kInf;
  if (std::isfinite(top)) {
    if (!feasible(top, &x)) return kv;
    hi = top;
  } else {
    double step = 1.0, base = std::isfinite(lo) ? lo : 0.0;
    for (int i = 0; i < 60 && !std::isfinite(hi); ++i, step *= 2.0)
      if (feasible(base + step, &x)) hi = base + step;
    if (!std::isfinite(hi)) return kv;
  }
  if (!std::isfinite(lo)) {
    double step = 1.0;
    Vec y;
    for (int i = 0; i < 60; ++i, step *= 2.0) {
      const double t = hi - step;
      if (!feasible(t, &y)) {
        lo = t;
        break;
      }
      hi = t;
      x = y;
    }
    if (!std::isfinite(lo)) {
      kv.status = KeptStatus::kUnbounded;
      kv.value = -kInf;
      return kv;
    }
  }
  Vec y;
  for (int i = 0; i < 100 && hi - lo > kHingeTol * (1.0 + std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid, &y)) {
      hi = mid;
      x = y;
    } else {
      lo = mid;
    }
  }
  kv.status = KeptStatus::kOptimal;
  kv.value = dot(inst.cost, x);
  kv.x = x;
  return kv;
}

long binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r > 9e18 ? std::numeric_limits<long>::max() : std::lround(r);
}

// Calls fn(dropped) on every maximal set of scenarios whose mass is <= eps.
template <typename Fn>
void for_each_maximal_drop(const CcpInstance& inst, long cap, Fn&& fn) {
  long count = 0;
  if (inst.equiprobable()) {
    const std::size_t k = std::min(inst.max_drops(), inst.N);
    if (binomial(inst.N, k) > cap) fail(ErrorKind::kCapExceeded, "more droppable subsets than the cap");
    std::vector<std::size_t> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
      fn(c);
      // Next combination in colex order.
      std::size_t i = 0;
      while (i < k && c[i] + 1 == (i + 1 < k ? c[i + 1] : inst.N)) ++i;
      if (i == k) break;
      ++c[i];
      for (std::size_t j = 0; j < i; ++j) c[j] = j;
    }
    return;
  }
  const double budget = inst.epsilon + 1e-12;
  std::vector<std::size_t> cur;
  std::vector<char> in(inst.N, 0);
  // Depth-first over increasing index sets; maximality checked at the leaves.
  auto rec = [&](auto&& self, std::size_t from, double mass) -> void {
    bool extended = false;
    for (std::size_t i = from; i < inst.N; ++i) {
      if (mass + inst.p[i] > budget) continue;
      extended = true;
      cur.push_back(i);
      in[i] = 1;
      self(self, i + 1, mass + inst.p[i]);
      in[i] = 0;
      cur.pop_back();
    }
    if (extended) return;
    for (std::size_t i = 0; i < inst.N; ++i)
      if (!in[i] && mass + inst.p[i] <= budget) return;
    if (++count > cap) fail(ErrorKind::kCapExceeded, "more droppable subsets than the cap");
    fn(cur);
  };
  rec(rec, 0, 0.0);
}

}  // namespace

KeptValue kept_set_value(const CcpInstance& inst, const std::vector<std::size_t>& kept) {
  for (std::size_t k : kept)
    if (k >= inst.N) fail(ErrorKind::kIndex, "kept scenario index out of range");
  if (inst.x_set.is_binary()) return kept_lattice(inst, kept);
  if (lp_representable(inst)) return kept_lp(inst, kept);
  return kept_nonlinear(inst, kept);
}

OracleResult exact_solve(const CcpInstance& inst, long subset_cap) {
  validate(inst);
  if (inst.x_set.is_binary()) return exact_solve_binary(inst);

  // Single-scenario values give the lower bound max_{k kept} h_k for pruning.
  Vec h(inst.N);
  for (std::size_t k = 0; k < inst.N; ++k) {
    const KeptValue kv = kept_set_value(inst, {k});
    h[k] = kv.status == KeptStatus::kOptimal ? kv.value
           : kv.status == KeptStatus::kInfeasible ? kInf
                                                  : -kInf;
  }

  OracleResult res;
  bool unbounded = false;
  for_each_maximal_drop(inst, subset_cap, [&](const std::vector<std::size_t>& dropped) {
    ++res.subsets;
    if (unbounded) return;
    std::vector<char> drop(inst.N, 0);
    for (std::size_t i : dropped) drop[i] = 1;
    std::vector<std::size_t> kept;
    double bound = -kInf;
    for (std::size_t k = 0; k < inst.N; ++k)
      if (!drop[k]) {
        kept.push_back(k);
        bound = std::max(bound, h[k]);
      }
    if (bound >= res.v_star) return;
    const KeptValue kv = kept_set_value(inst, kept);
    if (kv.status == KeptStatus::kUnbounded) {
      unbounded = true;
      res.v_star = -kInf;
      res.x_star.clear();
      res.kept = kept;
      return;
    }
    if (kv.status == KeptStatus::kOptimal && kv.value < res.v_star - 1e-12 * (1.0 + std::abs(kv.value))) {
      res.v_star = kv.value;
      res.x_star = kv.x;
      res.kept = kept;
    }
  });
  if (!unbounded && !std::isfinite(res.v_star)) fail(ErrorKind::kInfeasible, "no admissible kept set is feasible");
  return res;
}

OracleResult exact_solve_binary(const CcpInstance& inst) {
  const std::size_t n = inst.n;
  if (n > 20) fail(ErrorKind::kCapExceeded, "binary enumeration limited to 20 variables");
  OracleResult res;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1UL ? 1.0 : 0.0;
    ++res.subsets;
    if (!is_feasible(inst, x)) continue;
    const double v = dot(inst.cost, x);
    if (v < res.v_star - 1e-12) {
      res.v_star = v;
      res.x_star = x;
    }
  }
  if (res.x_star.empty()) fail(ErrorKind::kInfeasible, "no lattice point meets the chance constraint");
  res.kept.clear();
  for (std::size_t k = 0; k < inst.N; ++k)
    if (evaluate_g(inst, res.x_star, k) <= 1e-8 * (1.0 + scenario_scale(inst, k))) res.kept.push_back(k);
  return res;
}

// For a fixed S and sign pattern, max sum_{i in S} sigma_i d_i.x over
// {sum_i |d_i.x| <= 1, c.x = 0, U x = 0}. The property fails iff some
// optimum reaches 1/2. Only |S| = floor(N eps) is needed since the
// objective grows with S.
NullspaceVerdict check_nullspace_property(const CcpInstance& inst, long budget) {
  const auto* eq = std::get_if<BiAffineEq>(&inst.model);
  if (eq == nullptr) fail(ErrorKind::kValidation, "constraints: nullspace check needs an equality model");
  if (!inst.equiprobable()) fail(ErrorKind::kValidation, "probabilities: nullspace check needs equiprobable scenarios");
  if (inst.N > 12 || inst.n > 6) fail(ErrorKind::kValidation, "nullspace check limited to N <= 12, n <= 6");
  const std::size_t n = inst.n, N = inst.N;
  const std::size_t m = std::min(inst.max_drops(), N);
  NullspaceHolds holds;
  if (m == 0) return holds;

  std::vector<const AffineSet*> affine;
  for (const auto& part : inst.x_set.parts)
    if (const auto* a = std::get_if<AffineSet>(&part)) affine.push_back(a);

  const long lps = binomial(N, m) * (1L << (m - 1));
  if (lps > budget) return NullspaceCapExceeded{};

  std::vector<std::size_t> S(m);
  std::iota(S.begin(), S.end(), 0);
  while (true) {
    for (unsigned long signs = 0; signs < (1UL << (m - 1)); ++signs) {
      LpBuilder lp;
      std::vector<std::size_t> x(n), u(N);
      for (std::size_t j = 0; j < n; ++j) x[j] = lp.add_var(-kInf, kInf);
      LpBuilder::Row total;
      for (std::size_t i = 0; i < N; ++i) {
        u[i] = lp.add_var(0.0, kInf);
        LpBuilder::Row pos{{u[i], -1.0}}, neg{{u[i], -1.0}};
        for (std::size_t j = 0; j < n; ++j) {
          pos.push_back({x[j], eq->d[i][j]});
          neg.push_back({x[j], -eq->d[i][j]});
        }
        lp.add_le(std::move(pos), 0.0);
        lp.add_le(std::move(neg), 0.0);
        total.push_back({u[i], 1.0});
      }
      lp.add_le(std::move(total), 1.0);
      LpBuilder::Row cr;
      for (std::size_t j = 0; j < n; ++j) cr.push_back({x[j], inst.cost[j]});
      lp.add_eq(std::move(cr), 0.0);
      for (const AffineSet* a : affine)
        for (std::size_t r = 0; r < a->U.rows; ++r) {
          LpBuilder::Row row;
          for (std::size_t j = 0; j < n; ++j) row.push_back({x[j], a->U(r, j)});
          lp.add_eq(std::move(row), 0.0);
        }
      Vec cx(n, 0.0);
      for (std::size_t q = 0; q < m; ++q) {
        const double sigma = q == 0 || !((signs >> (q - 1)) & 1UL) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) cx[j] -= sigma * eq->d[S[q]][j];
      }
      for (std::size_t j = 0; j < n; ++j) lp.set_cost(x[j], cx[j]);
      const LpOutcome out = solve_lp(lp.build());
      if (!out.optimal()) continue;
      const double best = -out.value;
      if (best >= 0.5 - 1e-9) {
        NullspaceWitness w;
        w.x.assign(out.x.begin(), out.x.begin() + static_cast<long>(n));
        w.s.resize(N);
        double tot = 0.0, on = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          w.s[i] = dot(eq->d[i], w.x);
          tot += std::abs(w.s[i]);
        }
        for (std::size_t i : S) on += std::abs(w.s[i]);
        w.S = S;
        w.ratio = tot > 0 ? on / tot : 0.0;
        return NullspaceViolated{w};
      }
      holds.worst = std::max(holds.worst, best);
    }
    std::size_t i = 0;
    while (i < m && S[i] + 1 == (i + 1 < m ? S[i + 1] : N)) ++i;
    if (i == m) break;
    ++S[i];
    for (std::size_t j = 0; j < i; ++j) S[j] = j;
  }
  return holds;
}

}  // namespace ccp
