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

#include "ccp/lowerlevel.hpp"

#include <algorithm>
#include <cmath>

#include "ccp/errors.hpp"

namespace ccp {

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::kAuto: return "auto";
    case Backend::kLp: return "lp";
    case Backend::kSgd: return "subgradient";
    case Backend::kEnumeration: return "enumeration";
    case Backend::kClosedForm: return "closed_form";
  }
  return "?";
}

// ---- LP encoding ----------------------------------------------------------

LpEncoder::LpEncoder(LpBuilder& lp, const CcpInstance& inst, std::optional<double> t)
    : lp_(lp), inst_(inst) {
  const std::size_t n = inst.n;
  Vec lo(n, -kInf), hi(n, kInf);
  for (const auto& part : inst.x_set.parts) {
    if (const auto* b = std::get_if<BoxSet>(&part)) {
      for (std::size_t j = 0; j < n; ++j) {
        lo[j] = std::max(lo[j], b->lower[j]);
        hi[j] = std::min(hi[j], b->upper[j]);
      }
    } else if (std::holds_alternative<NonNegSet>(part) || std::holds_alternative<SimplexSet>(part)) {
      for (std::size_t j = 0; j < n; ++j) lo[j] = std::max(lo[j], 0.0);
    } else if (std::holds_alternative<BinarySet>(part)) {
      fail(ErrorKind::kUnsupportedSet, "lp: binary lattices need the enumeration backend");
    }
  }
  for (std::size_t j = 0; j < n; ++j) x_.push_back(lp.add_var(lo[j], hi[j]));
  for (const auto& part : inst.x_set.parts) {
    if (const auto* h = std::get_if<HalfspacesSet>(&part)) {
      for (const auto& r : h->rows) {
        LpBuilder::Row row;
        for (std::size_t j = 0; j < n; ++j)
          if (r.a[j] != 0.0) row.push_back({x_[j], r.a[j]});
        lp.add_le(std::move(row), r.b);
      }
    } else if (const auto* s = std::get_if<SimplexSet>(&part)) {
      LpBuilder::Row row;
      for (std::size_t j = 0; j < n; ++j) row.push_back({x_[j], 1.0});
      lp.add_eq(std::move(row), s->sum);
    } else if (const auto* a = std::get_if<AffineSet>(&part)) {
      for (std::size_t r = 0; r < a->U.rows; ++r) {
        LpBuilder::Row row;
        for (std::size_t j = 0; j < n; ++j)
          if (a->U(r, j) != 0.0) row.push_back({x_[j], a->U(r, j)});
        lp.add_eq(std::move(row), a->h[r]);
      }
    }
  }
  if (t) {
    LpBuilder::Row row;
    for (std::size_t j = 0; j < n; ++j)
      if (inst.cost[j] != 0.0) row.push_back({x_[j], inst.cost[j]});
    lp.add_le(std::move(row), *t);
  }

  if (const auto* rb = std::get_if<RobustBiAffine>(&inst.model)) {
    if (rb->theta == 0.0) return;
    const bool with_x = rb->uncertain != Uncertain::kRhs;
    const bool with_one = rb->uncertain != Uncertain::kCoefficients;
    switch (rb->norm.kind) {
      case NormKind::kL1: {  // dual is max-abs
        if (!with_x) {
          robust_const_ = rb->theta;
          break;
        }
        const std::size_t u = lp.add_var(with_one ? 1.0 : 0.0, kInf);
        for (std::size_t j = 0; j < n; ++j) {
          lp.add_le({{x_[j], 1.0}, {u, -1.0}}, 0.0);
          lp.add_le({{x_[j], -1.0}, {u, -1.0}}, 0.0);
        }
        u_.push_back(u);
        break;
      }
      case NormKind::kLInf: {  // dual is sum-abs
        if (with_one) robust_const_ = rb->theta;
        if (!with_x) break;
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t u = lp.add_var(0.0, kInf);
          lp.add_le({{x_[j], 1.0}, {u, -1.0}}, 0.0);
          lp.add_le({{x_[j], -1.0}, {u, -1.0}}, 0.0);
          u_.push_back(u);
        }
        break;
      }
      default:
        if (with_x) fail(ErrorKind::kUnsupportedSet, "lp: smooth dual norms need the subgradient backend");
        robust_const_ = rb->theta * dual_norm(rb->norm, Vec{-1.0});
        break;
    }
  }
}

void LpEncoder::add_scenario(std::size_t k, const LpBuilder::Row& extra) {
  const std::size_t n = inst_.n;
  auto affine_row = [&](const double* a, double sign, double rhs, double robust) {
    LpBuilder::Row row = extra;
    for (std::size_t j = 0; j < n; ++j)
      if (a[j] != 0.0) row.push_back({x_[j], sign * a[j]});
    if (robust != 0.0)
      for (std::size_t u : u_) row.push_back({u, robust});
    lp_.add_le(std::move(row), rhs);
  };
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BiAffine>) {
          for (std::size_t r = 0; r < m.D[k].rows; ++r) affine_row(m.D[k].row(r), 1.0, m.e[k][r], 0.0);
        } else if constexpr (std::is_same_v<T, BiAffineEq>) {
          affine_row(m.d[k].data(), 1.0, m.e[k], 0.0);
          affine_row(m.d[k].data(), -1.0, -m.e[k], 0.0);
        } else if constexpr (std::is_same_v<T, Covering>) {
          for (std::size_t r = 0; r < m.A[k].rows; ++r) affine_row(m.A[k].row(r), -1.0, -1.0, 0.0);
        } else if constexpr (std::is_same_v<T, RobustBiAffine>) {
          for (std::size_t r = 0; r < m.base.D[k].rows; ++r)
            affine_row(m.base.D[k].row(r), 1.0, m.base.e[k][r] - robust_const_, m.theta);
        } else {
          fail(ErrorKind::kUnsupportedSet, "lp: nonlinear model has no LP encoding");
        }
      },
      inst_.model);
}

bool lp_representable(const CcpInstance& inst) {
  if (inst.x_set.is_binary()) return false;
  if (std::holds_alternative<SeparablePower>(inst.model)) return false;
  if (const auto* rb = std::get_if<RobustBiAffine>(&inst.model)) {
    const bool smooth = rb->norm.kind == NormKind::kL2 || rb->norm.kind == NormKind::kMahalanobis;
    if (smooth && rb->uncertain != Uncertain::kRhs && rb->theta != 0.0) return false;
  }
  return true;
}

Backend select_backend(const CcpInstance& inst, Backend hint) {
  if (inst.x_set.is_binary()) return Backend::kEnumeration;
  if (hint == Backend::kLp && !lp_representable(inst))
    fail(ErrorKind::kBackendUnavailable, "lp backend cannot encode this model");
  if (hint == Backend::kEnumeration || hint == Backend::kClosedForm)
    fail(ErrorKind::kBackendUnavailable, "backend does not apply to this instance");
  if (hint != Backend::kAuto) return hint;
  std::size_t rows = 1;
  if (const auto* b = std::get_if<BiAffine>(&inst.model)) rows = b->D.empty() ? 1 : b->D[0].rows;
  if (const auto* c = std::get_if<Covering>(&inst.model)) rows = c->A.empty() ? 1 : c->A[0].rows;
  if (lp_representable(inst) && inst.n + inst.N * rows <= 10000) return Backend::kLp;
  return Backend::kSgd;
}

void finalize_solution(const CcpInstance& inst, LowerLevelSolution& sol) {
  sol.s.assign(inst.N, 0.0);
  sol.value = 0.0;
  for (std::size_t k = 0; k < inst.N; ++k) {
    sol.s[k] = std::max(0.0, evaluate_g(inst, sol.x, k));
    sol.value += inst.p[k] * sol.z[k] * sol.s[k];
  }
}

namespace {

double weight(const Vec& z, std::size_t k) { return z[k] < 1e-12 ? 0.0 : z[k]; }

LowerLevelSolution solve_by_lp(const CcpInstance& inst, double t, const Vec& z, bool balance) {
  LpBuilder lp;
  LpEncoder enc(lp, inst, t);
  std::vector<std::size_t> s(inst.N);
  for (std::size_t k = 0; k < inst.N; ++k) {
    s[k] = lp.add_var(0.0, kInf, inst.p[k] * weight(z, k));
    enc.add_scenario(k, {{s[k], -1.0}});
  }
  LpProblem prob = lp.build();
  LpOutcome out = solve_lp(prob);
  if (out.status == LpStatus::kInfeasible)
    fail(ErrorKind::kInfeasibleBudget, "budget set X ∩ {c'x <= t} is empty");
  if (!out.optimal()) fail(ErrorKind::kNoConvergence, "hinge LP reported unbounded");

  LowerLevelSolution sol;
  sol.x.assign(out.x.begin(), out.x.begin() + static_cast<long>(inst.n));
  if (balance && inst.N > 1) {
    // Second stage: keep the hinge value, minimize the largest violation.
    const std::size_t w = lp.add_var(0.0, kInf, 1.0);
    LpBuilder::Row keep;
    for (std::size_t k = 0; k < inst.N; ++k) {
      lp.set_cost(s[k], 0.0);
      lp.add_le({{s[k], 1.0}, {w, -1.0}}, 0.0);
      const double pk = inst.p[k] * weight(z, k);
      if (pk != 0.0) keep.push_back({s[k], pk});
    }
    lp.add_le(std::move(keep), out.value + 1e-11 * (1.0 + std::abs(out.value)));
    LpOutcome out2 = solve_lp(lp.build());
    if (out2.optimal()) sol.x.assign(out2.x.begin(), out2.x.begin() + static_cast<long>(inst.n));
  }
  sol.z = z;
  sol.backend = Backend::kLp;
  finalize_solution(inst, sol);
  return sol;
}

LowerLevelSolution solve_by_enumeration(const CcpInstance& inst, double t, const Vec& z) {
  const std::size_t n = inst.n;
  if (n > 20) fail(ErrorKind::kCapExceeded, "binary enumeration limited to 20 variables");
  LowerLevelSolution best;
  double best_val = kInf, best_max = kInf;
  const double ttol = 1e-12 * (1.0 + std::abs(t));
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1UL ? 1.0 : 0.0;
    if (dot(inst.cost, x) > t + ttol) continue;
    double val = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < inst.N; ++k) {
      const double sk = std::max(0.0, evaluate_g(inst, x, k));
      val += inst.p[k] * weight(z, k) * sk;
      mx = std::max(mx, sk);
    }
    const double vt = 1e-12 * (1.0 + std::abs(best_val));
    if (val < best_val - vt || (std::abs(val - best_val) <= vt && mx < best_max - 1e-12)) {
      best_val = val;
      best_max = mx;
      best.x = x;
    }
  }
  if (best.x.empty()) fail(ErrorKind::kInfeasibleBudget, "no lattice point satisfies c'x <= t");
  best.z = z;
  best.backend = Backend::kEnumeration;
  finalize_solution(inst, best);
  return best;
}

}  // namespace

LowerLevelSolution solve_lower_level(const CcpInstance& inst, double t, const Vec& z_in,
                                     const LowerLevelOptions& opts) {
  if (!std::isfinite(t)) fail(ErrorKind::kDomain, "lower level: t must be finite");
  Vec z = z_in.empty() ? Vec(inst.N, 1.0) : z_in;
  if (z.size() != inst.N) fail(ErrorKind::kDimension, "lower level: z size differs from N");
  const Backend b = select_backend(inst, opts.hint);
  switch (b) {
    case Backend::kEnumeration: return solve_by_enumeration(inst, t, z);
    case Backend::kLp: return solve_by_lp(inst, t, z, opts.balance_ties);
    default: break;
  }
  Vec x0 = opts.warm_start ? *opts.warm_start : Vec(inst.n, 0.0);
  SgdResult r = solve_hinge_sgd(inst, t, z, x0, opts.sgd);
  LowerLevelSolution sol;
  sol.x = r.x;
  sol.z = z;
  sol.backend = Backend::kSgd;
  finalize_solution(inst, sol);
  return sol;
}

}  // namespace ccp
