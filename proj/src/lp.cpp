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

#include "ccp/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ccp/errors.hpp"

namespace ccp {

std::size_t LpBuilder::add_var(double lo, double hi, double cost) {
  lo_.push_back(lo);
  hi_.push_back(hi);
  c_.push_back(cost);
  return c_.size() - 1;
}

void LpBuilder::add_ge(Row row, double rhs) {
  for (auto& [j, v] : row) v = -v;
  le_.push_back({std::move(row), -rhs});
}

LpProblem LpBuilder::build() const {
  LpProblem p;
  const std::size_t n = c_.size();
  p.c = c_;
  p.lo = lo_;
  p.hi = hi_;
  p.A = Mat(le_.size(), n);
  p.b.resize(le_.size());
  for (std::size_t i = 0; i < le_.size(); ++i) {
    for (const auto& [j, v] : le_[i].first) p.A(i, j) += v;
    p.b[i] = le_[i].second;
  }
  p.E = Mat(eq_.size(), n);
  p.f.resize(eq_.size());
  for (std::size_t i = 0; i < eq_.size(); ++i) {
    for (const auto& [j, v] : eq_[i].first) p.E(i, j) += v;
    p.f[i] = eq_[i].second;
  }
  return p;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kPivTol = 1e-9;

enum class VarKind { kShift, kFlip, kSplit };

struct VarMap {
  VarKind kind;
  std::size_t col;
  std::size_t col2;  // x- for split variables
};

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t ncol) : m_(m), ncol_(ncol), t_((m + 1) * (ncol + 1), 0.0), basis_(m, kNone) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (ncol_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, ncol_); }
  double& obj(std::size_t j) { return at(m_, j); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return ncol_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t q) {
    const std::size_t w = ncol_ + 1;
    double* pr = &t_[r * w];
    const double inv = 1.0 / pr[q];
    for (std::size_t j = 0; j < w; ++j) pr[j] *= inv;
    pr[q] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* pi = &t_[i * w];
      const double f = pi[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) pi[j] -= f * pr[j];
      pi[q] = 0.0;
    }
    basis_[r] = q;
  }

  // Loads costs into the objective row and prices out the basis.
  void set_objective(const Vec& cost) {
    for (std::size_t j = 0; j <= ncol_; ++j) obj(j) = j < ncol_ ? cost[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= ncol_; ++j) obj(j) -= cb * at(i, j);
    }
  }

 private:
  std::size_t m_, ncol_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

// Bland's rule. Returns false when an unbounded ray is found.
bool run_simplex(Tableau& T, const std::vector<char>& allowed, double cost_tol, long& pivots, long cap) {
  const std::size_t m = T.rows(), nc = T.cols();
  for (;;) {
    std::size_t q = kNone;
    for (std::size_t j = 0; j < nc; ++j) {
      if (allowed[j] && T.obj(j) < -cost_tol) {
        q = j;
        break;
      }
    }
    if (q == kNone) return true;
    std::size_t r = kNone;
    double best = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = T.at(i, q);
      if (a <= kPivTol) continue;
      const double ratio = std::max(0.0, T.rhs(i)) / a;
      const double tie = 1e-12 * (1.0 + std::abs(best));
      if (r == kNone || ratio < best - tie ||
          (std::abs(ratio - best) <= tie && T.basis()[i] < T.basis()[r])) {
        r = i;
        best = ratio;
      }
    }
    if (r == kNone) return false;
    if (++pivots > cap) fail(ErrorKind::kCycleGuard, "simplex pivot cap exceeded");
    T.pivot(r, q);
  }
}

}  // namespace

LpOutcome solve_lp(const LpProblem& P) {
  const std::size_t n = P.c.size();
  if (P.lo.size() != n || P.hi.size() != n) fail(ErrorKind::kDimension, "lp: bound sizes differ from c");
  if (P.A.rows != P.b.size() || (P.A.rows > 0 && P.A.cols != n))
    fail(ErrorKind::kDimension, "lp: inequality block shape mismatch");
  if (P.E.rows != P.f.size() || (P.E.rows > 0 && P.E.cols != n))
    fail(ErrorKind::kDimension, "lp: equality block shape mismatch");
  if (n > 10000) fail(ErrorKind::kDimension, "lp: more than 10000 variables");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(P.lo[j]) || std::isnan(P.hi[j]) || P.lo[j] > P.hi[j] || P.lo[j] == kInf || P.hi[j] == -kInf) {
      LpOutcome out;
      out.status = LpStatus::kInfeasible;
      return out;
    }
  }

  // Column map for the standard form over nonnegative variables.
  std::vector<VarMap> vmap(n);
  std::size_t ns = 0;
  std::vector<std::size_t> bound_rows;  // shifted vars with finite upper bound
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(P.lo[j])) {
      vmap[j] = {VarKind::kShift, ns++, kNone};
      if (std::isfinite(P.hi[j])) bound_rows.push_back(j);
    } else if (std::isfinite(P.hi[j])) {
      vmap[j] = {VarKind::kFlip, ns++, kNone};
    } else {
      vmap[j] = {VarKind::kSplit, ns, ns + 1};
      ns += 2;
    }
  }

  const std::size_t m_le = P.A.rows + bound_rows.size();
  const std::size_t m_eq = P.E.rows;
  const std::size_t m = m_le + m_eq;

  // Standard-form rows over structural columns, before sign normalization.
  std::vector<Vec> rows(m, Vec(ns, 0.0));
  Vec rhs(m, 0.0);
  auto load = [&](std::size_t i, const double* a, double b) {
    double r = b;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = a[j];
      if (v == 0.0) continue;
      switch (vmap[j].kind) {
        case VarKind::kShift:
          rows[i][vmap[j].col] += v;
          r -= v * P.lo[j];
          break;
        case VarKind::kFlip:
          rows[i][vmap[j].col] -= v;
          r -= v * P.hi[j];
          break;
        case VarKind::kSplit:
          rows[i][vmap[j].col] += v;
          rows[i][vmap[j].col2] -= v;
          break;
      }
    }
    rhs[i] = r;
  };
  for (std::size_t i = 0; i < P.A.rows; ++i) load(i, P.A.row(i), P.b[i]);
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const std::size_t j = bound_rows[k];
    rows[P.A.rows + k][vmap[j].col] = 1.0;
    rhs[P.A.rows + k] = P.hi[j] - P.lo[j];
  }
  for (std::size_t i = 0; i < m_eq; ++i) load(m_le + i, P.E.row(i), P.f[i]);

  // Columns: structural | slacks (one per <= row) | artificials.
  std::vector<char> flipped(m, 0);
  std::vector<std::size_t> unit_col(m, kNone);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0) flipped[i] = 1;
    if (i >= m_le || flipped[i]) ++n_art;
  }
  const std::size_t slack0 = ns, art0 = ns + m_le, ncol = ns + m_le + n_art;
  Tableau T(m, ncol);
  std::size_t next_art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const double s = flipped[i] ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ns; ++j) T.at(i, j) = s * rows[i][j];
    if (i < m_le) T.at(i, slack0 + i) = s;
    T.rhs(i) = s * rhs[i];
    if (i < m_le && !flipped[i]) {
      unit_col[i] = slack0 + i;
    } else {
      unit_col[i] = next_art;
      T.at(i, next_art++) = 1.0;
    }
    T.basis()[i] = unit_col[i];
  }

  double cmax = 1.0, bmax = 1.0;
  for (double v : P.c) cmax = std::max(cmax, std::abs(v));
  for (double v : rhs) bmax = std::max(bmax, std::abs(v));

  LpOutcome out;
  const long cap = 50L * static_cast<long>(m + ncol);
  std::vector<char> allowed(ncol, 1);

  if (n_art > 0) {
    Vec c1(ncol, 0.0);
    for (std::size_t j = art0; j < ncol; ++j) c1[j] = 1.0;
    T.set_objective(c1);
    run_simplex(T, allowed, 1e-11, out.pivots, cap);
    if (-T.rhs(m) > 1e-8 * bmax) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (T.basis()[i] < art0) continue;
      std::size_t q = kNone;
      double best = kPivTol;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::abs(T.at(i, j)) > best) {
          best = std::abs(T.at(i, j));
          q = j;
        }
      }
      if (q != kNone) T.pivot(i, q);
    }
    for (std::size_t j = art0; j < ncol; ++j) allowed[j] = 0;
  }

  Vec c2(ncol, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    switch (vmap[j].kind) {
      case VarKind::kShift: c2[vmap[j].col] = P.c[j]; break;
      case VarKind::kFlip: c2[vmap[j].col] = -P.c[j]; break;
      case VarKind::kSplit:
        c2[vmap[j].col] = P.c[j];
        c2[vmap[j].col2] = -P.c[j];
        break;
    }
  }
  T.set_objective(c2);
  if (!run_simplex(T, allowed, 1e-10 * cmax, out.pivots, cap)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  Vec xs(ncol, 0.0);
  for (std::size_t i = 0; i < m; ++i) xs[T.basis()[i]] = std::max(0.0, T.rhs(i));
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    switch (vmap[j].kind) {
      case VarKind::kShift: out.x[j] = P.lo[j] + xs[vmap[j].col]; break;
      case VarKind::kFlip: out.x[j] = P.hi[j] - xs[vmap[j].col]; break;
      case VarKind::kSplit: out.x[j] = xs[vmap[j].col] - xs[vmap[j].col2]; break;
    }
    if (std::isfinite(P.hi[j])) out.x[j] = std::min(out.x[j], P.hi[j]);
    if (std::isfinite(P.lo[j])) out.x[j] = std::max(out.x[j], P.lo[j]);
  }
  out.value = dot(P.c, out.x);
  out.y.assign(P.A.rows, 0.0);
  out.lambda.assign(m_eq, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double pi = -T.obj(unit_col[i]);
    const double yi = flipped[i] ? pi : -pi;
    if (i < P.A.rows) {
      out.y[i] = yi;
    } else if (i >= m_le) {
      out.lambda[i - m_le] = yi;
    }
  }
  out.status = LpStatus::kOptimal;
  return out;
}

bool verify_certificate(const LpProblem& P, const LpOutcome& out, double tol, std::string* why) {
  auto bad = [&](const std::string& msg) {
    if (why != nullptr) *why = msg;
    return false;
  };
  if (!out.optimal()) return bad("outcome is not optimal");
  const std::size_t n = P.c.size();
  const Vec& x = out.x;
  double scale = 1.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < n; ++j)
    if (x[j] < P.lo[j] - tol * scale || x[j] > P.hi[j] + tol * scale) return bad("bound violated");
  Vec r = P.c;
  double dual = 0.0;
  for (std::size_t i = 0; i < P.A.rows; ++i) {
    const double ax = dot(P.A.row(i), x.data(), n);
    const double rs = tol * (1.0 + std::abs(P.b[i]) + scale);
    if (ax > P.b[i] + rs) return bad("inequality row violated");
    if (out.y[i] < -tol) return bad("negative inequality multiplier");
    if (std::abs(out.y[i] * (P.b[i] - ax)) > rs * (1.0 + std::abs(out.y[i])))
      return bad("complementary slackness fails on an inequality row");
    for (std::size_t j = 0; j < n; ++j) r[j] += out.y[i] * P.A(i, j);
    dual -= out.y[i] * P.b[i];
  }
  for (std::size_t i = 0; i < P.E.rows; ++i) {
    const double ex = dot(P.E.row(i), x.data(), n);
    if (std::abs(ex - P.f[i]) > tol * (1.0 + std::abs(P.f[i]) + scale)) return bad("equality row violated");
    for (std::size_t j = 0; j < n; ++j) r[j] += out.lambda[i] * P.E(i, j);
    dual -= out.lambda[i] * P.f[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (r[j] > tol) {
      if (!std::isfinite(P.lo[j])) return bad("positive reduced cost on a variable without lower bound");
      if (std::abs(x[j] - P.lo[j]) * r[j] > tol * (1.0 + scale)) return bad("reduced cost with slack lower bound");
      dual += r[j] * P.lo[j];
    } else if (r[j] < -tol) {
      if (!std::isfinite(P.hi[j])) return bad("negative reduced cost on a variable without upper bound");
      if (std::abs(x[j] - P.hi[j]) * -r[j] > tol * (1.0 + scale)) return bad("reduced cost with slack upper bound");
      dual += r[j] * P.hi[j];
    }
  }
  if (std::abs(dual - out.value) > tol * (1.0 + std::abs(out.value))) {
    std::ostringstream os;
    os << "duality gap " << std::abs(dual - out.value);
    return bad(os.str());
  }
  return true;
}

}  // namespace ccp
