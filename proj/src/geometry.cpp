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

#include "ccp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ccp/errors.hpp"

namespace ccp {

namespace {

Vec project_simplex(const Vec& y, double sum) {
  const std::size_t n = y.size();
  Vec x(n, 0.0);
  if (n == 0 || sum <= 0.0) return x;
  Vec u = y;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += u[k];
    const double cand = (cum - sum) / static_cast<double>(k + 1);
    if (u[k] - cand > 0.0) tau = cand;
  }
  for (std::size_t j = 0; j < n; ++j) x[j] = std::max(0.0, y[j] - tau);
  return x;
}

Vec project_halfspace(const Halfspace& h, const Vec& y) {
  const double viol = dot(h.a, y) - h.b;
  if (viol <= 0.0) return y;
  const double aa = dot(h.a, h.a);
  if (aa == 0.0) return y;  // 0 <= b < 0 is empty; nothing sensible to do
  Vec x = y;
  const double step = viol / aa;
  for (std::size_t j = 0; j < x.size(); ++j) x[j] -= step * h.a[j];
  return x;
}

void bounds_of(const SetPart& part, std::size_t n, Vec& lo, Vec& hi) {
  if (const auto* b = std::get_if<BoxSet>(&part)) {
    lo = b->lower;
    hi = b->upper;
  } else {
    lo.assign(n, 0.0);
    hi.assign(n, kInf);
  }
}

}  // namespace

Vec project(const SetPart& set, const Vec& y) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          Vec x = y;
          for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], s.lower[j], s.upper[j]);
          return x;
        } else if constexpr (std::is_same_v<T, HalfspacesSet>) {
          if (s.rows.size() != 1) fail(ErrorKind::kUnsupportedSet, "project: multi-row halfspaces need dykstra_project");
          return project_halfspace(s.rows[0], y);
        } else if constexpr (std::is_same_v<T, NonNegSet>) {
          Vec x = y;
          for (double& v : x) v = std::max(0.0, v);
          return x;
        } else if constexpr (std::is_same_v<T, SimplexSet>) {
          return project_simplex(y, s.sum);
        } else if constexpr (std::is_same_v<T, AffineSet>) {
          Vec r = matvec(s.U, y);
          for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s.h[i];
          Vec x = y;
          const Mat& P = *s.pinv;
          for (std::size_t j = 0; j < x.size(); ++j) x[j] -= dot(P.row(j), r.data(), r.size());
          return x;
        } else {
          fail(ErrorKind::kUnsupportedSet, "project: binary lattices are not convex");
        }
      },
      set);
}

double distance_to(const SetPart& set, const Vec& y) { return dist2(project(set, y), y); }

Vec dykstra_project(const std::vector<SetPart>& sets, const Vec& y, int max_iter, double tol) {
  if (sets.empty()) return y;
  if (sets.size() == 1) return project(sets[0], y);
  const std::size_t m = sets.size(), n = y.size();
  std::vector<Vec> inc(m, Vec(n, 0.0));
  Vec x = y, best = y;
  double best_gap = kInf;
  for (int it = 0; it < max_iter; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      Vec w = x;
      for (std::size_t j = 0; j < n; ++j) w[j] += inc[i][j];
      Vec z = project(sets[i], w);
      for (std::size_t j = 0; j < n; ++j) {
        inc[i][j] = w[j] - z[j];
        moved = std::max(moved, std::abs(z[j] - x[j]));
      }
      x = std::move(z);
    }
    if (!all_finite(x)) break;
    if (moved <= tol || it % 16 == 15 || it + 1 == max_iter) {
      double gap = 0.0;
      for (std::size_t i = 0; i + 1 < m; ++i) gap = std::max(gap, distance_to(sets[i], x));
      if (gap < best_gap) {
        best_gap = gap;
        best = x;
      }
      if (gap <= tol && moved <= tol) return x;
    }
  }
  throw NoConvergenceError("dykstra: tolerance not met", best);
}

// ---- Region ---------------------------------------------------------------

Region::Region(const FeasibleSet& x_set, const Vec* cost, double t) : dim_(x_set.dim) {
  for (const auto& part : x_set.parts) {
    if (const auto* h = std::get_if<HalfspacesSet>(&part)) {
      for (const auto& r : h->rows) parts_.push_back(HalfspacesSet{{r}});
    } else if (std::holds_alternative<BinarySet>(part)) {
      fail(ErrorKind::kUnsupportedSet, "region: binary lattices are not convex");
    } else {
      parts_.push_back(part);
    }
  }
  if (cost != nullptr) parts_.push_back(HalfspacesSet{{Halfspace{*cost, t}}});
  classify();
}

Region::Region(std::vector<SetPart> parts, std::size_t dim) : dim_(dim), parts_(std::move(parts)) {
  classify();
}

void Region::classify() {
  if (parts_.size() != 2) return;
  for (int i = 0; i < 2; ++i) {
    const auto& a = parts_[i];
    const auto& b = parts_[1 - i];
    const bool boxy = std::holds_alternative<BoxSet>(a) || std::holds_alternative<NonNegSet>(a);
    const auto* h = std::get_if<HalfspacesSet>(&b);
    if (boxy && h != nullptr && h->rows.size() == 1) {
      fast_box_ = i;
      fast_half_ = 1 - i;
      return;
    }
  }
}

Vec Region::project(const Vec& y) const {
  if (parts_.empty()) return y;
  if (parts_.size() == 1) return ccp::project(parts_[0], y);
  if (fast_box_ < 0) return dykstra_project(parts_, y);

  Vec lo, hi;
  bounds_of(parts_[fast_box_], dim_, lo, hi);
  const Halfspace& h = std::get<HalfspacesSet>(parts_[fast_half_]).rows[0];
  auto at = [&](double lam) {
    Vec x(dim_);
    for (std::size_t j = 0; j < dim_; ++j) x[j] = std::clamp(y[j] - lam * h.a[j], lo[j], hi[j]);
    return x;
  };
  const double btol = 1e-12 * (1.0 + std::abs(h.b));
  Vec x0 = at(0.0);
  if (dot(h.a, x0) <= h.b + btol) return x0;
  const double aa = std::max(dot(h.a, h.a), 1e-300);
  double lam_hi = std::max(1e-12, (dot(h.a, x0) - h.b) / aa);
  int grow = 0;
  while (dot(h.a, at(lam_hi)) > h.b + btol) {
    lam_hi *= 2.0;
    if (++grow > 200) return at(lam_hi);  // budget set misses the box; caller checks membership
  }
  double lam_lo = 0.0;
  for (int it = 0; it < 200 && lam_hi - lam_lo > 1e-15 * lam_hi; ++it) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    if (dot(h.a, at(mid)) > h.b + btol) {
      lam_lo = mid;
    } else {
      lam_hi = mid;
    }
  }
  return at(lam_hi);
}

bool Region::contains(const Vec& x, double tol) const {
  for (const auto& part : parts_)
    if (distance_to(part, x) > tol * (1.0 + norm_inf(x))) return false;
  return true;
}

}  // namespace ccp
