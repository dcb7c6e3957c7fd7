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

// Euclidean projections onto the primitive pieces of X and onto their
// intersections (Dykstra).

#ifndef CCP_GEOMETRY_HPP_
#define CCP_GEOMETRY_HPP_

#include <vector>

#include "ccp/model.hpp"
#include "ccp/norm.hpp"
#include "ccp/vec.hpp"

namespace ccp {

// Box, single-row Halfspaces, NonNeg, Simplex or Affine; anything else
// throws UnsupportedSet.
Vec project(const SetPart& set, const Vec& y);

// Throws NoConvergenceError carrying the best iterate.
Vec dykstra_project(const std::vector<SetPart>& sets, const Vec& y, int max_iter = 10000,
                    double tol = 1e-9);

double distance_to(const SetPart& set, const Vec& y);

// S = X ∩ {c'x <= t} (or X alone when no budget is given), split into
// primitives. Box/orthant plus one halfspace is projected exactly by a
// one-dimensional multiplier search; other compositions go through Dykstra.
class Region {
 public:
  Region(const FeasibleSet& x_set, const Vec* cost, double t);
  explicit Region(std::vector<SetPart> parts, std::size_t dim);

  Vec project(const Vec& y) const;
  bool contains(const Vec& x, double tol) const;
  std::size_t dim() const { return dim_; }
  const std::vector<SetPart>& parts() const { return parts_; }

 private:
  void classify();

  std::size_t dim_;
  std::vector<SetPart> parts_;
  int fast_box_ = -1;        // index of the Box/NonNeg part on the fast path
  int fast_half_ = -1;       // index of the single halfspace on the fast path
};

}  // namespace ccp

#endif  // CCP_GEOMETRY_HPP_
