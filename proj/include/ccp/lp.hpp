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

// Dense two-phase primal simplex with Bland's rule.
//
//   min c'x  s.t.  A x <= b,  E x = f,  lo <= x <= hi   (bounds may be infinite)

#ifndef CCP_LP_HPP_
#define CCP_LP_HPP_

#include <string>
#include <utility>
#include <vector>

#include "ccp/vec.hpp"

namespace ccp {

struct LpProblem {
  Vec c;
  Mat A;
  Vec b;
  Mat E;
  Vec f;
  Vec lo, hi;

  std::size_t num_vars() const { return c.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  Vec x;
  double value = 0.0;
  // Multipliers in the convention c + A'y + E'lambda = reduced costs, y >= 0.
  Vec y;
  Vec lambda;
  long pivots = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

// Throws DimensionError on inconsistent shapes and CycleGuardTripped when the
// pivot count exceeds 50 (rows + cols).
LpOutcome solve_lp(const LpProblem& problem);

// Recomputes the dual certificate of an Optimal outcome: primal feasibility,
// dual sign conditions, complementary slackness and the duality gap, all to tol.
bool verify_certificate(const LpProblem& problem, const LpOutcome& out, double tol = 1e-6,
                        std::string* why = nullptr);

// Incremental row-wise construction with sparse rows.
class LpBuilder {
 public:
  using Row = std::vector<std::pair<std::size_t, double>>;

  std::size_t add_var(double lo, double hi, double cost = 0.0);
  void set_cost(std::size_t j, double cost) { c_[j] = cost; }
  void add_le(Row row, double rhs) { le_.push_back({std::move(row), rhs}); }
  void add_ge(Row row, double rhs);
  void add_eq(Row row, double rhs) { eq_.push_back({std::move(row), rhs}); }
  std::size_t num_vars() const { return c_.size(); }
  std::size_t num_le() const { return le_.size(); }
  LpProblem build() const;

 private:
  Vec c_, lo_, hi_;
  std::vector<std::pair<Row, double>> le_, eq_;
};

}  // namespace ccp

#endif  // CCP_LP_HPP_
