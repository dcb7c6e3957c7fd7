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

// Distributionally robust chance constraints over an infinity-Wasserstein
// ball of radius theta around the empirical scenarios. The worst case of each
// scenario is again a finite-support instance, so every solver applies.

#ifndef CCP_DRCCP_HPP_
#define CCP_DRCCP_HPP_

#include <optional>
#include <string>

#include "ccp/alsox.hpp"
#include "ccp/model.hpp"
#include "ccp/norm.hpp"

namespace ccp {

enum class DrccpMode {
  kDual,   // add theta ||a(x)||_* to every bi-affine row
  kShift,  // replace scenarios by zeta + theta e (monotone models, L-inf ball)
};

struct DrccpSpec {
  CcpInstance base;
  double theta = 0.0;
  NormSpec norm = NormSpec::linf();
  DrccpMode mode = DrccpMode::kDual;
  Uncertain uncertain = Uncertain::kCoefficients;
};

// Throws ModeMismatch for unsupported model/mode pairs.
CcpInstance robustify(const DrccpSpec& spec);

enum class DrccpMethod { kAlsoX, kAlsoXPlus, kCvar };

SolveReport worst_case_solve(const DrccpSpec& spec, DrccpMethod method, const BisectionConfig& cfg = {});

// Reads an optional top-level "drccp" block; nullopt when absent.
std::optional<DrccpSpec> parse_drccp_block(const std::string& text, const CcpInstance& base);

}  // namespace ccp

#endif  // CCP_DRCCP_HPP_
