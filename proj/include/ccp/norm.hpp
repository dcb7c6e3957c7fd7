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

#ifndef CCP_NORM_HPP_
#define CCP_NORM_HPP_

#include <string>

#include "ccp/vec.hpp"

namespace ccp {

enum class NormKind { kL1, kL2, kLInf, kMahalanobis };

struct NormSpec {
  NormKind kind = NormKind::kL2;
  Mat sigma;     // Mahalanobis only
  Mat chol;      // lower Cholesky factor of sigma
  Mat sigma_inv;

  static NormSpec l1() { return {NormKind::kL1, {}, {}, {}}; }
  static NormSpec l2() { return {NormKind::kL2, {}, {}, {}}; }
  static NormSpec linf() { return {NormKind::kLInf, {}, {}, {}}; }
  // Throws ValidationError unless sigma is symmetric positive definite.
  static NormSpec mahalanobis(const Mat& sigma);
};

NormSpec parse_norm(const std::string& name, const Mat* sigma);
const char* norm_name(NormKind kind);

// ||y|| for the norm itself; Mahalanobis is sqrt(y' sigma^-1 y).
double norm(const NormSpec& spec, const Vec& y);
// ||y||_*: L1 -> max|y|, LInf -> sum|y|, L2 -> ||y||_2, Mahalanobis -> sqrt(y' sigma y).
double dual_norm(const NormSpec& spec, const Vec& y);
// One subgradient of the dual norm at y.
Vec dual_norm_subgradient(const NormSpec& spec, const Vec& y);

}  // namespace ccp

#endif  // CCP_NORM_HPP_
