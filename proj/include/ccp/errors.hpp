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

#ifndef CCP_ERRORS_HPP_
#define CCP_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace ccp {

enum class ErrorKind {
  kParse,
  kValidation,
  kIndex,
  kUnsupportedSet,
  kNoConvergence,
  kDimension,
  kCycleGuard,
  kBadStart,
  kNonFinite,
  kInfeasibleBudget,
  kBackendUnavailable,
  kNoFeasibleT,
  kInfeasible,
  kCapExceeded,
  kDomain,
  kNormMismatch,
  kModeMismatch,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the best iterate reached before giving up.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, std::vector<double> best)
      : Error(ErrorKind::kNoConvergence, what), best_(std::move(best)) {}
  const std::vector<double>& best() const { return best_; }

 private:
  std::vector<double> best_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace ccp

#endif  // CCP_ERRORS_HPP_
