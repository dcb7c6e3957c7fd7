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


// Plumbing behind the ccp command-line tool: instance generation, method
// dispatch, comparison tables and reports.

#ifndef CCP_CLI_HPP_
#define CCP_CLI_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccp/drccp.hpp"
#include "ccp/elliptical.hpp"
#include "ccp/errors.hpp"
#include "ccp/model.hpp"
#include "json.hpp"

namespace ccp::cli {

using nlohmann::json;

// Random families of the numerical study. Entries are integer uniforms:
//   linear     sum_j xi_j x_j <= 100, xi in [1,50], c in [-10,-1]
//   nonlinear  sum_j xi_j x_j^2 <= 100, xi in [1,99], c in [-10,-1]
//   covering   sum_j xi_j x_j >= 40, xi in [1,50], c in [1,10]
// all over x in [0,1]^n.
enum class Family { kLinear, kNonlinear, kCovering };

Family parse_family(const std::string& name);
const char* family_name(Family f);
CcpInstance generate_instance(Family f, std::size_t n, std::size_t N, double epsilon, std::uint64_t seed);

enum class Method { kAlsoX, kAlsoXPlus, kCvar, kDc, kOracle };

Method parse_method(const std::string& name);
const char* method_name(Method m);

struct RunConfig {
  double delta1 = 1e-2;
  double delta2 = 1e-2;
  std::optional<double> theta;
  std::optional<std::string> norm;
  std::optional<std::string> mode;
  std::uint64_t seed = 0;
};

struct Problem {
  std::variant<CcpInstance, EllipticalCcp> inst;
  std::optional<DrccpSpec> drccp;
};

// Detects elliptical documents and optional drccp blocks; the run config's
// theta/norm/mode override the block (or create one).
Problem load_problem(const std::string& text, const RunConfig& rc);

// ALSO-X with a difference-of-convex lower level: bisection on t, a budget
// is accepted when dc_solve from the hinge point is chance-feasible.
SolveReport solve_dc(const CcpInstance& inst, const BisectionConfig& cfg = {}, double delta2 = 1e-2);

SolveReport run_method(const Problem& prob, Method m, const RunConfig& rc);

// Exit codes: 0 ok, 1 usage/parse, 2 infeasible, 3 cap or iteration limit.
int exit_code(ErrorKind kind);
std::string error_line(const std::string& kind, const std::string& message);

json config_json(const RunConfig& rc);
json report_json(const SolveReport& rep, const RunConfig& rc);
std::string csv_number(double v);
std::string report_csv(const SolveReport& rep);

struct CompareRow {
  std::string method;
  std::optional<SolveReport> report;
  std::optional<double> improvement_pct;
  std::string error_kind;  // empty on success
  std::string error;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  // Orderings oracle <= alsox_plus <= alsox <= cvar (each + delta1) among
  // the methods that succeeded; only checked when X is convex.
  bool consistency_checked = false;
  bool consistent = true;
  std::vector<std::string> consistency_notes;
};

// CCP_SOLVE_THREADS when set (positive integer), else hardware concurrency.
unsigned solve_threads();

CompareReport compare(const Problem& prob, const std::vector<Method>& methods, const RunConfig& rc,
                      unsigned threads);
json compare_json(const CompareReport& rep, const RunConfig& rc);

struct BenchSpec {
  Family family = Family::kLinear;
  std::size_t n = 10;
  std::size_t N = 100;
  std::vector<double> epsilons{0.05};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Method> methods{Method::kCvar, Method::kAlsoX, Method::kAlsoXPlus};
};

// One row per (epsilon, seed, method); identical across runs apart from
// the time column.
std::string bench_csv(const BenchSpec& spec, const RunConfig& rc, unsigned threads);

}  // namespace ccp::cli

#endif  // CCP_CLI_HPP_
