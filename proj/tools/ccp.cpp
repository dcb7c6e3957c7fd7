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


// ccp: solve, compare and benchmark chance-constrained programs.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccp/cli.hpp"
#include "ccp/errors.hpp"
#include "ccp/model.hpp"

namespace {

using namespace ccp;
using namespace ccp::cli;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kParse, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) fail(ErrorKind::kParse, "cannot write '" + out_path + "'");
  out << text;
}

struct Options {
  std::string instance;
  std::string method = "alsox";
  std::vector<std::string> methods{"cvar", "alsox", "alsoxplus"};
  std::string out;
  std::string format = "json";
  RunConfig rc;
  double theta = 0.0;
  std::string norm, mode;

  std::string family = "linear";
  std::size_t n = 10, N = 100;
  double epsilon = 0.05;
  std::vector<double> epsilons{0.05};
  std::vector<std::uint64_t> seeds{1};
};

void add_run_flags(CLI::App* cmd, Options& o, CLI::Option** theta, CLI::Option** norm, CLI::Option** mode) {
  cmd->add_option("--instance", o.instance, "instance document (JSON)")->required();
  cmd->add_option("--delta1", o.rc.delta1, "bisection tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--delta2", o.rc.delta2, "alternating-minimization tolerance")->check(CLI::PositiveNumber);
  *theta = cmd->add_option("--theta", o.theta, "Wasserstein radius")->check(CLI::NonNegativeNumber);
  *norm = cmd->add_option("--norm", o.norm, "l1|l2|linf|mahalanobis");
  *mode = cmd->add_option("--mode", o.mode, "dual|shift");
  cmd->add_option("--seed", o.rc.seed, "seed (recorded in the report)");
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
}

void finish_run_flags(Options& o, CLI::Option* theta, CLI::Option* norm, CLI::Option* mode) {
  if (theta->count() > 0) o.rc.theta = o.theta;
  if (norm->count() > 0) o.rc.norm = o.norm;
  if (mode->count() > 0) o.rc.mode = o.mode;
}

int run(int argc, char** argv) {
  CLI::App app{"Chance-constrained programs: ALSO-X, ALSO-X+, CVaR and exact baselines"};
  app.require_subcommand(1);
  Options o;
  CLI::Option *theta = nullptr, *norm = nullptr, *mode = nullptr;

  auto* solve = app.add_subcommand("solve", "solve one instance with one method");
  add_run_flags(solve, o, &theta, &norm, &mode);
  solve->add_option("--method", o.method, "alsox|alsoxplus|cvar|dc|oracle");
  solve->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::Option *c_theta = nullptr, *c_norm = nullptr, *c_mode = nullptr;
  auto* cmp = app.add_subcommand("compare", "run several methods and tabulate the improvement over CVaR");
  add_run_flags(cmp, o, &c_theta, &c_norm, &c_mode);
  cmp->add_option("--methods", o.methods, "methods to run")->delimiter(',');

  auto* orc = app.add_subcommand("oracle", "exact optimum by scenario enumeration");
  orc->add_option("--instance", o.instance, "instance document (JSON)")->required();
  orc->add_option("--out", o.out, "output path");

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--family", o.family, "linear|nonlinear|covering")->required();
  gen->add_option("--n", o.n, "decision dimension")->required();
  gen->add_option("--N", o.N, "number of scenarios")->required();
  gen->add_option("--epsilon", o.epsilon, "risk level")->required();
  gen->add_option("--seed", o.rc.seed, "random seed");
  gen->add_option("--out", o.out, "output path");

  auto* bench = app.add_subcommand("bench", "CSV table over generated instances");
  bench->add_option("--family", o.family, "linear|nonlinear|covering");
  bench->add_option("--n", o.n, "decision dimension");
  bench->add_option("--N", o.N, "number of scenarios");
  bench->add_option("--epsilon", o.epsilons, "risk levels")->delimiter(',');
  bench->add_option("--seeds", o.seeds, "seeds")->delimiter(',');
  bench->add_option("--methods", o.methods, "methods to run")->delimiter(',');
  bench->add_option("--delta1", o.rc.delta1, "bisection tolerance")->check(CLI::PositiveNumber);
  bench->add_option("--delta2", o.rc.delta2, "alternating-minimization tolerance")->check(CLI::PositiveNumber);
  bench->add_option("--out", o.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("Usage", e.what()) << '\n';
    return 1;
  }

  try {
    if (*solve) {
      finish_run_flags(o, theta, norm, mode);
      const Method m = parse_method(o.method);
      const Problem prob = load_problem(read_text(o.instance), o.rc);
      const SolveReport rep = run_method(prob, m, o.rc);
      emit(o.format == "csv" ? report_csv(rep) : report_json(rep, o.rc).dump(2) + "\n", o.out);
      return rep.feasible ? 0 : 2;
    }
    if (*cmp) {
      finish_run_flags(o, c_theta, c_norm, c_mode);
      std::vector<Method> ms;
      for (const auto& s : o.methods) ms.push_back(parse_method(s));
      const Problem prob = load_problem(read_text(o.instance), o.rc);
      const CompareReport rep = compare(prob, ms, o.rc, solve_threads());
      emit(compare_json(rep, o.rc).dump(2) + "\n", o.out);
      return 0;
    }
    if (*orc) {
      const Problem prob = load_problem(read_text(o.instance), o.rc);
      const SolveReport rep = run_method(prob, Method::kOracle, o.rc);
      emit(report_json(rep, o.rc).dump(2) + "\n", o.out);
      return 0;
    }
    if (*gen) {
      const CcpInstance inst = generate_instance(parse_family(o.family), o.n, o.N, o.epsilon, o.rc.seed);
      emit(dump_instance(inst) + "\n", o.out);
      return 0;
    }
    if (*bench) {
      BenchSpec spec;
      spec.family = parse_family(o.family);
      spec.n = o.n;
      spec.N = o.N;
      spec.epsilons = o.epsilons;
      spec.seeds = o.seeds;
      spec.methods.clear();
      for (const auto& s : o.methods) spec.methods.push_back(parse_method(s));
      emit(bench_csv(spec, o.rc, solve_threads()), o.out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << error_line(error_kind_name(e.kind()), e.what()) << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << error_line("Internal", e.what()) << '\n';
    return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
