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


#include "ccp/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>
#include <sys/wait.h>

#include "test_util.hpp"

namespace ccp::cli {
namespace {

using ccp::testing::read_file;

std::string instance_path(const std::string& name) { return std::string(CCP_INSTANCE_DIR) + "/" + name; }

Problem problem(const std::string& name) { return load_problem(read_file(instance_path(name)), {}); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CCP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Gen, RangesAndDeterminism) {
  const CcpInstance lin = generate_instance(Family::kLinear, 20, 400, 0.05, 1);
  for (const Mat& D : std::get<BiAffine>(lin.model).D)
    for (double v : D.data) {
      EXPECT_GE(v, 1.0);
      EXPECT_LE(v, 50.0);
      EXPECT_EQ(v, std::round(v));
    }
  for (double c : lin.cost) {
    EXPECT_GE(c, -10.0);
    EXPECT_LE(c, -1.0);
  }
  const CcpInstance nl = generate_instance(Family::kNonlinear, 5, 50, 0.1, 2);
  const auto& sp = std::get<SeparablePower>(nl.model);
  EXPECT_EQ(sp.p, 2.0);
  EXPECT_EQ(sp.b, 100.0);
  for (const Vec& xi : sp.xi)
    for (double v : xi) {
      EXPECT_GE(v, 1.0);
      EXPECT_LE(v, 99.0);
    }
  const CcpInstance cov = generate_instance(Family::kCovering, 5, 50, 0.1, 3);
  for (double c : cov.cost) EXPECT_GE(c, 1.0);
  EXPECT_EQ(dump_instance(generate_instance(Family::kLinear, 4, 9, 0.1, 42)),
            dump_instance(generate_instance(Family::kLinear, 4, 9, 0.1, 42)));
  EXPECT_NE(dump_instance(generate_instance(Family::kLinear, 4, 9, 0.1, 42)),
            dump_instance(generate_instance(Family::kLinear, 4, 9, 0.1, 43)));
}

TEST(Compare, ImprovementOverCvar) {
  RunConfig rc;
  rc.delta1 = rc.delta2 = 1e-3;
  const CompareReport rep =
      compare(problem("ex33.json"), {Method::kCvar, Method::kAlsoX, Method::kAlsoXPlus}, rc, 3);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_FALSE(rep.rows[0].improvement_pct.has_value());
  ASSERT_TRUE(rep.rows[1].improvement_pct.has_value());
  EXPECT_NEAR(*rep.rows[1].improvement_pct, 0.0, 0.2);
  ASSERT_TRUE(rep.rows[2].improvement_pct.has_value());
  EXPECT_NEAR(*rep.rows[2].improvement_pct, 25.0, 0.5);
  EXPECT_TRUE(rep.consistency_checked);
  EXPECT_TRUE(rep.consistent);
}

TEST(Compare, CvarFailureDropsImprovement) {
  const CompareReport rep = compare(problem("exE1.json"), {Method::kCvar, Method::kAlsoX, Method::kOracle}, {}, 2);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_EQ(rep.rows[0].error_kind, "Infeasible");
  EXPECT_EQ(rep.rows[1].error_kind, "NoFeasibleT");
  ASSERT_TRUE(rep.rows[2].report.has_value());
  EXPECT_NEAR(rep.rows[2].report->objective, 1.0, 1e-9);
  for (const auto& row : rep.rows) EXPECT_FALSE(row.improvement_pct.has_value());
  const json j = compare_json(rep, {});
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_FALSE(j["rows"][2].contains("improvement_pct"));
}

TEST(Compare, GeneratedLinearInstance) {
  Problem prob;
  prob.inst = generate_instance(Family::kLinear, 10, 100, 0.1, 1);
  const CompareReport rep = compare(prob, {Method::kCvar, Method::kAlsoX}, {}, 2);
  ASSERT_TRUE(rep.rows[1].improvement_pct.has_value());
  EXPECT_GE(*rep.rows[1].improvement_pct, 0.0);
}

TEST(Report, SchemaIsStableAcrossMethods) {
  const std::set<std::string> keys{"method",      "backend",          "t_star",           "x_star",
                                   "objective",   "feasible",         "violation_prob",   "iterations",
                                   "lower_bound_used", "upper_bound_used", "wall_time", "settings", "config"};
  const Problem prob = problem("exB1.json");
  for (Method m : {Method::kAlsoX, Method::kAlsoXPlus, Method::kCvar, Method::kDc, Method::kOracle}) {
    const json j = report_json(run_method(prob, m, {}), {});
    std::set<std::string> got;
    for (auto it = j.begin(); it != j.end(); ++it) got.insert(it.key());
    EXPECT_EQ(got, keys) << method_name(m);
    EXPECT_EQ(j["config"]["delta1"], 0.01);
  }
}

TEST(Report, CsvNumbers) {
  EXPECT_EQ(csv_number(2.0), "2");
  EXPECT_EQ(csv_number(8.0 / 3.0), "2.66667");
  EXPECT_EQ(csv_number(-1.55432e-7), "-1.55432e-07");
  EXPECT_EQ(csv_number(-0.0), "0");
  EXPECT_EQ(csv_number(kInf), "inf");
}

TEST(Bench, DeterministicApartFromTime) {
  BenchSpec spec;
  spec.n = 4;
  spec.N = 20;
  spec.epsilons = {0.1};
  spec.seeds = {1, 2};
  spec.methods = {Method::kCvar, Method::kAlsoX};
  auto strip_time = [](const std::string& csv) {
    std::string out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
      const std::size_t eol = csv.find('\n', pos);
      const std::string line = csv.substr(pos, eol - pos);
      out += line.substr(0, line.rfind(',')) + "\n";
      pos = eol + 1;
    }
    return out;
  };
  const std::string a = bench_csv(spec, {}, 2), b = bench_csv(spec, {}, 1);
  EXPECT_EQ(strip_time(a), strip_time(b));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
}

TEST(Threads, EnvironmentCap) {
  setenv("CCP_SOLVE_THREADS", "3", 1);
  EXPECT_EQ(solve_threads(), 3u);
  setenv("CCP_SOLVE_THREADS", "zero", 1);
  EXPECT_THROW(solve_threads(), Error);
  unsetenv("CCP_SOLVE_THREADS");
  EXPECT_GE(solve_threads(), 1u);
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(run_cli("solve --instance " + instance_path("exB1.json") + " --method alsox"), 0);
  EXPECT_EQ(run_cli("solve --instance " + instance_path("exE1.json") + " --method alsox"), 2);
  EXPECT_EQ(run_cli("solve --instance " + instance_path("exB1.json") + " --method nosuch"), 1);
  EXPECT_EQ(run_cli("solve --instance /nonexistent.json"), 1);
  EXPECT_EQ(run_cli("solve"), 1);
  EXPECT_EQ(run_cli("oracle --instance " + instance_path("ex33.json")), 0);
  EXPECT_EQ(run_cli("gen --family linear --n 3 --N 5 --epsilon 0.2 --seed 1"), 0);
  EXPECT_EQ(run_cli("gen --family cubic --n 3 --N 5 --epsilon 0.2"), 1);
}

TEST(CliBinary, ErrorLineIsJson) {
  const std::string line = error_line("NoFeasibleT", "no budget");
  const json j = json::parse(line);
  EXPECT_EQ(j["error"], "NoFeasibleT");
  EXPECT_EQ(line.find('\n'), std::string::npos);
}

}  // namespace
}  // namespace ccp::cli
