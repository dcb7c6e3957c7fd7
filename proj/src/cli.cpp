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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include "ccp/alsox.hpp"
#include "ccp/alsoxplus.hpp"
#include "ccp/cvar.hpp"
#include "ccp/oracle.hpp"

namespace ccp::cli {

Family parse_family(const std::string& name) {
  if (name == "linear") return Family::kLinear;
  if (name == "nonlinear") return Family::kNonlinear;
  if (name == "covering") return Family::kCovering;
  fail(ErrorKind::kValidation, "unknown family '" + name + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kLinear: return "linear";
    case Family::kNonlinear: return "nonlinear";
    case Family::kCovering: return "covering";
  }
  return "?";
}

CcpInstance generate_instance(Family f, std::size_t n, std::size_t N, double epsilon, std::uint64_t seed) {
  if (n == 0 || N == 0) fail(ErrorKind::kValidation, "n and N must be positive");
  std::mt19937_64 rng(seed);
  const int hi = f == Family::kNonlinear ? 99 : 50;
  std::uniform_int_distribution<int> xi_dist(1, hi);
  std::uniform_int_distribution<int> cost_dist(f == Family::kCovering ? 1 : -10, f == Family::kCovering ? 10 : -1);

  std::vector<Vec> xi(N, Vec(n));
  for (auto& row : xi)
    for (double& v : row) v = xi_dist(rng);
  Vec cost(n);
  for (double& v : cost) v = cost_dist(rng);

  CcpInstance inst;
  inst.n = n;
  inst.N = N;
  inst.p.assign(N, 1.0 / static_cast<double>(N));
  inst.x_set = make_box(Vec(n, 0.0), Vec(n, 1.0));
  inst.cost = cost;
  inst.epsilon = epsilon;
  switch (f) {
    case Family::kLinear: {
      BiAffine m;
      for (const Vec& row : xi) {
        Mat D(1, n);
        std::copy(row.begin(), row.end(), D.data.begin());
        m.D.push_back(D);
        m.e.push_back({100.0});
      }
      inst.model = std::move(m);
      break;
    }
    case Family::kNonlinear:
      inst.model = SeparablePower{2.0, xi, 100.0};
      break;
    case Family::kCovering: {
      Covering m;
      for (const Vec& row : xi) {
        Mat A(1, n);
        for (std::size_t j = 0; j < n; ++j) A(0, j) = row[j] / 40.0;
        m.A.push_back(A);
      }
      inst.model = std::move(m);
      break;
    }
  }
  validate(inst);
  return inst;
}

Method parse_method(const std::string& name) {
  if (name == "alsox") return Method::kAlsoX;
  if (name == "alsoxplus" || name == "alsox_plus") return Method::kAlsoXPlus;
  if (name == "cvar") return Method::kCvar;
  if (name == "dc") return Method::kDc;
  if (name == "oracle") return Method::kOracle;
  fail(ErrorKind::kValidation, "unknown method '" + name + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::kAlsoX: return "alsox";
    case Method::kAlsoXPlus: return "alsoxplus";
    case Method::kCvar: return "cvar";
    case Method::kDc: return "dc";
    case Method::kOracle: return "oracle";
  }
  return "?";
}

Problem load_problem(const std::string& text, const RunConfig& rc) {
  Problem prob;
  if (is_elliptical_document(text)) {
    EllipticalCcp e = load_elliptical(text);
    if (rc.theta) {
      if (*rc.theta < 0) fail(ErrorKind::kValidation, "theta must be nonnegative");
      e.theta = *rc.theta;
    }
    if (rc.norm) {
      if (*rc.norm == "mahalanobis") {
        e.wasserstein_norm = NormSpec::mahalanobis(e.sigma);
      } else {
        e.wasserstein_norm = parse_norm(*rc.norm, nullptr);
      }
    }
    prob.inst = std::move(e);
    return prob;
  }
  CcpInstance inst = load_instance(text);
  std::optional<DrccpSpec> spec = parse_drccp_block(text, inst);
  if (rc.theta || rc.norm || rc.mode) {
    if (!spec) spec = DrccpSpec{inst};
    if (rc.theta) spec->theta = *rc.theta;
    if (rc.norm) spec->norm = parse_norm(*rc.norm, nullptr);
    if (rc.mode) {
      if (*rc.mode == "dual") {
        spec->mode = DrccpMode::kDual;
      } else if (*rc.mode == "shift") {
        spec->mode = DrccpMode::kShift;
      } else {
        fail(ErrorKind::kValidation, "unknown mode '" + *rc.mode + "'");
      }
    }
    if (!(spec->theta >= 0) || !std::isfinite(spec->theta))
      fail(ErrorKind::kValidation, "theta must be finite and nonnegative");
  }
  prob.inst = std::move(inst);
  prob.drccp = std::move(spec);
  return prob;
}

SolveReport solve_dc(const CcpInstance& inst, const BisectionConfig& cfg, double delta2) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg);
  Bounds b;
  if (!cfg.t_lower || !cfg.t_upper) b = default_bounds(inst);
  if (cfg.t_lower) b.t_lower = *cfg.t_lower;
  if (cfg.t_upper) b.t_upper = *cfg.t_upper;

  DcConfig dc;
  dc.delta2 = delta2;
  const Vec ones(inst.N, 1.0);
  long runs = 0, rescued = 0;
  ProbeFn probe = [&](double t) {
    Probe p;
    LowerLevelSolution sol;
    try {
      sol = solve_lower_level(inst, t, {}, cfg.lower);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasibleBudget) throw;
      p.budget_empty = true;
      return p;
    }
    p.x = sol.x;
    p.value = sol.value;
    p.violation = violation_probability(inst, sol.x);
    p.feasible = p.violation <= inst.epsilon + kFeasTol;
    if (p.feasible) return p;
    ++runs;
    AmState st = dc_solve(inst, t, sol.x, ones, ones, dc);
    if (st.feasible) {
      ++rescued;
      p.x = st.x;
      p.value = st.objective;
      p.violation = violation_probability(inst, st.x);
      p.feasible = true;
    }
    return p;
  };
  BisectionResult br = bisect_budget(probe, b.t_lower, b.t_upper, cfg);

  SolveReport rep;
  rep.method = "dc";
  rep.backend = "subgradient";
  rep.t_star = br.t_upper;
  rep.x_star = br.best.x;
  fill_report(inst, rep);
  rep.iterations = br.probes;
  rep.lower_bound_used = br.lower_bound_used;
  rep.upper_bound_used = br.upper_bound_used;
  rep.settings = {{"delta1", cfg.delta1},
                  {"delta2", delta2},
                  {"dc_runs", static_cast<double>(runs)},
                  {"dc_rescues", static_cast<double>(rescued)}};
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveReport oracle_report(const CcpInstance& inst) {
  const auto t0 = std::chrono::steady_clock::now();
  OracleResult r = inst.x_set.is_binary() ? exact_solve_binary(inst) : exact_solve(inst);
  SolveReport rep;
  rep.method = "oracle";
  rep.backend = inst.x_set.is_binary() ? "enumeration" : "kept_sets";
  rep.x_star = r.x_star;
  rep.t_star = r.v_star;
  if (std::isfinite(r.v_star)) {
    fill_report(inst, rep);
  } else {
    rep.objective = r.v_star;  // unbounded
    rep.feasible = true;
    rep.violation_prob = 0.0;
  }
  rep.iterations = r.subsets;
  rep.lower_bound_used = r.v_star;
  rep.upper_bound_used = r.v_star;
  rep.wall_time = seconds_since(t0);
  return rep;
}

SolveReport run_elliptical(const EllipticalCcp& inst, Method m, const BisectionConfig& cfg) {
  switch (m) {
    case Method::kAlsoX:
      return also_x_elliptical(inst, cfg);
    case Method::kOracle: {
      const auto t0 = std::chrono::steady_clock::now();
      ConicSolution sol = solve_conic_exact(inst, inst.theta, 1e-6);
      SolveReport rep;
      rep.method = "oracle";
      rep.backend = "conic";
      rep.x_star = sol.x;
      rep.objective = sol.value;
      rep.t_star = sol.value;
      const double q = std_normal_quantile(1.0 - inst.epsilon);
      const EllipticalPoint pt = evaluate_point(inst, sol.x);
      rep.violation_prob = pt.sigma > 0 ? 1.0 - std_normal_cdf(pt.mean_margin / pt.sigma)
                                        : (pt.mean_margin >= 0 ? 0.0 : 1.0);
      rep.feasible = elliptical_feasible(inst, sol.x, inst.theta);
      rep.lower_bound_used = rep.upper_bound_used = sol.value;
      rep.settings = {{"margin", sol.margin}, {"quantile", q}, {"theta", inst.theta}};
      rep.wall_time = seconds_since(t0);
      return rep;
    }
    default:
      fail(ErrorKind::kBackendUnavailable,
           std::string("method ") + method_name(m) + " is not available for elliptical instances");
  }
}

}  // namespace

SolveReport run_method(const Problem& prob, Method m, const RunConfig& rc) {
  BisectionConfig cfg;
  cfg.delta1 = rc.delta1;
  if (!(rc.delta2 > 0)) fail(ErrorKind::kValidation, "delta2 must be positive");
  if (const auto* e = std::get_if<EllipticalCcp>(&prob.inst)) return run_elliptical(*e, m, cfg);

  const CcpInstance& base = std::get<CcpInstance>(prob.inst);
  AmConfig am_cfg;
  am_cfg.delta2 = rc.delta2;
  if (prob.drccp) {
    switch (m) {
      case Method::kAlsoX: return worst_case_solve(*prob.drccp, DrccpMethod::kAlsoX, cfg);
      case Method::kCvar: return worst_case_solve(*prob.drccp, DrccpMethod::kCvar, cfg);
      default: break;
    }
  }
  const CcpInstance inst = prob.drccp ? robustify(*prob.drccp) : base;
  SolveReport rep;
  switch (m) {
    case Method::kAlsoX: rep = also_x(inst, cfg); break;
    case Method::kAlsoXPlus: rep = also_x_plus(inst, cfg, am_cfg); break;
    case Method::kCvar: rep = solve_cvar(inst, cfg); break;
    case Method::kDc: rep = solve_dc(inst, cfg, rc.delta2); break;
    case Method::kOracle: rep = oracle_report(inst); break;
  }
  if (prob.drccp) rep.settings.emplace_back("theta", prob.drccp->theta);
  return rep;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNoFeasibleT:
    case ErrorKind::kInfeasible:
    case ErrorKind::kInfeasibleBudget:
      return 2;
    case ErrorKind::kCapExceeded:
    case ErrorKind::kNoConvergence:
    case ErrorKind::kCycleGuard:
      return 3;
    default:
      return 1;
  }
}

std::string error_line(const std::string& kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}}.dump();
}

namespace {

// JSON has no infinities; they are written as strings.
json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

json config_json(const RunConfig& rc) {
  json j{{"delta1", rc.delta1}, {"delta2", rc.delta2}, {"seed", rc.seed}};
  if (rc.theta) j["theta"] = *rc.theta;
  if (rc.norm) j["norm"] = *rc.norm;
  if (rc.mode) j["mode"] = *rc.mode;
  return j;
}

json report_json(const SolveReport& rep, const RunConfig& rc) {
  json x = json::array();
  for (double v : rep.x_star) x.push_back(number(v));
  json settings = json::object();
  for (const auto& [k, v] : rep.settings) settings[k] = number(v);
  return json{{"method", rep.method},
              {"backend", rep.backend},
              {"t_star", number(rep.t_star)},
              {"x_star", x},
              {"objective", number(rep.objective)},
              {"feasible", rep.feasible},
              {"violation_prob", number(rep.violation_prob)},
              {"iterations", rep.iterations},
              {"lower_bound_used", number(rep.lower_bound_used)},
              {"upper_bound_used", number(rep.upper_bound_used)},
              {"wall_time", rep.wall_time},
              {"settings", settings},
              {"config", config_json(rc)}};
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string report_csv(const SolveReport& rep) {
  std::ostringstream out;
  out << "method,backend,t_star,objective,feasible,violation_prob,iterations,lower_bound_used,"
         "upper_bound_used,wall_time,x_star\n";
  out << rep.method << ',' << rep.backend << ',' << csv_number(rep.t_star) << ',' << csv_number(rep.objective)
      << ',' << (rep.feasible ? 1 : 0) << ',' << csv_number(rep.violation_prob) << ',' << rep.iterations << ','
      << csv_number(rep.lower_bound_used) << ',' << csv_number(rep.upper_bound_used) << ','
      << csv_number(rep.wall_time) << ',';
  for (std::size_t i = 0; i < rep.x_star.size(); ++i) out << (i ? " " : "") << csv_number(rep.x_star[i]);
  out << '\n';
  return out.str();
}

unsigned solve_threads() {
  const char* env = std::getenv("CCP_SOLVE_THREADS");
  if (env != nullptr && *env != '\0') {
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto res = std::from_chars(env, end, v);
    if (res.ec != std::errc() || res.ptr != end || v == 0)
      fail(ErrorKind::kValidation, std::string("CCP_SOLVE_THREADS must be a positive integer, got '") + env + "'");
    return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs jobs[i]() for every i on at most `threads` workers; each job writes
// only its own slot.
template <class Job>
void run_parallel(std::size_t count, unsigned threads, const Job& job) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

CompareRow run_row(const Problem& prob, Method m, const RunConfig& rc) {
  CompareRow row;
  row.method = method_name(m);
  try {
    row.report = run_method(prob, m, rc);
  } catch (const Error& e) {
    row.error_kind = error_kind_name(e.kind());
    row.error = e.what();
  } catch (const std::exception& e) {
    row.error_kind = "Internal";
    row.error = e.what();
  }
  return row;
}

bool convex_problem(const Problem& prob) {
  const auto* inst = std::get_if<CcpInstance>(&prob.inst);
  return inst != nullptr && !inst->x_set.is_binary();
}

const SolveReport* find_report(const CompareReport& rep, const char* method) {
  for (const auto& row : rep.rows)
    if (row.method == method && row.report) return &*row.report;
  return nullptr;
}

}  // namespace

CompareReport compare(const Problem& prob, const std::vector<Method>& methods, const RunConfig& rc,
                      unsigned threads) {
  CompareReport rep;
  rep.rows.resize(methods.size());
  run_parallel(methods.size(), threads, [&](std::size_t i) { rep.rows[i] = run_row(prob, methods[i], rc); });

  const SolveReport* cvar = find_report(rep, "cvar");
  if (cvar != nullptr && std::isfinite(cvar->objective) && cvar->objective != 0.0) {
    for (auto& row : rep.rows) {
      if (row.method == "cvar" || !row.report || !std::isfinite(row.report->objective)) continue;
      row.improvement_pct = (cvar->objective - row.report->objective) / std::abs(cvar->objective) * 100.0;
    }
  }

  if (convex_problem(prob)) {
    rep.consistency_checked = true;
    const char* order[] = {"oracle", "alsoxplus", "alsox", "cvar"};
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const SolveReport* lo = find_report(rep, order[i]);
        const SolveReport* hi = find_report(rep, order[j]);
        if (lo == nullptr || hi == nullptr) continue;
        // The oracle is exact; the others carry the bisection gap.
        if (lo->objective > hi->objective + rc.delta1 + 1e-9) {
          rep.consistent = false;
          rep.consistency_notes.push_back(std::string(order[i]) + " > " + order[j] + " + delta1");
        }
      }
    }
  }
  return rep;
}

json compare_json(const CompareReport& rep, const RunConfig& rc) {
  json rows = json::array();
  for (const auto& row : rep.rows) {
    json r{{"method", row.method}};
    if (row.report) {
      r["objective"] = number(row.report->objective);
      r["feasible"] = row.report->feasible;
      r["violation_prob"] = number(row.report->violation_prob);
      r["time"] = row.report->wall_time;
      r["report"] = report_json(*row.report, rc);
    } else {
      r["error"] = row.error_kind;
      r["message"] = row.error;
    }
    if (row.improvement_pct) r["improvement_pct"] = *row.improvement_pct;
    rows.push_back(r);
  }
  json out{{"rows", rows}, {"config", config_json(rc)}};
  if (rep.consistency_checked) {
    out["consistency"] = json{{"holds", rep.consistent}, {"violations", rep.consistency_notes}};
  }
  return out;
}

std::string bench_csv(const BenchSpec& spec, const RunConfig& rc, unsigned threads) {
  struct Job {
    double epsilon;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double eps : spec.epsilons)
    for (std::uint64_t s : spec.seeds) jobs.push_back({eps, s});

  // Instances are independent; methods of one instance run in sequence so
  // the improvement column can refer to the CVaR row.
  std::vector<CompareReport> results(jobs.size());
  run_parallel(jobs.size(), threads, [&](std::size_t i) {
    Problem prob;
    prob.inst = generate_instance(spec.family, spec.n, spec.N, jobs[i].epsilon, jobs[i].seed);
    results[i] = compare(prob, spec.methods, rc, 1);
  });

  std::ostringstream out;
  out << "family,n,N,epsilon,seed,method,objective,feasible,violation_prob,improvement_pct,error,time\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (const auto& row : results[i].rows) {
      out << family_name(spec.family) << ',' << spec.n << ',' << spec.N << ',' << csv_number(jobs[i].epsilon) << ','
          << jobs[i].seed << ',' << row.method << ',';
      if (row.report) {
        out << csv_number(row.report->objective) << ',' << (row.report->feasible ? 1 : 0) << ','
            << csv_number(row.report->violation_prob) << ',';
      } else {
        out << ",,,";
      }
      if (row.improvement_pct) out << csv_number(*row.improvement_pct);
      out << ',' << row.error_kind << ',';
      if (row.report) out << csv_number(row.report->wall_time);
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace ccp::cli
