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


// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccp/alsox.hpp"
#include "ccp/alsoxplus.hpp"
#include "ccp/cli.hpp"
#include "ccp/covering.hpp"
#include "ccp/cvar.hpp"
#include "ccp/drccp.hpp"
#include "ccp/elliptical.hpp"
#include "ccp/errors.hpp"
#include "ccp/lp.hpp"
#include "ccp/oracle.hpp"

namespace {

using namespace ccp;

constexpr double kDelta1 = 1e-2;

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(CCP_INSTANCE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CcpInstance load(const std::string& name) { return load_instance(read_file(name)); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome c1() {
  Outcome o;
  const auto t0 = Clock::now();
  const CcpInstance inst = load("exB1.json");
  const double v = exact_solve(inst).v_star;
  const double a = also_x(inst).objective;
  const double c = solve_cvar(inst).objective;
  const double secs = since(t0);
  o.check(v == 2.0, "oracle = 2");
  o.check(a >= 2.0 - 1e-12 && a <= 2.0 + kDelta1, "also_x in [2, 2+delta1]");
  o.check(near(c, 8.0 / 3.0, 1e-6), "cvar = 8/3");
  o.check(secs < 1.0, "runtime < 1 s");
  o.note("v*=" + fmt(v) + " alsox=" + fmt(a) + " cvar=" + fmt(c) + " t=" + fmt(secs) + "s");
  return o;
}

Outcome c2() {
  Outcome o;
  const auto t0 = Clock::now();
  const CcpInstance inst = load("ex33.json");
  const double v = exact_solve(inst).v_star;
  const double a = also_x(inst).objective;
  BisectionConfig cfg;
  cfg.delta1 = 1e-3;
  AmConfig ac;
  ac.delta2 = 1e-3;
  const double ap = also_x_plus(inst, cfg, ac).objective;
  const double secs = since(t0);
  o.check(near(v, 0.5, 1e-9), "oracle = 0.5");
  o.check(near(a, 2.0 / 3.0, kDelta1), "also_x = 2/3");
  o.check(ap <= 0.5 + 2e-3, "also_x_plus <= 0.502");
  o.check(secs < 1.0, "runtime < 1 s");
  o.note("v*=" + fmt(v) + " alsox=" + fmt(a) + " alsox+=" + fmt(ap) + " t=" + fmt(secs) + "s");
  return o;
}

Outcome c3() {
  Outcome o;
  const CcpInstance inst = load("ex33.json");
  const AmState st = am(inst, 0.5, Vec(3, 1.0));
  o.check(st.feasible, "AM state chance-feasible");
  o.check(near(st.s[0], 0.0, 1e-3) && near(st.s[1], 0.5, 1e-3) && near(st.s[2], 0.0, 1e-3), "AM s = (0,0.5,0)");
  const AmState dc = dc_solve(inst, 0.5, {}, Vec(3, 1.0), Vec(3, 1.0));
  o.check(!dc.feasible, "DC chance-infeasible");
  o.check(near(dc.s[0], 0.0, 1e-2) && near(dc.s[1], 0.25, 1e-2) && near(dc.s[2], 0.25, 1e-2),
          "DC s = (0,0.25,0.25)");
  o.note("AM s=(" + fmt(st.s[0]) + "," + fmt(st.s[1]) + "," + fmt(st.s[2]) + ") DC s=(" + fmt(dc.s[0]) + "," +
         fmt(dc.s[1]) + "," + fmt(dc.s[2]) + ")");
  return o;
}

Outcome c4() {
  Outcome o;
  const CcpInstance inst = load("ex34.json");
  const bool holds = std::holds_alternative<NullspaceHolds>(check_nullspace_property(inst));
  const double v = exact_solve(inst).v_star;
  const double a = also_x(inst).objective;
  o.check(holds, "nullspace property holds");
  o.check(near(a, v, kDelta1), "also_x = oracle");
  o.check(near(a, 0.5, kDelta1), "also_x = 0.5");
  o.note("v*=" + fmt(v) + " alsox=" + fmt(a) + " (x=(-1,1) is feasible at cost 0, so 0.5 is unreachable)");
  return o;
}

Outcome c5() {
  Outcome o;
  const CcpInstance inst = load("exB2.json");
  BisectionConfig cfg;
  cfg.lower.hint = Backend::kEnumeration;
  const SolveReport r = also_x(inst, cfg);
  const double v = exact_solve(inst).v_star;
  o.check(r.backend == "enumeration", "enumeration backend");
  o.check(near(r.objective, 1.0, 1e-12) && near(v, 1.0, 1e-12), "also_x = 1 = oracle");
  o.note("v*=" + fmt(v) + " alsox=" + fmt(r.objective) + " backend=" + r.backend);
  return o;
}

Outcome c6() {
  Outcome o;
  const auto t0 = Clock::now();
  const CcpInstance inst = covering_tight_family(10, 0.25);
  const double v = exact_solve(inst).v_star;
  const double a = also_x(inst).objective;
  const ScaledSolution rs = relax_and_scale(inst);
  const double secs = since(t0);
  o.check(near(v, 1.0, 1e-9), "oracle = 1");
  o.check(near(a, 3.0, kDelta1), "also_x = 3");
  o.check(near(a / v, static_cast<double>(inst.max_drops() + 1), kDelta1), "ratio = floor(N eps) + 1");
  o.check(rs.value <= 3.0 + 1e-9, "relax_and_scale <= 3");
  o.check(secs < 5.0, "runtime < 5 s");
  o.note("v*=" + fmt(v) + " alsox=" + fmt(a) + " scaled=" + fmt(rs.value) + " t=" + fmt(secs) + "s");
  return o;
}

// Independent optimum of the Gaussian example in polar coordinates.
double polar_optimum(double q) {
  double best = 0.0, best_phi = 0.0;
  auto val = [&](double phi) {
    const double gain = std::cos(phi) + 3.0 * std::sin(phi);
    const double den = 2.0 * std::cos(phi) + std::sin(phi) + q;
    return (gain <= 0 || den <= 0) ? 0.0 : -gain / den;
  };
  for (int i = 0; i < 100000; ++i) {
    const double phi = 2.0 * M_PI * i / 100000.0;
    if (val(phi) < best) best = val(phi), best_phi = phi;
  }
  double lo = best_phi - 1e-4, hi = best_phi + 1e-4;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    (val(m1) < val(m2) ? hi : lo) = val(m1) < val(m2) ? m2 : m1;
  }
  return val(0.5 * (lo + hi));
}

Outcome c7() {
  Outcome o;
  const auto t0 = Clock::now();
  const EllipticalCcp inst = load_elliptical(read_file("exB3.json"));
  const ConicSolution ex = solve_conic_exact(inst);
  const SolveReport a = also_x_elliptical(inst);
  const double polar = polar_optimum(std_normal_quantile(1.0 - inst.epsilon));
  const double secs = since(t0);
  o.check(near(ex.value, -1.55432, 1e-3), "conic optimum = -1.55432");
  o.check(near(ex.value, polar, 1e-4), "conic optimum matches polar oracle");
  o.check(a.objective >= -1.43, "also_x_elliptical >= -1.43");
  o.check(a.feasible, "also_x_elliptical feasible");
  o.check(secs < 10.0, "runtime < 10 s");
  o.note("conic=" + fmt(ex.value) + " polar=" + fmt(polar) + " alsox=" + fmt(a.objective) + " t=" + fmt(secs) + "s");
  return o;
}

CcpInstance random_biaffine(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 3), scen(4, 8), rows(1, 2);
  std::uniform_real_distribution<double> coef(-1.0, 2.0), rhs(0.5, 2.0), cost(-2.0, 1.0);
  CcpInstance inst;
  inst.n = dim(rng);
  inst.N = scen(rng);
  inst.epsilon = 0.25;
  inst.p.assign(inst.N, 1.0 / inst.N);
  inst.x_set = make_box(Vec(inst.n, 0.0), Vec(inst.n, 10.0));
  BiAffine m;
  const int r = rows(rng);
  for (std::size_t k = 0; k < inst.N; ++k) {
    Mat D(r, inst.n);
    for (double& v : D.data) v = coef(rng);
    Vec e(r);
    for (double& v : e) v = rhs(rng);
    m.D.push_back(D);
    m.e.push_back(e);
  }
  inst.model = std::move(m);
  inst.cost.resize(inst.n);
  for (double& v : inst.cost) v = cost(rng);
  validate(inst);
  return inst;
}

Outcome c8() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  int gaps = 0, bad_oracle = 0, bad_cvar = 0, bad_plus = 0, bad_mono = 0, bad_theta0 = 0, bad_wc = 0, errors = 0;
  for (int i = 0; i < 50; ++i) {
    const CcpInstance inst = random_biaffine(rng);
    try {
      const double v = exact_solve(inst).v_star;
      const SolveReport a = also_x(inst);
      const SolveReport c = solve_cvar(inst);
      AmTrace trace;
      const SolveReport ap = also_x_plus(inst, {}, {}, &trace);
      for (const SolveReport* r : {&a, &c, &ap})
        if (!(v <= r->objective + kDelta1) || !r->feasible) ++bad_oracle;
      if (a.objective > v + 1e-6) ++gaps;
      if (!(a.objective <= c.objective + kDelta1)) ++bad_cvar;
      if (!(ap.objective <= a.objective + kDelta1)) ++bad_plus;
      for (const auto& h : trace)
        for (std::size_t j = 1; j < h.size(); ++j)
          if (h[j] > h[j - 1] + 1e-9) ++bad_mono;
      const SolveReport w0 = worst_case_solve({inst, 0.0}, DrccpMethod::kAlsoX);
      if (!near(w0.objective, a.objective, kDelta1)) ++bad_theta0;
      for (double theta : {0.05, 0.1}) {
        const DrccpSpec spec{inst, theta};
        const double wa = worst_case_solve(spec, DrccpMethod::kAlsoX).objective;
        const double wc = worst_case_solve(spec, DrccpMethod::kCvar).objective;
        if (!(wa <= wc + kDelta1)) ++bad_wc;
      }
    } catch (const Error& e) {
      ++errors;
      o.note(std::string("instance ") + std::to_string(i) + ": " + e.what());
    }
  }
  const double secs = since(t0);
  o.check(errors == 0, "no solver errors");
  o.check(bad_oracle == 0, "oracle <= every method + delta1 (" + std::to_string(bad_oracle) + ")");
  o.check(bad_cvar == 0, "also_x <= cvar + delta1 (" + std::to_string(bad_cvar) + ")");
  o.check(bad_plus == 0, "also_x_plus <= also_x + delta1 (" + std::to_string(bad_plus) + ")");
  o.check(bad_mono == 0, "AM histories monotone (" + std::to_string(bad_mono) + ")");
  o.check(bad_theta0 == 0, "robustify(0) = regular (" + std::to_string(bad_theta0) + ")");
  o.check(bad_wc == 0, "worst-case also_x <= worst-case cvar (" + std::to_string(bad_wc) + ")");
  o.check(secs < 120.0, "runtime < 2 min");
  o.note("50 instances, also_x above v* on " + std::to_string(gaps) + ", t=" + fmt(secs) + "s");
  return o;
}

Outcome c9() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // B.3 data plus a correlated three-dimensional instance.
  std::vector<EllipticalCcp> insts{load_elliptical(read_file("exB3.json"))};
  EllipticalCcp r;
  r.m = 3;
  r.n = 2;
  r.mu = {0.5, -0.3, 1.0};
  Mat L(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) L(i, j) = i == j ? 1.0 : 0.4 * u(rng);
  r.sigma = Mat(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r.sigma(i, j) += L(i, k) * L(j, k);
  r.A = Mat(3, 2);
  for (double& v : r.A.data) v = u(rng);
  r.a0 = {0.2, 0.1, -0.3};
  r.b = {0.3, -0.2};
  r.b0 = 0.5;
  r.x_set = make_free(2);
  r.cost = {1.0, 1.0};
  finalize_elliptical(r);
  insts.push_back(r);

  int worst_point = -1;
  double worst_z = 0.0;
  for (int pt = 0; pt < 20; ++pt) {
    const EllipticalCcp& inst = insts[pt % 2];
    // Points where the hinge is large enough for the sample to see it.
    Vec x{u(rng), u(rng)};
    EllipticalPoint ep = evaluate_point(inst, x);
    while (!(ep.sigma > 1e-3 && ep.mean_margin / ep.sigma < 2.5)) {
      x = {u(rng), u(rng)};
      ep = evaluate_point(inst, x);
    }
    const double b1 = dot(inst.b, x) + inst.b0;
    const int M = 1000000;
    double sum = 0.0, sq = 0.0;
    Vec w(inst.m), xi(inst.m);
    for (int s = 0; s < M; ++s) {
      for (double& v : w) v = z(rng);
      for (std::size_t i = 0; i < inst.m; ++i) {
        xi[i] = inst.mu[i];
        for (std::size_t k = 0; k <= i; ++k) xi[i] += inst.chol(i, k) * w[k];
      }
      const double v = std::max(0.0, dot(xi, ep.a1) - b1);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / M;
    const double se = std::sqrt(std::max(0.0, sq / M - mean * mean) / M);
    const double zscore = std::abs(gaussian_hinge(inst, x) - mean) / se;
    if (zscore > worst_z) worst_z = zscore, worst_point = pt;
  }
  o.check(worst_z <= 3.0, "closed form within 3 SE of Monte Carlo at all 20 points");

  const EllipticalGenerator g = EllipticalGenerator::normal();
  bool positive = true, decreasing = true;
  double prev = kInf;
  for (double a = -10.0; a <= 8.0; a += 1e-3) {
    const double f = hinge_shape(g, a);
    positive = positive && f > 0.0;
    decreasing = decreasing && f < prev;
    prev = f;
  }
  o.check(positive, "f(alpha) > 0 on grid");
  o.check(decreasing, "f(alpha) decreasing on grid");
  const double secs = since(t0);
  o.check(secs < 30.0, "runtime < 30 s");
  o.note("max |z|=" + fmt(worst_z) + " at point " + std::to_string(worst_point) + " t=" + fmt(secs) + "s");
  return o;
}

Outcome c10() {
  Outcome o;
  const auto t0 = Clock::now();
  cli::BenchSpec spec;
  spec.n = 10;
  spec.N = 100;
  spec.methods = {cli::Method::kCvar, cli::Method::kAlsoX, cli::Method::kAlsoXPlus};
  const unsigned threads = cli::solve_threads();
  for (double eps : {0.05, 0.1}) {
    double imp_a = 0.0, imp_p = 0.0;
    int count = 0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      cli::Problem prob;
      prob.inst = cli::generate_instance(cli::Family::kLinear, spec.n, spec.N, eps, seed);
      const cli::CompareReport rep = cli::compare(prob, spec.methods, {}, threads);
      if (!rep.rows[1].improvement_pct || !rep.rows[2].improvement_pct) {
        ok = false;
        continue;
      }
      imp_a += *rep.rows[1].improvement_pct;
      imp_p += *rep.rows[2].improvement_pct;
      ++count;
    }
    o.check(ok, "all runs succeeded at eps=" + fmt(eps));
    if (count == 0) continue;
    imp_a /= count;
    imp_p /= count;
    o.check(imp_a >= 0.0, "mean improvement(alsox) >= 0 at eps=" + fmt(eps));
    o.check(imp_p >= imp_a, "mean improvement(alsox+) >= alsox at eps=" + fmt(eps));
    o.note("eps=" + fmt(eps) + ": alsox " + fmt(imp_a) + "%, alsox+ " + fmt(imp_p) + "%");
  }
  const double secs = since(t0);
  o.check(secs < 300.0, "runtime < 5 min");
  o.note("t=" + fmt(secs) + "s");
  return o;
}

Outcome c11() {
  Outcome o;
  std::mt19937_64 rng(424242);
  double worst = 0.0;
  int cert_fail = 0, optimal = 0;
  for (int i = 0; i < 30; ++i) {
    const CcpInstance inst = random_biaffine(rng);
    const double t = min_cost_over_x(inst) * 0.5;  // between min over X and 0 = c'0
    LpBuilder b;
    LpEncoder enc(b, inst, t);
    for (std::size_t k = 0; k < inst.N; ++k) {
      const auto s = b.add_var(0.0, kInf, inst.p[k]);
      enc.add_scenario(k, {{s, -1.0}});
    }
    const LpProblem lp = b.build();
    const LpOutcome out = solve_lp(lp);
    if (!out.optimal()) {
      ++cert_fail;
      continue;
    }
    ++optimal;
    std::string why;
    if (!verify_certificate(lp, out, 1e-6, &why)) ++cert_fail;

    LowerLevelOptions opts;
    opts.hint = Backend::kSgd;
    opts.sgd.max_iter = 20000;
    const LowerLevelSolution sgd = solve_lower_level(inst, t, {}, opts);
    worst = std::max(worst, std::abs(sgd.value - out.value));
    LowerLevelOptions lpo;
    lpo.hint = Backend::kLp;
    worst = std::max(worst, std::abs(solve_lower_level(inst, t, {}, lpo).value - out.value));
  }
  o.check(worst <= 1e-3, "|LP - SGD| <= 1e-3");
  o.check(cert_fail == 0 && optimal == 30, "dual certificates verify");
  o.note("max |LP-SGD|=" + fmt(worst) + " optimal=" + std::to_string(optimal));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 single-variable triple", c1},       {"2 two-variable suite", c2},
      {"3 AM vs DC", c3},                     {"4 equality exactness", c4},
      {"5 set-covering exactness", c5},       {"6 covering tightness", c6},
      {"7 Gaussian example", c7},             {"8 random property suite", c8},
      {"9 closed-form hinge", c9},            {"10 scaled linear experiment", c10},
      {"11 backend cross-validation", c11},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
