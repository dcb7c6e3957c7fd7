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

#include "ccp/elliptical.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "ccp/errors.hpp"
#include "ccp/geometry.hpp"
#include "ccp/json_io.hpp"
#include "ccp/lowerlevel.hpp"
#include "ccp/subgrad.hpp"

namespace ccp {

// ---- Standard normal --------------------------------------------------------

double std_normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

double std_normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) fail(ErrorKind::kDomain, "quantile needs u in (0, 1)");
  if (u > 0.5) return -std_normal_quantile(1.0 - u);
  // Bisection on the implemented cdf, so cdf(quantile(u)) = u to rounding.
  double lo = -40.0, hi = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (std_normal_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double std_normal(NormalFn kind, double u) {
  switch (kind) {
    case NormalFn::kPdf: return std_normal_pdf(u);
    case NormalFn::kCdf: return std_normal_cdf(u);
    case NormalFn::kQuantile: return std_normal_quantile(u);
  }
  return 0.0;
}

EllipticalGenerator EllipticalGenerator::normal() {
  EllipticalGenerator g;
  g.pdf = std_normal_pdf;
  g.cdf = std_normal_cdf;
  g.quantile = std_normal_quantile;
  g.gbar = [](double v) { return std::exp(-v) / std::sqrt(2.0 * std::numbers::pi); };
  g.gaussian = true;
  return g;
}

EllipticalGenerator EllipticalGenerator::custom(std::function<double(double)> pdf, std::function<double(double)> cdf,
                                                std::function<double(double)> quantile,
                                                std::function<double(double)> gbar) {
  if (!pdf || !cdf || !quantile || !gbar) fail(ErrorKind::kValidation, "generator: all four callables are required");
  double prev = -kInf;
  for (double a = -8.0; a <= 8.0; a += 0.5) {
    const double v = cdf(a);
    if (!(v >= prev)) fail(ErrorKind::kValidation, "generator: cdf is not nondecreasing");
    prev = v;
  }
  EllipticalGenerator g;
  g.pdf = std::move(pdf);
  g.cdf = std::move(cdf);
  g.quantile = std::move(quantile);
  g.gbar = std::move(gbar);
  g.gaussian = false;
  return g;
}

// ---- Instance ---------------------------------------------------------------

void finalize_elliptical(EllipticalCcp& inst) {
  auto bad = [](const std::string& f, const std::string& w) { fail(ErrorKind::kValidation, f + ": " + w); };
  const std::size_t m = inst.m, n = inst.n;
  if (m == 0 || n == 0) bad("elliptical", "m and n must be positive");
  if (inst.mu.size() != m) bad("mu", "size differs from m");
  if (inst.sigma.rows != m || inst.sigma.cols != m) bad("sigma", "must be m x m");
  if (inst.A.rows != m || inst.A.cols != n) bad("A", "must be m x n");
  if (inst.a0.empty()) inst.a0.assign(m, 0.0);
  if (inst.a0.size() != m) bad("a0", "size differs from m");
  if (inst.b.size() != n) bad("b", "size differs from n");
  if (inst.cost.size() != n) bad("cost", "size differs from n");
  if (!(inst.epsilon > 0.0 && inst.epsilon < 1.0)) bad("epsilon", "must lie in (0, 1)");
  if (!(inst.theta >= 0.0) || !std::isfinite(inst.theta)) bad("theta", "must be finite and >= 0");
  if (inst.x_set.dim != n) bad("x_set", "dimension differs from n");
  for (const auto* v : {&inst.mu, &inst.a0, &inst.b, &inst.cost, &inst.sigma.data, &inst.A.data})
    if (!all_finite(*v)) bad("elliptical", "non-finite entry");
  inst.chol = NormSpec::mahalanobis(inst.sigma).chol;
}

EllipticalCcp load_elliptical(const std::string& text) {
  using namespace json_io;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("type", std::string()) != "elliptical_gaussian")
      fail(ErrorKind::kParse, "expected type \"elliptical_gaussian\"");
    EllipticalCcp inst;
    inst.mu = read_vec(need(j, "mu", "elliptical"), "mu");
    inst.b = read_vec(need(j, "b", "elliptical"), "b");
    inst.m = inst.mu.size();
    inst.n = inst.b.size();
    inst.sigma = read_mat(need(j, "sigma", "elliptical"), inst.m, inst.m, "sigma");
    inst.A = read_mat(need(j, "A", "elliptical"), inst.m, inst.n, "A");
    if (j.contains("a0")) inst.a0 = read_vec(j["a0"], "a0");
    inst.b0 = j.contains("b0") ? need_double(j, "b0", "elliptical") : 0.0;
    inst.cost = read_vec(need(j, "cost", "elliptical"), "cost");
    inst.epsilon = need_double(j, "epsilon", "elliptical");
    inst.theta = j.contains("theta") ? need_double(j, "theta", "elliptical") : 0.0;
    inst.x_set.dim = inst.n;
    if (j.contains("x_set")) read_set_parts(j["x_set"], inst.n, inst.x_set.parts);
    if (j.contains("wasserstein_norm")) {
      const std::string name = need(j, "wasserstein_norm", "elliptical").get<std::string>();
      inst.wasserstein_norm = parse_norm(name, &inst.sigma);
    }
    finalize_elliptical(inst);
    return inst;
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("unexpected JSON shape: ") + e.what());
  }
}

bool is_elliptical_document(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return j.is_object() && j.value("type", std::string()) == "elliptical_gaussian";
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

// ---- Closed forms -------------------------------------------------------------

namespace {

// Sigma a1 and the pieces of the margin; gm = grad m, gs = grad sigma.
struct Pieces {
  EllipticalPoint pt;
  Vec gm, gs;
};

Pieces pieces(const EllipticalCcp& inst, const Vec& x, bool grads) {
  if (x.size() != inst.n) fail(ErrorKind::kDimension, "x dimension differs from n");
  const std::size_t m = inst.m, n = inst.n;
  Pieces p;
  p.pt.a1 = inst.a0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) p.pt.a1[i] += inst.A(i, j) * x[j];
  Vec sa(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) sa[i] += inst.sigma(i, k) * p.pt.a1[k];
  p.pt.sigma = std::sqrt(std::max(0.0, dot(p.pt.a1, sa)));
  p.pt.mean_margin = dot(inst.b, x) + inst.b0 - dot(inst.mu, p.pt.a1);
  if (grads) {
    p.gm = inst.b;
    p.gs.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        p.gm[j] -= inst.A(i, j) * inst.mu[i];
        if (p.pt.sigma > 0) p.gs[j] += inst.A(i, j) * sa[i] / p.pt.sigma;
      }
    }
  }
  return p;
}

// Hinge with the mean margin shifted by -theta sigma (worst case over a
// Mahalanobis ball of radius theta).
double hinge_theta(const EllipticalCcp& inst, const Vec& x, double theta, Vec* grad) {
  const Pieces p = pieces(inst, x, grad != nullptr);
  const double sigma = p.pt.sigma;
  const double mm = p.pt.mean_margin - theta * sigma;
  if (sigma <= 1e-14) {
    if (grad != nullptr) {
      grad->assign(inst.n, 0.0);
      if (mm < 0)
        for (std::size_t j = 0; j < inst.n; ++j) (*grad)[j] = -p.gm[j];
    }
    return std::max(0.0, -mm);
  }
  const double alpha = mm / sigma;
  const double value = sigma * hinge_shape(inst.generator, alpha);
  if (grad != nullptr) {
    // d/dx sigma f(m/sigma) = Gbar(a^2/2) grad sigma + (Phi(a) - 1) grad m
    const double g0 = inst.generator.gbar(0.5 * alpha * alpha);
    const double g1 = -inst.generator.cdf(-alpha);
    grad->assign(inst.n, 0.0);
    for (std::size_t j = 0; j < inst.n; ++j) (*grad)[j] = g0 * p.gs[j] + g1 * (p.gm[j] - theta * p.gs[j]);
  }
  return value;
}

double margin_with(const EllipticalCcp& inst, const Vec& x, double k, Vec* grad) {
  const Pieces p = pieces(inst, x, grad != nullptr);
  if (grad != nullptr) {
    grad->assign(inst.n, 0.0);
    for (std::size_t j = 0; j < inst.n; ++j) (*grad)[j] = p.gm[j] - k * p.gs[j];
  }
  return p.pt.mean_margin - k * p.pt.sigma;
}

void check_robust_norm(const EllipticalCcp& inst, double theta) {
  if (theta == 0.0) return;
  if (!inst.wasserstein_norm || inst.wasserstein_norm->kind != NormKind::kMahalanobis)
    fail(ErrorKind::kNormMismatch, "robust margin needs the Mahalanobis norm of Sigma");
  const Mat& s = inst.wasserstein_norm->sigma;
  if (s.rows != inst.m) fail(ErrorKind::kNormMismatch, "Wasserstein Sigma differs in size from Sigma");
  for (std::size_t i = 0; i < s.data.size(); ++i)
    if (std::abs(s.data[i] - inst.sigma.data[i]) > 1e-12 * (1.0 + std::abs(inst.sigma.data[i])))
      fail(ErrorKind::kNormMismatch, "Wasserstein Sigma differs from the distribution's Sigma");
}

double min_cost(const EllipticalCcp& inst) {
  CcpInstance shell;
  shell.n = inst.n;
  shell.x_set = inst.x_set;
  shell.cost = inst.cost;
  shell.model = BiAffine{};
  return min_cost_over_x(shell);
}

SgdConfig elliptical_sgd() {
  SgdConfig cfg;
  cfg.max_iter = 20000;
  cfg.stall_window = 300;
  return cfg;
}

}  // namespace

EllipticalPoint evaluate_point(const EllipticalCcp& inst, const Vec& x) { return pieces(inst, x, false).pt; }

// Written with the upper tail 1 - F(a) = F(-a) (elliptical generators are
// symmetric) so that large positive a does not cancel.
double hinge_shape(const EllipticalGenerator& g, double alpha) {
  return g.gbar(0.5 * alpha * alpha) - alpha * g.cdf(-alpha);
}

double gaussian_hinge(const EllipticalCcp& inst, const Vec& x, Vec* grad) { return hinge_theta(inst, x, 0.0, grad); }

double conic_margin(const EllipticalCcp& inst, const Vec& x, Vec* grad) {
  return margin_with(inst, x, inst.generator.quantile(1.0 - inst.epsilon), grad);
}

double robust_conic_margin(const EllipticalCcp& inst, const Vec& x, double theta, Vec* grad) {
  if (!(theta >= 0.0)) fail(ErrorKind::kValidation, "theta must be >= 0");
  check_robust_norm(inst, theta);
  return margin_with(inst, x, inst.generator.quantile(1.0 - inst.epsilon) + theta, grad);
}

bool elliptical_feasible(const EllipticalCcp& inst, const Vec& x, double theta) {
  const double mg = robust_conic_margin(inst, x, theta);
  return mg >= -1e-9 * (1.0 + std::abs(dot(inst.b, x) + inst.b0));
}

ExactnessCondition exactness_condition(const EllipticalCcp& inst) {
  bool a_zero = true;
  for (double v : inst.A.data)
    if (v != 0.0) a_zero = false;
  if (a_zero) return ExactnessCondition::kConstantSigma;
  for (std::size_t j = 0; j < inst.n; ++j) {
    double g = inst.b[j];
    for (std::size_t i = 0; i < inst.m; ++i) g -= inst.A(i, j) * inst.mu[i];
    if (std::abs(g) > 1e-12 * (1.0 + std::abs(inst.b[j]))) return ExactnessCondition::kNone;
  }
  return ExactnessCondition::kConstantMean;
}

LowerLevelSolution solve_lower_level(const EllipticalCcp& inst, double t, const Vec& z,
                                     const LowerLevelOptions& opts) {
  (void)z;  // one constraint under a continuous law: there are no scenario weights
  if (!std::isfinite(t)) fail(ErrorKind::kDomain, "lower level: t must be finite");
  if (opts.hint != Backend::kAuto && opts.hint != Backend::kSgd && opts.hint != Backend::kClosedForm)
    fail(ErrorKind::kBackendUnavailable, "elliptical lower level uses the closed-form hinge");
  const Region S(inst.x_set, &inst.cost, t);
  Vec x0 = opts.warm_start ? *opts.warm_start : Vec(inst.n, 0.0);
  try {
    x0 = S.project(x0);
  } catch (const NoConvergenceError& e) {
    x0 = e.best();
  }
  if (!all_finite(x0) || !S.contains(x0, 1e-7)) fail(ErrorKind::kInfeasibleBudget, "budget set appears empty");
  SgdConfig cfg = opts.sgd.max_iter == SgdConfig{}.max_iter ? elliptical_sgd() : opts.sgd;
  cfg.target = std::max(cfg.target, 0.0);
  const double theta = inst.theta;
  const SgdResult r = minimize_projected([&](const Vec& x, Vec* g) { return hinge_theta(inst, x, theta, g); },
                                         [&](const Vec& y) { return S.project(y); }, x0, cfg);
  LowerLevelSolution sol;
  sol.x = r.x;
  sol.value = r.value;
  sol.s = {r.value};
  sol.backend = Backend::kClosedForm;
  return sol;
}

SolveReport also_x_elliptical(const EllipticalCcp& inst, const BisectionConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  check_config(cfg);
  check_robust_norm(inst, inst.theta);
  const double lo = cfg.t_lower ? *cfg.t_lower : min_cost(inst);
  const double hi = cfg.t_upper ? *cfg.t_upper : kInf;
  LowerLevelOptions opts = cfg.lower;
  ProbeFn probe = [&](double t) {
    Probe p;
    LowerLevelSolution sol;
    try {
      sol = solve_lower_level(inst, t, {}, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInfeasibleBudget) throw;
      p.budget_empty = true;
      return p;
    }
    opts.warm_start = sol.x;
    p.x = sol.x;
    p.value = sol.value;
    p.feasible = elliptical_feasible(inst, sol.x, inst.theta);
    p.violation = p.feasible ? 0.0 : 1.0;
    return p;
  };
  const BisectionResult br = bisect_budget(probe, lo, hi, cfg);

  SolveReport rep;
  rep.method = "alsox";
  rep.backend = backend_name(Backend::kClosedForm);
  rep.t_star = br.t_upper;
  rep.x_star = br.best.x;
  rep.objective = dot(inst.cost, rep.x_star);
  // The violation probability of a single linear constraint is 1 - Phi(m / sigma).
  const EllipticalPoint pt = evaluate_point(inst, rep.x_star);
  const double shifted = pt.mean_margin - inst.theta * pt.sigma;
  rep.violation_prob = pt.sigma > 0 ? 1.0 - inst.generator.cdf(shifted / pt.sigma) : (shifted >= 0 ? 0.0 : 1.0);
  rep.feasible = elliptical_feasible(inst, rep.x_star, inst.theta);
  rep.iterations = br.probes;
  rep.lower_bound_used = br.lower_bound_used;
  rep.upper_bound_used = br.upper_bound_used;
  rep.settings = {{"delta1", cfg.delta1}, {"theta", inst.theta}, {"t_lower_final", br.t_lower},
                  {"t_upper_final", br.t_upper}};
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ConicSolution solve_conic_exact(const EllipticalCcp& inst, double theta, double tol) {
  check_robust_norm(inst, theta);
  const double k = inst.generator.quantile(1.0 - inst.epsilon) + theta;
  SgdConfig sgd = elliptical_sgd();
  Vec warm(inst.n, 0.0);
  ProbeFn probe = [&](double t) {
    Probe p;
    const Region S(inst.x_set, &inst.cost, t);
    Vec x0;
    try {
      x0 = S.project(warm);
    } catch (const NoConvergenceError& e) {
      x0 = e.best();
    }
    if (!all_finite(x0) || !S.contains(x0, 1e-7)) {
      p.budget_empty = true;
      return p;
    }
    SgdConfig c = sgd;
    c.target = -1e-9;  // any nonnegative margin settles the probe
    auto neg = [&](const Vec& x, Vec* g) {
      const double v = margin_with(inst, x, k, g);
      if (g != nullptr)
        for (double& e : *g) e = -e;
      return -v;
    };
    const SgdResult r = minimize_projected(neg, [&](const Vec& y) { return S.project(y); }, x0, c);
    warm = r.x;
    p.x = r.x;
    p.value = -r.value;
    p.feasible = -r.value >= -1e-9;
    return p;
  };
  BisectionConfig bc;
  bc.delta1 = tol;
  const BisectionResult br = bisect_budget(probe, min_cost(inst), kInf, bc);
  ConicSolution sol;
  sol.x = br.best.x;
  sol.value = dot(inst.cost, sol.x);
  sol.margin = margin_with(inst, sol.x, k, nullptr);
  return sol;
}

}  // namespace ccp
