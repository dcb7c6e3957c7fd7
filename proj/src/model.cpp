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

#include "ccp/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <json.hpp>

#include "ccp/errors.hpp"
#include "ccp/json_io.hpp"

namespace ccp {

using nlohmann::json;

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kIndex: return "IndexError";
    case ErrorKind::kUnsupportedSet: return "UnsupportedSet";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kDimension: return "DimensionError";
    case ErrorKind::kCycleGuard: return "CycleGuardTripped";
    case ErrorKind::kBadStart: return "BadStart";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kInfeasibleBudget: return "InfeasibleBudget";
    case ErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case ErrorKind::kNoFeasibleT: return "NoFeasibleT";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kDomain: return "DomainError";
    case ErrorKind::kNormMismatch: return "NormMismatch";
    case ErrorKind::kModeMismatch: return "ModeMismatch";
  }
  return "Error";
}

// ---- FeasibleSet ----------------------------------------------------------

bool FeasibleSet::is_binary() const {
  for (const auto& p : parts)
    if (std::holds_alternative<BinarySet>(p)) return true;
  return false;
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim) return false;
  for (const auto& part : parts) {
    bool ok = std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BoxSet>) {
            for (std::size_t j = 0; j < dim; ++j)
              if (x[j] < s.lower[j] - tol || x[j] > s.upper[j] + tol) return false;
          } else if constexpr (std::is_same_v<T, HalfspacesSet>) {
            for (const auto& r : s.rows)
              if (dot(r.a, x) > r.b + tol * (1 + std::abs(r.b))) return false;
          } else if constexpr (std::is_same_v<T, NonNegSet>) {
            for (double v : x)
              if (v < -tol) return false;
          } else if constexpr (std::is_same_v<T, SimplexSet>) {
            double sum = 0;
            for (double v : x) {
              if (v < -tol) return false;
              sum += v;
            }
            if (std::abs(sum - s.sum) > tol * (1 + std::abs(s.sum))) return false;
          } else if constexpr (std::is_same_v<T, AffineSet>) {
            for (std::size_t r = 0; r < s.U.rows; ++r)
              if (std::abs(dot(s.U.row(r), x.data(), dim) - s.h[r]) > tol * (1 + std::abs(s.h[r])))
                return false;
          } else {
            for (double v : x)
              if (std::abs(v) > tol && std::abs(v - 1) > tol) return false;
          }
          return true;
        },
        part);
    if (!ok) return false;
  }
  return true;
}

AffineSet make_affine_set(Mat U, Vec h) {
  if (U.rows != h.size()) fail(ErrorKind::kValidation, "x_set.h: size must match rows of U");
  Eigen::MatrixXd u(U.rows, U.cols);
  for (std::size_t i = 0; i < U.rows; ++i)
    for (std::size_t j = 0; j < U.cols; ++j) u(i, j) = U(i, j);
  Eigen::MatrixXd pi = u.completeOrthogonalDecomposition().pseudoInverse();
  auto pinv = std::make_shared<Mat>(U.cols, U.rows);
  for (std::size_t i = 0; i < U.cols; ++i)
    for (std::size_t j = 0; j < U.rows; ++j) (*pinv)(i, j) = pi(i, j);
  return AffineSet{std::move(U), std::move(h), std::move(pinv)};
}

FeasibleSet make_box(Vec lower, Vec upper) {
  FeasibleSet s;
  s.dim = lower.size();
  s.parts.push_back(BoxSet{std::move(lower), std::move(upper)});
  return s;
}

FeasibleSet make_nonneg(std::size_t dim) {
  FeasibleSet s;
  s.dim = dim;
  s.parts.push_back(NonNegSet{dim});
  return s;
}

FeasibleSet make_free(std::size_t dim) {
  FeasibleSet s;
  s.dim = dim;
  return s;
}

const char* model_name(const ConstraintModel& m) {
  switch (m.index()) {
    case 0: return "biaffine";
    case 1: return "biaffine_eq";
    case 2: return "separable_power";
    case 3: return "covering";
    default: return "biaffine_robust";
  }
}

// ---- CcpInstance ----------------------------------------------------------

bool CcpInstance::equiprobable() const {
  for (double v : p)
    if (std::abs(v - 1.0 / static_cast<double>(N)) > 1e-12) return false;
  return true;
}

std::size_t CcpInstance::max_drops() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(N) * epsilon + 1e-9));
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  fail(ErrorKind::kValidation, field + ": " + why);
}

void check_finite(const Vec& v, const std::string& field) {
  if (!all_finite(v)) invalid(field, "non-finite entry");
}

void check_scenarios(std::size_t got, std::size_t N, const std::string& field) {
  if (got != N) invalid(field, "scenario count mismatch");
}

void validate_set(const FeasibleSet& s, std::size_t n) {
  if (s.dim != n) invalid("x_set", "dimension differs from n");
  for (const auto& part : s.parts) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, BoxSet>) {
            if (p.lower.size() != n || p.upper.size() != n) invalid("x_set.box", "bound size differs from n");
            for (std::size_t j = 0; j < n; ++j) {
              if (std::isnan(p.lower[j]) || std::isnan(p.upper[j])) invalid("x_set.box", "NaN bound");
              if (p.lower[j] > p.upper[j]) invalid("x_set.box", "lower exceeds upper");
            }
          } else if constexpr (std::is_same_v<T, HalfspacesSet>) {
            for (const auto& r : p.rows) {
              if (r.a.size() != n) invalid("x_set.halfspaces", "row size differs from n");
              check_finite(r.a, "x_set.halfspaces");
              if (!std::isfinite(r.b)) invalid("x_set.halfspaces", "non-finite b");
            }
          } else if constexpr (std::is_same_v<T, NonNegSet>) {
            if (p.dim != n) invalid("x_set.nonneg", "dimension differs from n");
          } else if constexpr (std::is_same_v<T, SimplexSet>) {
            if (p.dim != n) invalid("x_set.simplex", "dimension differs from n");
            if (!(p.sum >= 0) || !std::isfinite(p.sum)) invalid("x_set.simplex", "sum must be finite and >= 0");
          } else if constexpr (std::is_same_v<T, AffineSet>) {
            if (p.U.cols != n) invalid("x_set.affine", "U columns differ from n");
            check_finite(p.U.data, "x_set.affine.U");
            check_finite(p.h, "x_set.affine.h");
          } else {
            if (p.dim != n) invalid("x_set.binary", "dimension differs from n");
            if (p.dim > 20) invalid("x_set.binary", "dimension above 20");
            if (s.parts.size() != 1) invalid("x_set.binary", "cannot be intersected");
          }
        },
        part);
  }
}

void validate_biaffine(const BiAffine& m, std::size_t n, std::size_t N) {
  check_scenarios(m.D.size(), N, "constraints.D");
  check_scenarios(m.e.size(), N, "constraints.e");
  if (N == 0) return;
  const std::size_t rows = m.D[0].rows;
  if (rows == 0) invalid("constraints.rows", "must be positive");
  for (std::size_t k = 0; k < N; ++k) {
    if (m.D[k].rows != rows || m.D[k].cols != n) invalid("constraints.D", "shape differs from rows x n");
    if (m.e[k].size() != rows) invalid("constraints.e", "size differs from rows");
    check_finite(m.D[k].data, "constraints.D");
    check_finite(m.e[k], "constraints.e");
  }
}

}  // namespace

void validate(const CcpInstance& inst) {
  if (inst.n == 0) invalid("n", "must be positive");
  if (inst.N == 0) invalid("constraints", "at least one scenario required");
  if (!(inst.epsilon > 0.0 && inst.epsilon < 1.0)) invalid("epsilon", "must lie in (0,1)");
  if (inst.cost.size() != inst.n) invalid("cost", "size differs from n");
  check_finite(inst.cost, "cost");
  if (inst.p.size() != inst.N) invalid("probabilities", "size differs from scenario count");
  double sum = 0.0;
  for (double v : inst.p) {
    if (!(v >= 0.0) || !std::isfinite(v)) invalid("probabilities", "entries must be finite and >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) invalid("probabilities", "must sum to 1");
  validate_set(inst.x_set, inst.n);
  const std::size_t n = inst.n, N = inst.N;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BiAffine>) {
          validate_biaffine(m, n, N);
        } else if constexpr (std::is_same_v<T, BiAffineEq>) {
          check_scenarios(m.d.size(), N, "constraints.d");
          check_scenarios(m.e.size(), N, "constraints.e");
          for (const auto& d : m.d) {
            if (d.size() != n) invalid("constraints.d", "size differs from n");
            check_finite(d, "constraints.d");
          }
          check_finite(m.e, "constraints.e");
        } else if constexpr (std::is_same_v<T, SeparablePower>) {
          if (!(m.p >= 1.0) || !std::isfinite(m.p)) invalid("constraints.p", "power must be >= 1");
          if (!std::isfinite(m.b)) invalid("constraints.b", "non-finite");
          check_scenarios(m.xi.size(), N, "constraints.xi");
          for (const auto& xi : m.xi) {
            if (xi.size() != n) invalid("constraints.xi", "size differs from n");
            check_finite(xi, "constraints.xi");
            for (double v : xi)
              if (v < 0) invalid("constraints.xi", "weights must be >= 0");
          }
        } else if constexpr (std::is_same_v<T, Covering>) {
          check_scenarios(m.A.size(), N, "constraints.A");
          const std::size_t rows = m.A.empty() ? 0 : m.A[0].rows;
          if (rows == 0) invalid("constraints.rows", "must be positive");
          for (const auto& a : m.A) {
            if (a.rows != rows || a.cols != n) invalid("constraints.A", "shape differs from rows x n");
            check_finite(a.data, "constraints.A");
            for (double v : a.data)
              if (v < 0) invalid("constraints.A", "covering data must be >= 0");
          }
        } else {
          validate_biaffine(m.base, n, N);
          if (!(m.theta >= 0) || !std::isfinite(m.theta)) invalid("drccp.theta", "must be finite and >= 0");
          if (m.norm.kind == NormKind::kMahalanobis) {
            std::size_t want = m.uncertain == Uncertain::kCoefficients ? n
                               : m.uncertain == Uncertain::kRhs        ? 1
                                                                       : n + 1;
            if (m.norm.sigma.rows != want) invalid("drccp.sigma", "dimension differs from the uncertain vector");
          }
        }
      },
      inst.model);
}

// ---- JSON -----------------------------------------------------------------

namespace json_io {

Vec read_vec(const json& j, const std::string& field) {
  if (!j.is_array()) invalid(field, "expected an array");
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) invalid(field, "expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

// Accepts a flat row-major array or an array of rows.
Mat read_mat(const json& j, std::size_t rows, std::size_t cols, const std::string& field) {
  if (!j.is_array()) invalid(field, "expected an array");
  Mat m(rows, cols);
  if (!j.empty() && j[0].is_array()) {
    if (j.size() != rows) invalid(field, "row count mismatch");
    for (std::size_t i = 0; i < rows; ++i) {
      Vec r = read_vec(j[i], field);
      if (r.size() != cols) invalid(field, "row length mismatch");
      for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
    }
  } else {
    Vec flat = read_vec(j, field);
    if (flat.size() != rows * cols) invalid(field, "entry count differs from rows x n");
    m.data = std::move(flat);
  }
  return m;
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) invalid(where + "." + key, "missing");
  return j.at(key);
}

std::size_t need_size(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0) invalid(where + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double need_double(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) invalid(where + "." + key, "expected a number");
  return v.get<double>();
}

void read_set_parts(const json& j, std::size_t n, std::vector<SetPart>& parts) {
  const std::string type = need(j, "type", "x_set").get<std::string>();
  if (type == "box") {
    Vec lo = read_vec(need(j, "lower", "x_set"), "x_set.lower");
    Vec hi = read_vec(need(j, "upper", "x_set"), "x_set.upper");
    parts.push_back(BoxSet{std::move(lo), std::move(hi)});
  } else if (type == "halfspaces") {
    Vec b = read_vec(need(j, "b", "x_set"), "x_set.b");
    Mat A = read_mat(need(j, "A", "x_set"), b.size(), n, "x_set.A");
    HalfspacesSet h;
    for (std::size_t r = 0; r < b.size(); ++r)
      h.rows.push_back({Vec(A.row(r), A.row(r) + n), b[r]});
    parts.push_back(std::move(h));
  } else if (type == "nonneg") {
    parts.push_back(NonNegSet{n});
  } else if (type == "simplex") {
    double sum = j.contains("sum") ? need_double(j, "sum", "x_set") : 1.0;
    parts.push_back(SimplexSet{n, sum});
  } else if (type == "affine") {
    Vec h = read_vec(need(j, "h", "x_set"), "x_set.h");
    Mat U = read_mat(need(j, "U", "x_set"), h.size(), n, "x_set.U");
    parts.push_back(make_affine_set(std::move(U), std::move(h)));
  } else if (type == "binary") {
    parts.push_back(BinarySet{n});
  } else if (type == "free") {
  } else if (type == "intersection") {
    const json& sets = need(j, "sets", "x_set");
    if (!sets.is_array()) invalid("x_set.sets", "expected an array");
    for (const auto& s : sets) read_set_parts(s, n, parts);
  } else {
    invalid("x_set.type", "unknown set type '" + type + "'");
  }
}

json part_to_json(const SetPart& part) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BoxSet>) {
          return {{"type", "box"}, {"lower", p.lower}, {"upper", p.upper}};
        } else if constexpr (std::is_same_v<T, HalfspacesSet>) {
          json A = json::array(), b = json::array();
          for (const auto& r : p.rows) {
            A.push_back(r.a);
            b.push_back(r.b);
          }
          return {{"type", "halfspaces"}, {"A", A}, {"b", b}};
        } else if constexpr (std::is_same_v<T, NonNegSet>) {
          return {{"type", "nonneg"}};
        } else if constexpr (std::is_same_v<T, SimplexSet>) {
          return {{"type", "simplex"}, {"sum", p.sum}};
        } else if constexpr (std::is_same_v<T, AffineSet>) {
          return {{"type", "affine"}, {"U", p.U.data}, {"h", p.h}};
        } else {
          return {{"type", "binary"}};
        }
      },
      part);
}

Uncertain parse_uncertain(const std::string& s) {
  if (s == "coefficients") return Uncertain::kCoefficients;
  if (s == "rhs") return Uncertain::kRhs;
  if (s == "both") return Uncertain::kBoth;
  invalid("drccp.uncertain", "expected coefficients|rhs|both");
}

const char* uncertain_name(Uncertain u) {
  switch (u) {
    case Uncertain::kCoefficients: return "coefficients";
    case Uncertain::kRhs: return "rhs";
    case Uncertain::kBoth: return "both";
  }
  return "coefficients";
}

BiAffine read_biaffine(const json& c, std::size_t n) {
  const std::size_t rows = c.contains("rows") ? need_size(c, "rows", "constraints") : 1;
  const json& D = need(c, "D", "constraints");
  const json& e = need(c, "e", "constraints");
  if (!D.is_array() || !e.is_array()) invalid("constraints", "D and e must be arrays");
  if (D.size() != e.size()) invalid("constraints.e", "scenario count differs from D");
  BiAffine m;
  for (std::size_t k = 0; k < D.size(); ++k) {
    m.D.push_back(read_mat(D[k], rows, n, "constraints.D"));
    if (e[k].is_number()) {
      m.e.push_back(Vec{e[k].get<double>()});
    } else {
      m.e.push_back(read_vec(e[k], "constraints.e"));
    }
  }
  return m;
}

json biaffine_json(const BiAffine& m) {
  json D = json::array(), e = json::array();
  for (std::size_t k = 0; k < m.D.size(); ++k) {
    D.push_back(m.D[k].data);
    e.push_back(m.e[k]);
  }
  return {{"type", "biaffine"}, {"rows", m.D.empty() ? 0 : m.D[0].rows}, {"D", D}, {"e", e}};
}

}  // namespace json_io

using namespace json_io;

CcpInstance load_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::kParse, "instance document must be a JSON object");
  try {
    CcpInstance inst;
    inst.n = need_size(j, "n", "instance");
    inst.epsilon = need_double(j, "epsilon", "instance");
    inst.cost = read_vec(need(j, "cost", "instance"), "cost");
    inst.x_set.dim = inst.n;
    read_set_parts(need(j, "x_set", "instance"), inst.n, inst.x_set.parts);

    const json& c = need(j, "constraints", "instance");
    const std::string type = need(c, "type", "constraints").get<std::string>();
    const std::size_t n = inst.n;
    if (type == "biaffine") {
      BiAffine m = read_biaffine(c, n);
      inst.N = m.D.size();
      inst.model = std::move(m);
    } else if (type == "biaffine_robust") {
      RobustBiAffine m;
      m.base = read_biaffine(c, n);
      m.theta = need_double(c, "theta", "constraints");
      m.uncertain = parse_uncertain(c.value("uncertain", std::string("coefficients")));
      const std::string norm = need(c, "norm", "constraints").get<std::string>();
      if (norm == "mahalanobis") {
        Vec s = read_vec(need(c, "sigma", "constraints"), "constraints.sigma");
        const auto m_dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(s.size()))));
        if (m_dim * m_dim != s.size()) invalid("constraints.sigma", "not a square matrix");
        Mat sig(m_dim, m_dim);
        sig.data = s;
        m.norm = parse_norm(norm, &sig);
      } else {
        m.norm = parse_norm(norm, nullptr);
      }
      inst.N = m.base.D.size();
      inst.model = std::move(m);
    } else if (type == "biaffine_eq") {
      BiAffineEq m;
      const json& d = need(c, "d", "constraints");
      if (!d.is_array()) invalid("constraints.d", "expected an array");
      for (const auto& row : d) m.d.push_back(read_vec(row, "constraints.d"));
      m.e = read_vec(need(c, "e", "constraints"), "constraints.e");
      inst.N = m.d.size();
      inst.model = std::move(m);
    } else if (type == "separable_power") {
      SeparablePower m;
      m.p = c.contains("p") ? need_double(c, "p", "constraints") : 2.0;
      m.b = need_double(c, "b", "constraints");
      const json& xi = need(c, "xi", "constraints");
      if (!xi.is_array()) invalid("constraints.xi", "expected an array");
      for (const auto& row : xi) m.xi.push_back(read_vec(row, "constraints.xi"));
      inst.N = m.xi.size();
      inst.model = std::move(m);
    } else if (type == "covering") {
      Covering m;
      const std::size_t rows = c.contains("rows") ? need_size(c, "rows", "constraints") : 1;
      const json& A = need(c, "A", "constraints");
      if (!A.is_array()) invalid("constraints.A", "expected an array");
      for (const auto& a : A) m.A.push_back(read_mat(a, rows, n, "constraints.A"));
      inst.N = m.A.size();
      inst.model = std::move(m);
    } else {
      invalid("constraints.type", "unknown model '" + type + "'");
    }

    if (j.contains("probabilities") && !j["probabilities"].is_null()) {
      inst.p = read_vec(j["probabilities"], "probabilities");
      inst.explicit_probabilities = true;
    } else {
      inst.p.assign(inst.N, inst.N ? 1.0 / static_cast<double>(inst.N) : 0.0);
    }
    validate(inst);
    return inst;
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("unexpected JSON shape: ") + e.what());
  }
}

std::string dump_instance(const CcpInstance& inst) {
  json j;
  j["n"] = inst.n;
  j["epsilon"] = inst.epsilon;
  j["cost"] = inst.cost;
  if (inst.x_set.parts.empty()) {
    j["x_set"] = {{"type", "free"}};
  } else if (inst.x_set.parts.size() == 1) {
    j["x_set"] = part_to_json(inst.x_set.parts[0]);
  } else {
    json sets = json::array();
    for (const auto& p : inst.x_set.parts) sets.push_back(part_to_json(p));
    j["x_set"] = {{"type", "intersection"}, {"sets", sets}};
  }
  j["constraints"] = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BiAffine>) {
          return biaffine_json(m);
        } else if constexpr (std::is_same_v<T, BiAffineEq>) {
          return {{"type", "biaffine_eq"}, {"d", m.d}, {"e", m.e}};
        } else if constexpr (std::is_same_v<T, SeparablePower>) {
          return {{"type", "separable_power"}, {"p", m.p}, {"xi", m.xi}, {"b", m.b}};
        } else if constexpr (std::is_same_v<T, Covering>) {
          json A = json::array();
          for (const auto& a : m.A) A.push_back(a.data);
          return {{"type", "covering"}, {"rows", m.A.empty() ? 0 : m.A[0].rows}, {"A", A}};
        } else {
          json out = biaffine_json(m.base);
          out["type"] = "biaffine_robust";
          out["theta"] = m.theta;
          out["norm"] = norm_name(m.norm.kind);
          out["uncertain"] = uncertain_name(m.uncertain);
          if (m.norm.kind == NormKind::kMahalanobis) out["sigma"] = m.norm.sigma.data;
          return out;
        }
      },
      inst.model);
  if (inst.explicit_probabilities) j["probabilities"] = inst.p;
  return j.dump(2);
}

// ---- Evaluation -----------------------------------------------------------

namespace {

double robust_term(const RobustBiAffine& m, const Vec& x, Vec* grad) {
  if (m.theta == 0.0) return 0.0;
  Vec a;
  switch (m.uncertain) {
    case Uncertain::kCoefficients: a = x; break;
    case Uncertain::kRhs: a = Vec{-1.0}; break;
    case Uncertain::kBoth:
      a = x;
      a.push_back(-1.0);
      break;
  }
  const double v = m.theta * dual_norm(m.norm, a);
  if (grad != nullptr && m.uncertain != Uncertain::kRhs) {
    Vec sg = dual_norm_subgradient(m.norm, a);
    for (std::size_t j = 0; j < x.size(); ++j) (*grad)[j] += m.theta * sg[j];
  }
  return v;
}

double biaffine_g(const BiAffine& m, const Vec& x, std::size_t k, Vec* grad) {
  const Mat& D = m.D[k];
  double best = -kInf;
  std::size_t arg = 0;
  for (std::size_t r = 0; r < D.rows; ++r) {
    const double v = dot(D.row(r), x.data(), D.cols) - m.e[k][r];
    if (v > best) {
      best = v;
      arg = r;
    }
  }
  if (grad != nullptr) grad->assign(D.row(arg), D.row(arg) + D.cols);
  return best;
}

}  // namespace

double evaluate_g_subgrad(const CcpInstance& inst, const Vec& x, std::size_t k, Vec* grad) {
  if (k >= inst.N) fail(ErrorKind::kIndex, "scenario index out of range");
  if (x.size() != inst.n) fail(ErrorKind::kDimension, "x has the wrong dimension");
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BiAffine>) {
          return biaffine_g(m, x, k, grad);
        } else if constexpr (std::is_same_v<T, BiAffineEq>) {
          const double r = dot(m.d[k], x) - m.e[k];
          if (grad != nullptr) {
            *grad = m.d[k];
            const double s = r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0);
            for (double& v : *grad) v *= s;
          }
          return std::abs(r);
        } else if constexpr (std::is_same_v<T, SeparablePower>) {
          double s = -m.b;
          if (grad != nullptr) grad->assign(x.size(), 0.0);
          for (std::size_t j = 0; j < x.size(); ++j) {
            const double xj = std::max(0.0, x[j]);
            s += m.xi[k][j] * std::pow(xj, m.p);
            if (grad != nullptr) (*grad)[j] = m.p * m.xi[k][j] * std::pow(xj, m.p - 1.0);
          }
          return s;
        } else if constexpr (std::is_same_v<T, Covering>) {
          const Mat& A = m.A[k];
          double best = -kInf;
          std::size_t arg = 0;
          for (std::size_t r = 0; r < A.rows; ++r) {
            const double v = 1.0 - dot(A.row(r), x.data(), A.cols);
            if (v > best) {
              best = v;
              arg = r;
            }
          }
          if (grad != nullptr) {
            grad->assign(A.row(arg), A.row(arg) + A.cols);
            for (double& v : *grad) v = -v;
          }
          return best;
        } else {
          double g = biaffine_g(m.base, x, k, grad);
          return g + robust_term(m, x, grad);
        }
      },
      inst.model);
}

double evaluate_g(const CcpInstance& inst, const Vec& x, std::size_t k) {
  return evaluate_g_subgrad(inst, x, k, nullptr);
}

double scenario_scale(const CcpInstance& inst, std::size_t k) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BiAffine>) {
          return norm_inf(m.e[k]);
        } else if constexpr (std::is_same_v<T, BiAffineEq>) {
          return std::abs(m.e[k]);
        } else if constexpr (std::is_same_v<T, SeparablePower>) {
          return std::abs(m.b);
        } else if constexpr (std::is_same_v<T, Covering>) {
          return 1.0;
        } else {
          return norm_inf(m.base.e[k]);
        }
      },
      inst.model);
}

double violation_probability(const CcpInstance& inst, const Vec& x, double tol_zero) {
  double mass = 0.0;
  for (std::size_t k = 0; k < inst.N; ++k) {
    const double tol = tol_zero >= 0 ? tol_zero : 1e-8 * (1.0 + scenario_scale(inst, k));
    if (evaluate_g(inst, x, k) > tol) mass += inst.p[k];
  }
  return std::min(1.0, mass);
}

bool is_feasible(const CcpInstance& inst, const Vec& x) {
  return violation_probability(inst, x) <= inst.epsilon + kFeasTol;
}

CcpInstance restrict_scenarios(const CcpInstance& inst, const std::vector<std::size_t>& keep) {
  CcpInstance out = inst;
  out.N = keep.size();
  double mass = 0.0;
  for (std::size_t k : keep) mass += inst.p[k];
  out.p.clear();
  for (std::size_t k : keep) out.p.push_back(mass > 0 ? inst.p[k] / mass : 1.0 / static_cast<double>(keep.size()));
  out.explicit_probabilities = true;
  auto pick = [&](const auto& v) {
    std::decay_t<decltype(v)> r;
    for (std::size_t k : keep) r.push_back(v[k]);
    return r;
  };
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BiAffine>) {
          m.D = pick(m.D);
          m.e = pick(m.e);
        } else if constexpr (std::is_same_v<T, BiAffineEq>) {
          m.d = pick(m.d);
          m.e = pick(m.e);
        } else if constexpr (std::is_same_v<T, SeparablePower>) {
          m.xi = pick(m.xi);
        } else if constexpr (std::is_same_v<T, Covering>) {
          m.A = pick(m.A);
        } else {
          m.base.D = pick(m.base.D);
          m.base.e = pick(m.base.e);
        }
      },
      out.model);
  return out;
}

}  // namespace ccp
