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

#include "ccp/drccp.hpp"

#include "ccp/alsoxplus.hpp"
#include "ccp/cvar.hpp"
#include "ccp/errors.hpp"
#include "ccp/json_io.hpp"

namespace ccp {

namespace {

bool inside_nonneg_orthant(const FeasibleSet& s) {
  for (const auto& part : s.parts) {
    if (std::holds_alternative<NonNegSet>(part) || std::holds_alternative<SimplexSet>(part) ||
        std::holds_alternative<BinarySet>(part))
      return true;
    if (const auto* b = std::get_if<BoxSet>(&part)) {
      bool ok = true;
      for (double l : b->lower) ok = ok && l >= 0.0;
      if (ok) return true;
    }
  }
  return false;
}

BiAffine covering_as_biaffine(const Covering& c) {
  BiAffine b;
  for (const Mat& a : c.A) {
    Mat d = a;
    for (double& v : d.data) v = -v;
    b.D.push_back(std::move(d));
    b.e.push_back(Vec(a.rows, -1.0));
  }
  return b;
}

}  // namespace

CcpInstance robustify(const DrccpSpec& spec) {
  if (!(spec.theta >= 0.0) || !std::isfinite(spec.theta)) fail(ErrorKind::kValidation, "drccp.theta: must be finite and >= 0");
  CcpInstance out = spec.base;
  if (spec.mode == DrccpMode::kDual) {
    BiAffine base;
    if (const auto* b = std::get_if<BiAffine>(&spec.base.model)) {
      base = *b;
    } else if (const auto* c = std::get_if<Covering>(&spec.base.model)) {
      base = covering_as_biaffine(*c);
    } else {
      fail(ErrorKind::kModeMismatch, std::string("dual mode needs a bi-affine or covering model, got ") +
                                         model_name(spec.base.model));
    }
    out.model = RobustBiAffine{std::move(base), spec.theta, spec.norm, spec.uncertain};
    validate(out);
    return out;
  }

  if (spec.norm.kind != NormKind::kLInf) fail(ErrorKind::kModeMismatch, "shift mode needs the linf norm");
  if (auto* b = std::get_if<BiAffine>(&out.model)) {
    if (spec.uncertain != Uncertain::kCoefficients || !inside_nonneg_orthant(spec.base.x_set))
      fail(ErrorKind::kModeMismatch, "shift mode needs coefficient uncertainty on a nonnegative X");
    for (Mat& d : b->D)
      for (double& v : d.data) v += spec.theta;
  } else if (auto* p = std::get_if<SeparablePower>(&out.model)) {
    for (Vec& xi : p->xi)
      for (double& v : xi) v += spec.theta;
  } else {
    fail(ErrorKind::kModeMismatch, std::string("shift mode needs a model nondecreasing in xi, got ") +
                                       model_name(spec.base.model));
  }
  validate(out);
  return out;
}

SolveReport worst_case_solve(const DrccpSpec& spec, DrccpMethod method, const BisectionConfig& cfg) {
  const CcpInstance robust = robustify(spec);
  SolveReport rep;
  switch (method) {
    case DrccpMethod::kAlsoX: rep = also_x(robust, cfg); break;
    case DrccpMethod::kAlsoXPlus: rep = also_x_plus(robust, cfg); break;
    case DrccpMethod::kCvar: rep = solve_cvar(robust, cfg); break;
  }
  rep.settings.push_back({"theta", spec.theta});
  return rep;
}

std::optional<DrccpSpec> parse_drccp_block(const std::string& text, const CcpInstance& base) {
  using namespace json_io;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("drccp") || j["drccp"].is_null()) return std::nullopt;
  try {
    const json& d = j["drccp"];
    DrccpSpec spec;
    spec.base = base;
    spec.theta = need_double(d, "theta", "drccp");
    const std::string mode = d.value("mode", std::string("dual"));
    if (mode == "dual") {
      spec.mode = DrccpMode::kDual;
    } else if (mode == "shift") {
      spec.mode = DrccpMode::kShift;
    } else {
      fail(ErrorKind::kValidation, "drccp.mode: expected dual|shift");
    }
    spec.uncertain = parse_uncertain(d.value("uncertain", std::string("coefficients")));
    const std::string norm = d.value("norm", std::string("linf"));
    if (norm == "mahalanobis") {
      const json& sj = need(d, "sigma", "drccp");
      if (!sj.is_array()) fail(ErrorKind::kValidation, "drccp.sigma: expected an array");
      const bool nested = !sj.empty() && sj[0].is_array();
      const auto m = nested ? sj.size()
                            : static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(sj.size()))));
      const Mat sig = read_mat(sj, m, m, "drccp.sigma");
      spec.norm = parse_norm(norm, &sig);
    } else {
      spec.norm = parse_norm(norm, nullptr);
    }
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorKind::kParse, std::string("unexpected JSON shape in drccp: ") + e.what());
  }
}

}  // namespace ccp
