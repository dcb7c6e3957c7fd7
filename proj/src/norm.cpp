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

#include "ccp/norm.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ccp/errors.hpp"

namespace ccp {

NormSpec NormSpec::mahalanobis(const Mat& sigma) {
  if (sigma.rows == 0 || sigma.rows != sigma.cols)
    fail(ErrorKind::kValidation, "sigma: must be a nonempty square matrix");
  const std::size_t m = sigma.rows;
  Eigen::MatrixXd s(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-10 * (1 + std::abs(sigma(i, j))))
        fail(ErrorKind::kValidation, "sigma: not symmetric");
      s(i, j) = sigma(i, j);
    }
  // Hand-rolled so the pivot threshold is explicit.
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 1e-12)) fail(ErrorKind::kValidation, "sigma: not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < m; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  Eigen::MatrixXd inv = s.llt().solve(Eigen::MatrixXd::Identity(m, m));
  NormSpec out;
  out.kind = NormKind::kMahalanobis;
  out.sigma = sigma;
  out.chol = Mat(m, m);
  out.sigma_inv = Mat(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      out.chol(i, j) = l(i, j);
      out.sigma_inv(i, j) = inv(i, j);
    }
  return out;
}

NormSpec parse_norm(const std::string& name, const Mat* sigma) {
  if (name == "l1") return NormSpec::l1();
  if (name == "l2") return NormSpec::l2();
  if (name == "linf") return NormSpec::linf();
  if (name == "mahalanobis") {
    if (sigma == nullptr) fail(ErrorKind::kValidation, "norm: mahalanobis needs sigma");
    return NormSpec::mahalanobis(*sigma);
  }
  fail(ErrorKind::kValidation, "norm: unknown norm '" + name + "'");
}

const char* norm_name(NormKind kind) {
  switch (kind) {
    case NormKind::kL1: return "l1";
    case NormKind::kL2: return "l2";
    case NormKind::kLInf: return "linf";
    case NormKind::kMahalanobis: return "mahalanobis";
  }
  return "?";
}

namespace {

double quad(const Mat& m, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) s += y[i] * dot(m.row(i), y.data(), m.cols);
  return s;
}

void check_dim(const NormSpec& spec, const Vec& y) {
  if (spec.kind == NormKind::kMahalanobis && spec.sigma.rows != y.size())
    fail(ErrorKind::kDimension, "norm: vector size does not match sigma");
}

}  // namespace

double norm(const NormSpec& spec, const Vec& y) {
  check_dim(spec, y);
  switch (spec.kind) {
    case NormKind::kL1: {
      double s = 0.0;
      for (double v : y) s += std::abs(v);
      return s;
    }
    case NormKind::kL2: return norm2(y);
    case NormKind::kLInf: return norm_inf(y);
    case NormKind::kMahalanobis: return std::sqrt(std::max(0.0, quad(spec.sigma_inv, y)));
  }
  return 0.0;
}

double dual_norm(const NormSpec& spec, const Vec& y) {
  check_dim(spec, y);
  switch (spec.kind) {
    case NormKind::kL1: return norm_inf(y);
    case NormKind::kL2: return norm2(y);
    case NormKind::kLInf: {
      double s = 0.0;
      for (double v : y) s += std::abs(v);
      return s;
    }
    case NormKind::kMahalanobis: return std::sqrt(std::max(0.0, quad(spec.sigma, y)));
  }
  return 0.0;
}

Vec dual_norm_subgradient(const NormSpec& spec, const Vec& y) {
  check_dim(spec, y);
  Vec g(y.size(), 0.0);
  auto sgn = [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); };
  switch (spec.kind) {
    case NormKind::kL1: {
      std::size_t arg = 0;
      for (std::size_t j = 1; j < y.size(); ++j)
        if (std::abs(y[j]) > std::abs(y[arg])) arg = j;
      if (!y.empty()) g[arg] = sgn(y[arg]);
      break;
    }
    case NormKind::kLInf:
      for (std::size_t j = 0; j < y.size(); ++j) g[j] = sgn(y[j]);
      break;
    case NormKind::kL2: {
      const double r = norm2(y);
      if (r > 0)
        for (std::size_t j = 0; j < y.size(); ++j) g[j] = y[j] / r;
      break;
    }
    case NormKind::kMahalanobis: {
      Vec sy = matvec(spec.sigma, y);
      const double r = std::sqrt(std::max(0.0, dot(sy, y)));
      if (r > 0)
        for (std::size_t j = 0; j < y.size(); ++j) g[j] = sy[j] / r;
      break;
    }
  }
  return g;
}

}  // namespace ccp
