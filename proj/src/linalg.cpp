// Copyright 2026 discord-gate developers
//
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

#include "dgate/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dgate {

cxmat kron(const cxmat& a, const cxmat& b) {
  cxmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cxmat partial_trace_bath(const cxmat& m, int dim_s, int dim_b) {
  const Eigen::Index d = static_cast<Eigen::Index>(dim_s) * dim_b;
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("partial_trace_bath: dimension mismatch");
  cxmat out = cxmat::Zero(dim_s, dim_s);
  for (int i = 0; i < dim_s; ++i)
    for (int j = 0; j < dim_s; ++j)
      for (int b = 0; b < dim_b; ++b)
        out(i, j) += m(i * dim_b + b, j * dim_b + b);
  return out;
}

cxmat partial_trace_system(const cxmat& m, int dim_s, int dim_b) {
  const Eigen::Index d = static_cast<Eigen::Index>(dim_s) * dim_b;
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("partial_trace_system: dimension mismatch");
  cxmat out = cxmat::Zero(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int c = 0; c < dim_b; ++c)
      for (int i = 0; i < dim_s; ++i)
        out(b, c) += m(i * dim_b + b, i * dim_b + c);
  return out;
}

double hermiticity_deviation(const cxmat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_deviation: non-square");
  return (m - m.adjoint()).norm() / std::max(1.0, m.norm());
}

double unitarity_deviation(const cxmat& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("unitarity_deviation: non-square");
  return (u.adjoint() * u - cxmat::Identity(u.rows(), u.cols())).norm();
}

namespace {

// Largest-magnitude component of each column made real positive.
void fix_phases(cxmat& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index imax = 0;
    v.col(c).cwiseAbs().maxCoeff(&imax);
    const cxd z = v(imax, c);
    if (std::abs(z) > 0.0) v.col(c) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace

Spectrum spectral_decompose(const cxmat& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("spectral_decompose: non-square input");
  if (hermiticity_deviation(h) > 1e-10)
    throw std::invalid_argument("spectral_decompose: input not Hermitian within 1e-10");
  const cxmat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<cxmat> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_decompose: eigensolver failed");

  const Eigen::Index n = h.rows();
  Spectrum out;
  out.eigenvalues = es.eigenvalues().reverse();  // descending
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  fix_phases(out.eigenvectors);
  return out;
}

Svd svd(const cxmat& m) {
  Eigen::JacobiSVD<cxmat> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Svd out;
  out.left = solver.matrixU();
  out.singular_values = solver.singularValues();
  out.right = solver.matrixV();
  return out;
}

PsdResult is_psd(const cxmat& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("is_psd: non-square input");
  if (hermiticity_deviation(m) > 1e-10)
    throw std::invalid_argument("is_psd: input not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<cxmat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  const rvec ev = es.eigenvalues();
  const double trace_norm = ev.cwiseAbs().sum();
  const double min_eig = ev.minCoeff();
  return {min_eig >= -tol * std::max(1.0, trace_norm), min_eig};
}

}  // namespace dgate
