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

#include "dgate/maps.hpp"

#include <cmath>
#include <stdexcept>

namespace dgate {

namespace {

constexpr double kSingularFloor = 1e-14;
constexpr double kHermPreservingTol = 1e-8;

// System operator <psi_k| U |chi>: contract U over the bath with the
// computational bath vector e_k on the left and chi on the right.
cxmat bath_contract(const cxmat& u, int dim_s, int dim_b, int k, const cxvec& chi) {
  cxmat out = cxmat::Zero(dim_s, dim_s);
  for (int s = 0; s < dim_s; ++s)
    for (int t = 0; t < dim_s; ++t)
      for (int b = 0; b < dim_b; ++b) out(s, t) += u(s * dim_b + k, t * dim_b + b) * chi(b);
  return out;
}

}  // namespace

OperatorSumMap induced_map(const BlockDecomposition& d, const cxmat& u) {
  if (!is_sl(d)) throw std::invalid_argument("induced_map: state is not SL");
  const int dS = d.dim_s;
  const int dB = d.dim_b;
  if (u.rows() != dS * dB || u.cols() != dS * dB)
    throw std::invalid_argument("induced_map: U dimension mismatch");
  if (unitarity_deviation(u) > 1e-10) throw std::invalid_argument("induced_map: U not unitary");

  OperatorSumMap m;
  m.in_dim = dS;
  m.out_dim = dS;
  m.flavor = MapFlavor::General;

  for (int i = 0; i < dS; ++i) {
    for (int j = 0; j < dS; ++j) {
      if (d.tag(i, j) != TraceTag::One) continue;
      const Svd dec = svd(d.bath_op(i, j));
      const cxmat pi = d.basis.col(i) * d.basis.col(i).adjoint();
      const cxmat pj = d.basis.col(j) * d.basis.col(j).adjoint();
      for (int a = 0; a < dec.singular_values.size(); ++a) {
        const double lambda = dec.singular_values(a);
        if (lambda <= kSingularFloor) continue;
        const double root = std::sqrt(lambda);
        for (int k = 0; k < dB; ++k) {
          OperatorSumMap::Term term;
          term.weight = 1.0;
          term.left = root * bath_contract(u, dS, dB, k, dec.left.col(a)) * pi;
          term.right = root * bath_contract(u, dS, dB, k, dec.right.col(a)) * pj;
          m.terms.push_back(std::move(term));
        }
      }
    }
  }
  return m;
}

cxmat apply_map(const OperatorSumMap& m, const cxmat& sigma) {
  if (sigma.rows() != m.in_dim || sigma.cols() != m.in_dim)
    throw std::invalid_argument("apply_map: dimension mismatch");
  cxmat out = cxmat::Zero(m.out_dim, m.out_dim);
  for (const auto& t : m.terms) out += t.weight * t.left * sigma * t.right.adjoint();
  return out;
}

ChoiMatrix choi_matrix(const OperatorSumMap& m) {
  const int dS = m.in_dim;
  const int dO = m.out_dim;
  ChoiMatrix choi;
  choi.dim_s = dS;
  choi.out_dim = dO;
  choi.matrix = cxmat::Zero(dS * dO, dS * dO);
  cxmat unit = cxmat::Zero(dS, dS);
  for (int i = 0; i < dS; ++i) {
    for (int j = 0; j < dS; ++j) {
      unit(i, j) = 1.0;
      choi.matrix.block(i * dO, j * dO, dO, dO) = apply_map(m, unit) / static_cast<double>(dS);
      unit(i, j) = 0.0;
    }
  }
  return choi;
}

MapProperties map_properties(const OperatorSumMap& m) {
  const int n = m.in_dim;
  MapProperties props;

  // Hermitian operator basis: diagonal units plus symmetrized pairs.
  cxmat h = cxmat::Zero(n, n);
  auto probe = [&](const cxmat& basis_op) {
    const cxmat out = apply_map(m, basis_op);
    const double residue = 0.5 * (out - out.adjoint()).norm();
    props.hermitian_deviation = std::max(props.hermitian_deviation, residue);
  };
  for (int i = 0; i < n; ++i) {
    h.setZero();
    h(i, i) = 1.0;
    probe(h);
    for (int j = i + 1; j < n; ++j) {
      h.setZero();
      h(i, j) = h(j, i) = 1.0;
      probe(h);
      h(i, j) = cxd(0.0, 1.0);
      h(j, i) = cxd(0.0, -1.0);
      probe(h);
    }
  }
  props.hermitian_preserving = props.hermitian_deviation <= 1e-10;

  cxmat sum = cxmat::Zero(n, n);
  for (const auto& t : m.terms) sum += t.weight * t.right.adjoint() * t.left;
  props.trace_deviation = (sum - cxmat::Identity(n, n)).norm();
  props.trace_preserving = props.trace_deviation <= 1e-10;
  return props;
}

CpResult is_cp(const OperatorSumMap& m, double tol) {
  const MapProperties props = map_properties(m);
  if (props.hermitian_deviation > kHermPreservingTol)
    throw std::invalid_argument("is_cp: map is not Hermitian-preserving");
  const ChoiMatrix choi = choi_matrix(m);
  const PsdResult psd = is_psd(0.5 * (choi.matrix + choi.matrix.adjoint()), tol);
  return {psd.psd, psd.min_eigenvalue};
}

OperatorSumMap kraus_from_vqd(const CQForm& cq, const cxmat& u) {
  const int dS = cq.dim_s;
  const int dB = cq.dim_b;
  if (u.rows() != dS * dB || u.cols() != dS * dB)
    throw std::invalid_argument("kraus_from_vqd: U dimension mismatch");
  if (unitarity_deviation(u) > 1e-10) throw std::invalid_argument("kraus_from_vqd: U not unitary");

  OperatorSumMap m;
  m.in_dim = dS;
  m.out_dim = dS;
  m.flavor = MapFlavor::Kraus;

  for (size_t a = 0; a < cq.weights.size(); ++a) {
    const Spectrum spec = spectral_decompose(cq.bath_states[a]);
    for (int j = 0; j < spec.eigenvalues.size(); ++j) {
      const double lambda = spec.eigenvalues(j);
      if (lambda <= kSingularFloor) continue;
      for (int i = 0; i < dB; ++i) {
        OperatorSumMap::Term term;
        term.weight = lambda;
        term.left = bath_contract(u, dS, dB, i, spec.eigenvectors.col(j)) * cq.projectors[a];
        term.right = term.left;
        m.terms.push_back(std::move(term));
      }
    }
  }
  return m;
}

CpDifference cp_difference(const OperatorSumMap& m) {
  const MapProperties props = map_properties(m);
  if (props.hermitian_deviation > kHermPreservingTol)
    throw std::invalid_argument("cp_difference: map is not Hermitian-preserving");

  const ChoiMatrix choi = choi_matrix(m);
  const Spectrum spec = spectral_decompose(0.5 * (choi.matrix + choi.matrix.adjoint()));
  const int dS = choi.dim_s;
  const int dO = choi.out_dim;

  CpDifference out;
  out.plus.in_dim = out.minus.in_dim = dS;
  out.plus.out_dim = out.minus.out_dim = dO;
  out.plus.flavor = out.minus.flavor = MapFlavor::Kraus;

  for (int e = 0; e < spec.eigenvalues.size(); ++e) {
    const double mu = spec.eigenvalues(e);
    if (std::abs(mu) <= 1e-12) continue;
    cxmat op(dO, dS);
    const double scale = std::sqrt(std::abs(mu) * dS);
    for (int i = 0; i < dS; ++i)
      for (int k = 0; k < dO; ++k) op(k, i) = scale * spec.eigenvectors(i * dO + k, e);
    OperatorSumMap::Term term{1.0, op, op};
    (mu > 0.0 ? out.plus : out.minus).terms.push_back(std::move(term));
  }
  return out;
}

cxmat superoperator(const OperatorSumMap& m) {
  const int n = m.in_dim;
  const int o = m.out_dim;
  cxmat super(o * o, n * n);
  cxmat unit = cxmat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      unit(i, j) = 1.0;
      const cxmat out = apply_map(m, unit);
      super.col(i * n + j) = Eigen::Map<const cxvec>(out.data(), out.size());
      unit(i, j) = 0.0;
    }
  }
  return super;
}

}  // namespace dgate
