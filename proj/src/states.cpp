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

#include "dgate/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dgate/union_find.hpp"

namespace dgate {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-9;
constexpr double kBasisTol = 1e-12;
constexpr double kBlockEqTol = 1e-10;
constexpr double kWeightFloor = 1e-12;
constexpr double kDegenerateGap = 1e-8;
constexpr int kRefineRetries = 8;

cxmat identity_basis(int dim_s) { return cxmat::Identity(dim_s, dim_s); }

}  // namespace

std::optional<std::string> check_bipartite_invariants(const cxmat& matrix, int dim_s,
                                                      int dim_b, const cxmat& basis) {
  const Eigen::Index d = static_cast<Eigen::Index>(dim_s) * dim_b;
  if (dim_s < 1 || dim_b < 1) return "dimensions must be positive";
  if (matrix.rows() != d || matrix.cols() != d)
    return "matrix is not (dim_s*dim_b) x (dim_s*dim_b)";
  if (!matrix.allFinite()) return "matrix has non-finite entries";
  if (hermiticity_deviation(matrix) > kHermTol) return "matrix not Hermitian within 1e-10";
  if (std::abs(matrix.trace() - cxd(1.0)) > kTraceTol) return "trace differs from 1 beyond 1e-10";
  if (!is_psd(matrix, kPsdTol).psd) return "matrix not positive semidefinite at tolerance 1e-9";
  if (basis.size() != 0) {
    if (basis.rows() != dim_s || basis.cols() != dim_s) return "basis is not dim_s x dim_s";
    if (unitarity_deviation(basis) > kBasisTol) return "basis not unitary within 1e-12";
  }
  return std::nullopt;
}

BipartiteState make_bipartite_state(cxmat matrix, int dim_s, int dim_b, cxmat basis) {
  if (auto bad = check_bipartite_invariants(matrix, dim_s, dim_b, basis))
    throw std::invalid_argument("invalid bipartite state: " + *bad);
  if (basis.size() == 0) basis = identity_basis(dim_s);
  return {std::move(matrix), dim_s, dim_b, std::move(basis)};
}

cxmat evolve(const BipartiteState& state, const cxmat& u) {
  const Eigen::Index d = state.matrix.rows();
  if (u.rows() != d || u.cols() != d) throw std::invalid_argument("evolve: dimension mismatch");
  if (unitarity_deviation(u) > 1e-10) throw std::invalid_argument("evolve: U not unitary");
  return partial_trace_bath(u * state.matrix * u.adjoint(), state.dim_s, state.dim_b);
}

BlockDecomposition decompose(const BipartiteState& state, double zero_threshold) {
  const int dS = state.dim_s;
  const int dB = state.dim_b;
  if (zero_threshold < 0.0) zero_threshold = 1e-12 * state.matrix.norm();

  // Rotate to the declared basis, then slice dB x dB blocks.
  const cxmat vb = kron(state.basis, cxmat::Identity(dB, dB));
  const cxmat rot = vb.adjoint() * state.matrix * vb;

  BlockDecomposition d;
  d.dim_s = dS;
  d.dim_b = dB;
  d.basis = state.basis;
  d.coeffs = cxmat::Zero(dS, dS);
  d.bath_ops.resize(static_cast<size_t>(dS) * dS);
  d.tags.resize(static_cast<size_t>(dS) * dS);
  d.zero_threshold = zero_threshold;
  d.sl = true;

  for (int i = 0; i < dS; ++i) {
    for (int j = 0; j < dS; ++j) {
      const cxmat blk = rot.block(i * dB, j * dB, dB, dB);
      const size_t idx = static_cast<size_t>(i) * dS + j;
      if (blk.norm() <= zero_threshold) {
        d.coeffs(i, j) = 0.0;
        d.bath_ops[idx] = cxmat::Zero(dB, dB);
        d.tags[idx] = TraceTag::ZeroBlock;
      } else if (std::abs(blk.trace()) > 1e-10) {
        d.coeffs(i, j) = blk.trace();
        d.bath_ops[idx] = blk / blk.trace();
        d.tags[idx] = TraceTag::One;
      } else {
        d.coeffs(i, j) = blk.norm();
        d.bath_ops[idx] = blk / blk.norm();
        d.tags[idx] = TraceTag::ZeroTraceless;
        d.sl = false;
      }
    }
  }
  return d;
}

cxmat reconstruct(const BlockDecomposition& d) {
  const int dS = d.dim_s;
  const int dB = d.dim_b;
  cxmat rot = cxmat::Zero(dS * dB, dS * dB);
  for (int i = 0; i < dS; ++i)
    for (int j = 0; j < dS; ++j)
      rot.block(i * dB, j * dB, dB, dB) = d.coeffs(i, j) * d.bath_op(i, j);
  const cxmat vb = kron(d.basis, cxmat::Identity(dB, dB));
  return vb * rot * vb.adjoint();
}

bool is_sl(const BlockDecomposition& d) {
  return std::none_of(d.tags.begin(), d.tags.end(),
                      [](TraceTag t) { return t == TraceTag::ZeroTraceless; });
}

BlockPartition find_blocks(const BlockDecomposition& d) {
  if (!is_sl(d)) throw std::invalid_argument("find_blocks: state is not SL");
  const int dS = d.dim_s;

  UnionFind uf(dS);
  for (int i = 0; i < dS; ++i)
    for (int j = i + 1; j < dS; ++j)
      if (d.tag(i, j) != TraceTag::ZeroBlock) uf.merge(i, j);

  std::vector<std::vector<int>> groups(dS);
  for (int i = 0; i < dS; ++i) groups[uf.find(i)].push_back(i);

  BlockPartition p;
  for (auto& g : groups) {
    if (g.empty()) continue;
    p.blocks.push_back(g);

    // Constant-phi verdict: all nonzero bath ops within the block pairwise
    // equal, including the diagonals.
    const cxmat* rep = nullptr;
    std::array<int, 2> rep_pos{-1, -1};
    bool constant = true;
    std::array<int, 2> wa{-1, -1}, wb{-1, -1};
    for (size_t a = 0; a < g.size() && constant; ++a) {
      for (size_t b = a; b < g.size() && constant; ++b) {
        const int i = g[a], j = g[b];
        if (d.tag(i, j) == TraceTag::ZeroBlock) continue;
        if (!rep) {
          rep = &d.bath_op(i, j);
          rep_pos = {i, j};
          continue;
        }
        if ((d.bath_op(i, j) - *rep).norm() > kBlockEqTol * std::max(1.0, rep->norm())) {
          constant = false;
          wa = rep_pos;
          wb = {i, j};
        }
      }
    }
    p.constant_phi.push_back(constant);
    p.representative.push_back(rep ? *rep : cxmat::Zero(d.dim_b, d.dim_b));
    p.witness_a.push_back(wa);
    p.witness_b.push_back(wb);

    cxmat proj = cxmat::Zero(dS, dS);
    for (int i : g) proj += d.basis.col(i) * d.basis.col(i).adjoint();
    p.projectors.push_back(proj);
  }
  return p;
}

StructuralCpResult structural_cp_form(const BlockDecomposition& d) {
  if (!is_sl(d)) throw std::invalid_argument("structural_cp_form: state is not SL");
  const BlockPartition part = find_blocks(d);

  // rho_S in ambient coordinates, from the decomposition data.
  const int dS = d.dim_s;
  cxmat rho_s = cxmat::Zero(dS, dS);
  for (int i = 0; i < dS; ++i)
    for (int j = 0; j < dS; ++j)
      if (d.tag(i, j) == TraceTag::One)
        rho_s += d.coeffs(i, j) * d.basis.col(i) * d.basis.col(j).adjoint();

  StructuralCpResult res;
  CQForm form;
  form.dim_s = dS;
  form.dim_b = d.dim_b;

  for (size_t a = 0; a < part.blocks.size(); ++a) {
    const double p = (part.projectors[a] * rho_s).trace().real();
    if (p <= kWeightFloor) continue;  // null-weight block carries no support
    if (!part.constant_phi[a]) {
      res.failure = {part.witness_a[a], part.witness_b[a], "bath operators differ within block"};
      return res;
    }
    const cxmat& rep = part.representative[a];
    if (std::abs(rep.trace() - cxd(1.0)) > kTraceTol) {
      res.failure = {{-1, -1}, {-1, -1}, "block representative trace differs from 1"};
      return res;
    }
    const PsdResult psd = is_psd(rep, 1e-10);
    if (!psd.psd) {
      res.failure = {{-1, -1}, {-1, -1}, "block representative not positive semidefinite"};
      return res;
    }
    form.weights.push_back(p);
    form.projectors.push_back(part.projectors[a]);
    form.block_members.push_back(part.blocks[a]);
    form.system_blocks.push_back(part.projectors[a] * rho_s * part.projectors[a] / p);
    form.bath_states.push_back(rep);
  }
  res.form = std::move(form);
  return res;
}

namespace {

// Eigenbasis, within the subspace spanned by the orthonormal columns of q,
// of a Hermitian combination sum_{bb'} G(b,b') <q_p (x) b| rho |q_q (x) b'>.
// Used to break eigenvalue degeneracies against the bath correlations.
cxmat bath_refined_rotation(const cxmat& rho, int dim_b, const cxmat& q, RandomSource& rng) {
  const int m = static_cast<int>(q.cols());
  const cxmat g = random_hermitian(dim_b, rng);
  const cxmat w = kron(q, cxmat::Identity(dim_b, dim_b)).adjoint() * rho *
                  kron(q, cxmat::Identity(dim_b, dim_b));
  cxmat r = cxmat::Zero(m, m);
  for (int p = 0; p < m; ++p)
    for (int s = 0; s < m; ++s)
      for (int b = 0; b < dim_b; ++b)
        for (int c = 0; c < dim_b; ++c) r(p, s) += g(b, c) * w(p * dim_b + b, s * dim_b + c);
  return spectral_decompose(r).eigenvectors;
}

// Groups of adjacent (descending) eigenvalues closer than kDegenerateGap.
std::vector<std::pair<int, int>> degenerate_groups(const rvec& ev) {
  std::vector<std::pair<int, int>> groups;
  int start = 0;
  for (int i = 1; i <= ev.size(); ++i) {
    if (i == ev.size() || ev(i - 1) - ev(i) > kDegenerateGap) {
      groups.emplace_back(start, i);
      start = i;
    }
  }
  return groups;
}

}  // namespace

VqdResult is_vqd(const BlockDecomposition& d) {
  StructuralCpResult structural = structural_cp_form(d);
  if (!structural.ok()) return {false, std::nullopt};
  CQForm form = std::move(*structural.form);

  const cxmat rho = reconstruct(d);
  const cxmat eye_b = cxmat::Identity(d.dim_b, d.dim_b);
  RandomSource rng(0xd15c07d, 0);

  for (int attempt = 0; attempt <= kRefineRetries; ++attempt) {
    form.refined_projectors.clear();
    form.refined_weights.clear();
    form.refined_block.clear();
    bool had_degeneracy = false;

    for (size_t a = 0; a < form.weights.size(); ++a) {
      // Orthonormal columns spanning block a, from its basis vectors.
      const std::vector<int>& members = form.block_members[a];
      cxmat span(d.dim_s, members.size());
      for (size_t c = 0; c < members.size(); ++c) span.col(c) = d.basis.col(members[c]);

      const cxmat restricted = span.adjoint() * form.system_blocks[a] * span;
      Spectrum spec = spectral_decompose(restricted);
      cxmat vecs = spec.eigenvectors;

      for (auto [lo, hi] : degenerate_groups(spec.eigenvalues)) {
        if (hi - lo < 2) continue;
        had_degeneracy = true;
        const cxmat q = span * vecs.middleCols(lo, hi - lo);
        const cxmat rot = bath_refined_rotation(rho, d.dim_b, q, rng);
        vecs.middleCols(lo, hi - lo) = vecs.middleCols(lo, hi - lo) * rot;
      }

      for (int k = 0; k < vecs.cols(); ++k) {
        const cxvec v = span * vecs.col(k);
        form.refined_projectors.push_back(v * v.adjoint());
        form.refined_weights.push_back(std::max(0.0, spec.eigenvalues(k) * form.weights[a]));
        form.refined_block.push_back(static_cast<int>(a));
      }
    }

    cxmat projected = cxmat::Zero(rho.rows(), rho.cols());
    for (const cxmat& pk : form.refined_projectors) {
      const cxmat ext = kron(pk, eye_b);
      projected += ext * rho * ext;
    }
    if ((projected - rho).norm() <= 1e-10 * std::max(1.0, rho.norm()))
      return {true, std::move(form)};
    if (!had_degeneracy) break;  // retries only help via fresh refinements
  }
  return {false, std::nullopt};
}

std::optional<cxmat> find_cq_basis(const BipartiteState& state) {
  const cxmat rho_s = partial_trace_bath(state.matrix, state.dim_s, state.dim_b);
  Spectrum spec = spectral_decompose(rho_s);
  RandomSource rng(0xba51f0c5, 1);

  for (int attempt = 0; attempt <= kRefineRetries; ++attempt) {
    cxmat basis = spec.eigenvectors;
    for (auto [lo, hi] : degenerate_groups(spec.eigenvalues)) {
      if (hi - lo < 2) continue;
      const cxmat q = basis.middleCols(lo, hi - lo);
      const cxmat rot = bath_refined_rotation(state.matrix, state.dim_b, q, rng);
      basis.middleCols(lo, hi - lo) = q * rot;
    }

    BipartiteState candidate{state.matrix, state.dim_s, state.dim_b, basis};
    const BlockDecomposition d = decompose(candidate);
    if (is_sl(d) && is_vqd(d).vqd) return basis;

    bool any_degenerate = false;
    for (auto [lo, hi] : degenerate_groups(spec.eigenvalues))
      if (hi - lo >= 2) any_degenerate = true;
    if (!any_degenerate) break;
  }
  return std::nullopt;
}

StateKind parse_state_kind(const std::string& name) {
  if (name == "product") return StateKind::Product;
  if (name == "cq") return StateKind::CQ;
  if (name == "sl-generic") return StateKind::SlGeneric;
  if (name == "separable-discordant") return StateKind::SeparableDiscordant;
  if (name == "entangled-pure") return StateKind::EntangledPure;
  throw std::invalid_argument("unknown state kind: " + name);
}

std::string state_kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::Product: return "product";
    case StateKind::CQ: return "cq";
    case StateKind::SlGeneric: return "sl-generic";
    case StateKind::SeparableDiscordant: return "separable-discordant";
    case StateKind::EntangledPure: return "entangled-pure";
  }
  throw std::logic_error("unreachable");
}

namespace {

std::vector<int> random_partition(int n, RandomSource& rng) {
  std::vector<int> sizes;
  int left = n;
  while (left > 0) {
    const int s = 1 + static_cast<int>(rng.uniform() * left);
    sizes.push_back(std::min(s, left));
    left -= sizes.back();
  }
  return sizes;
}

BipartiteState generate_cq(const GenParams& p, RandomSource& rng) {
  std::vector<int> sizes = p.block_sizes.empty() ? random_partition(p.dim_s, rng) : p.block_sizes;
  int total = 0;
  for (int s : sizes) total += s;
  if (total != p.dim_s) throw std::invalid_argument("generate_state: block sizes must sum to dim_s");

  const int n = static_cast<int>(sizes.size());
  std::vector<double> weights(n);
  double wsum = 0.0;
  for (double& w : weights) {
    w = 0.05 + rng.uniform();
    wsum += w;
  }

  // Bath states pairwise separated so blocks never merge numerically.
  std::vector<cxmat> baths;
  for (int a = 0; a < n; ++a) {
    cxmat rho_b;
    for (int tries = 0; tries < 64; ++tries) {
      rho_b = random_density(p.dim_b, p.dim_b, rng);
      bool distinct = true;
      for (const cxmat& other : baths)
        if ((rho_b - other).norm() < 0.05) distinct = false;
      if (distinct) break;
    }
    baths.push_back(rho_b);
  }

  cxmat rho = cxmat::Zero(p.dim_s * p.dim_b, p.dim_s * p.dim_b);
  int offset = 0;
  for (int a = 0; a < n; ++a) {
    const int m = sizes[a];
    cxmat sys = cxmat::Zero(p.dim_s, p.dim_s);
    sys.block(offset, offset, m, m) = random_density(m, m, rng);
    rho += (weights[a] / wsum) * kron(sys, baths[a]);
    offset += m;
  }
  return make_bipartite_state(rho, p.dim_s, p.dim_b);
}

BipartiteState generate_separable_discordant(const GenParams& p, RandomSource& rng) {
  if (p.dim_s < 2) throw std::invalid_argument("generate_state: separable-discordant needs dim_s >= 2");
  // Two non-orthogonal system pures with well-separated bath states.
  const cxvec a = rng.unit_vector(p.dim_s);
  cxvec perp = rng.gaussian_vector(p.dim_s);
  perp -= (a.adjoint() * perp)(0) * a;
  perp.normalize();
  const double chi = std::numbers::pi / 5.0 + rng.uniform() * std::numbers::pi / 10.0;
  const cxvec b = std::cos(chi) * a + std::sin(chi) * perp;

  const cxmat rho0 = random_density(p.dim_b, std::max(1, p.dim_b / 2), rng);
  cxmat rho1;
  do {
    rho1 = random_density(p.dim_b, std::max(1, p.dim_b / 2), rng);
  } while ((rho0 - rho1).norm() < 0.4);

  const double w = 0.35 + 0.3 * rng.uniform();
  cxmat rho = w * kron(cxmat(a * a.adjoint()), rho0) +
              (1.0 - w) * kron(cxmat(b * b.adjoint()), rho1);
  return make_bipartite_state(rho, p.dim_s, p.dim_b);
}

}  // namespace

BipartiteState generate_state(StateKind kind, const GenParams& params, RandomSource& rng) {
  const int dS = params.dim_s;
  const int dB = params.dim_b;
  if (dS < 1 || dB < 1) throw std::invalid_argument("generate_state: invalid dimensions");

  switch (kind) {
    case StateKind::Product: {
      const cxmat rho_s = random_density(dS, params.rank > 0 ? std::min(params.rank, dS) : dS, rng);
      const cxmat rho_b = random_density(dB, dB, rng);
      return make_bipartite_state(kron(rho_s, rho_b), dS, dB);
    }
    case StateKind::CQ:
      return generate_cq(params, rng);
    case StateKind::SlGeneric: {
      const int rank = params.rank > 0 ? std::min(params.rank, dS * dB) : dS * dB;
      // Non-SL states are measure-zero; redraw on near-traceless blocks.
      for (;;) {
        const cxmat rho = random_density(dS * dB, rank, rng);
        const double thr = 10.0 * 1e-12 * rho.norm();
        bool ok = true;
        for (int i = 0; i < dS && ok; ++i)
          for (int j = 0; j < dS && ok; ++j) {
            cxd tr = 0.0;
            for (int bb = 0; bb < dB; ++bb) tr += rho(i * dB + bb, j * dB + bb);
            if (std::abs(tr) < thr) ok = false;
          }
        if (ok) return make_bipartite_state(rho, dS, dB);
      }
    }
    case StateKind::SeparableDiscordant:
      return generate_separable_discordant(params, rng);
    case StateKind::EntangledPure: {
      const cxvec psi = rng.unit_vector(dS * dB);
      return make_bipartite_state(psi * psi.adjoint(), dS, dB);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace dgate
