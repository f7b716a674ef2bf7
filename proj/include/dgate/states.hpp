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

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dgate/linalg.hpp"
#include "dgate/random.hpp"

namespace dgate {

/// Joint system-bath density matrix with a declared system decomposition
/// basis (columns of `basis` are the |i> in which blocks are taken).
struct BipartiteState {
  cxmat matrix;  // (dS*dB) x (dS*dB), system index slow
  int dim_s = 0;
  int dim_b = 0;
  cxmat basis;  // dS x dS unitary; identity = computational
};

/// Diagnostic naming the first violated invariant, or nullopt if valid.
std::optional<std::string> check_bipartite_invariants(const cxmat& matrix, int dim_s,
                                                      int dim_b, const cxmat& basis);

/// Validates invariants (Hermitian 1e-10, trace 1, PSD at 1e-9, basis
/// unitary 1e-12) and throws std::invalid_argument naming the violation.
BipartiteState make_bipartite_state(cxmat matrix, int dim_s, int dim_b,
                                    cxmat basis = cxmat());

enum class TraceTag { One, ZeroTraceless, ZeroBlock };

/// rho_SB = sum_ij coeffs(i,j) |i><j| (x) bath_op(i,j), in the declared basis.
/// Blocks with unit trace are tagged One; exact zeros ZeroBlock; nonzero
/// traceless blocks (normalized by Frobenius norm) ZeroTraceless.
struct BlockDecomposition {
  int dim_s = 0;
  int dim_b = 0;
  cxmat basis;
  cxmat coeffs;                  // dS x dS
  std::vector<cxmat> bath_ops;   // dS*dS entries, row-major (i*dS+j)
  std::vector<TraceTag> tags;    // same layout
  bool sl = false;
  double zero_threshold = 0.0;

  const cxmat& bath_op(int i, int j) const { return bath_ops[i * dim_s + j]; }
  TraceTag tag(int i, int j) const { return tags[i * dim_s + j]; }
};

/// Connected components of the bath-operator supermatrix: i ~ j when
/// bath_op(i,j) is nonzero.
struct BlockPartition {
  std::vector<std::vector<int>> blocks;   // disjoint, cover 0..dS-1, each sorted
  std::vector<bool> constant_phi;         // per block
  std::vector<cxmat> representative;      // per block; meaningful when constant
  std::vector<cxmat> projectors;          // Pi_alpha, dS x dS, ambient coords
  // First pair of entries whose bath ops differ, per non-constant block.
  std::vector<std::array<int, 2>> witness_a, witness_b;
};

/// The block product form p_alpha rho_S^(alpha) (x) rho_B^(alpha), with the
/// optional rank-1 refinement of each system block.
struct CQForm {
  int dim_s = 0;
  int dim_b = 0;
  std::vector<double> weights;        // p_alpha, kept blocks only
  std::vector<cxmat> system_blocks;   // rho_S^(alpha), ambient coords
  std::vector<cxmat> bath_states;     // rho_B^(alpha)
  std::vector<cxmat> projectors;      // Pi_alpha for kept blocks
  std::vector<std::vector<int>> block_members;  // basis indices per kept block
  // Rank-1 refinement (filled by is_vqd): projector, weight, owning block.
  std::vector<cxmat> refined_projectors;
  std::vector<double> refined_weights;
  std::vector<int> refined_block;
};

struct CpFormFailure {
  std::array<int, 2> first{-1, -1};
  std::array<int, 2> second{-1, -1};
  std::string reason;
};

struct StructuralCpResult {
  std::optional<CQForm> form;
  CpFormFailure failure;  // meaningful only when !form
  bool ok() const { return form.has_value(); }
};

/// Tr_B[U rho U^dagger]; throws on dimension mismatch or non-unitary U.
cxmat evolve(const BipartiteState& state, const cxmat& u);

BlockDecomposition decompose(const BipartiteState& state, double zero_threshold = -1.0);

/// Re-assembles the joint state from a decomposition.
cxmat reconstruct(const BlockDecomposition& d);

bool is_sl(const BlockDecomposition& d);

/// Throws on non-SL input.
BlockPartition find_blocks(const BlockDecomposition& d);

/// Succeeds iff every block is constant-phi with a valid density-matrix
/// representative; blocks of weight <= 1e-12 are dropped.
StructuralCpResult structural_cp_form(const BlockDecomposition& d);

struct VqdResult {
  bool vqd = false;
  std::optional<CQForm> form;  // with refinement, when vqd
};

/// Structural test plus the rank-1 projective-invariance check. Degenerate
/// system-block eigenspaces are refined against the bath blocks.
VqdResult is_vqd(const BlockDecomposition& d);

/// Searches for a system basis in which the state passes is_vqd. Candidate
/// comes from the eigenvectors of rho_S, with degenerate eigenspaces refined
/// by simultaneous diagonalization of the projected bath blocks.
std::optional<cxmat> find_cq_basis(const BipartiteState& state);

enum class StateKind { Product, CQ, SlGeneric, SeparableDiscordant, EntangledPure };

struct GenParams {
  int dim_s = 2;
  int dim_b = 2;
  int rank = 0;                      // 0 = full rank where applicable
  std::vector<int> block_sizes;      // CQ only; empty = random partition
};

StateKind parse_state_kind(const std::string& name);
std::string state_kind_name(StateKind kind);

BipartiteState generate_state(StateKind kind, const GenParams& params, RandomSource& rng);

}  // namespace dgate
