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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgate/maps.hpp"
#include "dgate/states.hpp"

namespace dgate {

/// U = (I (x) I - i X (x) A) / sqrt(2) with X the (k,l) swap-on-pair and A a
/// Hermitian unitary on the bath. Squeezes the CP condition into the (k,l)
/// sector of the Choi matrix.
struct AdversarialUnitary {
  int k = 0;
  int l = 0;
  int dim_s = 0;
  int dim_b = 0;
  cxmat a;  // Hermitian, A^2 = I
  cxmat x;  // dS x dS
  cxmat u;  // (dS*dB) x (dS*dB)
};

/// Bath-side reflection choice: explicit A, reflection axis |psi>, or a
/// random axis when both are empty.
struct ReflectionSpec {
  std::optional<cxvec> psi;
  std::optional<cxmat> a;
};

AdversarialUnitary adversarial_unitary(int k, int l, int dim_s, int dim_b,
                                       const ReflectionSpec& spec, RandomSource& rng);

/// The 4x4 principal submatrix of dS * Choi in the (k,l) sector, built from
/// the closed-form traces a = Tr[A phi_kk], b = Tr[A phi_kl], c = Tr[A phi_ll].
cxmat principal_submatrix_pkl(const BlockDecomposition& d, const AdversarialUnitary& adv);

/// Rows/cols {kk, kl, lk, ll} of dS * Choi, extracted directly; the oracle
/// the closed form is checked against.
cxmat extract_pkl_from_choi(const ChoiMatrix& choi, int k, int l);

/// Eigenvalue checks on the rotated sector matrix built from (a, b, c):
/// closed forms for the (1,4) and (2,3) sectors, the measured (2,4) sector
/// spectrum against the printed one, and the degenerate-tag forms.
struct SectorEigReport {
  cxd alpha, beta, gamma, delta;
  std::array<double, 2> e14_closed{}, e14_numeric{};
  std::array<double, 2> e23_closed{}, e23_numeric{};
  bool e14_match = false;
  bool e23_match = false;
  std::array<double, 2> e24_numeric{};  // measured: +/- |delta|
  std::array<double, 2> e24_printed{};  // as printed: +/- |alpha|^2
  bool e24_discrepancy = false;
  std::array<double, 2> mixed_tag_closed{}, mixed_tag_numeric{};  // (1 +/- sqrt(1+4|b|^2))/8
  std::array<double, 2> zero_tag_closed{}, zero_tag_numeric{};    // +/- |b|
  bool degenerate_tag_match = false;
};

SectorEigReport submatrix_eig_checks(double a, cxd b, double c);

/// Hermitian-unitary A with Tr[A X] != 0 for nonzero X; nullopt when X
/// vanishes (Frobenius norm <= 1e-12).
std::optional<cxmat> lemma_a_witness(const cxmat& x);

struct Certificate {
  std::string state_label;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  cxmat unitary;
  double min_choi_eigenvalue = 0.0;
  int k = -1;  // -1 when the unitary came from the Haar fallback
  int l = -1;
  rvec submatrix_eigenvalues;
};

struct ViolationSearchResult {
  std::optional<Certificate> certificate;
  bool marginal_seen = false;  // min eig landed in the hysteresis band
  int draws_used = 0;
};

/// Sweeps adversarial unitaries over all (k,l) sectors, then falls back to
/// Haar draws after half the budget. Violation threshold -1e-7.
ViolationSearchResult find_cp_violation(const BipartiteState& state, int budget,
                                        RandomSource& rng);

/// Discord (base-2) for a qubit system: grid search plus local refinement
/// over projective measurements on S, clipped at zero.
double discord_oracle(const BipartiteState& state, int grid = 64, int refine_iters = 40);

struct CampaignConfig {
  std::vector<StateKind> families;
  int dim_s = 2;
  int dim_b = 2;
  int n_states = 100;
  int n_unitaries = 20;
  int budget = 500;
  std::uint64_t seed = 0;
};

struct FamilyTally {
  int tested = 0;
  int cp_confirmed = 0;
  int violations_found = 0;
  int unresolved = 0;
};

struct AnomalyRecord {
  std::string family;
  int state_index = 0;
  std::uint64_t stream = 0;
  std::string what;
  double min_eig = 0.0;
};

struct VerificationReport {
  CampaignConfig config;
  std::vector<std::pair<std::string, FamilyTally>> tallies;
  std::vector<AnomalyRecord> anomalies;
  std::vector<Certificate> certificates;
  double wall_seconds = 0.0;
};

/// Sufficiency arm (product/cq families): n_unitaries Haar draws per state,
/// Choi min eigenvalue must clear -1e-9. Necessity arm (other families):
/// find_cp_violation must certify each state. Trials run concurrently
/// (DISCORD_GATE_THREADS caps the fan-out) with per-trial streams, so the
/// report is a pure function of the config.
VerificationReport monte_carlo_verify(const CampaignConfig& config);

/// Stream id used for a campaign state, exposed for certificate replay.
std::uint64_t campaign_state_stream(int family_index, int state_index);

}  // namespace dgate
