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

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dgate/verify.hpp"

namespace dgate {

/// Malformed file or JSON (exit code 2 territory).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed file describing a state that violates its invariants
/// (exit code 3 territory).
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Canonical serialization: sorted keys, floats at 17 significant digits,
/// no locale dependence. Byte-stable for golden-file comparison.
std::string canonical_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const cxmat& m);
cxmat matrix_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const BipartiteState& state, const std::string& label,
                             std::uint64_t seed);
BipartiteState state_from_json(const nlohmann::json& j);

/// Reads and validates a state file; throws ParseError / InvariantError.
BipartiteState load_state(const std::string& path);
void save_state(const std::string& path, const BipartiteState& state,
                const std::string& label, std::uint64_t seed);

/// Reads a unitary from {"matrix": ...}; throws ParseError on malformed
/// input or a non-unitary matrix.
cxmat load_unitary(const std::string& path);

struct AnalysisVerdict {
  bool sl = false;
  std::optional<std::vector<std::vector<int>>> blocks;  // SL states only
  std::optional<bool> structural_cp;
  std::optional<std::array<std::array<int, 2>, 2>> failing_pair;
  std::optional<bool> vqd;
  bool cq_basis_found = false;
  std::optional<double> discord_estimate;  // qubit systems only
  std::optional<double> choi_min_eigenvalue;  // when a unitary was supplied
  std::vector<Certificate> certificates;
};

/// Full pipeline on one state: decomposition, SL test, blocks, structural
/// form, projective-invariance test, basis search, discord, and an optional
/// violation search (budget > 0, SL, non-VQD states).
AnalysisVerdict analyze_state(const BipartiteState& state, const std::optional<cxmat>& unitary,
                              double tol, int budget);

nlohmann::json verdict_to_json(const AnalysisVerdict& v);
std::string verdict_to_text(const AnalysisVerdict& v);

nlohmann::json report_to_json(const VerificationReport& report, bool with_meta = true);

}  // namespace dgate
