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

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dgate/io.hpp"

namespace {

// Exit codes: 0 clean, 1 verification anomalies, 2 malformed input,
// 3 invariant violation, 4 internal error.
constexpr int kExitAnomalies = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitInternal = 4;

std::pair<int, int> parse_dims(const std::string& dims) {
  const auto x = dims.find('x');
  if (x == std::string::npos) throw dgate::ParseError("dims must look like 2x2");
  try {
    return {std::stoi(dims.substr(0, x)), std::stoi(dims.substr(x + 1))};
  } catch (const std::exception&) {
    throw dgate::ParseError("dims must look like 2x2");
  }
}

int run_analyze(const std::string& state_path, const std::string& unitary_path, double tol,
                int budget, bool as_json) {
  const dgate::BipartiteState state = dgate::load_state(state_path);
  std::optional<dgate::cxmat> unitary;
  if (!unitary_path.empty()) unitary = dgate::load_unitary(unitary_path);
  const dgate::AnalysisVerdict verdict = dgate::analyze_state(state, unitary, tol, budget);
  if (as_json)
    std::cout << dgate::canonical_json(dgate::verdict_to_json(verdict));
  else
    std::cout << dgate::verdict_to_text(verdict);
  return 0;
}

int run_verify(const std::vector<std::string>& families, const std::string& dims, int n_states,
               int n_unitaries, int budget, std::uint64_t seed, const std::string& out_path) {
  dgate::CampaignConfig cfg;
  for (const auto& f : families) cfg.families.push_back(dgate::parse_state_kind(f));
  std::tie(cfg.dim_s, cfg.dim_b) = parse_dims(dims);
  cfg.n_states = n_states;
  cfg.n_unitaries = n_unitaries;
  cfg.budget = budget;
  cfg.seed = seed;

  const dgate::VerificationReport report = dgate::monte_carlo_verify(cfg);
  const std::string text = dgate::canonical_json(dgate::report_to_json(report));
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  } else {
    std::cout << text;
  }

  int anomalies = static_cast<int>(report.anomalies.size());
  for (const auto& [family, tally] : report.tallies) {
    std::cerr << family << ": tested " << tally.tested << ", cp_confirmed " << tally.cp_confirmed
              << ", violations_found " << tally.violations_found << ", unresolved "
              << tally.unresolved << "\n";
  }
  return anomalies == 0 ? 0 : kExitAnomalies;
}

int run_generate(const std::string& kind_name, const std::string& dims, int count,
                 std::uint64_t seed, const std::string& out_dir) {
  const dgate::StateKind kind = dgate::parse_state_kind(kind_name);
  dgate::GenParams params;
  std::tie(params.dim_s, params.dim_b) = parse_dims(dims);
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    dgate::RandomSource rng(seed, static_cast<std::uint64_t>(i));
    const dgate::BipartiteState state = dgate::generate_state(kind, params, rng);
    const std::string label = kind_name + "-" + std::to_string(i);
    const std::string path = out_dir + "/" + label + ".json";
    dgate::save_state(path, state, label, seed);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CP-map analysis of system-bath initial states"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Analyze a state file");
  std::string state_path, unitary_path;
  double tol = 1e-9;
  int budget = 0;
  bool as_json = false;
  analyze->add_option("state", state_path, "State JSON file")->required();
  analyze->add_option("--unitary", unitary_path, "Joint unitary JSON file");
  analyze->add_option("--tol", tol, "CP tolerance for the Choi check");
  analyze->add_option("--budget", budget, "Violation-search budget (0 disables)");
  analyze->add_flag("--json", as_json, "Emit canonical JSON");

  auto* verify = app.add_subcommand("verify", "Run a randomized verification campaign");
  std::vector<std::string> families{"product", "cq", "separable-discordant", "sl-generic"};
  std::string dims = "2x2", out_path;
  int n_states = 100, n_unitaries = 20, vbudget = 500;
  std::uint64_t seed = 0;
  verify->add_option("--families", families, "State families")->delimiter(',');
  verify->add_option("--dims", dims, "System x bath dimensions, e.g. 2x2");
  verify->add_option("--n-states", n_states, "States per family");
  verify->add_option("--n-unitaries", n_unitaries, "Haar unitaries per VQD-family state");
  verify->add_option("--budget", vbudget, "Violation-search budget per state");
  verify->add_option("--seed", seed, "Campaign seed");
  verify->add_option("--out", out_path, "Report file (stdout when omitted)");

  auto* generate = app.add_subcommand("generate", "Write sample state files");
  std::string kind = "cq", out_dir = ".";
  int count = 1;
  std::uint64_t gseed = 0;
  generate->add_option("--kind", kind, "State family");
  generate->add_option("--dims", dims, "System x bath dimensions");
  generate->add_option("--count", count, "Number of files");
  generate->add_option("--seed", gseed, "Generator seed");
  generate->add_option("--out-dir", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(state_path, unitary_path, tol, budget, as_json);
    if (verify->parsed())
      return run_verify(families, dims, n_states, n_unitaries, vbudget, seed, out_path);
    if (generate->parsed()) return run_generate(kind, dims, count, gseed, out_dir);
  } catch (const dgate::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const dgate::InvariantError& e) {
    std::cerr << "error: invalid state: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
