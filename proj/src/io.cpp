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

#include "dgate/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace dgate {

using nlohmann::json;

namespace {

void emit_canonical(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        emit_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit_canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_json(const json& j) {
  std::string out;
  emit_canonical(j, out);
  out += '\n';
  return out;
}

json matrix_to_json(const cxmat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

cxmat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError("matrix rows must be non-empty arrays");
  cxmat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ParseError("ragged matrix rows");
    for (size_t k = 0; k < cols; ++k) {
      const json& cell = j[i][k];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw ParseError("matrix entries must be [re, im] number pairs");
      m(i, k) = cxd(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

json state_to_json(const BipartiteState& state, const std::string& label, std::uint64_t seed) {
  json j;
  j["dim_s"] = state.dim_s;
  j["dim_b"] = state.dim_b;
  j["matrix"] = matrix_to_json(state.matrix);
  if (state.basis.size() != 0 &&
      (state.basis - cxmat::Identity(state.dim_s, state.dim_s)).norm() > 0.0)
    j["basis"] = matrix_to_json(state.basis);
  j["metadata"] = {{"label", label}, {"seed", seed}};
  return j;
}

BipartiteState state_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("state file must be a JSON object");
  if (!j.contains("dim_s") || !j.contains("dim_b") || !j.contains("matrix"))
    throw ParseError("state file needs dim_s, dim_b, and matrix");
  if (!j["dim_s"].is_number_integer() || !j["dim_b"].is_number_integer())
    throw ParseError("dim_s and dim_b must be integers");
  const int dim_s = j["dim_s"].get<int>();
  const int dim_b = j["dim_b"].get<int>();
  const cxmat m = matrix_from_json(j["matrix"]);
  cxmat basis;
  if (j.contains("basis")) basis = matrix_from_json(j["basis"]);
  if (auto bad = check_bipartite_invariants(m, dim_s, dim_b, basis))
    throw InvariantError(*bad);
  return make_bipartite_state(m, dim_s, dim_b, basis);
}

BipartiteState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return state_from_json(j);
}

void save_state(const std::string& path, const BipartiteState& state, const std::string& label,
                std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << canonical_json(state_to_json(state, label, seed));
}

cxmat load_unitary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("matrix")) throw ParseError("unitary file needs a matrix field");
  const cxmat u = matrix_from_json(j["matrix"]);
  if (u.rows() != u.cols() || unitarity_deviation(u) > 1e-10)
    throw ParseError("matrix in " + path + " is not unitary");
  return u;
}

AnalysisVerdict analyze_state(const BipartiteState& state, const std::optional<cxmat>& unitary,
                              double tol, int budget) {
  AnalysisVerdict v;
  const BlockDecomposition d = decompose(state);
  v.sl = is_sl(d);

  if (v.sl) {
    const BlockPartition part = find_blocks(d);
    v.blocks = part.blocks;
    const StructuralCpResult structural = structural_cp_form(d);
    v.structural_cp = structural.ok();
    if (!structural.ok() && structural.failure.first[0] >= 0)
      v.failing_pair = {structural.failure.first, structural.failure.second};
    v.vqd = is_vqd(d).vqd;

    if (unitary) {
      const CpResult cp = is_cp(induced_map(d, *unitary), tol);
      v.choi_min_eigenvalue = cp.min_choi_eigenvalue;
    }
    if (budget > 0 && !*v.vqd) {
      RandomSource rng(0, 0);
      ViolationSearchResult search = find_cp_violation(state, budget, rng);
      if (search.certificate) {
        search.certificate->state_label = "analyzed-state";
        v.certificates.push_back(*search.certificate);
      }
    }
  }

  v.cq_basis_found = find_cq_basis(state).has_value();
  if (state.dim_s == 2) v.discord_estimate = discord_oracle(state);
  return v;
}

namespace {

json certificate_to_json(const Certificate& c) {
  json j;
  j["state_label"] = c.state_label;
  j["seed"] = c.seed;
  j["stream"] = c.stream;
  j["k"] = c.k;
  j["l"] = c.l;
  j["min_choi_eigenvalue"] = c.min_choi_eigenvalue;
  json eigs = json::array();
  for (int i = 0; i < c.submatrix_eigenvalues.size(); ++i)
    eigs.push_back(c.submatrix_eigenvalues(i));
  j["submatrix_eigenvalues"] = std::move(eigs);
  j["unitary"] = matrix_to_json(c.unitary);
  return j;
}

}  // namespace

json verdict_to_json(const AnalysisVerdict& v) {
  json j;
  j["sl"] = v.sl;
  j["blocks"] = v.blocks ? json(*v.blocks) : json(nullptr);
  j["structural_cp"] = v.structural_cp ? json(*v.structural_cp) : json(nullptr);
  j["structural_cp_failing_pair"] =
      v.failing_pair ? json::array({json::array({(*v.failing_pair)[0][0], (*v.failing_pair)[0][1]}),
                                    json::array({(*v.failing_pair)[1][0], (*v.failing_pair)[1][1]})})
                     : json(nullptr);
  j["vqd"] = v.vqd ? json(*v.vqd) : json(nullptr);
  j["cq_basis_found"] = v.cq_basis_found;
  j["discord_estimate"] = v.discord_estimate ? json(*v.discord_estimate) : json(nullptr);
  j["choi_min_eigenvalue"] = v.choi_min_eigenvalue ? json(*v.choi_min_eigenvalue) : json(nullptr);
  json certs = json::array();
  for (const auto& c : v.certificates) certs.push_back(certificate_to_json(c));
  j["certificates"] = std::move(certs);
  return j;
}

std::string verdict_to_text(const AnalysisVerdict& v) {
  std::ostringstream out;
  out << "SL class:           " << (v.sl ? "yes" : "no") << "\n";
  if (v.blocks) {
    out << "blocks:             ";
    for (const auto& b : *v.blocks) {
      out << "{";
      for (size_t i = 0; i < b.size(); ++i) out << (i ? "," : "") << b[i];
      out << "} ";
    }
    out << "\n";
  } else {
    out << "blocks:             (skipped: state is not SL)\n";
  }
  if (v.structural_cp) {
    out << "structural CP form: " << (*v.structural_cp ? "yes" : "no");
    if (v.failing_pair)
      out << "  [first offending pair (" << (*v.failing_pair)[0][0] << ","
          << (*v.failing_pair)[0][1] << ")/(" << (*v.failing_pair)[1][0] << ","
          << (*v.failing_pair)[1][1] << ")]";
    out << "\n";
  }
  if (v.vqd) out << "vanishing discord:  " << (*v.vqd ? "yes" : "no") << "\n";
  out << "CQ basis found:     " << (v.cq_basis_found ? "yes" : "no") << "\n";
  if (v.discord_estimate)
    out << "discord estimate:   " << *v.discord_estimate << "\n";
  if (v.choi_min_eigenvalue)
    out << "Choi min eigenvalue (supplied unitary): " << *v.choi_min_eigenvalue << "\n";
  if (!v.certificates.empty()) {
    const Certificate& c = v.certificates.front();
    out << "CP violation certificate: min Choi eigenvalue " << c.min_choi_eigenvalue
        << " at sector (" << c.k << "," << c.l << ")\n";
  }
  return out.str();
}

json report_to_json(const VerificationReport& report, bool with_meta) {
  json j;
  json cfg;
  json fams = json::array();
  for (StateKind k : report.config.families) fams.push_back(state_kind_name(k));
  cfg["families"] = std::move(fams);
  cfg["dim_s"] = report.config.dim_s;
  cfg["dim_b"] = report.config.dim_b;
  cfg["n_states"] = report.config.n_states;
  cfg["n_unitaries"] = report.config.n_unitaries;
  cfg["budget"] = report.config.budget;
  cfg["seed"] = report.config.seed;
  j["config"] = std::move(cfg);

  json tallies;
  for (const auto& [family, tally] : report.tallies) {
    tallies[family] = {{"tested", tally.tested},
                       {"cp_confirmed", tally.cp_confirmed},
                       {"violations_found", tally.violations_found},
                       {"unresolved", tally.unresolved}};
  }
  j["tallies"] = std::move(tallies);

  json anomalies = json::array();
  for (const auto& a : report.anomalies)
    anomalies.push_back({{"family", a.family},
                         {"state_index", a.state_index},
                         {"stream", a.stream},
                         {"what", a.what},
                         {"min_eig", a.min_eig}});
  j["anomalies"] = std::move(anomalies);

  json certs = json::array();
  for (const auto& c : report.certificates) certs.push_back(certificate_to_json(c));
  j["certificates"] = std::move(certs);

  if (with_meta) {
    // Wall-clock data lives only here; comparisons drop this field.
    char stamp[32] = {0};
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    j["meta"] = {{"wall_seconds", report.wall_seconds}, {"timestamp", stamp}};
  }
  return j;
}

}  // namespace dgate
