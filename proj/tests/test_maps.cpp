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

#include <cmath>

#include <doctest.h>

#include "dgate/maps.hpp"

using namespace dgate;

namespace {

OperatorSumMap identity_map(int dim) {
  OperatorSumMap m;
  m.in_dim = m.out_dim = dim;
  m.flavor = MapFlavor::Kraus;
  m.terms.push_back({1.0, cxmat::Identity(dim, dim), cxmat::Identity(dim, dim)});
  return m;
}

std::array<cxmat, 4> paulis() {
  cxmat i2 = cxmat::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cxd(0, -1), cxd(0, 1), 0;
  z << 1, 0, 0, -1;
  return {i2, x, y, z};
}

// sigma -> sigma^T as a Hermitian combination of Pauli conjugations.
OperatorSumMap transpose_map() {
  const auto p = paulis();
  OperatorSumMap m;
  m.in_dim = m.out_dim = 2;
  m.flavor = MapFlavor::Hermitian;
  m.terms.push_back({0.5, p[0], p[0]});
  m.terms.push_back({0.5, p[1], p[1]});
  m.terms.push_back({-0.5, p[2], p[2]});
  m.terms.push_back({0.5, p[3], p[3]});
  return m;
}

OperatorSumMap depolarizing_map() {
  const auto p = paulis();
  OperatorSumMap m;
  m.in_dim = m.out_dim = 2;
  m.flavor = MapFlavor::Kraus;
  for (const cxmat& op : p) m.terms.push_back({0.25, op, op});
  return m;
}

}  // namespace

TEST_CASE("identity map Choi is the maximally entangled projector") {
  const ChoiMatrix choi = choi_matrix(identity_map(2));
  cxvec bell = cxvec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  CHECK((choi.matrix - bell * bell.adjoint()).norm() < 1e-14);
  const CpResult cp = is_cp(identity_map(2), 1e-9);
  CHECK(cp.cp);
  CHECK(std::abs(cp.min_choi_eigenvalue) < 1e-12);
}

TEST_CASE("transpose map acts as transpose and fails the Choi test") {
  const OperatorSumMap t = transpose_map();
  RandomSource rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const cxmat sigma = rng.gaussian_matrix(2, 2);
    CHECK((apply_map(t, sigma) - sigma.transpose()).norm() < 1e-13);
  }
  const MapProperties props = map_properties(t);
  CHECK(props.hermitian_preserving);
  CHECK(props.trace_preserving);
  const CpResult cp = is_cp(t, 1e-9);
  CHECK_FALSE(cp.cp);
  CHECK(cp.min_choi_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("depolarizing map has the maximally mixed Choi matrix") {
  const OperatorSumMap dep = depolarizing_map();
  RandomSource rng(42);
  const cxmat sigma = random_density(2, 2, rng);
  CHECK((apply_map(dep, sigma) - 0.5 * cxmat::Identity(2, 2)).norm() < 1e-13);
  const ChoiMatrix choi = choi_matrix(dep);
  CHECK((choi.matrix - 0.25 * cxmat::Identity(4, 4)).norm() < 1e-14);
  CHECK(is_cp(dep, 1e-9).cp);
}

TEST_CASE("non Hermitian-preserving maps are rejected by is_cp") {
  OperatorSumMap m;
  m.in_dim = m.out_dim = 2;
  cxmat left = cxmat::Identity(2, 2);
  cxmat right(2, 2);
  right << 0, 1, 0, 0;
  m.terms.push_back({1.0, left, right});
  CHECK_THROWS_AS(is_cp(m, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(cp_difference(m), std::invalid_argument);
}

TEST_CASE("induced map reproduces the dynamics on the actual initial marginal") {
  RandomSource rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const BipartiteState st = generate_state(StateKind::SlGeneric, GenParams{2, 2}, rng);
    const cxmat u = haar_unitary(4, rng);
    const BlockDecomposition d = decompose(st);
    const OperatorSumMap m = induced_map(d, u);
    const cxmat rho_s = partial_trace_bath(st.matrix, 2, 2);
    CHECK((apply_map(m, rho_s) - evolve(st, u)).norm() < 1e-10);
  }
}

TEST_CASE("induced map from a product state is CP and trace-preserving") {
  RandomSource rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteState st = generate_state(StateKind::Product, GenParams{2, 3}, rng);
    const cxmat u = haar_unitary(6, rng);
    const OperatorSumMap m = induced_map(decompose(st), u);
    const MapProperties props = map_properties(m);
    CHECK(props.hermitian_preserving);
    CHECK(props.trace_preserving);
    const CpResult cp = is_cp(m, 1e-9);
    CHECK(cp.cp);
    CHECK(cp.min_choi_eigenvalue > -1e-9);
  }
}

TEST_CASE("induced map rejects bad input") {
  RandomSource rng(45);
  cxvec bell = cxvec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const BipartiteState bell_state = make_bipartite_state(bell * bell.adjoint(), 2, 2);
  CHECK_THROWS_AS(induced_map(decompose(bell_state), haar_unitary(4, rng)),
                  std::invalid_argument);
  const BipartiteState prod = generate_state(StateKind::Product, GenParams{2, 2}, rng);
  CHECK_THROWS_AS(induced_map(decompose(prod), haar_unitary(6, rng)), std::invalid_argument);
}

TEST_CASE("Kraus form from a block product state matches the dynamics") {
  RandomSource rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteState cq = generate_state(StateKind::CQ, GenParams{3, 2}, rng);
    const BlockDecomposition d = decompose(cq);
    const VqdResult v = is_vqd(d);
    REQUIRE(v.vqd);
    const cxmat u = haar_unitary(6, rng);
    const OperatorSumMap kraus = kraus_from_vqd(*v.form, u);

    CHECK((apply_map(kraus, partial_trace_bath(cq.matrix, 3, 2)) -
           evolve(cq, u)).norm() < 1e-10);

    // Completeness: sum w E^dag E = sum_alpha Pi_alpha = I on the support.
    cxmat sum = cxmat::Zero(3, 3);
    for (const auto& t : kraus.terms) sum += t.weight * t.right.adjoint() * t.left;
    CHECK((sum - cxmat::Identity(3, 3)).norm() < 1e-10);

    for (const auto& t : kraus.terms) {
      CHECK(t.weight >= 0.0);
      CHECK((t.left - t.right).norm() == 0.0);
    }
    CHECK(is_cp(kraus, 1e-9).cp);
  }
}

TEST_CASE("Kraus and induced forms agree as superoperators on VQD states") {
  RandomSource rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteState cq = generate_state(StateKind::CQ, GenParams{2, 2}, rng);
    const BlockDecomposition d = decompose(cq);
    const VqdResult v = is_vqd(d);
    REQUIRE(v.vqd);
    const cxmat u = haar_unitary(4, rng);
    const cxmat s1 = superoperator(induced_map(d, u));
    const cxmat s2 = superoperator(kraus_from_vqd(*v.form, u));
    CHECK((s1 - s2).norm() < 1e-10);
  }
}

TEST_CASE("cp_difference splits a Hermitian map into two Kraus maps") {
  const OperatorSumMap t = transpose_map();
  const CpDifference diff = cp_difference(t);
  CHECK_FALSE(diff.plus.terms.empty());
  CHECK_FALSE(diff.minus.terms.empty());
  CHECK(is_cp(diff.plus, 1e-9).cp);
  CHECK(is_cp(diff.minus, 1e-9).cp);

  cxmat recon = superoperator(diff.plus) - superoperator(diff.minus);
  CHECK((recon - superoperator(t)).norm() < 1e-12);

  RandomSource rng(48);
  for (int trial = 0; trial < 5; ++trial) {
    const BipartiteState st = generate_state(StateKind::SlGeneric, GenParams{2, 2}, rng);
    const OperatorSumMap m = induced_map(decompose(st), haar_unitary(4, rng));
    const CpDifference d2 = cp_difference(m);
    const cxmat back = superoperator(d2.plus) - superoperator(d2.minus);
    CHECK((back - superoperator(m)).norm() < 1e-10);
  }
}

TEST_CASE("superoperator equality characterizes equal maps") {
  // The depolarizing channel in Pauli form versus its replace-with-identity
  // form: different term lists, same superoperator.
  OperatorSumMap replace;
  replace.in_dim = replace.out_dim = 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      cxmat e = cxmat::Zero(2, 2);
      e(i, j) = 1.0;
      replace.terms.push_back({0.5, e, e});
    }
  CHECK((superoperator(replace) - superoperator(depolarizing_map())).norm() < 1e-14);
}
