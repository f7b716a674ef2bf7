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

#include <vector>

#include "dgate/states.hpp"

namespace dgate {

enum class MapFlavor { General, Hermitian, Kraus };

/// sigma |-> sum_terms weight * left * sigma * right^dagger.
/// General flavor folds weights into the operators (weight 1); Hermitian
/// flavor has right == left with real weights; Kraus additionally has
/// weights >= 0.
struct OperatorSumMap {
  struct Term {
    double weight = 1.0;
    cxmat left;
    cxmat right;
  };
  std::vector<Term> terms;
  int in_dim = 0;
  int out_dim = 0;
  MapFlavor flavor = MapFlavor::General;
};

/// (1/dS) sum_ij |i><j| (x) Phi[|i><j|], row index (i,k) -> i*out_dim + k.
struct ChoiMatrix {
  cxmat matrix;
  int dim_s = 0;
  int out_dim = 0;
};

struct MapProperties {
  bool hermitian_preserving = false;
  bool trace_preserving = false;
  double hermitian_deviation = 0.0;  // max anti-Hermitian residue over a Hermitian basis
  double trace_deviation = 0.0;      // || sum w R^dag L - I ||_F
};

struct CpResult {
  bool cp = false;
  double min_choi_eigenvalue = 0.0;
};

/// The operator-sum map the dynamics induces on the system, built from the
/// SVDs of the unit-trace bath blocks. Flavor is left General; Hermiticity
/// is a verified property, not an assumption.
OperatorSumMap induced_map(const BlockDecomposition& d, const cxmat& u);

cxmat apply_map(const OperatorSumMap& m, const cxmat& sigma);

ChoiMatrix choi_matrix(const OperatorSumMap& m);

/// Verdict of is_psd on the Choi matrix; throws if the map is not
/// Hermitian-preserving (residue above 1e-8).
CpResult is_cp(const OperatorSumMap& m, double tol);

MapProperties map_properties(const OperatorSumMap& m);

/// Kraus form for a block product state: operation elements
/// <beta_i| U |lambda_j^alpha> Pi_alpha with weights lambda_j^alpha.
OperatorSumMap kraus_from_vqd(const CQForm& cq, const cxmat& u);

struct CpDifference {
  OperatorSumMap plus;
  OperatorSumMap minus;
};

/// Splits a Hermitian-preserving map into a difference of two Kraus maps via
/// the Choi eigendecomposition.
CpDifference cp_difference(const OperatorSumMap& m);

/// dS^2 x dS^2 matrix of the map on the matrix-unit basis (column (i,j) is
/// vec of Phi[|i><j|]); equal supermatrices imply equal maps.
cxmat superoperator(const OperatorSumMap& m);

}  // namespace dgate
