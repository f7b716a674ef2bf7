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

#include <Eigen/Dense>
#include <complex>

namespace dgate {

using cxd = std::complex<double>;
using cxmat = Eigen::MatrixXcd;
using cxvec = Eigen::VectorXcd;
using rvec = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
/// Eigenvector phases are fixed so the largest-magnitude component of each
/// column is real and positive.
struct Spectrum {
  rvec eigenvalues;
  cxmat eigenvectors;  // columns, same order as eigenvalues
};

struct Svd {
  cxmat left;            // columns |x_a>
  rvec singular_values;  // descending, >= 0
  cxmat right;           // columns |y_a>; m = left * diag(s) * right^dagger
};

struct PsdResult {
  bool psd;
  double min_eigenvalue;
};

cxmat kron(const cxmat& a, const cxmat& b);

/// Trace out the bath (fast index); m must be (dS*dB) x (dS*dB).
cxmat partial_trace_bath(const cxmat& m, int dim_s, int dim_b);

/// Trace out the system (slow index).
cxmat partial_trace_system(const cxmat& m, int dim_s, int dim_b);

double hermiticity_deviation(const cxmat& m);
double unitarity_deviation(const cxmat& u);

/// Throws if h deviates from Hermitian by more than 1e-10 (relative
/// Frobenius); otherwise solves on the symmetrized (h + h^dagger)/2.
Spectrum spectral_decompose(const cxmat& h);

Svd svd(const cxmat& m);

/// Verdict is min_eig >= -tol * max(1, trace norm).
PsdResult is_psd(const cxmat& m, double tol);

}  // namespace dgate
