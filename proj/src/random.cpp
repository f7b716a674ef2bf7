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

#include "dgate/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dgate {

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed),
      static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
  };
  gen_.seed(seq);
}

RandomSource RandomSource::split(std::uint64_t stream) const {
  return RandomSource(seed_, stream);
}

double RandomSource::uniform() {
  // 53 mantissa bits, [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomSource::normal() {
  // Box-Muller; std::normal_distribution is implementation-defined.
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

cxd RandomSource::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

cxvec RandomSource::gaussian_vector(int dim) {
  cxvec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_normal();
  return v;
}

cxmat RandomSource::gaussian_matrix(int rows, int cols) {
  cxmat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
  return m;
}

cxvec RandomSource::unit_vector(int dim) {
  cxvec v = gaussian_vector(dim);
  const double n = v.norm();
  if (n == 0.0) return unit_vector(dim);
  return v / n;
}

cxmat haar_unitary(int dim, RandomSource& rng) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
  const cxmat g = rng.gaussian_matrix(dim, dim);
  Eigen::HouseholderQR<cxmat> qr(g);
  cxmat q = qr.householderQ();
  const cxmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const cxd d = r(i, i);
    q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cxd(1.0);
  }
  return q;
}

cxmat random_density(int dim, int rank, RandomSource& rng) {
  if (rank < 1 || rank > dim) throw std::invalid_argument("random_density: rank out of range");
  const cxmat g = rng.gaussian_matrix(dim, rank);
  cxmat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

cxmat random_hermitian(int dim, RandomSource& rng) {
  const cxmat g = rng.gaussian_matrix(dim, dim);
  return 0.5 * (g + g.adjoint());
}

}  // namespace dgate
