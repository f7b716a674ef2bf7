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
#include <random>

#include "dgate/linalg.hpp"

namespace dgate {

/// Deterministic random stream keyed by (seed, stream). Identical keys give
/// identical draw sequences; parallel trials use disjoint stream ids.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Fresh generator for substream `stream`, keyed off this source's seed.
  RandomSource split(std::uint64_t stream) const;

  double uniform();  // [0, 1)
  double normal();   // standard normal, Box-Muller
  cxd complex_normal();  // re and im each N(0,1)

  cxvec gaussian_vector(int dim);
  cxmat gaussian_matrix(int rows, int cols);
  cxvec unit_vector(int dim);  // Haar on the sphere

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// QR of a complex Gaussian draw with phase-corrected R diagonal.
cxmat haar_unitary(int dim, RandomSource& rng);

/// G G^dagger / Tr for a dim x rank Gaussian G: PSD, trace 1, rank `rank`.
cxmat random_density(int dim, int rank, RandomSource& rng);

cxmat random_hermitian(int dim, RandomSource& rng);

}  // namespace dgate
