// Copyright 2026 The fpif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random instances: points, subspaces, monotone matrices. Used by the
// probes, the CLI's random operator blocks, and the test suites.

#pragma once

#include <cstdint>
#include <random>

#include "fpif/hilbert.hpp"

namespace fpif {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

Vector random_gaussian(Rng& rng, Index n);
// Uniform in the Euclidean ball of the given radius (in the space metric).
Vector random_in_ball(Rng& rng, const Space& space, double radius);
Matrix random_matrix(Rng& rng, Index rows, Index cols);
// Symmetric positive definite with eigenvalues in [min_eig, min_eig + spread].
Matrix random_spd(Rng& rng, Index n, double min_eig = 0.1, double spread = 2.0);
Matrix random_skew(Rng& rng, Index n);
// SPD part plus a skew part: monotone and invertible.
Matrix random_monotone(Rng& rng, Index n);
// Projector onto the span of k random vectors (k may be 0 or dim).
Projector random_subspace(Rng& rng, const Space& space, Index k);

}  // namespace fpif
