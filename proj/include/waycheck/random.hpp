// Copyright 2026 The waycheck Authors
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

#pragma once

#include <cstdint>
#include <random>

#include "waycheck/operator_core.hpp"

namespace waycheck {

/// Seeded generator whose output depends only on the seed.
///
/// The standard distributions are implementation-defined, so uniform and
/// normal variates are derived here directly from the mt19937_64 bit stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();
    /// Complex normal with E|z|² = 1.
    Complex complex_normal();

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Independent stream seed for (seed, stream) pairs (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Operator random_haar_unitary(std::size_t dim, Rng &rng);
StateVector random_state(std::size_t dim, Rng &rng);

/// W diag(d) W† with W Haar and each d drawn uniformly from [lo, hi].
Operator random_hermitian_with_spectrum(std::size_t dim, double lo, double hi, Rng &rng);

}  // namespace waycheck
