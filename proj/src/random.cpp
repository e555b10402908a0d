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

#include "waycheck/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace waycheck {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * (std::numbers::sqrt2 / 2.0);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Operator random_haar_unitary(std::size_t dim, Rng &rng) {
    if (dim == 0) {
        throw PreconditionError("random_haar_unitary: dim must be positive");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix z(n, n);
    // Fill row-major so the draw order does not depend on Eigen's storage order.
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            z(r, c) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix &r = qr.matrixQR();
    for (Eigen::Index k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        const double mag = std::abs(d);
        const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
        q.col(k) *= phase;
    }
    return Operator(std::move(q));
}

StateVector random_state(std::size_t dim, Rng &rng) {
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        v(k) = rng.complex_normal();
    }
    return StateVector::normalized(std::move(v));
}

Operator random_hermitian_with_spectrum(std::size_t dim, double lo, double hi, Rng &rng) {
    std::vector<double> d(dim);
    for (double &x : d) {
        x = rng.uniform(lo, hi);
    }
    const Operator w = random_haar_unitary(dim, rng);
    Matrix m = w.matrix() * Operator::diagonal(d).matrix() * w.matrix().adjoint();
    // Symmetrize away the rounding in the product.
    Matrix h = 0.5 * (m + m.adjoint());
    return Operator(std::move(h));
}

Operator random_haar_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_haar_unitary(dim, rng);
}

}  // namespace waycheck
