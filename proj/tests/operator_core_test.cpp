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


#include <numbers>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "waycheck/random.hpp"

namespace waycheck {
namespace {

using testing::cnot;
using testing::ket;
using testing::max_abs_diff;
using testing::naive_kron;
using testing::naive_mul;
using testing::pauli_x;
using testing::pauli_z;
using testing::plus;
using testing::to_grid;

Operator random_operator(std::size_t dim, Rng &rng) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.complex_normal();
    return Operator(m);
}

Operator random_anti_hermitian(std::size_t dim, Rng &rng) {
    const Matrix g = random_operator(dim, rng).matrix();
    return Operator(0.5 * (g - g.adjoint()));
}

TEST(Operator, RejectsMalformedMatrices) {
    EXPECT_THROW(Operator(Matrix(2, 3)), Error);
    EXPECT_THROW(Operator(Matrix(0, 0)), Error);
    Matrix m = Matrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Operator{m}, Error);
}

TEST(StateVector, RequiresUnitNorm) {
    EXPECT_THROW(StateVector(Vector::Ones(2)), Error);
    EXPECT_NO_THROW(StateVector(Vector::Unit(3, 1)));
    EXPECT_NEAR(StateVector::normalized(Vector::Ones(4)).amplitudes().norm(), 1.0, 1e-15);
}

TEST(ToleranceConfig, RejectsNegative) {
    ToleranceConfig tol;
    EXPECT_NO_THROW(tol.validate());
    tol.rank = -1.0;
    EXPECT_THROW(tol.validate(), PreconditionError);
}

TEST(TensorProduct, IdentityTimesIdentity) {
    const Operator t = tensor_product(Operator::identity(2), Operator::identity(2));
    EXPECT_EQ(t.dim(), 4u);
    EXPECT_EQ(t.matrix(), Matrix::Identity(4, 4));
}

TEST(TensorProduct, Diagonals) {
    const Operator t = tensor_product(Operator::diagonal({1, 2}), Operator::diagonal({1, 3}));
    EXPECT_EQ(max_abs_diff(t.matrix(), Operator::diagonal({1, 3, 2, 6}).matrix()), 0.0);
}

TEST(TensorProduct, XTensorZIsBlockMatrix) {
    const Operator t = tensor_product(pauli_x(), pauli_z());
    Matrix expected = Matrix::Zero(4, 4);
    expected.block(0, 2, 2, 2) = pauli_z().matrix();
    expected.block(2, 0, 2, 2) = pauli_z().matrix();
    EXPECT_EQ(max_abs_diff(t.matrix(), expected), 0.0);
}

TEST(TensorProduct, MatchesLoopOracleOnRandomInputs) {
    Rng rng(11);
    for (std::size_t n : {1u, 2u, 3u}) {
        for (std::size_t m : {1u, 2u, 4u}) {
            const Operator a = random_operator(n, rng);
            const Operator b = random_operator(m, rng);
            EXPECT_LE(max_abs_diff(to_grid(tensor_product(a, b).matrix()),
                                   naive_kron(to_grid(a.matrix()), to_grid(b.matrix()))),
                      0.0);
        }
    }
}

TEST(TensorProduct, MixedProductAndAssociativity) {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = trial % 2 == 0 ? 2 : 3;
        const Operator a = random_operator(n, rng), b = random_operator(n, rng);
        const Operator c = random_operator(n, rng), d = random_operator(n, rng);
        const Matrix lhs = (tensor_product(a, b) * tensor_product(c, d)).matrix();
        const Matrix rhs = tensor_product(a * c, b * d).matrix();
        EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12 * (1.0 + lhs.norm()));
        const Matrix left = tensor_product(tensor_product(a, b), c).matrix();
        const Matrix right = tensor_product(a, tensor_product(b, c)).matrix();
        EXPECT_LE(max_abs_diff(left, right), 1e-12 * (1.0 + left.norm()));
    }
}

TEST(TensorProduct, StatesFollowSystemMajorOrder) {
    const StateVector s = tensor_product(ket(2, 1), ket(3, 2));
    EXPECT_EQ(s.dim(), 6u);
    EXPECT_EQ(s[1 * 3 + 2], Complex(1.0));
}

TEST(Commutator, Examples) {
    EXPECT_EQ(commutator(pauli_z(), pauli_z()).matrix(), Matrix::Zero(2, 2));
    Rng rng(3);
    const Operator a = random_operator(3, rng);
    EXPECT_EQ(commutator(a, Operator::identity(3)).matrix().norm(), 0.0);
    Matrix expected(2, 2);
    expected << 0, -2, 2, 0;
    EXPECT_EQ(max_abs_diff(commutator(pauli_x(), pauli_z()).matrix(), expected), 0.0);
}

TEST(Commutator, AntisymmetricExactly) {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const Operator a = random_operator(3, rng), b = random_operator(3, rng);
        EXPECT_EQ(commutator(a, b).matrix(), (-1.0 * commutator(b, a)).matrix());
    }
}

TEST(Commutator, DimensionMismatch) {
    EXPECT_THROW(commutator(Operator::identity(2), Operator::identity(3)), DimensionMismatch);
}

TEST(Expectation, Examples) {
    EXPECT_NEAR(std::abs(expectation(pauli_z(), ket(2, 0)) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expectation(pauli_z(), plus())), 0.0, 1e-15);
    const Complex e = expectation(Operator::diagonal({1, 2}), plus());
    EXPECT_NEAR(e.real(), 1.5, 1e-15);
    EXPECT_NEAR(e.imag(), 0.0, 1e-12);
    EXPECT_THROW(expectation(pauli_z(), ket(3, 0)), DimensionMismatch);
}

TEST(Variance, Examples) {
    EXPECT_NEAR(variance(pauli_z(), ket(2, 0)), 0.0, 1e-15);
    EXPECT_NEAR(variance(pauli_z(), plus()), 1.0, 1e-15);
    // ⟨(Z⊗Z)²⟩ - ⟨Z⊗Z⟩² = 1 - 0 on |+⟩⊗|0⟩.
    EXPECT_NEAR(variance(tensor_product(pauli_z(), pauli_z()), tensor_product(plus(), ket(2, 0))), 1.0, 1e-15);
}

TEST(Variance, RejectsNonHermitian) {
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_THROW(variance(Operator(m), plus()), PreconditionError);
}

TEST(Variance, MomentFormAndNonnegativity) {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 4);
        const Operator a = random_hermitian_with_spectrum(dim, -3.0, 3.0, rng);
        const StateVector s = random_state(dim, rng);
        const double v = variance(a, s);
        const double moments = expectation(a * a, s).real() - std::pow(expectation(a, s).real(), 2);
        EXPECT_GE(v, 0.0);
        EXPECT_NEAR(v, moments, 1e-12);
    }
}

TEST(Validate, Examples) {
    const ValidationReport u = validate(Operator::identity(4), OperatorProperty::unitary);
    EXPECT_TRUE(u.verdict);
    EXPECT_EQ(u.residual, 0.0);
    EXPECT_FALSE(validate(Operator::diagonal({1, 0}), OperatorProperty::positive_spectrum).verdict);
    const ValidationReport r = validate(Operator(Matrix::Ones(3, 3)), OperatorProperty::full_rank);
    EXPECT_FALSE(r.verdict);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_TRUE(validate(pauli_x(), OperatorProperty::hermitian).verdict);
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_FALSE(validate(Operator(m), OperatorProperty::hermitian).verdict);
    EXPECT_THROW(validate(Operator(m), OperatorProperty::positive_spectrum), PreconditionError);
}

TEST(Eigensystem, PauliZ) {
    const Eigensystem e = hermitian_eigensystem(pauli_z());
    ASSERT_EQ(e.values.size(), 2u);
    EXPECT_NEAR(e.values[0], -1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
    EXPECT_TRUE(testing::equal_up_to_phase(e.vectors[0].amplitudes(), ket(2, 1).amplitudes(), 1e-12));
    EXPECT_TRUE(testing::equal_up_to_phase(e.vectors[1].amplitudes(), ket(2, 0).amplitudes(), 1e-12));
}

TEST(Eigensystem, PauliX) {
    const Eigensystem e = hermitian_eigensystem(pauli_x());
    Vector minus(2), plus_v(2);
    minus << 1, -1;
    plus_v << 1, 1;
    EXPECT_NEAR(e.values[0], -1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
    EXPECT_TRUE(testing::equal_up_to_phase(e.vectors[0].amplitudes(), minus / std::sqrt(2.0), 1e-12));
    EXPECT_TRUE(testing::equal_up_to_phase(e.vectors[1].amplitudes(), plus_v / std::sqrt(2.0), 1e-12));
}

TEST(Eigensystem, DegenerateDiagonal) {
    const Eigensystem e = hermitian_eigensystem(Operator::diagonal({2, 5, 2}));
    EXPECT_NEAR(e.values[0], 2.0, 1e-14);
    EXPECT_NEAR(e.values[1], 2.0, 1e-14);
    EXPECT_NEAR(e.values[2], 5.0, 1e-14);
    // The 2-eigenspace is spanned by |0⟩ and |2⟩.
    EXPECT_NEAR(std::abs(e.vectors[0][1]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(e.vectors[1][1]), 0.0, 1e-12);
}

TEST(Eigensystem, ReconstructionAndOrthonormality) {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t dim = 1 + static_cast<std::size_t>(trial % 6);
        const Operator a = random_hermitian_with_spectrum(dim, -2.0, 4.0, rng);
        const Eigensystem e = hermitian_eigensystem(a);
        Matrix v(a.matrix().rows(), a.matrix().cols());
        for (std::size_t k = 0; k < dim; ++k) {
            v.col(static_cast<Eigen::Index>(k)) = e.vectors[k].amplitudes();
            EXPECT_LE((a.matrix() * e.vectors[k].amplitudes() - e.values[k] * e.vectors[k].amplitudes()).norm(),
                      1e-10);
            if (k > 0) {
                EXPECT_LE(e.values[k - 1], e.values[k]);
            }
        }
        Matrix lambda = Matrix::Zero(v.rows(), v.cols());
        for (std::size_t k = 0; k < dim; ++k) lambda(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = e.values[k];
        EXPECT_LE((v.adjoint() * v - Matrix::Identity(v.rows(), v.cols())).norm(), 1e-10);
        EXPECT_LE((a.matrix() - v * lambda * v.adjoint()).norm(), 1e-9 * a.matrix().norm());
    }
}

TEST(NumericalRank, Examples) {
    EXPECT_EQ(numerical_rank(Operator(Matrix::Ones(3, 3)), 1e-10), 1u);
    EXPECT_EQ(numerical_rank(Operator::identity(4), 1e-10), 4u);
    EXPECT_EQ(numerical_rank(Operator::diagonal({1.0, 1e-14}), 1e-10), 1u);
    EXPECT_EQ(numerical_rank(Operator::zero(3), 1e-10), 0u);
}

TEST(UnitaryCompletion, SingleColumn) {
    const std::vector<StateVector> cols{ket(2, 0)};
    const Operator u = unitary_completion(cols);
    EXPECT_TRUE(validate(u, OperatorProperty::unitary).verdict);
    EXPECT_EQ(u.matrix().col(0), ket(2, 0).amplitudes());
    EXPECT_NEAR(std::abs(u(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(u.matrix().col(1).norm(), 1.0, 1e-15);
}

TEST(UnitaryCompletion, KeepsColumnsExactly) {
    const std::vector<StateVector> cols{ket(4, 0), ket(4, 1)};
    const Operator u = unitary_completion(cols);
    EXPECT_EQ(u.matrix().col(0), cols[0].amplitudes());
    EXPECT_EQ(u.matrix().col(1), cols[1].amplitudes());
    EXPECT_TRUE(validate(u, OperatorProperty::unitary).verdict);
}

TEST(UnitaryCompletion, RejectsNonOrthogonal) {
    const std::vector<StateVector> cols{ket(2, 0), plus()};
    EXPECT_THROW(unitary_completion(cols), Error);
}

TEST(UnitaryCompletion, RandomPartialIsometries) {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 5);
        const Operator h = random_haar_unitary(dim, rng);
        std::vector<StateVector> cols;
        for (std::size_t k = 0; k < 1 + static_cast<std::size_t>(trial) % dim; ++k) {
            cols.push_back(StateVector::normalized(h.matrix().col(static_cast<Eigen::Index>(k))));
        }
        const Operator u = unitary_completion(cols);
        EXPECT_LE(validate(u, OperatorProperty::unitary).residual, 1e-10);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            EXPECT_EQ(u.matrix().col(static_cast<Eigen::Index>(k)), cols[k].amplitudes());
        }
    }
}

TEST(Haar, DeterministicAndUnitary) {
    const Operator a = random_haar_unitary(4, 1234);
    const Operator b = random_haar_unitary(4, 1234);
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_LE((a.matrix().adjoint() * a.matrix() - Matrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_NE(a.matrix(), random_haar_unitary(4, 1235).matrix());
    const Operator one = random_haar_unitary(1, 99);
    EXPECT_NEAR(std::abs(one(0, 0)), 1.0, 1e-15);
}

TEST(Haar, FirstMomentsLookUniform) {
    // For Haar U in dimension d: E|U_00|² = 1/d and E U_00 = 0.
    const std::size_t d = 3;
    const int samples = 4000;
    double second = 0.0;
    Complex first = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Operator u = random_haar_unitary(d, derive_seed(42, static_cast<std::uint64_t>(s)));
        second += std::norm(u(0, 0));
        first += u(0, 0);
    }
    EXPECT_NEAR(second / samples, 1.0 / d, 0.02);
    EXPECT_NEAR(std::abs(first / static_cast<double>(samples)), 0.0, 0.03);
}

TEST(AntiHermitianExp, Examples) {
    EXPECT_LE(max_abs_diff(anti_hermitian_exp(Operator::zero(3)).matrix(), Matrix::Identity(3, 3)), 1e-15);
    const Operator k = Complex(0.0, std::numbers::pi / 2.0) * pauli_z();
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = Complex(0, 1);
    expected(1, 1) = Complex(0, -1);
    EXPECT_LE(max_abs_diff(anti_hermitian_exp(k).matrix(), expected), 1e-14);
    EXPECT_THROW(anti_hermitian_exp(pauli_x()), PreconditionError);
}

TEST(AntiHermitianExp, InverseAndUnitarity) {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dim = 2 + static_cast<std::size_t>(trial % 5);
        const Operator k = random_anti_hermitian(dim, rng);
        const Operator e = anti_hermitian_exp(k);
        const Operator inv = anti_hermitian_exp(-1.0 * k);
        EXPECT_LE(max_abs_diff((e * inv).matrix(), Matrix::Identity(e.matrix().rows(), e.matrix().cols())), 1e-12);
        EXPECT_TRUE(validate(e, OperatorProperty::unitary).verdict);
    }
}

TEST(AntiHermitianExp, MatchesTaylorSeries) {
    Rng rng(2);
    const Operator k = Complex(0.3) * random_anti_hermitian(3, rng);
    Matrix sum = Matrix::Identity(3, 3), term = Matrix::Identity(3, 3);
    for (int n = 1; n < 30; ++n) {
        term = term * k.matrix() / static_cast<double>(n);
        sum += term;
    }
    EXPECT_LE(max_abs_diff(anti_hermitian_exp(k).matrix(), sum), 1e-13);
}

TEST(CnotFixture, IsUnitaryAndSelfInverse) {
    EXPECT_LE(max_abs_diff(naive_mul(to_grid(cnot().matrix()), to_grid(cnot().matrix())),
                           to_grid(Matrix::Identity(4, 4))),
              0.0);
}

}  // namespace
}  // namespace waycheck
