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


#include <gtest/gtest.h>

#include "test_support.hpp"
#include "waycheck/commutant_search.hpp"
#include "waycheck/noise_bound.hpp"

namespace waycheck {
namespace {

using testing::max_abs_diff;
using testing::mult;
using testing::pauli_x;
using testing::pauli_z;

std::vector<std::size_t> block_dims(const BlockDecomposition &d) {
    std::vector<std::size_t> dims;
    for (const auto &b : d.blocks) dims.push_back(b.basis.size());
    return dims;
}

Operator random_anti_hermitian(std::size_t dim, Rng &rng) {
    Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = rng.complex_normal();
    return Operator(0.5 * (g - g.adjoint()));
}

TEST(Eigenspaces, IdentityApparatus) {
    const BlockDecomposition d = conserved_eigenspaces(mult(Operator::diagonal({1, 2}), Operator::identity(2)));
    EXPECT_EQ(block_dims(d), (std::vector<std::size_t>{2, 2}));
    EXPECT_NEAR(d.blocks[0].eigenvalue, 1.0, 1e-14);
    EXPECT_NEAR(d.blocks[1].eigenvalue, 2.0, 1e-14);
    EXPECT_EQ(d.total_dim, 4u);
}

TEST(Eigenspaces, DiagonalApparatus) {
    const BlockDecomposition d = conserved_eigenspaces(mult(Operator::diagonal({1, 2}), Operator::diagonal({1, 2})));
    EXPECT_EQ(block_dims(d), (std::vector<std::size_t>{1, 2, 1}));
}

TEST(Eigenspaces, GroupsWithinTolerance) {
    const BlockDecomposition d = eigenspace_blocks(Operator::diagonal({1.0, 1.0 + 1e-12, 3.0}));
    EXPECT_EQ(block_dims(d), (std::vector<std::size_t>{2, 1}));
}

TEST(Eigenspaces, ReconstructAndOrthogonality) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const ConservedQuantity q = mult(random_hermitian_with_spectrum(2, 0.5, 2, rng),
                                         trial % 2 == 0 ? Operator::identity(3) : random_hermitian_with_spectrum(3, 0.5, 2, rng));
        const BlockDecomposition d = conserved_eigenspaces(q);
        EXPECT_LE(max_abs_diff(d.reconstruct(), q.joint().matrix()), 1e-9);
        Matrix all(6, 0);
        std::size_t total = 0;
        for (const auto &b : d.blocks) {
            const Matrix m = b.basis_matrix();
            Matrix grown(6, all.cols() + m.cols());
            grown << all, m;
            all = grown;
            total += b.basis.size();
        }
        EXPECT_EQ(total, d.total_dim);
        EXPECT_LE((all.adjoint() * all - Matrix::Identity(6, 6)).norm(), 1e-10);
        for (std::size_t k = 1; k < d.blocks.size(); ++k) EXPECT_GT(d.blocks[k].eigenvalue - d.blocks[k - 1].eigenvalue, 1e-9);
    }
}

TEST(CommutantUnitary, SingleBlockIsHaar) {
    const BlockDecomposition d = eigenspace_blocks(Operator::identity(3));
    ASSERT_EQ(d.blocks.size(), 1u);
    const Operator u = random_commutant_unitary(d, 5);
    EXPECT_TRUE(validate(u, OperatorProperty::unitary).verdict);
    EXPECT_GT(std::abs(u(0, 1)), 0.0);
}

TEST(CommutantUnitary, NondegenerateGivesPhases) {
    const Operator l = Operator::diagonal({1, 2, 3, 4});
    const Operator u = random_commutant_unitary(eigenspace_blocks(l), 6);
    for (Eigen::Index r = 0; r < 4; ++r)
        for (Eigen::Index c = 0; c < 4; ++c) {
            if (r == c) {
                EXPECT_NEAR(std::abs(u.matrix()(r, c)), 1.0, 1e-12);
            } else {
                EXPECT_NEAR(std::abs(u.matrix()(r, c)), 0.0, 1e-12);
            }
        }
}

TEST(CommutantUnitary, ConservesAndIsDeterministic) {
    const ConservedQuantity q = mult(Operator::diagonal({1, 2}), Operator::identity(2));
    const BlockDecomposition d = conserved_eigenspaces(q);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Operator u = random_commutant_unitary(d, seed);
        EXPECT_LE(commutator(u, Operator::diagonal({1, 1, 2, 2})).matrix().norm(), 1e-10);
        EXPECT_EQ(u.matrix(), random_commutant_unitary(d, seed).matrix());
    }
}

TEST(ProjectGenerator, Examples) {
    const BlockDecomposition d = eigenspace_blocks(Operator::diagonal({1, 1, 2, 2}));
    Rng rng(44);
    Matrix block = Matrix::Zero(4, 4);
    block.block(0, 0, 2, 2) = random_anti_hermitian(2, rng).matrix();
    block.block(2, 2, 2, 2) = random_anti_hermitian(2, rng).matrix();
    EXPECT_LE(max_abs_diff(project_generator(Operator(block), d).matrix(), block), 1e-12);
    Matrix cross = Matrix::Zero(4, 4);
    cross.block(0, 2, 2, 2) = random_anti_hermitian(2, rng).matrix() + Matrix::Ones(2, 2);
    cross.block(2, 0, 2, 2) = -cross.block(0, 2, 2, 2).adjoint();
    EXPECT_LE(project_generator(Operator(cross), d).matrix().norm(), 1e-12);
    EXPECT_THROW(project_generator(Operator::identity(4), d), PreconditionError);
}

TEST(ProjectGenerator, ExponentialConserves) {
    Rng rng(45);
    for (int trial = 0; trial < 20; ++trial) {
        const ConservedQuantity q = mult(random_hermitian_with_spectrum(2, 0.5, 2, rng), Operator::identity(2));
        const BlockDecomposition d = conserved_eigenspaces(q);
        const Operator p = project_generator(random_anti_hermitian(4, rng), d);
        EXPECT_TRUE(is_anti_hermitian(p, 1e-12));
        EXPECT_LE(commutator(anti_hermitian_exp(p), q.joint()).matrix().norm(), 1e-10);
    }
}

TEST(DefaultProbeStates, EigenbasisAndPairs) {
    const std::vector<StateVector> s = default_probe_states(Operator::diagonal({1, 2, 3}));
    // 3 eigenvectors plus 3 pairwise superpositions.
    EXPECT_EQ(s.size(), 6u);
}

class MinimizeEpsilon : public ::testing::Test {
  protected:
    SearchConfig config_ = [] {
        SearchConfig c;
        c.seed = 17;
        c.restarts = 4;
        return c;
    }();
};

TEST_F(MinimizeEpsilon, CommutingObservableReachesZero) {
    const ConservedQuantity q = mult(Operator::diagonal({1, 2}), Operator::identity(2));
    const auto probes = default_probe_states(q.la);
    const SearchResult r = minimize_epsilon(q, pauli_z(), pauli_z(), testing::ket(2, 0), probes, config_);
    EXPECT_LE(r.best_objective, 1e-6);
    EXPECT_LE(r.conservation_residual, 1e-9);
    EXPECT_EQ(r.restarts_used, 4u);
}

TEST_F(MinimizeEpsilon, NoncommutingObservableHasFloor) {
    const ConservedQuantity q = mult(Operator::diagonal({1, 2}), Operator::identity(2));
    const auto probes = default_probe_states(q.la);
    SearchConfig c = config_;
    c.restarts = 8;
    const SearchResult r = minimize_epsilon(q, pauli_x(), pauli_z(), testing::ket(2, 0), probes, c);
    for (double obj : r.restart_objectives) EXPECT_GT(obj, 1e-3);
    EXPECT_LE(r.conservation_residual, 1e-9);
}

TEST_F(MinimizeEpsilon, TrivialConservedQuantityIsUnconstrained) {
    const ConservedQuantity q = mult(Operator::identity(2), Operator::identity(2));
    const auto probes = default_probe_states(Operator::diagonal({1, 2}));
    const SearchResult r = minimize_epsilon(q, pauli_x(), pauli_z(), testing::ket(2, 0), probes, config_);
    EXPECT_LE(r.best_objective, 1e-6);
}

TEST_F(MinimizeEpsilon, TraceIsMonotoneAndMatchesBest) {
    const ConservedQuantity q = mult(Operator::diagonal({1, 2}), Operator::diagonal({1, 3}));
    const auto probes = default_probe_states(q.la);
    const SearchResult r = minimize_epsilon(q, pauli_x(), pauli_z(), testing::ket(2, 0), probes, config_);
    ASSERT_FALSE(r.objective_trace.empty());
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
        EXPECT_LE(r.objective_trace[k].second, r.objective_trace[k - 1].second);
        EXPECT_GT(r.objective_trace[k].first, r.objective_trace[k - 1].first);
    }
    double best = r.objective_trace.front().second;
    for (const auto &p : r.objective_trace) best = std::min(best, p.second);
    EXPECT_NEAR(r.best_objective, best, 1e-12);
    // The best unitary really attains the reported mean noise.
    const MeasurementModel m(computational_basis(2), testing::ket(2, 0), r.best_unitary);
    double mean = 0.0;
    for (const auto &psi : probes) mean += epsilon_sq(m, pauli_x(), pauli_z(), psi);
    EXPECT_NEAR(mean / static_cast<double>(probes.size()), r.best_objective, 1e-10);
}

TEST_F(MinimizeEpsilon, DeterministicAcrossWorkers) {
    const ConservedQuantity q = mult(Operator::diagonal({1, 2}), Operator::diagonal({1, 3}));
    const auto probes = default_probe_states(q.la);
    SearchConfig c = config_;
    c.workers = 1;
    const SearchResult a = minimize_epsilon(q, pauli_x(), pauli_z(), testing::ket(2, 0), probes, c);
    c.workers = 3;
    const SearchResult b = minimize_epsilon(q, pauli_x(), pauli_z(), testing::ket(2, 0), probes, c);
    EXPECT_EQ(a.best_unitary.matrix(), b.best_unitary.matrix());
    EXPECT_EQ(a.restart_objectives, b.restart_objectives);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(a.best_restart, b.best_restart);
}

TEST(FeasibilitySearch, CommutingReachesExactScheme) {
    SearchConfig c;
    c.seed = 3;
    const FeasibilityResult r = feasibility_search(mult(Operator::diagonal({1, 2}), Operator::identity(2)), pauli_z(), c);
    EXPECT_TRUE(r.commuting);
    EXPECT_FALSE(r.no_go_applies);
    EXPECT_LE(r.search.best_objective, 1e-8);
    // The optimum is an exact nondestructive scheme for the Z basis.
    const MeasurementModel m(computational_basis(2), testing::ket(2, 0), r.search.best_unitary);
    EXPECT_LE(check_nondestructive(m, 1e-6).leakage, 1e-4);
}

TEST(FeasibilitySearch, NoGoFloor) {
    SearchConfig c;
    c.seed = 3;
    c.restarts = 8;
    const FeasibilityResult r = feasibility_search(mult(Operator::diagonal({1, 2}), Operator::identity(2)), pauli_x(), c);
    EXPECT_TRUE(r.hypotheses_hold);
    EXPECT_TRUE(r.no_go_applies);
    EXPECT_TRUE(r.no_go_holds);
    EXPECT_NEAR(r.commutator_norm, std::sqrt(2.0), 1e-14);
    ASSERT_EQ(r.search.restart_objectives.size(), 8u);
    for (double obj : r.search.restart_objectives) EXPECT_GT(obj, 1e-3);
    EXPECT_LE(r.search.conservation_residual, 1e-9);
}

TEST(FeasibilitySearch, LargeApparatusIsOutsideHypotheses) {
    SearchConfig c;
    c.seed = 3;
    c.restarts = 2;
    const FeasibilityResult r = feasibility_search(mult(Operator::diagonal({1, 2}), Operator::identity(4)), pauli_x(), c);
    EXPECT_FALSE(r.hypotheses_hold);
    EXPECT_FALSE(r.no_go_applies);
    EXPECT_TRUE(r.no_go_holds);
}

}  // namespace
}  // namespace waycheck
