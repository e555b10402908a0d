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

/**
 * @file
 * Search over unitaries that conserve a given quantity.
 *
 * A unitary commutes with a Hermitian L exactly when it is block diagonal
 * on L's eigenspaces, so the feasible set is a product of smaller unitary
 * groups. Sampling draws a Haar unitary per block; optimization moves along
 * block-diagonal anti-Hermitian generators, which keeps every iterate
 * feasible.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "waycheck/measurement_model.hpp"
#include "waycheck/operator_core.hpp"

namespace waycheck {

struct EigenBlock {
    double eigenvalue = 0.0;
    std::vector<StateVector> basis;

    /// Basis vectors as the columns of a dim × block-size matrix.
    Matrix basis_matrix() const;
};

struct BlockDecomposition {
    std::vector<EigenBlock> blocks;
    std::size_t total_dim = 0;

    /// Σ_blocks eigenvalue · B B†.
    Matrix reconstruct() const;
};

/// Groups the eigenvalues of a Hermitian operator whose consecutive gaps are ≤ tol.grouping.
BlockDecomposition eigenspace_blocks(const Operator &l, const ToleranceConfig &tol = {});

BlockDecomposition conserved_eigenspaces(const ConservedQuantity &q, const ToleranceConfig &tol = {});

Operator random_commutant_unitary(const BlockDecomposition &d, std::uint64_t seed);

/// Drops the cross-block part of an anti-Hermitian generator.
Operator project_generator(const Operator &k, const BlockDecomposition &d, const ToleranceConfig &tol = {});

struct SearchConfig {
    std::uint64_t seed = 0;
    std::size_t restarts = 8;
    std::size_t max_iter = 2000;
    double step = 0.1;    ///< initial trust radius, radians per generator parameter
    double ftol = 1e-12;  ///< convergence: improvement below this for 10 consecutive iterations
    std::size_t workers = 0;  ///< 0 picks the hardware concurrency
};

struct SearchResult {
    Operator best_unitary = Operator::identity(1);
    double best_objective = 0.0;
    /// (iteration, objective) at the start and after each accepted step of the winning restart.
    std::vector<std::pair<std::size_t, double>> objective_trace;
    std::size_t restarts_used = 0;
    bool converged = false;
    std::size_t best_restart = 0;
    std::vector<double> restart_objectives;
    std::vector<bool> restart_converged;
    double conservation_residual = 0.0;  ///< ‖[best_unitary, L]‖_F
};

/// la's eigenbasis plus every pairwise equal-weight superposition of it.
std::vector<StateVector> default_probe_states(const Operator &la, const ToleranceConfig &tol = {});

/// Minimizes the mean of ε(ψ)² over `probe_states` among unitaries conserving q.
SearchResult minimize_epsilon(const ConservedQuantity &q, const Operator &o, const Operator &probe,
                              const StateVector &ready_state, std::span<const StateVector> probe_states,
                              const SearchConfig &config, const ToleranceConfig &tol = {});

struct FeasibilityResult {
    SearchResult search;
    double commutator_norm = 0.0;  ///< ‖[o, la]‖_F
    bool hypotheses_hold = false;  ///< multiplicative, positive la and lb, full-rank lb, n2 < 2 n1
    bool no_go_applies = false;    ///< hypotheses hold and ‖[o, la]‖_F ≥ 0.5
    bool no_go_holds = true;       ///< every restart ended above the 1e-3 floor (vacuous unless applicable)
    bool commuting = false;        ///< ‖[o, la]‖_F ≤ tol.conservation
};

inline constexpr double kNoGoCommutatorThreshold = 0.5;
inline constexpr double kNoGoObjectiveFloor = 1e-3;

/// Searches conserving unitaries for an exact nondestructive scheme measuring o's
/// eigenbasis with apparatus ready state |0⟩. The objective is
/// Σ_{i≠j} ‖w(i,j)‖² + ‖[⟨w(i,i)|w(j,j)⟩] - I‖_F².
FeasibilityResult feasibility_search(const ConservedQuantity &q, const Operator &o, const SearchConfig &config,
                                     const ToleranceConfig &tol = {});

}  // namespace waycheck
