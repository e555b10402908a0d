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
 * Unitary premeasurement models.
 *
 * A model couples an n1-dimensional system to an n2-dimensional apparatus
 * prepared in a ready state v. For each system basis state u(j) the
 * interaction produces
 *
 *     U (u(j) ⊗ v) = Σ_i u(i) ⊗ w(i, j).
 *
 * The scheme is nondestructive when every off-diagonal block w(i, j), i ≠ j,
 * vanishes, and then w(j, j) is the pointer state v(j) reached by the
 * apparatus. It is exact when the pointers are mutually orthogonal.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "waycheck/operator_core.hpp"

namespace waycheck {

enum class ConservationKind { additive, multiplicative };

std::string to_string(ConservationKind kind);

/// The pair (L^A, L^B) combined either as L^A ⊗ L^B or L^A ⊗ 1 + 1 ⊗ L^B.
struct ConservedQuantity {
    ConservationKind kind;
    Operator la;
    Operator lb;

    /// Throws PreconditionError when la or lb is not Hermitian.
    ConservedQuantity(ConservationKind kind, Operator la, Operator lb, const ToleranceConfig &tol = {});

    /// The joint conserved operator on the system ⊗ apparatus space.
    Operator joint() const;
};

std::vector<StateVector> computational_basis(std::size_t dim);

class MeasurementModel {
  public:
    /// Throws PreconditionError if the basis is not orthonormal within 1e-8,
    /// the interaction is not unitary within tol.unitarity, or dimensions disagree.
    MeasurementModel(std::vector<StateVector> system_basis, StateVector ready_state, Operator interaction,
                     const ToleranceConfig &tol = {});

    std::size_t n1() const { return system_basis_.size(); }
    std::size_t n2() const { return ready_state_.dim(); }
    const std::vector<StateVector> &system_basis() const { return system_basis_; }
    const StateVector &ready_state() const { return ready_state_; }
    const Operator &interaction() const { return interaction_; }

    /// Σ_i (i + 1) |u(i)⟩⟨u(i)|: the non-degenerate observable this scheme measures.
    Operator measured_observable() const;

  private:
    std::vector<StateVector> system_basis_;
    StateVector ready_state_;
    Operator interaction_;
};

/// The n1 × n1 grid of apparatus vectors w(i, j).
class JointBlocks {
  public:
    JointBlocks(std::size_t n1, std::vector<Vector> blocks) : n1_(n1), blocks_(std::move(blocks)) {}

    std::size_t n1() const { return n1_; }
    const Vector &operator()(std::size_t i, std::size_t j) const { return blocks_[i * n1_ + j]; }

  private:
    std::size_t n1_;
    std::vector<Vector> blocks_;
};

JointBlocks joint_blocks(const MeasurementModel &m);

struct PointerFamily {
    /// v(j) = w(j,j)/‖w(j,j)‖, or the raw w(j,j) when that block is degenerate.
    std::vector<Vector> pointers;
    double leakage = 0.0;
};

struct NondestructiveReport {
    double leakage = 0.0;  ///< max over i ≠ j of ‖w(i, j)‖
    bool verdict = false;
    PointerFamily pointers;
    /// Indices j whose diagonal block has ‖w(j, j)‖ ≤ tol.
    std::vector<std::size_t> degenerate_pointers;

    bool pointers_well_defined() const { return degenerate_pointers.empty(); }
};

NondestructiveReport check_nondestructive(const MeasurementModel &m, double tol);

/// A diagonal block is too small to define a pointer state.
class DegeneratePointerError : public Error {
  public:
    using Error::Error;
};

struct ExactnessReport {
    Matrix gram;  ///< ⟨v(i)|v(j)⟩
    double deficit = 0.0;
    bool verdict = false;
};

/// Throws DegeneratePointerError when some pointer is undefined.
ExactnessReport check_exact(const MeasurementModel &m, double tol);

struct ConservationReport {
    double residual = 0.0;  ///< ‖U† L U - L‖_F
    bool verdict = false;
};

ConservationReport check_conserved(const MeasurementModel &m, const ConservedQuantity &q, double tol);

/// Smooth measures of how far a model is from an exact nondestructive scheme,
/// defined without normalizing the diagonal blocks.
struct SchemeDefects {
    double off_diagonal_sq = 0.0;  ///< Σ_{i≠j} ‖w(i, j)‖²
    double block_gram_deficit = 0.0;  ///< ‖[⟨w(i,i)|w(j,j)⟩] - I‖_F
};

SchemeDefects scheme_defects(const JointBlocks &w);

/// Builds U with U (u(j) ⊗ v) = u(j) ⊗ v(j); the remaining columns come from
/// unitary completion. Throws PreconditionError for a pointer that is not unit norm.
MeasurementModel synthesize_unitary(std::span<const StateVector> system_basis, const StateVector &ready_state,
                                    std::span<const Vector> pointers, const ToleranceConfig &tol = {});

}  // namespace waycheck
