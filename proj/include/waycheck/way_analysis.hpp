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
 * Executable form of the no-go theorem for multiplicative conserved
 * quantities L^A ⊗ L^B: if U conserves L^A ⊗ L^B, L^A and L^B have positive
 * spectra, L^B has full rank and n2 < 2 n1, then any observable measured
 * exactly and nondestructively commutes with L^A.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "waycheck/measurement_model.hpp"
#include "waycheck/operator_core.hpp"

namespace waycheck {

struct IdentityResidualTable {
    /// R(i,j) = ⟨u(i)|la|u(j)⟩ (⟨v|lb|v⟩ - ⟨v(i)|lb|v(j)⟩)
    Matrix residuals;
    double max_abs = 0.0;
};

/// Throws PreconditionError naming the failing check (kind, check_nondestructive,
/// check_conserved) when the identity's hypotheses do not hold.
IdentityResidualTable matrix_element_identity(const MeasurementModel &m, const ConservedQuantity &q,
                                              const ToleranceConfig &tol = {});

struct PointerGramReport {
    Matrix gram_lb;  ///< B(i,j) = ⟨v(i)|lb|v(j)⟩
    std::size_t rank = 0;
    bool constant_case = false;
};

PointerGramReport pointer_gram_rank(const Operator &lb, const PointerFamily &pointers, double tol);

struct AssumptionCheck {
    std::string name;
    double residual = 0.0;
    bool passed = false;
    std::string detail;
};

enum class Outcome { assumptions_violated, consistent, contradiction };

std::string to_string(Outcome outcome);

struct TheoremVerdict {
    /// conservation, lb_full_rank, la_positive, lb_positive, dimension_bound,
    /// nondestructive, exact: in this order.
    std::vector<AssumptionCheck> assumptions;
    /// Informational: the stricter n2 < 2 n1 - 1 reading of the rank count. Not used for the outcome.
    AssumptionCheck proof_dimension_bound;
    double commutator_norm = 0.0;  ///< ‖[Ô, la]‖_F
    Outcome outcome = Outcome::assumptions_violated;

    bool all_assumptions_pass() const;
    const AssumptionCheck &assumption(const std::string &name) const;
};

/// Checks every hypothesis at tol.conservation (plus tol.rank for spectra) and
/// compares ‖[Ô, la]‖_F with tol.conservation. Throws PreconditionError for an
/// additive quantity and DimensionMismatch when q does not fit the model.
TheoremVerdict theorem_verdict(const MeasurementModel &m, const ConservedQuantity &q, const ToleranceConfig &tol = {});

struct CounterexampleSweepConfig {
    std::size_t n1 = 2;
    std::size_t n2 = 2;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    ToleranceConfig tol;
    std::size_t workers = 0;  ///< 0 picks the hardware concurrency
};

enum class SweepBasis { la_eigenbasis, haar };

std::string to_string(SweepBasis basis);

struct CounterexampleTrial {
    std::size_t trial = 0;
    SweepBasis basis = SweepBasis::haar;
    double conservation_residual = 0.0;
    double leakage = 0.0;
    /// Pointer Gram deficit, or the unnormalized block-Gram deficit when a pointer is degenerate.
    double exact_deficit = 0.0;
    double commutator_norm = 0.0;
    Outcome outcome = Outcome::assumptions_violated;
    bool counterexample = false;
};

struct CounterexampleSweepReport {
    CounterexampleSweepConfig config;
    std::vector<CounterexampleTrial> trials;
    std::size_t nondestructive = 0;
    std::size_t exact_nondestructive = 0;
    std::size_t consistent = 0;
    std::size_t assumptions_violated = 0;
    std::size_t contradictions = 0;
    std::size_t counterexamples = 0;
    /// Largest ‖[Ô, la]‖_F among exact nondestructive trials (0 when there are none).
    double max_exact_commutator = 0.0;
};

/// Counterexample threshold on ‖[Ô, la]‖_F.
inline constexpr double kCounterexampleCommutator = 1e-6;

/// Random falsification harness. Trial t draws la, lb (spectra in [0.5, 2]),
/// a conserving U and a ready state from the stream derive_seed(seed, t). Even
/// trials measure in la's eigenbasis, odd trials in a Haar-random basis.
/// Throws PreconditionError unless n2 < 2 n1 and count ≥ 1.
CounterexampleSweepReport counterexample_sweep(const CounterexampleSweepConfig &config);

/// Conservation residual of the additive quantity la ⊗ 1 + 1 ⊗ lb.
ConservationReport additive_conservation_check(const MeasurementModel &m, const ConservedQuantity &q, double tol);

}  // namespace waycheck
