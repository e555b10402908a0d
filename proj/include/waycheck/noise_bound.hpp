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
 * Measurement noise and its lower bounds.
 *
 * The noise operator compares the evolved probe with the target observable,
 *
 *     N = U† (1 ⊗ M) U - O ⊗ 1,
 *
 * and the noise on a system state ψ is ε² = ⟨Ψ|N²|Ψ⟩ with Ψ = ψ ⊗ v.
 *
 * For a conserved L = L^A ⊗ L^B the Robertson inequality gives
 * ε² ≥ (ΔN)² ≥ |⟨[N, L]⟩|² / (4 Var(L)), which always holds. The other
 * bounds replace Var(L) by Var(L^A) Var(L^B) and are audited against ε²
 * rather than trusted.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "waycheck/measurement_model.hpp"
#include "waycheck/operator_core.hpp"

namespace waycheck {

/// Slack allowed when comparing a bound with ε².
inline constexpr double kBoundSlack = 1e-9;
/// Denominators at or below this make a bound undefined.
inline constexpr double kDegenerateDenominator = 1e-12;

Operator noise_operator(const MeasurementModel &m, const Operator &o, const Operator &probe,
                        const ToleranceConfig &tol = {});

double epsilon_sq(const MeasurementModel &m, const Operator &o, const Operator &probe, const StateVector &psi,
                  const ToleranceConfig &tol = {});

struct RobertsonBound {
    double bound = 0.0;
    double numerator = 0.0;  ///< |⟨[N, L]⟩|² / 4
    double var_L_exact = 0.0;
    bool degenerate = false;  ///< Var(L) ≤ 1e-12; bound set to 0
    bool valid = false;
};

/// Throws PreconditionError unless U conserves q within tol.conservation.
RobertsonBound robertson_bound(const MeasurementModel &m, const Operator &o, const Operator &probe,
                               const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol = {});

enum class BoundStatus { ok, undefined, not_applicable };

std::string to_string(BoundStatus status);

struct BoundResult {
    BoundStatus status = BoundStatus::undefined;
    double value = 0.0;  ///< meaningful only when status == ok
    double numerator = 0.0;
    double denominator = 0.0;
    bool valid = false;  ///< value ≤ ε² + 1e-9; false unless status == ok

    bool defined() const { return status == BoundStatus::ok; }
};

/// |⟨[O,L^A]⊗L^B - U†(L^A⊗[M,L^B])U⟩|² / (4 Var(L^A; ψ) Var(L^B; v)).
BoundResult paper_bound(const MeasurementModel &m, const Operator &o, const Operator &probe,
                        const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol = {});

/// |⟨[O,L^A]⊗L^B⟩|² / (4 Var(L^A; ψ) Var(L^B; v)); not applicable unless ‖[M, L^B]‖_F ≤ 1e-10.
BoundResult yanase_bound(const MeasurementModel &m, const Operator &o, const Operator &probe,
                         const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol = {});

/// |⟨ψ|[O,L^A]|ψ⟩|² / (4 Var(L^A; ψ)); not applicable unless |⟨v|L^B|v⟩| ≤ 1e-10.
/// Validity is judged against the supplied ε².
BoundResult simplified_bound(const MeasurementModel &m, const Operator &o, const ConservedQuantity &q,
                             const StateVector &psi, double epsilon_sq_value, const ToleranceConfig &tol = {});

struct NoiseReport {
    double epsilon_sq = 0.0;
    RobertsonBound robertson;
    BoundResult paper;
    BoundResult yanase;
    BoundResult simplified;
    double var_L_exact = 0.0;        ///< Var(L^A ⊗ L^B; ψ ⊗ v)
    double var_product_claim = 0.0;  ///< Var(L^A; ψ) · Var(L^B; v)
};

NoiseReport noise_report(const MeasurementModel &m, const Operator &o, const Operator &probe,
                         const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol = {});

struct VarianceAudit {
    double lhs = 0.0;            ///< Var(A ⊗ B) on ψ_a ⊗ ψ_b
    double paper_rhs = 0.0;      ///< Var(A) Var(B)
    double corrected_rhs = 0.0;  ///< Var(A) Var(B) + Var(A) ⟨B⟩² + ⟨A⟩² Var(B)
    bool paper_claim_holds = false;
    bool corrected_holds = false;
};

inline constexpr double kVarianceAuditTol = 1e-10;

VarianceAudit variance_identity_audit(const Operator &a, const Operator &b, const StateVector &psi_a,
                                      const StateVector &psi_b, const ToleranceConfig &tol = {});

struct BoundAuditConfig {
    std::size_t n1 = 2;
    std::size_t n2 = 3;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    ToleranceConfig tol;
    std::size_t workers = 0;
};

struct BoundAuditRecord {
    std::size_t trial = 0;
    double epsilon_sq = 0.0;
    RobertsonBound robertson;
    BoundResult paper;
    BoundResult yanase;
    BoundResult simplified;
};

struct BoundCounts {
    std::size_t evaluated = 0;   ///< bound defined (and applicable)
    std::size_t violations = 0;  ///< evaluated but above ε² + 1e-9
    std::size_t degenerate = 0;  ///< applicable but with a vanishing denominator
    std::size_t not_applicable = 0;

    double violation_fraction() const {
        return evaluated == 0 ? 0.0 : static_cast<double>(violations) / static_cast<double>(evaluated);
    }
};

struct BoundAuditReport {
    BoundAuditConfig config;
    std::vector<BoundAuditRecord> records;
    BoundCounts robertson;
    BoundCounts paper;
    BoundCounts yanase;
    BoundCounts simplified;
};

/// Random conforming instances; trial t uses the stream derive_seed(seed, t).
/// Bits of t select the family: bit 0 draws a probe commuting with L^B, bit 1
/// an indefinite L^B with a ready state of zero mean, bit 2 an observable
/// commuting with L^A. Throws PreconditionError when count is 0.
BoundAuditReport bound_audit_sweep(const BoundAuditConfig &config);

}  // namespace waycheck
