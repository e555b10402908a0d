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

#include "waycheck/way_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "waycheck/commutant_search.hpp"
#include "waycheck/random.hpp"

namespace waycheck {

namespace {

void require_multiplicative(const ConservedQuantity &q, const char *what) {
    if (q.kind != ConservationKind::multiplicative) {
        throw PreconditionError(std::string(what) + ": conserved quantity must be multiplicative");
    }
}

void require_dims(const MeasurementModel &m, const ConservedQuantity &q, const char *what) {
    if (q.la.dim() != m.n1() || q.lb.dim() != m.n2()) {
        throw DimensionMismatch(std::string(what) + ": conserved quantity does not match the model dimensions");
    }
}

Complex sandwich(const Vector &bra, const Matrix &op, const Vector &ket) {
    return bra.dot(op * ket);
}

}  // namespace

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::assumptions_violated:
            return "assumptions_violated";
        case Outcome::consistent:
            return "consistent";
        case Outcome::contradiction:
            return "contradiction";
    }
    return "unknown";
}

std::string to_string(SweepBasis basis) {
    return basis == SweepBasis::la_eigenbasis ? "la_eigenbasis" : "haar";
}

IdentityResidualTable matrix_element_identity(const MeasurementModel &m, const ConservedQuantity &q,
                                              const ToleranceConfig &tol) {
    if (q.kind != ConservationKind::multiplicative) {
        throw PreconditionError("matrix_element_identity: kind must be multiplicative");
    }
    require_dims(m, q, "matrix_element_identity");
    const ConservationReport cons = check_conserved(m, q, tol.conservation);
    if (!cons.verdict) {
        throw PreconditionError("matrix_element_identity: check_conserved failed (residual " +
                                std::to_string(cons.residual) + ")");
    }
    const NondestructiveReport nd = check_nondestructive(m, tol.conservation);
    if (!nd.verdict || !nd.pointers_well_defined()) {
        throw PreconditionError("matrix_element_identity: check_nondestructive failed (leakage " +
                                std::to_string(nd.leakage) + ")");
    }

    const auto n = static_cast<Eigen::Index>(m.n1());
    const Vector &v = m.ready_state().amplitudes();
    const Complex lb_ready = sandwich(v, q.lb.matrix(), v);
    const auto &ptr = nd.pointers.pointers;
    IdentityResidualTable table;
    table.residuals = Matrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto si = static_cast<std::size_t>(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            const Complex la_ij =
                sandwich(m.system_basis()[si].amplitudes(), q.la.matrix(), m.system_basis()[sj].amplitudes());
            const Complex lb_ij = sandwich(ptr[si], q.lb.matrix(), ptr[sj]);
            table.residuals(i, j) = la_ij * (lb_ready - lb_ij);
            table.max_abs = std::max(table.max_abs, std::abs(table.residuals(i, j)));
        }
    }
    return table;
}

PointerGramReport pointer_gram_rank(const Operator &lb, const PointerFamily &pointers, double tol) {
    const auto n = static_cast<Eigen::Index>(pointers.pointers.size());
    PointerGramReport report;
    report.gram_lb = Matrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Vector &vi = pointers.pointers[static_cast<std::size_t>(i)];
            const Vector &vj = pointers.pointers[static_cast<std::size_t>(j)];
            if (static_cast<std::size_t>(vi.size()) != lb.dim()) {
                throw DimensionMismatch("pointer_gram_rank: pointer dimension does not match lb");
            }
            report.gram_lb(i, j) = sandwich(vi, lb.matrix(), vj);
        }
    }
    report.rank = numerical_rank(report.gram_lb, tol);
    report.constant_case = n > 0;
    if (n > 0) {
        const Complex ref = report.gram_lb(0, 0);
        report.constant_case = (report.gram_lb.array() - ref).abs().maxCoeff() <= tol;
    }
    if (report.constant_case && report.rank > 1) {
        // A matrix with all entries equal has rank at most one.
        throw Error("pointer_gram_rank: constant Gram matrix reported rank " + std::to_string(report.rank));
    }
    return report;
}

bool TheoremVerdict::all_assumptions_pass() const {
    return std::all_of(assumptions.begin(), assumptions.end(), [](const AssumptionCheck &c) { return c.passed; });
}

const AssumptionCheck &TheoremVerdict::assumption(const std::string &name) const {
    for (const auto &c : assumptions) {
        if (c.name == name) {
            return c;
        }
    }
    throw Error("no assumption named " + name);
}

TheoremVerdict theorem_verdict(const MeasurementModel &m, const ConservedQuantity &q, const ToleranceConfig &tol) {
    require_multiplicative(q, "theorem_verdict");
    require_dims(m, q, "theorem_verdict");
    const double check_tol = tol.conservation;
    const std::size_t n1 = m.n1();
    const std::size_t n2 = m.n2();

    TheoremVerdict out;
    const ConservationReport cons = check_conserved(m, q, check_tol);
    out.assumptions.push_back({"conservation", cons.residual, cons.verdict, "||U^dag L U - L||_F"});

    const ValidationReport rank = validate(q.lb, OperatorProperty::full_rank, tol);
    out.assumptions.push_back(
        {"lb_full_rank", rank.residual, rank.verdict, "rank " + std::to_string(rank.rank) + " of " + std::to_string(n2)});

    const ValidationReport la_pos = validate(q.la, OperatorProperty::positive_spectrum, tol);
    out.assumptions.push_back({"la_positive", la_pos.residual, la_pos.verdict, "smallest eigenvalue"});
    const ValidationReport lb_pos = validate(q.lb, OperatorProperty::positive_spectrum, tol);
    out.assumptions.push_back({"lb_positive", lb_pos.residual, lb_pos.verdict, "smallest eigenvalue"});

    out.assumptions.push_back({"dimension_bound", static_cast<double>(n2), n2 < 2 * n1,
                               "n2=" + std::to_string(n2) + " vs 2*n1=" + std::to_string(2 * n1)});
    out.proof_dimension_bound = {"proof_dimension_bound", static_cast<double>(n2), n2 + 1 < 2 * n1,
                                 "n2=" + std::to_string(n2) + " vs 2*n1-1=" + std::to_string(2 * n1 - 1)};

    const NondestructiveReport nd = check_nondestructive(m, check_tol);
    out.assumptions.push_back({"nondestructive", nd.leakage, nd.verdict, "max_{i!=j} ||w(i,j)||"});

    if (nd.pointers_well_defined()) {
        const ExactnessReport ex = check_exact(m, check_tol);
        out.assumptions.push_back({"exact", ex.deficit, ex.verdict, "||gram - I||_F"});
    } else {
        const SchemeDefects defects = scheme_defects(joint_blocks(m));
        out.assumptions.push_back({"exact", defects.block_gram_deficit, false,
                                   "degenerate pointer " + std::to_string(nd.degenerate_pointers.front())});
    }

    out.commutator_norm = frobenius_norm(commutator(m.measured_observable(), q.la).matrix());
    if (!out.all_assumptions_pass()) {
        out.outcome = Outcome::assumptions_violated;
    } else if (out.commutator_norm <= check_tol) {
        out.outcome = Outcome::consistent;
    } else {
        out.outcome = Outcome::contradiction;
    }
    return out;
}

CounterexampleSweepReport counterexample_sweep(const CounterexampleSweepConfig &config) {
    if (config.n1 == 0 || config.n2 == 0) {
        throw PreconditionError("counterexample_sweep: dimensions must be positive");
    }
    if (config.n2 >= 2 * config.n1) {
        throw PreconditionError("counterexample_sweep: requires n2 < 2*n1 (got n1=" + std::to_string(config.n1) +
                                ", n2=" + std::to_string(config.n2) + ")");
    }
    if (config.count == 0) {
        throw PreconditionError("counterexample_sweep: count must be at least 1");
    }
    config.tol.validate();

    CounterexampleSweepReport report;
    report.config = config;
    report.trials.resize(config.count);
    const double check_tol = config.tol.conservation;

    detail::parallel_for(config.count, config.workers, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        const Operator la = random_hermitian_with_spectrum(config.n1, 0.5, 2.0, rng);
        const Operator lb = random_hermitian_with_spectrum(config.n2, 0.5, 2.0, rng);
        const ConservedQuantity q(ConservationKind::multiplicative, la, lb, config.tol);
        const Operator u = random_commutant_unitary(conserved_eigenspaces(q, config.tol), rng.next_u64());
        StateVector ready = random_state(config.n2, rng);

        CounterexampleTrial &trial = report.trials[t];
        trial.trial = t;
        trial.basis = t % 2 == 0 ? SweepBasis::la_eigenbasis : SweepBasis::haar;
        std::vector<StateVector> basis;
        if (trial.basis == SweepBasis::la_eigenbasis) {
            basis = hermitian_eigensystem(la, config.tol).vectors;
        } else {
            const Operator w = random_haar_unitary(config.n1, rng);
            for (std::size_t k = 0; k < config.n1; ++k) {
                basis.push_back(StateVector::normalized(w.matrix().col(static_cast<Eigen::Index>(k))));
            }
        }
        const MeasurementModel model(std::move(basis), std::move(ready), u, config.tol);
        const TheoremVerdict verdict = theorem_verdict(model, q, config.tol);
        trial.conservation_residual = verdict.assumption("conservation").residual;
        trial.leakage = verdict.assumption("nondestructive").residual;
        trial.exact_deficit = verdict.assumption("exact").residual;
        trial.commutator_norm = verdict.commutator_norm;
        trial.outcome = verdict.outcome;
        trial.counterexample = trial.leakage <= check_tol && trial.exact_deficit <= check_tol &&
                               trial.commutator_norm > kCounterexampleCommutator;
    });

    for (const auto &t : report.trials) {
        const bool nondestructive = t.leakage <= check_tol;
        const bool exact = nondestructive && t.exact_deficit <= check_tol;
        report.nondestructive += nondestructive ? 1 : 0;
        if (exact) {
            ++report.exact_nondestructive;
            report.max_exact_commutator = std::max(report.max_exact_commutator, t.commutator_norm);
        }
        report.consistent += t.outcome == Outcome::consistent ? 1 : 0;
        report.assumptions_violated += t.outcome == Outcome::assumptions_violated ? 1 : 0;
        report.contradictions += t.outcome == Outcome::contradiction ? 1 : 0;
        report.counterexamples += t.counterexample ? 1 : 0;
    }
    return report;
}

ConservationReport additive_conservation_check(const MeasurementModel &m, const ConservedQuantity &q, double tol) {
    if (q.kind != ConservationKind::additive) {
        throw PreconditionError("additive_conservation_check: kind must be additive");
    }
    return check_conserved(m, q, tol);
}

}  // namespace waycheck
