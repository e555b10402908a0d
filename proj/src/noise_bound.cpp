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

#include "waycheck/noise_bound.hpp"

#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "waycheck/commutant_search.hpp"
#include "waycheck/random.hpp"

namespace waycheck {

namespace {

constexpr double kYanaseTol = 1e-10;
constexpr double kZeroMeanTol = 1e-10;

void require_noise_inputs(const MeasurementModel &m, const Operator &o, const Operator &probe,
                          const ToleranceConfig &tol) {
    if (o.dim() != m.n1()) {
        throw DimensionMismatch("noise: observable dimension " + std::to_string(o.dim()) + " but n1 = " +
                                std::to_string(m.n1()));
    }
    if (probe.dim() != m.n2()) {
        throw DimensionMismatch("noise: probe dimension " + std::to_string(probe.dim()) + " but n2 = " +
                                std::to_string(m.n2()));
    }
    if (!is_hermitian(o, tol.hermiticity)) {
        throw PreconditionError("noise: observable is not Hermitian");
    }
    if (!is_hermitian(probe, tol.hermiticity)) {
        throw PreconditionError("noise: probe is not Hermitian");
    }
}

void require_conserved(const MeasurementModel &m, const ConservedQuantity &q, const ToleranceConfig &tol,
                       const char *what) {
    if (q.kind != ConservationKind::multiplicative) {
        throw PreconditionError(std::string(what) + ": conserved quantity must be multiplicative");
    }
    const ConservationReport cons = check_conserved(m, q, tol.conservation);
    if (!cons.verdict) {
        throw PreconditionError(std::string(what) + ": check_conserved failed (residual " +
                                std::to_string(cons.residual) + ")");
    }
}

StateVector joint_state(const MeasurementModel &m, const StateVector &psi) {
    if (psi.dim() != m.n1()) {
        throw DimensionMismatch("noise: state dimension " + std::to_string(psi.dim()) + " but n1 = " +
                                std::to_string(m.n1()));
    }
    return tensor_product(psi, m.ready_state());
}

BoundResult ratio_bound(double numerator, double denominator, double eps_sq) {
    BoundResult r;
    r.numerator = numerator;
    r.denominator = denominator;
    if (denominator <= kDegenerateDenominator) {
        r.status = BoundStatus::undefined;
        return r;
    }
    r.status = BoundStatus::ok;
    r.value = numerator / denominator;
    r.valid = r.value <= eps_sq + kBoundSlack;
    return r;
}

BoundResult not_applicable() {
    BoundResult r;
    r.status = BoundStatus::not_applicable;
    return r;
}

void tally(BoundCounts &counts, const BoundResult &r) {
    switch (r.status) {
        case BoundStatus::ok:
            ++counts.evaluated;
            counts.violations += r.valid ? 0 : 1;
            break;
        case BoundStatus::undefined:
            ++counts.degenerate;
            break;
        case BoundStatus::not_applicable:
            ++counts.not_applicable;
            break;
    }
}

}  // namespace

std::string to_string(BoundStatus status) {
    switch (status) {
        case BoundStatus::ok:
            return "ok";
        case BoundStatus::undefined:
            return "undefined";
        case BoundStatus::not_applicable:
            return "not_applicable";
    }
    return "unknown";
}

Operator noise_operator(const MeasurementModel &m, const Operator &o, const Operator &probe,
                        const ToleranceConfig &tol) {
    require_noise_inputs(m, o, probe, tol);
    const Matrix &u = m.interaction().matrix();
    const Matrix evolved_probe =
        u.adjoint() * tensor_product(Operator::identity(m.n1()), probe).matrix() * u;
    const Matrix target = tensor_product(o, Operator::identity(m.n2())).matrix();
    const Matrix n = evolved_probe - target;
    return Operator(0.5 * (n + n.adjoint()));
}

double epsilon_sq(const MeasurementModel &m, const Operator &o, const Operator &probe, const StateVector &psi,
                  const ToleranceConfig &tol) {
    const Operator n = noise_operator(m, o, probe, tol);
    const StateVector joint = joint_state(m, psi);
    return (n.matrix() * joint.amplitudes()).squaredNorm();
}

RobertsonBound robertson_bound(const MeasurementModel &m, const Operator &o, const Operator &probe,
                               const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol) {
    require_conserved(m, q, tol, "robertson_bound");
    const Operator n = noise_operator(m, o, probe, tol);
    const Operator l = q.joint();
    const StateVector joint = joint_state(m, psi);
    const double eps = (n.matrix() * joint.amplitudes()).squaredNorm();

    RobertsonBound r;
    r.numerator = std::norm(expectation(commutator(n, l), joint)) / 4.0;
    r.var_L_exact = variance(l, joint, tol);
    if (r.var_L_exact > kDegenerateDenominator) {
        r.bound = r.numerator / r.var_L_exact;
    } else {
        r.degenerate = true;
        r.bound = 0.0;
    }
    r.valid = r.bound <= eps + kBoundSlack;
    return r;
}

BoundResult paper_bound(const MeasurementModel &m, const Operator &o, const Operator &probe,
                        const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol) {
    require_conserved(m, q, tol, "paper_bound");
    const double eps = epsilon_sq(m, o, probe, psi, tol);
    const StateVector joint = joint_state(m, psi);
    const Matrix &u = m.interaction().matrix();
    // The probe commutator lives on the apparatus; U† (L^A ⊗ [M, L^B]) U is
    // its Heisenberg-picture form on the joint space.
    const Matrix system_term = tensor_product(commutator(o, q.la), q.lb).matrix();
    const Matrix probe_term = u.adjoint() * tensor_product(q.la, commutator(probe, q.lb)).matrix() * u;
    const Complex mean = joint.amplitudes().dot((system_term - probe_term) * joint.amplitudes());
    const double denominator = 4.0 * variance(q.la, psi, tol) * variance(q.lb, m.ready_state(), tol);
    return ratio_bound(std::norm(mean), denominator, eps);
}

BoundResult yanase_bound(const MeasurementModel &m, const Operator &o, const Operator &probe,
                         const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol) {
    require_conserved(m, q, tol, "yanase_bound");
    if (frobenius_norm(commutator(probe, q.lb).matrix()) > kYanaseTol) {
        return not_applicable();
    }
    const double eps = epsilon_sq(m, o, probe, psi, tol);
    const StateVector joint = joint_state(m, psi);
    const Complex mean = expectation(tensor_product(commutator(o, q.la), q.lb), joint);
    const double denominator = 4.0 * variance(q.la, psi, tol) * variance(q.lb, m.ready_state(), tol);
    return ratio_bound(std::norm(mean), denominator, eps);
}

BoundResult simplified_bound(const MeasurementModel &m, const Operator &o, const ConservedQuantity &q,
                             const StateVector &psi, double epsilon_sq_value, const ToleranceConfig &tol) {
    require_conserved(m, q, tol, "simplified_bound");
    if (o.dim() != m.n1() || psi.dim() != m.n1()) {
        throw DimensionMismatch("simplified_bound: observable and state must live on the system");
    }
    if (std::abs(expectation(q.lb, m.ready_state())) > kZeroMeanTol) {
        return not_applicable();
    }
    const Complex mean = expectation(commutator(o, q.la), psi);
    const double denominator = 4.0 * variance(q.la, psi, tol);
    return ratio_bound(std::norm(mean), denominator, epsilon_sq_value);
}

NoiseReport noise_report(const MeasurementModel &m, const Operator &o, const Operator &probe,
                         const ConservedQuantity &q, const StateVector &psi, const ToleranceConfig &tol) {
    NoiseReport r;
    r.epsilon_sq = epsilon_sq(m, o, probe, psi, tol);
    r.robertson = robertson_bound(m, o, probe, q, psi, tol);
    r.paper = paper_bound(m, o, probe, q, psi, tol);
    r.yanase = yanase_bound(m, o, probe, q, psi, tol);
    r.simplified = simplified_bound(m, o, q, psi, r.epsilon_sq, tol);
    r.var_L_exact = r.robertson.var_L_exact;
    r.var_product_claim = variance(q.la, psi, tol) * variance(q.lb, m.ready_state(), tol);
    return r;
}

VarianceAudit variance_identity_audit(const Operator &a, const Operator &b, const StateVector &psi_a,
                                      const StateVector &psi_b, const ToleranceConfig &tol) {
    const double var_a = variance(a, psi_a, tol);
    const double var_b = variance(b, psi_b, tol);
    const double mean_a = expectation(a, psi_a).real();
    const double mean_b = expectation(b, psi_b).real();

    VarianceAudit audit;
    audit.lhs = variance(tensor_product(a, b), tensor_product(psi_a, psi_b), tol);
    audit.paper_rhs = var_a * var_b;
    audit.corrected_rhs = var_a * var_b + var_a * mean_b * mean_b + mean_a * mean_a * var_b;
    audit.paper_claim_holds = std::abs(audit.lhs - audit.paper_rhs) <= kVarianceAuditTol;
    audit.corrected_holds = std::abs(audit.lhs - audit.corrected_rhs) <= kVarianceAuditTol;
    return audit;
}

BoundAuditReport bound_audit_sweep(const BoundAuditConfig &config) {
    if (config.count == 0) {
        throw PreconditionError("bound_audit_sweep: count must be at least 1");
    }
    if (config.n1 == 0 || config.n2 == 0) {
        throw PreconditionError("bound_audit_sweep: dimensions must be positive");
    }
    config.tol.validate();

    BoundAuditReport report;
    report.config = config;
    report.records.resize(config.count);
    const std::size_t n1 = config.n1;
    const std::size_t n2 = config.n2;

    detail::parallel_for(config.count, config.workers, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        const bool commuting_probe = (t & 1U) != 0;
        const bool zero_mean = (t & 2U) != 0 && n2 >= 2;
        const bool commuting_observable = (t & 4U) != 0;

        const Operator la = random_hermitian_with_spectrum(n1, 0.5, 2.0, rng);

        // L^B = W diag(d) W†, indefinite in the zero-mean family.
        std::vector<double> d(n2);
        for (double &x : d) {
            x = rng.uniform(0.5, 2.0);
        }
        if (zero_mean) {
            for (std::size_t k = 0; k < n2 / 2; ++k) {
                d[k] = -d[k];
            }
        }
        const Operator w_lb = random_haar_unitary(n2, rng);
        const Matrix lb_raw = w_lb.matrix() * Operator::diagonal(d).matrix() * w_lb.matrix().adjoint();
        const Operator lb(0.5 * (lb_raw + lb_raw.adjoint()));

        Vector ready_amp;
        if (zero_mean) {
            // Mix one negative and one positive eigenvector so that ⟨v|L^B|v⟩ = 0.
            const double neg = -d[0];
            const double pos = d[n2 - 1];
            const double weight_neg = pos / (pos + neg);
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            ready_amp = std::sqrt(weight_neg) * w_lb.matrix().col(0) +
                        std::polar(std::sqrt(1.0 - weight_neg), phase) *
                            w_lb.matrix().col(static_cast<Eigen::Index>(n2 - 1));
        } else {
            ready_amp = random_state(n2, rng).amplitudes();
        }
        const StateVector ready = StateVector::normalized(std::move(ready_amp));

        Operator probe = Operator::zero(n2);
        if (commuting_probe) {
            std::vector<double> p(n2);
            for (double &x : p) {
                x = rng.uniform(-1.0, 1.0);
            }
            const Matrix raw = w_lb.matrix() * Operator::diagonal(p).matrix() * w_lb.matrix().adjoint();
            probe = Operator(0.5 * (raw + raw.adjoint()));
        } else {
            probe = random_hermitian_with_spectrum(n2, -1.0, 1.0, rng);
        }

        Operator o = Operator::zero(n1);
        if (commuting_observable) {
            const Eigensystem es = hermitian_eigensystem(la, config.tol);
            Matrix raw = Matrix::Zero(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n1));
            for (std::size_t k = 0; k < n1; ++k) {
                const Vector &e = es.vectors[k].amplitudes();
                raw += rng.uniform(-1.0, 1.0) * (e * e.adjoint());
            }
            o = Operator(0.5 * (raw + raw.adjoint()));
        } else {
            o = random_hermitian_with_spectrum(n1, -1.0, 1.0, rng);
        }

        const ConservedQuantity q(ConservationKind::multiplicative, la, lb, config.tol);
        const Operator u = random_commutant_unitary(conserved_eigenspaces(q, config.tol), rng.next_u64());
        const StateVector psi = random_state(n1, rng);
        const MeasurementModel model(computational_basis(n1), ready, u, config.tol);

        const NoiseReport nr = noise_report(model, o, probe, q, psi, config.tol);
        BoundAuditRecord &rec = report.records[t];
        rec.trial = t;
        rec.epsilon_sq = nr.epsilon_sq;
        rec.robertson = nr.robertson;
        rec.paper = nr.paper;
        rec.yanase = nr.yanase;
        rec.simplified = nr.simplified;
    });

    for (const auto &rec : report.records) {
        ++report.robertson.evaluated;
        report.robertson.violations += rec.robertson.valid ? 0 : 1;
        report.robertson.degenerate += rec.robertson.degenerate ? 1 : 0;
        tally(report.paper, rec.paper);
        tally(report.yanase, rec.yanase);
        tally(report.simplified, rec.simplified);
    }
    return report;
}

}  // namespace waycheck
