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

#include "waycheck/measurement_model.hpp"

#include <algorithm>
#include <cmath>

namespace waycheck {

namespace {

constexpr double kBasisOrthoTol = 1e-8;
constexpr double kPointerNormTol = 1e-10;

double max_orthonormality_error(std::span<const StateVector> vecs) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            const Complex ip = vecs[i].amplitudes().dot(vecs[j].amplitudes());
            const double expected = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(ip - expected));
        }
    }
    return worst;
}

}  // namespace

std::string to_string(ConservationKind kind) {
    return kind == ConservationKind::additive ? "additive" : "multiplicative";
}

ConservedQuantity::ConservedQuantity(ConservationKind kind_, Operator la_, Operator lb_, const ToleranceConfig &tol)
    : kind(kind_), la(std::move(la_)), lb(std::move(lb_)) {
    if (!is_hermitian(la, tol.hermiticity)) {
        throw PreconditionError("conserved quantity: LA is not Hermitian");
    }
    if (!is_hermitian(lb, tol.hermiticity)) {
        throw PreconditionError("conserved quantity: LB is not Hermitian");
    }
}

Operator ConservedQuantity::joint() const {
    if (kind == ConservationKind::multiplicative) {
        return tensor_product(la, lb);
    }
    return tensor_product(la, Operator::identity(lb.dim())) + tensor_product(Operator::identity(la.dim()), lb);
}

std::vector<StateVector> computational_basis(std::size_t dim) {
    std::vector<StateVector> out;
    out.reserve(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        out.push_back(StateVector::basis(dim, k));
    }
    return out;
}

MeasurementModel::MeasurementModel(std::vector<StateVector> system_basis, StateVector ready_state,
                                   Operator interaction, const ToleranceConfig &tol)
    : system_basis_(std::move(system_basis)), ready_state_(std::move(ready_state)),
      interaction_(std::move(interaction)) {
    const std::size_t n1 = system_basis_.size();
    if (n1 == 0) {
        throw PreconditionError("system_basis: must contain at least one vector");
    }
    for (const auto &u : system_basis_) {
        if (u.dim() != n1) {
            throw DimensionMismatch("system_basis: expected " + std::to_string(n1) + " vectors of dimension " +
                                    std::to_string(n1));
        }
    }
    if (max_orthonormality_error(system_basis_) > kBasisOrthoTol) {
        throw PreconditionError("system_basis: vectors are not orthonormal");
    }
    if (interaction_.dim() != n1 * n2()) {
        throw DimensionMismatch("unitary: dimension " + std::to_string(interaction_.dim()) + " but n1*n2 = " +
                                std::to_string(n1 * n2()));
    }
    if (!validate(interaction_, OperatorProperty::unitary, tol).verdict) {
        throw PreconditionError("unitary: interaction is not unitary");
    }
}

Operator MeasurementModel::measured_observable() const {
    const auto n = static_cast<Eigen::Index>(n1());
    Matrix o = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n1(); ++i) {
        const Vector &u = system_basis_[i].amplitudes();
        o += static_cast<double>(i + 1) * (u * u.adjoint());
    }
    return Operator(std::move(o));
}

JointBlocks joint_blocks(const MeasurementModel &m) {
    const std::size_t n1 = m.n1();
    const auto n2 = static_cast<Eigen::Index>(m.n2());
    std::vector<Vector> blocks(n1 * n1);
    for (std::size_t j = 0; j < n1; ++j) {
        const Vector input = tensor_product(m.system_basis()[j].amplitudes(), m.ready_state().amplitudes());
        const Vector out = m.interaction().matrix() * input;
        for (std::size_t i = 0; i < n1; ++i) {
            const Vector &u = m.system_basis()[i].amplitudes();
            Vector w = Vector::Zero(n2);
            for (Eigen::Index a = 0; a < u.size(); ++a) {
                w += std::conj(u(a)) * out.segment(a * n2, n2);
            }
            blocks[i * n1 + j] = std::move(w);
        }
    }
    return JointBlocks(n1, std::move(blocks));
}

NondestructiveReport check_nondestructive(const MeasurementModel &m, double tol) {
    const JointBlocks w = joint_blocks(m);
    NondestructiveReport report;
    for (std::size_t i = 0; i < m.n1(); ++i) {
        for (std::size_t j = 0; j < m.n1(); ++j) {
            if (i != j) {
                report.leakage = std::max(report.leakage, w(i, j).norm());
            }
        }
    }
    report.verdict = report.leakage <= tol;
    report.pointers.leakage = report.leakage;
    for (std::size_t j = 0; j < m.n1(); ++j) {
        const double norm = w(j, j).norm();
        if (norm > tol && norm > 0.0) {
            report.pointers.pointers.push_back(w(j, j) / norm);
        } else {
            report.pointers.pointers.push_back(w(j, j));
            report.degenerate_pointers.push_back(j);
        }
    }
    return report;
}

ExactnessReport check_exact(const MeasurementModel &m, double tol) {
    const NondestructiveReport nd = check_nondestructive(m, tol);
    if (!nd.pointers_well_defined()) {
        throw DegeneratePointerError("check_exact: pointer " + std::to_string(nd.degenerate_pointers.front()) +
                                     " is degenerate");
    }
    const auto n = static_cast<Eigen::Index>(m.n1());
    ExactnessReport report;
    report.gram = Matrix(n, n);
    const auto &v = nd.pointers.pointers;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            report.gram(i, j) = v[static_cast<std::size_t>(i)].dot(v[static_cast<std::size_t>(j)]);
        }
    }
    report.deficit = frobenius_norm(report.gram - Matrix::Identity(n, n));
    report.verdict = report.deficit <= tol;
    return report;
}

ConservationReport check_conserved(const MeasurementModel &m, const ConservedQuantity &q, double tol) {
    if (q.la.dim() != m.n1() || q.lb.dim() != m.n2()) {
        throw DimensionMismatch("check_conserved: conserved quantity dimensions (" + std::to_string(q.la.dim()) +
                                ", " + std::to_string(q.lb.dim()) + ") do not match model (" +
                                std::to_string(m.n1()) + ", " + std::to_string(m.n2()) + ")");
    }
    const Matrix l = q.joint().matrix();
    const Matrix &u = m.interaction().matrix();
    ConservationReport report;
    report.residual = frobenius_norm(u.adjoint() * l * u - l);
    report.verdict = report.residual <= tol;
    return report;
}

SchemeDefects scheme_defects(const JointBlocks &w) {
    const auto n = static_cast<Eigen::Index>(w.n1());
    SchemeDefects out;
    Matrix gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto si = static_cast<std::size_t>(i);
            const auto sj = static_cast<std::size_t>(j);
            if (i != j) {
                out.off_diagonal_sq += w(si, sj).squaredNorm();
            }
            gram(i, j) = w(si, si).dot(w(sj, sj));
        }
    }
    out.block_gram_deficit = frobenius_norm(gram - Matrix::Identity(n, n));
    return out;
}

MeasurementModel synthesize_unitary(std::span<const StateVector> system_basis, const StateVector &ready_state,
                                    std::span<const Vector> pointers, const ToleranceConfig &tol) {
    const std::size_t n1 = system_basis.size();
    if (pointers.size() != n1) {
        throw DimensionMismatch("synthesize_unitary: need one pointer per system basis vector");
    }
    if (max_orthonormality_error(system_basis) > kBasisOrthoTol) {
        throw PreconditionError("synthesize_unitary: system basis is not orthonormal");
    }
    std::vector<StateVector> inputs;
    std::vector<StateVector> outputs;
    for (std::size_t j = 0; j < n1; ++j) {
        const Vector &p = pointers[j];
        if (static_cast<std::size_t>(p.size()) != ready_state.dim()) {
            throw DimensionMismatch("synthesize_unitary: pointer " + std::to_string(j) +
                                    " does not match the apparatus dimension");
        }
        if (std::abs(p.norm() - 1.0) > kPointerNormTol) {
            throw PreconditionError("synthesize_unitary: pointer " + std::to_string(j) + " is not unit norm (norm " +
                                    std::to_string(p.norm()) + ")");
        }
        inputs.push_back(tensor_product(system_basis[j], ready_state));
        outputs.push_back(tensor_product(system_basis[j], StateVector(p)));
    }
    // U = B A†, where A and B are unitaries whose first n1 columns are the
    // inputs u(j) ⊗ v and the outputs u(j) ⊗ v(j).
    const Operator a = unitary_completion(inputs);
    const Operator b = unitary_completion(outputs);
    Operator u(b.matrix() * a.matrix().adjoint());
    return MeasurementModel(std::vector<StateVector>(system_basis.begin(), system_basis.end()), ready_state,
                            std::move(u), tol);
}

}  // namespace waycheck
