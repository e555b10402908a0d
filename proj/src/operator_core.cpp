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

#include "waycheck/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace waycheck {

namespace {

constexpr double kUnitNormTol = 1e-10;
constexpr double kCompletionOrthoTol = 1e-8;

bool all_finite(const Matrix &m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
                return false;
            }
        }
    }
    return true;
}

void require_same_dim(const Operator &a, const Operator &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a.dim()) +
                                " and " + std::to_string(b.dim()) + " differ");
    }
}

void require_hermitian(const Operator &a, double tol, const char *what) {
    if (!is_hermitian(a, tol)) {
        throw PreconditionError(std::string(what) + ": operator is not Hermitian");
    }
}

}  // namespace

void ToleranceConfig::validate() const {
    for (double t : {hermiticity, unitarity, rank, conservation, grouping}) {
        if (!(t >= 0.0)) {
            throw PreconditionError("tolerances must be nonnegative");
        }
    }
}

Operator::Operator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
        throw DimensionMismatch("operator must be a nonempty square matrix");
    }
    if (!all_finite(m_)) {
        throw Error("operator has non-finite entries");
    }
}

Operator Operator::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Identity(n, n));
}

Operator Operator::zero(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Operator(Matrix::Zero(n, n));
}

Operator Operator::diagonal(std::span<const double> values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        m(k, k) = values[static_cast<std::size_t>(k)];
    }
    return Operator(std::move(m));
}

Operator Operator::diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
}

Operator operator+(const Operator &a, const Operator &b) {
    require_same_dim(a, b, "operator+");
    return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator &a, const Operator &b) {
    require_same_dim(a, b, "operator-");
    return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator &a, const Operator &b) {
    require_same_dim(a, b, "operator*");
    return Operator(a.m_ * b.m_);
}

Operator operator*(Complex s, const Operator &a) {
    return Operator(s * a.m_);
}

StateVector::StateVector(Vector v) : v_(std::move(v)) {
    if (v_.size() == 0) {
        throw DimensionMismatch("state vector must be nonempty");
    }
    if (!all_finite(v_)) {
        throw Error("state vector has non-finite entries");
    }
    const double norm = v_.norm();
    if (std::abs(norm - 1.0) > kUnitNormTol) {
        throw Error("state vector is not normalized (norm " + std::to_string(norm) + ")");
    }
}

StateVector StateVector::normalized(Vector v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error("cannot normalize a zero or non-finite vector");
    }
    v /= norm;
    return StateVector(std::move(v));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionMismatch("basis index " + std::to_string(index) + " out of range for dim " +
                                std::to_string(dim));
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

Operator tensor_product(const Operator &a, const Operator &b) {
    const Eigen::Index na = a.matrix().rows();
    const Eigen::Index nb = b.matrix().rows();
    Matrix out(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index k = 0; k < na; ++k) {
            out.block(i * nb, k * nb, nb, nb) = a.matrix()(i, k) * b.matrix();
        }
    }
    return Operator(std::move(out));
}

Vector tensor_product(const Vector &a, const Vector &b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

StateVector tensor_product(const StateVector &a, const StateVector &b) {
    return StateVector(tensor_product(a.amplitudes(), b.amplitudes()));
}

Operator commutator(const Operator &a, const Operator &b) {
    require_same_dim(a, b, "commutator");
    return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

Complex expectation(const Operator &a, const StateVector &s) {
    if (a.dim() != s.dim()) {
        throw DimensionMismatch("expectation: operator dim " + std::to_string(a.dim()) +
                                " vs state dim " + std::to_string(s.dim()));
    }
    return s.amplitudes().dot(a.matrix() * s.amplitudes());
}

double variance(const Operator &a, const StateVector &s, const ToleranceConfig &tol) {
    require_hermitian(a, tol.hermiticity, "variance");
    const double mean = expectation(a, s).real();
    const Vector centered = a.matrix() * s.amplitudes() - mean * s.amplitudes();
    return centered.squaredNorm();
}

double frobenius_norm(const Matrix &m) {
    return m.norm();
}

bool is_hermitian(const Operator &a, double tol) {
    return frobenius_norm(a.matrix() - a.matrix().adjoint()) <= tol;
}

bool is_anti_hermitian(const Operator &a, double tol) {
    return frobenius_norm(a.matrix() + a.matrix().adjoint()) <= tol;
}

std::string to_string(OperatorProperty kind) {
    switch (kind) {
        case OperatorProperty::hermitian:
            return "hermitian";
        case OperatorProperty::unitary:
            return "unitary";
        case OperatorProperty::positive_spectrum:
            return "positive_spectrum";
        case OperatorProperty::full_rank:
            return "full_rank";
    }
    return "unknown";
}

ValidationReport validate(const Operator &a, OperatorProperty kind, const ToleranceConfig &tol) {
    ValidationReport report{kind};
    const Matrix &m = a.matrix();
    switch (kind) {
        case OperatorProperty::hermitian:
            report.residual = frobenius_norm(m - m.adjoint());
            report.verdict = report.residual <= tol.hermiticity;
            break;
        case OperatorProperty::unitary:
            report.residual = frobenius_norm(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
            report.verdict = report.residual <= tol.unitarity;
            break;
        case OperatorProperty::positive_spectrum: {
            require_hermitian(a, tol.hermiticity, "validate(positive_spectrum)");
            const Eigensystem es = hermitian_eigensystem(a, tol);
            report.residual = es.values.front();
            report.verdict = report.residual > tol.rank;
            break;
        }
        case OperatorProperty::full_rank: {
            Eigen::JacobiSVD<Matrix> svd(m);
            const auto &sv = svd.singularValues();
            report.residual = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
            report.rank = numerical_rank(m, tol.rank);
            report.verdict = report.rank == a.dim();
            break;
        }
    }
    return report;
}

Eigensystem hermitian_eigensystem(const Operator &a, const ToleranceConfig &tol) {
    require_hermitian(a, tol.hermiticity, "hermitian_eigensystem");
    // Eigen reads only the lower triangle; feed it the symmetrized matrix.
    const Matrix h = 0.5 * (a.matrix() + a.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("hermitian_eigensystem: eigensolver did not converge");
    }
    Eigensystem out;
    const auto n = h.rows();
    out.values.reserve(static_cast<std::size_t>(n));
    out.vectors.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values.push_back(solver.eigenvalues()(k));
        out.vectors.push_back(StateVector::normalized(solver.eigenvectors().col(k)));
    }
    return out;
}

std::size_t numerical_rank(const Matrix &a, double tol) {
    if (a.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto &sv = svd.singularValues();
    const double scale = sv(0) > 0.0 ? sv(0) : 1.0;
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > tol * scale) {
            ++rank;
        }
    }
    return rank;
}

std::size_t numerical_rank(const Operator &a, double tol) {
    return numerical_rank(a.matrix(), tol);
}

Operator unitary_completion(std::span<const StateVector> columns, std::size_t dim) {
    if (!columns.empty()) {
        dim = columns.front().dim();
    }
    if (dim == 0) {
        throw PreconditionError("unitary_completion: dimension must be positive");
    }
    if (columns.size() > dim) {
        throw PreconditionError("unitary_completion: more columns than the dimension");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    const auto k = static_cast<Eigen::Index>(columns.size());
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index c = 0; c < k; ++c) {
        const StateVector &col = columns[static_cast<std::size_t>(c)];
        if (col.dim() != dim) {
            throw DimensionMismatch("unitary_completion: columns have different dimensions");
        }
        out.col(c) = col.amplitudes();
    }
    const Matrix gram = out.leftCols(k).adjoint() * out.leftCols(k);
    const double ortho = k > 0 ? (gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() : 0.0;
    if (ortho > kCompletionOrthoTol) {
        throw PreconditionError("unitary_completion: input columns are not orthonormal");
    }

    // Greedy Gram-Schmidt over the standard basis: at each step take the
    // basis vector with the largest component outside the current span.
    for (Eigen::Index c = k; c < n; ++c) {
        Vector best;
        double best_norm = -1.0;
        for (Eigen::Index e = 0; e < n; ++e) {
            Vector cand = Vector::Zero(n);
            cand(e) = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index p = 0; p < c; ++p) {
                    cand -= out.col(p).dot(cand) * out.col(p);
                }
            }
            const double norm = cand.norm();
            if (norm > best_norm) {
                best_norm = norm;
                best = std::move(cand);
            }
        }
        out.col(c) = best / best_norm;
    }
    return Operator(std::move(out));
}

Operator anti_hermitian_exp(const Operator &k, const ToleranceConfig &tol) {
    if (!is_anti_hermitian(k, tol.hermiticity)) {
        throw PreconditionError("anti_hermitian_exp: generator is not anti-Hermitian");
    }
    const Matrix h = Complex(0.0, -1.0) * k.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw Error("anti_hermitian_exp: eigensolver did not converge");
    }
    const Matrix &v = solver.eigenvectors();
    Vector phases(v.cols());
    for (Eigen::Index j = 0; j < phases.size(); ++j) {
        phases(j) = std::polar(1.0, solver.eigenvalues()(j));
    }
    return Operator(v * phases.asDiagonal() * v.adjoint());
}

}  // namespace waycheck
