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
 * Dense complex linear algebra on small Hilbert spaces.
 *
 * Operator and StateVector are thin value types over Eigen storage that
 * enforce their invariants on construction (square, finite, unit norm).
 * Everything else in the library is built from the free functions here.
 *
 * Joint indices follow the system-major convention: for a ⊗ b the pair
 * (i, j) maps to i * b.dim() + j.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace waycheck {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// A documented precondition does not hold; the message names the failed check.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

struct ToleranceConfig {
    double hermiticity = 1e-10;
    double unitarity = 1e-10;
    double rank = 1e-9;
    double conservation = 1e-9;
    double grouping = 1e-9;

    /// Throws PreconditionError when any tolerance is negative or NaN.
    void validate() const;
};

class Operator {
  public:
    /// Throws Error if `m` is empty, not square, or has non-finite entries.
    explicit Operator(Matrix m);

    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim);
    static Operator diagonal(std::span<const double> values);
    static Operator diagonal(std::initializer_list<double> values);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Matrix &matrix() const { return m_; }
    Complex operator()(std::size_t row, std::size_t col) const {
        return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    Operator adjoint() const { return Operator(m_.adjoint()); }

    friend Operator operator+(const Operator &a, const Operator &b);
    friend Operator operator-(const Operator &a, const Operator &b);
    friend Operator operator*(const Operator &a, const Operator &b);
    friend Operator operator*(Complex s, const Operator &a);

  private:
    Matrix m_;
};

class StateVector {
  public:
    /// Throws Error unless ‖v‖ is within 1e-10 of one and all entries are finite.
    explicit StateVector(Vector v);

    /// Rescales `v` to unit norm. Throws Error for a zero or non-finite vector.
    static StateVector normalized(Vector v);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
    const Vector &amplitudes() const { return v_; }
    Complex operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }

  private:
    Vector v_;
};

/// Kronecker product; entry [(i,j),(k,l)] = a[i,k] * b[j,l].
Operator tensor_product(const Operator &a, const Operator &b);
StateVector tensor_product(const StateVector &a, const StateVector &b);
Vector tensor_product(const Vector &a, const Vector &b);

/// ab - ba.
Operator commutator(const Operator &a, const Operator &b);

/// ⟨s|a|s⟩.
Complex expectation(const Operator &a, const StateVector &s);

/// ⟨a²⟩ - ⟨a⟩² for Hermitian `a`, evaluated as ‖(a - ⟨a⟩)s‖² so it is never negative.
double variance(const Operator &a, const StateVector &s, const ToleranceConfig &tol = {});

double frobenius_norm(const Matrix &m);

enum class OperatorProperty { hermitian, unitary, positive_spectrum, full_rank };

std::string to_string(OperatorProperty kind);

struct ValidationReport {
    OperatorProperty kind;
    /// hermitian: ‖a - a†‖_F; unitary: ‖a†a - I‖_F; positive_spectrum: smallest
    /// eigenvalue; full_rank: smallest singular value over the largest.
    double residual = 0.0;
    std::size_t rank = 0;
    bool verdict = false;
};

ValidationReport validate(const Operator &a, OperatorProperty kind, const ToleranceConfig &tol = {});

bool is_hermitian(const Operator &a, double tol);
bool is_anti_hermitian(const Operator &a, double tol);

struct Eigensystem {
    std::vector<double> values;        ///< ascending
    std::vector<StateVector> vectors;  ///< orthonormal, vectors[k] pairs with values[k]
};

Eigensystem hermitian_eigensystem(const Operator &a, const ToleranceConfig &tol = {});

/// Number of singular values above tol times the largest (or times 1 when all vanish).
std::size_t numerical_rank(const Matrix &a, double tol);
std::size_t numerical_rank(const Operator &a, double tol);

/// Extends orthonormal columns to a unitary whose leading columns are exactly `columns`.
/// `dim` is only consulted when `columns` is empty.
Operator unitary_completion(std::span<const StateVector> columns, std::size_t dim = 0);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with R's diagonal phases removed.
Operator random_haar_unitary(std::size_t dim, std::uint64_t seed);

/// exp(k) for anti-Hermitian k, computed through the eigensystem of the Hermitian -ik.
Operator anti_hermitian_exp(const Operator &k, const ToleranceConfig &tol = {});

}  // namespace waycheck
