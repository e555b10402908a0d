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

#include "waycheck/commutant_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "parallel.hpp"
#include "waycheck/random.hpp"

namespace waycheck {

namespace {

using Residual = std::function<Eigen::VectorXd(const Matrix &)>;

constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kExactObjective = 1e-30;
constexpr std::size_t kStallIterations = 10;

void append_complex(Eigen::VectorXd &out, Eigen::Index &at, const Vector &v, double scale) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out(at++) = scale * v(k).real();
        out(at++) = scale * v(k).imag();
    }
}

/// One real direction in the Lie algebra of a single block's unitary group.
struct BlockGenerator {
    std::size_t block;
    Matrix algebra;  ///< anti-Hermitian, block-size square
};

/// Basis of block-diagonal anti-Hermitian generators: for each block of size
/// d, the d² elements e_kl - e_lk, i(e_kl + e_lk) (k < l) and i e_kk.
std::vector<BlockGenerator> generator_basis(const BlockDecomposition &d) {
    std::vector<BlockGenerator> out;
    const Complex i(0.0, 1.0);
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
        const auto n = static_cast<Eigen::Index>(d.blocks[b].basis.size());
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index l = k + 1; l < n; ++l) {
                Matrix re = Matrix::Zero(n, n);
                re(k, l) = 1.0;
                re(l, k) = -1.0;
                out.push_back({b, std::move(re)});
                Matrix im = Matrix::Zero(n, n);
                im(k, l) = i;
                im(l, k) = i;
                out.push_back({b, std::move(im)});
            }
            Matrix diag = Matrix::Zero(n, n);
            diag(k, k) = i;
            out.push_back({b, std::move(diag)});
        }
    }
    return out;
}

Matrix small_exp(const Matrix &k) {
    return anti_hermitian_exp(Operator(k)).matrix();
}

/// u · exp(Σ_b B_b E_b B_b†) for per-block algebra elements E_b.
Matrix right_multiply_block_exp(const Matrix &u, const std::vector<Matrix> &bases,
                                const std::vector<Matrix> &algebra) {
    Matrix out = u;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        if (algebra[b].size() == 0 || algebra[b].isZero(0.0)) {
            continue;
        }
        const Matrix &basis = bases[b];
        const Eigen::Index n = basis.cols();
        const Matrix delta = small_exp(algebra[b]) - Matrix::Identity(n, n);
        out += (u * basis) * delta * basis.adjoint();
    }
    return out;
}

struct RestartOutcome {
    Matrix unitary;
    double objective = 0.0;
    std::vector<std::pair<std::size_t, double>> trace;
    bool converged = false;
};

RestartOutcome run_restart(const BlockDecomposition &d, const Residual &residual, const SearchConfig &config,
                           std::uint64_t seed) {
    std::vector<Matrix> bases;
    for (const auto &b : d.blocks) {
        bases.push_back(b.basis_matrix());
    }
    const std::vector<BlockGenerator> gens = generator_basis(d);
    const auto params = static_cast<Eigen::Index>(gens.size());

    auto step_unitary = [&](const Matrix &u, const Eigen::VectorXd &theta) {
        std::vector<Matrix> algebra(bases.size());
        for (std::size_t b = 0; b < bases.size(); ++b) {
            algebra[b] = Matrix::Zero(bases[b].cols(), bases[b].cols());
        }
        for (Eigen::Index p = 0; p < params; ++p) {
            const auto &g = gens[static_cast<std::size_t>(p)];
            algebra[g.block] += theta(p) * g.algebra;
        }
        return right_multiply_block_exp(u, bases, algebra);
    };
    auto single_step = [&](const Matrix &u, std::size_t p, double h) {
        const auto &g = gens[p];
        std::vector<Matrix> algebra(bases.size());
        algebra[g.block] = h * g.algebra;
        return right_multiply_block_exp(u, bases, algebra);
    };

    RestartOutcome out;
    out.unitary = random_commutant_unitary(d, seed).matrix();
    Eigen::VectorXd r = residual(out.unitary);
    out.objective = r.squaredNorm();
    out.trace.emplace_back(0, out.objective);

    double radius = config.step;
    double damping = 1e-3;
    std::size_t stall = 0;
    for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
        if (out.objective <= kExactObjective) {
            out.converged = true;
            break;
        }
        // Central finite differences along U exp(±h G_p).
        Eigen::MatrixXd jac(r.size(), params);
        for (Eigen::Index p = 0; p < params; ++p) {
            const auto sp = static_cast<std::size_t>(p);
            const Eigen::VectorXd plus = residual(single_step(out.unitary, sp, kFiniteDifferenceStep));
            const Eigen::VectorXd minus = residual(single_step(out.unitary, sp, -kFiniteDifferenceStep));
            jac.col(p) = (plus - minus) / (2.0 * kFiniteDifferenceStep);
        }
        const Eigen::VectorXd grad = jac.transpose() * r;
        Eigen::MatrixXd normal = jac.transpose() * jac;
        const double scale = std::max(normal.diagonal().maxCoeff(), 1e-300);
        normal.diagonal().array() += damping * scale;
        Eigen::VectorXd theta = -normal.ldlt().solve(grad);
        if (!theta.allFinite()) {
            theta = -grad;
        }
        const double largest = theta.cwiseAbs().maxCoeff();
        if (largest > radius) {
            theta *= radius / largest;
        }

        const Matrix candidate = step_unitary(out.unitary, theta);
        const Eigen::VectorXd r_new = residual(candidate);
        const double f_new = r_new.squaredNorm();
        double improvement = 0.0;
        if (f_new < out.objective) {
            improvement = out.objective - f_new;
            out.unitary = candidate;
            out.objective = f_new;
            r = r_new;
            out.trace.emplace_back(iter, f_new);
            damping = std::max(damping / 10.0, 1e-12);
            radius = std::min(2.0 * radius, std::numbers::pi);
        } else {
            damping = std::min(damping * 10.0, 1e12);
            radius *= 0.5;
        }
        stall = improvement < config.ftol ? stall + 1 : 0;
        if (stall >= kStallIterations) {
            out.converged = true;
            break;
        }
    }
    return out;
}

SearchResult search_commutant(const BlockDecomposition &d, const Matrix &l, const Residual &residual,
                              const SearchConfig &config) {
    if (config.restarts == 0) {
        throw PreconditionError("search: restarts must be at least 1");
    }
    std::vector<RestartOutcome> outcomes(config.restarts);
    detail::parallel_for(config.restarts, config.workers, [&](std::size_t k) {
        outcomes[k] = run_restart(d, residual, config, derive_seed(config.seed, k));
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < outcomes.size(); ++k) {
        if (outcomes[k].objective < outcomes[best].objective) {
            best = k;
        }
    }
    SearchResult result;
    result.best_unitary = Operator(outcomes[best].unitary);
    result.best_objective = outcomes[best].objective;
    result.objective_trace = outcomes[best].trace;
    result.restarts_used = config.restarts;
    result.converged = outcomes[best].converged;
    result.best_restart = best;
    for (const auto &o : outcomes) {
        result.restart_objectives.push_back(o.objective);
        result.restart_converged.push_back(o.converged);
    }
    const Matrix &u = outcomes[best].unitary;
    result.conservation_residual = frobenius_norm(u * l - l * u);
    return result;
}

bool positive_full_rank(const Operator &a, const ToleranceConfig &tol) {
    return validate(a, OperatorProperty::positive_spectrum, tol).verdict &&
           validate(a, OperatorProperty::full_rank, tol).verdict;
}

}  // namespace

Matrix EigenBlock::basis_matrix() const {
    const auto rows = static_cast<Eigen::Index>(basis.empty() ? 0 : basis.front().dim());
    Matrix m(rows, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        m.col(static_cast<Eigen::Index>(k)) = basis[k].amplitudes();
    }
    return m;
}

Matrix BlockDecomposition::reconstruct() const {
    const auto n = static_cast<Eigen::Index>(total_dim);
    Matrix out = Matrix::Zero(n, n);
    for (const auto &b : blocks) {
        const Matrix basis = b.basis_matrix();
        out += b.eigenvalue * basis * basis.adjoint();
    }
    return out;
}

BlockDecomposition eigenspace_blocks(const Operator &l, const ToleranceConfig &tol) {
    const Eigensystem es = hermitian_eigensystem(l, tol);
    BlockDecomposition d;
    d.total_dim = l.dim();
    std::vector<double> group_values;
    for (std::size_t k = 0; k < es.values.size(); ++k) {
        if (k == 0 || es.values[k] - es.values[k - 1] > tol.grouping) {
            if (!group_values.empty()) {
                double sum = 0.0;
                for (double v : group_values) {
                    sum += v;
                }
                d.blocks.back().eigenvalue = sum / static_cast<double>(group_values.size());
            }
            d.blocks.emplace_back();
            group_values.clear();
        }
        group_values.push_back(es.values[k]);
        d.blocks.back().basis.push_back(es.vectors[k]);
    }
    double sum = 0.0;
    for (double v : group_values) {
        sum += v;
    }
    d.blocks.back().eigenvalue = sum / static_cast<double>(group_values.size());
    return d;
}

BlockDecomposition conserved_eigenspaces(const ConservedQuantity &q, const ToleranceConfig &tol) {
    return eigenspace_blocks(q.joint(), tol);
}

Operator random_commutant_unitary(const BlockDecomposition &d, std::uint64_t seed) {
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(d.total_dim);
    Matrix u = Matrix::Zero(n, n);
    for (const auto &b : d.blocks) {
        const Matrix basis = b.basis_matrix();
        const Operator h = random_haar_unitary(b.basis.size(), rng);
        u += basis * h.matrix() * basis.adjoint();
    }
    return Operator(std::move(u));
}

Operator project_generator(const Operator &k, const BlockDecomposition &d, const ToleranceConfig &tol) {
    if (!is_anti_hermitian(k, tol.hermiticity)) {
        throw PreconditionError("project_generator: generator is not anti-Hermitian");
    }
    if (k.dim() != d.total_dim) {
        throw DimensionMismatch("project_generator: generator does not match the decomposition");
    }
    const auto n = static_cast<Eigen::Index>(d.total_dim);
    Matrix out = Matrix::Zero(n, n);
    for (const auto &b : d.blocks) {
        const Matrix basis = b.basis_matrix();
        const Matrix proj = basis * basis.adjoint();
        out += proj * k.matrix() * proj;
    }
    return Operator(0.5 * (out - out.adjoint()));
}

std::vector<StateVector> default_probe_states(const Operator &la, const ToleranceConfig &tol) {
    const Eigensystem es = hermitian_eigensystem(la, tol);
    std::vector<StateVector> out = es.vectors;
    for (std::size_t i = 0; i < es.vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < es.vectors.size(); ++j) {
            out.push_back(StateVector::normalized(es.vectors[i].amplitudes() + es.vectors[j].amplitudes()));
        }
    }
    return out;
}

SearchResult minimize_epsilon(const ConservedQuantity &q, const Operator &o, const Operator &probe,
                              const StateVector &ready_state, std::span<const StateVector> probe_states,
                              const SearchConfig &config, const ToleranceConfig &tol) {
    const std::size_t n1 = q.la.dim();
    const std::size_t n2 = q.lb.dim();
    if (o.dim() != n1 || probe.dim() != n2 || ready_state.dim() != n2) {
        throw DimensionMismatch("minimize_epsilon: observable, probe or ready state does not match the conserved quantity");
    }
    if (probe_states.empty()) {
        throw PreconditionError("minimize_epsilon: need at least one probe state");
    }
    if (!is_hermitian(o, tol.hermiticity) || !is_hermitian(probe, tol.hermiticity)) {
        throw PreconditionError("minimize_epsilon: observable and probe must be Hermitian");
    }

    const Matrix joint_probe = tensor_product(Operator::identity(n1), probe).matrix();
    const Matrix target_op = tensor_product(o, Operator::identity(n2)).matrix();
    std::vector<Vector> inputs;
    std::vector<Vector> targets;
    for (const auto &psi : probe_states) {
        if (psi.dim() != n1) {
            throw DimensionMismatch("minimize_epsilon: probe state does not match the system dimension");
        }
        inputs.push_back(tensor_product(psi.amplitudes(), ready_state.amplitudes()));
        targets.push_back(target_op * inputs.back());
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(inputs.size()));
    const auto dim = static_cast<Eigen::Index>(n1 * n2);

    // mean_k ‖N Ψ_k‖² = ‖r‖² with r the stacked, scaled N Ψ_k.
    const Residual residual = [&](const Matrix &u) {
        Eigen::VectorXd r(2 * dim * static_cast<Eigen::Index>(inputs.size()));
        Eigen::Index at = 0;
        for (std::size_t k = 0; k < inputs.size(); ++k) {
            const Vector image = u.adjoint() * (joint_probe * (u * inputs[k])) - targets[k];
            append_complex(r, at, image, scale);
        }
        return r;
    };
    const BlockDecomposition d = conserved_eigenspaces(q, tol);
    return search_commutant(d, q.joint().matrix(), residual, config);
}

FeasibilityResult feasibility_search(const ConservedQuantity &q, const Operator &o, const SearchConfig &config,
                                     const ToleranceConfig &tol) {
    const std::size_t n1 = q.la.dim();
    const std::size_t n2 = q.lb.dim();
    if (o.dim() != n1) {
        throw DimensionMismatch("feasibility_search: observable does not match the system dimension");
    }
    const Eigensystem es = hermitian_eigensystem(o, tol);
    const auto sn2 = static_cast<Eigen::Index>(n2);
    const Vector ready = StateVector::basis(n2, 0).amplitudes();
    std::vector<Vector> inputs;
    std::vector<Vector> basis;
    for (const auto &u : es.vectors) {
        basis.push_back(u.amplitudes());
        inputs.push_back(tensor_product(u.amplitudes(), ready));
    }
    const auto sn1 = static_cast<Eigen::Index>(n1);

    const Residual residual = [&](const Matrix &u) {
        std::vector<Vector> w(n1 * n1);
        for (std::size_t j = 0; j < n1; ++j) {
            const Vector out = u * inputs[j];
            for (std::size_t i = 0; i < n1; ++i) {
                Vector block = Vector::Zero(sn2);
                for (Eigen::Index a = 0; a < sn1; ++a) {
                    block += std::conj(basis[i](a)) * out.segment(a * sn2, sn2);
                }
                w[i * n1 + j] = std::move(block);
            }
        }
        Eigen::VectorXd r(2 * sn1 * (sn1 - 1) * sn2 + 2 * sn1 * sn1);
        Eigen::Index at = 0;
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n1; ++j) {
                if (i != j) {
                    append_complex(r, at, w[i * n1 + j], 1.0);
                }
            }
        }
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n1; ++j) {
                const Complex g = w[i * n1 + i].dot(w[j * n1 + j]) - (i == j ? 1.0 : 0.0);
                r(at++) = g.real();
                r(at++) = g.imag();
            }
        }
        return r;
    };

    FeasibilityResult result;
    result.commutator_norm = frobenius_norm(commutator(o, q.la).matrix());
    result.commuting = result.commutator_norm <= tol.conservation;
    result.hypotheses_hold = q.kind == ConservationKind::multiplicative && n2 < 2 * n1 &&
                             positive_full_rank(q.la, tol) && positive_full_rank(q.lb, tol);
    result.no_go_applies = result.hypotheses_hold && result.commutator_norm >= kNoGoCommutatorThreshold;

    const BlockDecomposition d = conserved_eigenspaces(q, tol);
    result.search = search_commutant(d, q.joint().matrix(), residual, config);
    if (result.no_go_applies) {
        result.no_go_holds = std::all_of(result.search.restart_objectives.begin(),
                                         result.search.restart_objectives.end(),
                                         [](double f) { return f > kNoGoObjectiveFloor; });
    }
    return result;
}

}  // namespace waycheck
