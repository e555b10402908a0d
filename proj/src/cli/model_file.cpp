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

#include <cmath>
#include <fstream>
#include <numbers>

#include "waycheck/cli.hpp"

namespace waycheck::cli {

using nlohmann::json;

namespace {

Complex parse_complex(const json &j, const std::string &field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError(field + ": complex numbers must be encoded as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Vector parse_vector(const json &j, std::size_t dim, const std::string &field) {
    if (!j.is_array()) {
        throw InputError(field + ": expected an array of complex numbers");
    }
    if (j.size() != dim) {
        throw InputError(field + ": expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
    }
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        v(static_cast<Eigen::Index>(k)) = parse_complex(j[k], field);
    }
    return v;
}

Matrix parse_matrix(const json &j, std::size_t dim, const std::string &field) {
    if (!j.is_array() || j.size() != dim) {
        throw InputError(field + ": expected " + std::to_string(dim) + " rows");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix m(n, n);
    for (std::size_t r = 0; r < dim; ++r) {
        m.row(static_cast<Eigen::Index>(r)) = parse_vector(j[r], dim, field).transpose();
    }
    return m;
}

std::size_t parse_dim(const json &doc, const char *field) {
    if (!doc.contains(field)) {
        throw InputError(std::string(field) + ": missing");
    }
    const json &j = doc.at(field);
    if (!j.is_number_integer() || j.get<long long>() <= 0) {
        throw InputError(std::string(field) + ": must be a positive integer");
    }
    return j.get<std::size_t>();
}

const json &require(const json &doc, const char *field) {
    if (!doc.contains(field)) {
        throw InputError(std::string(field) + ": missing");
    }
    return doc.at(field);
}

/// Runs `fn`, relabelling library errors with the field they concern.
template <class Fn>
auto with_field(const std::string &field, Fn &&fn) {
    try {
        return fn();
    } catch (const InputError &) {
        throw;
    } catch (const Error &e) {
        const std::string what = e.what();
        if (what.rfind(field + ":", 0) == 0) {
            throw InputError(what);
        }
        throw InputError(field + ": " + what);
    }
}

}  // namespace

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

json vector_to_json(const Vector &v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out.push_back(complex_to_json(v(k)));
    }
    return out;
}

json matrix_to_json(const Matrix &m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out.push_back(vector_to_json(m.row(r).transpose()));
    }
    return out;
}

ModelFile parse_model(const json &doc, const ToleranceConfig &tol) {
    if (!doc.is_object()) {
        throw InputError("model: top level must be an object");
    }
    const std::size_t n1 = parse_dim(doc, "n1");
    const std::size_t n2 = parse_dim(doc, "n2");

    std::vector<StateVector> basis;
    if (doc.contains("system_basis")) {
        const json &jb = doc.at("system_basis");
        if (!jb.is_array() || jb.size() != n1) {
            throw InputError("system_basis: expected " + std::to_string(n1) + " vectors");
        }
        for (const auto &jv : jb) {
            basis.push_back(with_field("system_basis", [&] { return StateVector(parse_vector(jv, n1, "system_basis")); }));
        }
    } else {
        basis = computational_basis(n1);
    }
    StateVector ready = with_field("ready_state", [&] {
        return StateVector(parse_vector(require(doc, "ready_state"), n2, "ready_state"));
    });
    Operator unitary = with_field("unitary", [&] {
        return Operator(parse_matrix(require(doc, "unitary"), n1 * n2, "unitary"));
    });

    const json &jc = require(doc, "conserved");
    if (!jc.is_object()) {
        throw InputError("conserved: must be an object");
    }
    const json &jkind = require(jc, "kind");
    if (!jkind.is_string() || (jkind != "additive" && jkind != "multiplicative")) {
        throw InputError("conserved.kind: must be \"additive\" or \"multiplicative\"");
    }
    const ConservationKind kind =
        jkind == "additive" ? ConservationKind::additive : ConservationKind::multiplicative;
    Operator la = with_field("conserved.LA", [&] { return Operator(parse_matrix(require(jc, "LA"), n1, "conserved.LA")); });
    Operator lb = with_field("conserved.LB", [&] { return Operator(parse_matrix(require(jc, "LB"), n2, "conserved.LB")); });
    if (!is_hermitian(la, tol.hermiticity)) {
        throw InputError("conserved.LA: not Hermitian");
    }
    if (!is_hermitian(lb, tol.hermiticity)) {
        throw InputError("conserved.LB: not Hermitian");
    }

    std::optional<Operator> observable;
    if (doc.contains("observable")) {
        observable = with_field("observable", [&] { return Operator(parse_matrix(doc.at("observable"), n1, "observable")); });
        if (!is_hermitian(*observable, tol.hermiticity)) {
            throw InputError("observable: not Hermitian");
        }
    }
    std::optional<Operator> probe;
    if (doc.contains("probe")) {
        probe = with_field("probe", [&] { return Operator(parse_matrix(doc.at("probe"), n2, "probe")); });
        if (!is_hermitian(*probe, tol.hermiticity)) {
            throw InputError("probe: not Hermitian");
        }
    }

    MeasurementModel model = with_field("model", [&] {
        try {
            return MeasurementModel(std::move(basis), std::move(ready), std::move(unitary), tol);
        } catch (const PreconditionError &e) {
            // The model constructor prefixes its messages with the field name.
            throw InputError(e.what());
        }
    });
    return ModelFile{std::move(model), ConservedQuantity(kind, std::move(la), std::move(lb), tol),
                     std::move(observable), std::move(probe)};
}

ModelFile load_model(const std::filesystem::path &path, const ToleranceConfig &tol) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("model: cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw InputError(std::string("model: parse error: ") + e.what());
    }
    return parse_model(doc, tol);
}

json model_to_json(const ModelFile &file) {
    const MeasurementModel &m = file.model;
    json doc;
    doc["n1"] = m.n1();
    doc["n2"] = m.n2();
    json basis = json::array();
    for (const auto &u : m.system_basis()) {
        basis.push_back(vector_to_json(u.amplitudes()));
    }
    doc["system_basis"] = basis;
    doc["ready_state"] = vector_to_json(m.ready_state().amplitudes());
    doc["unitary"] = matrix_to_json(m.interaction().matrix());
    doc["conserved"] = {{"kind", to_string(file.conserved.kind)},
                        {"LA", matrix_to_json(file.conserved.la.matrix())},
                        {"LB", matrix_to_json(file.conserved.lb.matrix())}};
    if (file.observable) {
        doc["observable"] = matrix_to_json(file.observable->matrix());
    }
    if (file.probe) {
        doc["probe"] = matrix_to_json(file.probe->matrix());
    }
    return doc;
}

StateVector parse_state(const std::string &spec, std::size_t dim) {
    if (spec.empty()) {
        throw InputError("--state: empty state specification");
    }
    if (spec.front() == '[') {
        json j;
        try {
            j = json::parse(spec);
        } catch (const json::parse_error &) {
            throw InputError("--state: cannot parse vector literal");
        }
        return with_field("--state", [&] { return StateVector::normalized(parse_vector(j, dim, "--state")); });
    }
    if (spec == "plus") {
        return StateVector::normalized(Vector::Ones(static_cast<Eigen::Index>(dim)));
    }
    if (spec == "minus" || spec == "plus_i") {
        if (dim < 2) {
            throw InputError("--state: " + spec + " needs dimension at least 2");
        }
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
        v(0) = 1.0;
        v(1) = spec == "minus" ? Complex(-1.0, 0.0) : Complex(0.0, 1.0);
        return StateVector::normalized(std::move(v));
    }
    std::size_t consumed = 0;
    unsigned long index = 0;
    try {
        index = std::stoul(spec, &consumed);
    } catch (const std::exception &) {
        consumed = 0;
    }
    if (consumed != spec.size()) {
        throw InputError("--state: unknown state '" + spec + "'");
    }
    if (index >= dim) {
        throw InputError("--state: basis index " + spec + " out of range for dimension " + std::to_string(dim));
    }
    return StateVector::basis(dim, index);
}

}  // namespace waycheck::cli
