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
 * Command-line front end: model files, canonical reports, and dispatch.
 *
 * Model files are JSON. Every complex number is a two-element array
 * [re, im]; vectors are arrays of complex numbers and matrices are arrays
 * of rows.
 *
 *     {
 *       "n1": 2, "n2": 2,
 *       "system_basis": [[[1,0],[0,0]], [[0,0],[1,0]]],   // optional
 *       "ready_state": [[1,0],[0,0]],
 *       "unitary": [[...], [...], [...], [...]],
 *       "conserved": {"kind": "multiplicative", "LA": [[...]], "LB": [[...]]},
 *       "observable": [[...]],                              // optional
 *       "probe": [[...]]                                    // optional
 *     }
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "waycheck/measurement_model.hpp"
#include "waycheck/noise_bound.hpp"
#include "waycheck/operator_core.hpp"
#include "waycheck/way_analysis.hpp"

namespace waycheck::cli {

inline constexpr const char *kVersion = "waycheck 0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kFalsified = 1, kInputError = 2 };

/// Malformed input. The message starts with the offending field or flag.
class InputError : public Error {
  public:
    using Error::Error;
};

struct ModelFile {
    MeasurementModel model;
    ConservedQuantity conserved;
    std::optional<Operator> observable;
    std::optional<Operator> probe;
};

ModelFile parse_model(const nlohmann::json &doc, const ToleranceConfig &tol = {});
ModelFile load_model(const std::filesystem::path &path, const ToleranceConfig &tol = {});
nlohmann::json model_to_json(const ModelFile &file);

nlohmann::json complex_to_json(Complex z);
nlohmann::json vector_to_json(const Vector &v);
nlohmann::json matrix_to_json(const Matrix &m);

/// Named state for --state: a basis index ("0", "1", ...), "plus" (uniform
/// superposition), "minus" ((|0⟩ - |1⟩)/√2), "plus_i" ((|0⟩ + i|1⟩)/√2), or an
/// inline vector literal such as "[[1,0],[0,1]]" (normalized on parse).
StateVector parse_state(const std::string &spec, std::size_t dim);

/// Sorted keys, two-space indentation, doubles printed with 17 significant
/// digits and non-finite doubles as null. Ends with a newline.
std::string canonical_json(const nlohmann::json &doc);
std::string format_double(double x);

nlohmann::json to_json(const ToleranceConfig &tol);
nlohmann::json to_json(const TheoremVerdict &verdict);
nlohmann::json to_json(const NoiseReport &report);
nlohmann::json to_json(const VarianceAudit &audit);
nlohmann::json summary_json(const CounterexampleSweepReport &report);
nlohmann::json summary_json(const BoundAuditReport &report);

/// trial, n1, n2, epsilon_sq, robertson_bound, paper_bound, paper_defined,
/// yanase_applicable, yanase_bound, simplified_applicable, simplified_bound,
/// robertson_valid, paper_valid, yanase_valid, simplified_valid; then a
/// "summary" row whose *_valid columns hold violation fractions and whose
/// paper_defined / *_applicable columns hold counts.
std::string bound_audit_csv(const BoundAuditReport &report);
std::string counterexample_csv(const CounterexampleSweepReport &report);

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace waycheck::cli
