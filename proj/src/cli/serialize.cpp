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
#include <cstdio>
#include <sstream>

#include "waycheck/cli.hpp"

namespace waycheck::cli {

using nlohmann::json;

namespace {

bool is_leaf(const json &j) {
    return !j.is_array() && !j.is_object();
}

bool all_leaves(const json &j) {
    for (const auto &e : j) {
        const bool pair = e.is_array() && e.size() == 2 && is_leaf(e[0]) && is_leaf(e[1]);
        if (!is_leaf(e) && !pair) {
            return false;
        }
    }
    return true;
}

void write(std::ostringstream &os, const json &j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Short rows of scalars (and [re, im] pairs) stay on one line.
            if (all_leaves(j)) {
                os << '[';
                bool first = true;
                for (const auto &e : j) {
                    os << (first ? "" : ", ");
                    write(os, e, 0);
                    first = false;
                }
                os << ']';
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto &e : j) {
                os << (first ? "" : ",\n") << inner;
                write(os, e, indent + 1);
                first = false;
            }
            os << '\n' << pad << ']';
            return;
        }
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            // nlohmann::json objects are std::map-backed, so items() is key-sorted.
            for (const auto &[key, value] : j.items()) {
                os << (first ? "" : ",\n") << inner << json(key).dump() << ": ";
                write(os, value, indent + 1);
                first = false;
            }
            os << '\n' << pad << '}';
            return;
        }
        default:
            os << j.dump();
            return;
    }
}

json bound_json(const BoundResult &b) {
    return {{"status", to_string(b.status)},
            {"value", b.defined() ? json(b.value) : json(nullptr)},
            {"numerator", b.numerator},
            {"denominator", b.denominator},
            {"valid", b.defined() ? json(b.valid) : json(nullptr)}};
}

json counts_json(const BoundCounts &c) {
    return {{"evaluated", c.evaluated},
            {"violations", c.violations},
            {"degenerate", c.degenerate},
            {"not_applicable", c.not_applicable},
            {"violation_fraction", c.violation_fraction()}};
}

std::string csv_bool(bool b) {
    return b ? "1" : "0";
}

std::string csv_bound(const BoundResult &b) {
    return b.defined() ? format_double(b.value) : "";
}

std::string csv_valid(const BoundResult &b) {
    return b.defined() ? csv_bool(b.valid) : "";
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string canonical_json(const json &doc) {
    std::ostringstream os;
    write(os, doc, 0);
    os << '\n';
    return os.str();
}

json to_json(const ToleranceConfig &tol) {
    return {{"hermiticity", tol.hermiticity},
            {"unitarity", tol.unitarity},
            {"rank", tol.rank},
            {"conservation", tol.conservation},
            {"grouping", tol.grouping}};
}

json to_json(const TheoremVerdict &verdict) {
    auto check = [](const AssumptionCheck &c) {
        return json{{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}, {"detail", c.detail}};
    };
    json assumptions = json::array();
    for (const auto &c : verdict.assumptions) {
        assumptions.push_back(check(c));
    }
    return {{"assumptions", assumptions},
            {"proof_dimension_bound", check(verdict.proof_dimension_bound)},
            {"commutator_norm", verdict.commutator_norm},
            {"outcome", to_string(verdict.outcome)}};
}

json to_json(const NoiseReport &r) {
    return {{"epsilon_sq", r.epsilon_sq},
            {"robertson",
             {{"bound", r.robertson.bound},
              {"numerator", r.robertson.numerator},
              {"var_L_exact", r.robertson.var_L_exact},
              {"degenerate", r.robertson.degenerate},
              {"valid", r.robertson.valid}}},
            {"paper", bound_json(r.paper)},
            {"yanase", bound_json(r.yanase)},
            {"simplified", bound_json(r.simplified)},
            {"var_L_exact", r.var_L_exact},
            {"var_product_claim", r.var_product_claim}};
}

json to_json(const VarianceAudit &a) {
    return {{"lhs", a.lhs},
            {"paper_rhs", a.paper_rhs},
            {"corrected_rhs", a.corrected_rhs},
            {"paper_claim_holds", a.paper_claim_holds},
            {"corrected_holds", a.corrected_holds}};
}

json summary_json(const CounterexampleSweepReport &r) {
    return {{"n1", r.config.n1},
            {"n2", r.config.n2},
            {"count", r.config.count},
            {"seed", r.config.seed},
            {"nondestructive", r.nondestructive},
            {"exact_nondestructive", r.exact_nondestructive},
            {"consistent", r.consistent},
            {"assumptions_violated", r.assumptions_violated},
            {"contradictions", r.contradictions},
            {"counterexamples", r.counterexamples},
            {"max_exact_commutator", r.max_exact_commutator}};
}

json summary_json(const BoundAuditReport &r) {
    return {{"n1", r.config.n1},
            {"n2", r.config.n2},
            {"count", r.config.count},
            {"seed", r.config.seed},
            {"robertson", counts_json(r.robertson)},
            {"paper", counts_json(r.paper)},
            {"yanase", counts_json(r.yanase)},
            {"simplified", counts_json(r.simplified)}};
}

std::string bound_audit_csv(const BoundAuditReport &r) {
    std::ostringstream os;
    os << "trial,n1,n2,epsilon_sq,robertson_bound,paper_bound,paper_defined,yanase_applicable,yanase_bound,"
          "simplified_applicable,simplified_bound,robertson_valid,paper_valid,yanase_valid,simplified_valid\n";
    const std::string n1 = std::to_string(r.config.n1);
    const std::string n2 = std::to_string(r.config.n2);
    for (const auto &rec : r.records) {
        os << rec.trial << ',' << n1 << ',' << n2 << ',' << format_double(rec.epsilon_sq) << ','
           << format_double(rec.robertson.bound) << ',' << csv_bound(rec.paper) << ','
           << csv_bool(rec.paper.defined()) << ','
           << csv_bool(rec.yanase.status != BoundStatus::not_applicable) << ',' << csv_bound(rec.yanase) << ','
           << csv_bool(rec.simplified.status != BoundStatus::not_applicable) << ',' << csv_bound(rec.simplified)
           << ',' << csv_bool(rec.robertson.valid) << ',' << csv_valid(rec.paper) << ',' << csv_valid(rec.yanase)
           << ',' << csv_valid(rec.simplified) << '\n';
    }
    const std::size_t yanase_applicable = r.records.size() - r.yanase.not_applicable;
    const std::size_t simplified_applicable = r.records.size() - r.simplified.not_applicable;
    os << "summary," << n1 << ',' << n2 << ",,,," << r.paper.evaluated << ',' << yanase_applicable << ",,"
       << simplified_applicable << ",," << format_double(r.robertson.violation_fraction()) << ','
       << format_double(r.paper.violation_fraction()) << ',' << format_double(r.yanase.violation_fraction()) << ','
       << format_double(r.simplified.violation_fraction()) << '\n';
    return os.str();
}

std::string counterexample_csv(const CounterexampleSweepReport &r) {
    std::ostringstream os;
    os << "trial,n1,n2,basis,conservation_residual,leakage,exact_deficit,commutator_norm,outcome,counterexample\n";
    for (const auto &t : r.trials) {
        os << t.trial << ',' << r.config.n1 << ',' << r.config.n2 << ',' << to_string(t.basis) << ','
           << format_double(t.conservation_residual) << ',' << format_double(t.leakage) << ','
           << format_double(t.exact_deficit) << ',' << format_double(t.commutator_norm) << ','
           << to_string(t.outcome) << ',' << csv_bool(t.counterexample) << '\n';
    }
    return os.str();
}

}  // namespace waycheck::cli
