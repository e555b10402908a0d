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

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "waycheck/cli.hpp"
#include "waycheck/commutant_search.hpp"

namespace waycheck::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string model;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t n1 = 2;
    std::size_t n2 = 2;
    std::string kind;
    std::string state = "plus";
    bool state_given = false;
    std::string out;
    std::string format = "json";
};

struct Output {
    std::string body;
    int code = kSuccess;
};

ToleranceConfig tolerances(const Options &opt) {
    ToleranceConfig tol;
    tol.conservation = opt.tol;
    if (!(opt.tol >= 0.0)) {
        throw InputError("--tol: must be nonnegative");
    }
    return tol;
}

json report_skeleton(const std::string &command, const ToleranceConfig &tol, json echo) {
    echo["name"] = command;
    return {{"command", echo}, {"tolerances", to_json(tol)}, {"version", kVersion}};
}

void require_json(const Options &opt, const std::string &command) {
    if (opt.format != "json") {
        throw InputError("--format: " + command + " only supports json");
    }
}

const ConservedQuantity &require_multiplicative(const ModelFile &file, const std::string &command) {
    if (file.conserved.kind != ConservationKind::multiplicative) {
        throw InputError("conserved.kind: " + command + " requires a multiplicative conserved quantity");
    }
    return file.conserved;
}

json search_json(const SearchResult &s) {
    json trace = json::array();
    for (const auto &[iter, value] : s.objective_trace) {
        trace.push_back(json::array({iter, value}));
    }
    json restarts = json::array();
    for (std::size_t k = 0; k < s.restart_objectives.size(); ++k) {
        restarts.push_back({{"restart", k}, {"objective", s.restart_objectives[k]}, {"converged", static_cast<bool>(s.restart_converged[k])}});
    }
    return {{"best_objective", s.best_objective},
            {"best_restart", s.best_restart},
            {"best_unitary", matrix_to_json(s.best_unitary.matrix())},
            {"converged", s.converged},
            {"restarts_used", s.restarts_used},
            {"restarts", restarts},
            {"objective_trace", trace},
            {"conservation_residual", s.conservation_residual}};
}

Output cmd_check(const Options &opt) {
    require_json(opt, "check");
    const ToleranceConfig tol = tolerances(opt);
    const ModelFile file = load_model(opt.model, tol);
    const double t = tol.conservation;

    const ConservationReport cons = check_conserved(file.model, file.conserved, t);
    const NondestructiveReport nd = check_nondestructive(file.model, t);
    json pointers = json::array();
    for (const auto &p : nd.pointers.pointers) {
        pointers.push_back(vector_to_json(p));
    }
    json results;
    results["conservation"] = {{"kind", to_string(file.conserved.kind)}, {"residual", cons.residual}, {"verdict", cons.verdict}};
    results["nondestructive"] = {{"leakage", nd.leakage},
                                 {"verdict", nd.verdict},
                                 {"pointers", pointers},
                                 {"degenerate_pointers", nd.degenerate_pointers}};
    if (nd.pointers_well_defined()) {
        const ExactnessReport ex = check_exact(file.model, t);
        results["exactness"] = {{"gram", matrix_to_json(ex.gram)}, {"deficit", ex.deficit}, {"verdict", ex.verdict}};
    } else {
        results["exactness"] = {{"error", "degenerate_pointer"}, {"verdict", false}};
    }
    const bool all = cons.verdict && nd.verdict && results["exactness"]["verdict"].get<bool>();

    json report = report_skeleton("check", tol, {{"model", opt.model}});
    report["results"] = results;
    report["verdict"] = all ? "exact_nondestructive_conserving" : "not_exact_nondestructive_conserving";
    report["model"] = model_to_json(file);
    return {canonical_json(report), kSuccess};
}

Output cmd_verdict(const Options &opt) {
    require_json(opt, "verdict");
    const ToleranceConfig tol = tolerances(opt);
    const ModelFile file = load_model(opt.model, tol);
    const TheoremVerdict v = theorem_verdict(file.model, require_multiplicative(file, "verdict"), tol);
    json report = report_skeleton("verdict", tol, {{"model", opt.model}});
    report["results"] = to_json(v);
    report["verdict"] = to_string(v.outcome);
    report["model"] = model_to_json(file);
    return {canonical_json(report), v.outcome == Outcome::contradiction ? kFalsified : kSuccess};
}

Output cmd_bound(const Options &opt) {
    require_json(opt, "bound");
    const ToleranceConfig tol = tolerances(opt);
    const ModelFile file = load_model(opt.model, tol);
    if (!file.probe) {
        throw InputError("probe: the bound command needs a probe operator in the model file");
    }
    const ConservedQuantity &q = require_multiplicative(file, "bound");
    const Operator o = file.observable ? *file.observable : file.model.measured_observable();
    const StateVector psi = parse_state(opt.state, file.model.n1());
    const NoiseReport nr = noise_report(file.model, o, *file.probe, q, psi, tol);

    json report = report_skeleton("bound", tol, {{"model", opt.model}, {"state", opt.state}});
    report["results"] = to_json(nr);
    report["results"]["state"] = vector_to_json(psi.amplitudes());
    report["verdict"] = nr.robertson.valid ? "robertson_valid" : "robertson_violated";
    report["model"] = model_to_json(file);
    return {canonical_json(report), nr.robertson.valid ? kSuccess : kFalsified};
}

Output cmd_sweep(const Options &opt) {
    const ToleranceConfig tol = tolerances(opt);
    if (opt.format != "json" && opt.format != "csv") {
        throw InputError("--format: must be json or csv");
    }
    const json echo = {{"kind", opt.kind}, {"n1", opt.n1}, {"n2", opt.n2}, {"count", opt.count}, {"seed", opt.seed}};
    if (opt.kind == "counterexample") {
        CounterexampleSweepConfig config;
        config.n1 = opt.n1;
        config.n2 = opt.n2;
        config.count = opt.count;
        config.seed = opt.seed;
        config.tol = tol;
        const CounterexampleSweepReport r = counterexample_sweep(config);
        const bool falsified = r.contradictions > 0 || r.counterexamples > 0;
        const int code = falsified ? kFalsified : kSuccess;
        if (opt.format == "csv") {
            return {counterexample_csv(r), code};
        }
        json records = json::array();
        for (const auto &t : r.trials) {
            records.push_back({{"trial", t.trial},
                               {"basis", to_string(t.basis)},
                               {"conservation_residual", t.conservation_residual},
                               {"leakage", t.leakage},
                               {"exact_deficit", t.exact_deficit},
                               {"commutator_norm", t.commutator_norm},
                               {"outcome", to_string(t.outcome)},
                               {"counterexample", t.counterexample}});
        }
        json report = report_skeleton("sweep", tol, echo);
        report["seed"] = opt.seed;
        report["results"] = {{"summary", summary_json(r)}, {"records", records}};
        report["verdict"] = falsified ? "counterexample_found" : "no_counterexample";
        return {canonical_json(report), code};
    }
    if (opt.kind == "bound-audit") {
        BoundAuditConfig config;
        config.n1 = opt.n1;
        config.n2 = opt.n2;
        config.count = opt.count;
        config.seed = opt.seed;
        config.tol = tol;
        const BoundAuditReport r = bound_audit_sweep(config);
        const int code = r.robertson.violations > 0 ? kFalsified : kSuccess;
        if (opt.format == "csv") {
            return {bound_audit_csv(r), code};
        }
        auto bound = [](const BoundResult &b) {
            return json{{"status", to_string(b.status)},
                        {"value", b.defined() ? json(b.value) : json(nullptr)},
                        {"valid", b.defined() ? json(b.valid) : json(nullptr)}};
        };
        json records = json::array();
        for (const auto &rec : r.records) {
            records.push_back({{"trial", rec.trial},
                               {"epsilon_sq", rec.epsilon_sq},
                               {"robertson", {{"bound", rec.robertson.bound},
                                              {"degenerate", rec.robertson.degenerate},
                                              {"valid", rec.robertson.valid}}},
                               {"paper", bound(rec.paper)},
                               {"yanase", bound(rec.yanase)},
                               {"simplified", bound(rec.simplified)}});
        }
        json report = report_skeleton("sweep", tol, echo);
        report["seed"] = opt.seed;
        report["results"] = {{"summary", summary_json(r)}, {"records", records}};
        report["verdict"] = code == kSuccess ? "robertson_valid" : "robertson_violated";
        return {canonical_json(report), code};
    }
    throw InputError("--kind: sweep kind must be counterexample or bound-audit");
}

Output cmd_optimize(const Options &opt) {
    require_json(opt, "optimize");
    const ToleranceConfig tol = tolerances(opt);
    const ModelFile file = load_model(opt.model, tol);
    const Operator o = file.observable ? *file.observable : file.model.measured_observable();
    SearchConfig config;
    config.seed = opt.seed;
    config.restarts = opt.count;
    if (config.restarts == 0) {
        throw InputError("--count: optimize needs at least one restart");
    }
    const std::string kind = opt.kind.empty() ? "feasibility" : opt.kind;
    json echo = {{"model", opt.model}, {"kind", kind}, {"count", opt.count}, {"seed", opt.seed}};
    json report;
    int code = kSuccess;
    if (kind == "feasibility") {
        const FeasibilityResult fr = feasibility_search(file.conserved, o, config, tol);
        report = report_skeleton("optimize", tol, echo);
        report["results"] = search_json(fr.search);
        report["results"]["commutator_norm"] = fr.commutator_norm;
        report["results"]["hypotheses_hold"] = fr.hypotheses_hold;
        report["results"]["no_go_applies"] = fr.no_go_applies;
        report["results"]["no_go_holds"] = fr.no_go_holds;
        report["results"]["commuting"] = fr.commuting;
        const bool falsified = fr.no_go_applies && !fr.no_go_holds;
        code = falsified ? kFalsified : kSuccess;
        report["verdict"] = falsified ? "no_go_floor_violated" : (fr.no_go_applies ? "no_go_floor_holds" : "no_assertion");
    } else if (kind == "epsilon") {
        if (!file.probe) {
            throw InputError("probe: optimize --kind epsilon needs a probe operator in the model file");
        }
        std::vector<StateVector> states;
        if (opt.state_given) {
            states.push_back(parse_state(opt.state, file.model.n1()));
        } else {
            states = default_probe_states(file.conserved.la, tol);
        }
        const SearchResult sr =
            minimize_epsilon(file.conserved, o, *file.probe, file.model.ready_state(), states, config, tol);
        report = report_skeleton("optimize", tol, echo);
        report["results"] = search_json(sr);
        report["verdict"] = "reported";
    } else {
        throw InputError("--kind: optimize kind must be feasibility or epsilon");
    }
    report["seed"] = opt.seed;
    report["model"] = model_to_json(file);
    return {canonical_json(report), code};
}

Output cmd_rank(const Options &opt) {
    require_json(opt, "rank");
    const ToleranceConfig tol = tolerances(opt);
    const ModelFile file = load_model(opt.model, tol);
    const NondestructiveReport nd = check_nondestructive(file.model, tol.conservation);
    const PointerGramReport pg = pointer_gram_rank(file.conserved.lb, nd.pointers, tol.conservation);
    json report = report_skeleton("rank", tol, {{"model", opt.model}});
    report["results"] = {{"gram_lb", matrix_to_json(pg.gram_lb)},
                         {"rank", pg.rank},
                         {"constant_case", pg.constant_case},
                         {"leakage", nd.leakage},
                         {"degenerate_pointers", nd.degenerate_pointers}};
    report["verdict"] = pg.constant_case ? "constant_case" : "nonconstant";
    report["model"] = model_to_json(file);
    return {canonical_json(report), kSuccess};
}

Output cmd_audit_variance(const Options &opt) {
    require_json(opt, "audit-variance");
    const ToleranceConfig tol = tolerances(opt);
    const ModelFile file = load_model(opt.model, tol);
    const StateVector psi = parse_state(opt.state, file.model.n1());
    const VarianceAudit audit =
        variance_identity_audit(file.conserved.la, file.conserved.lb, psi, file.model.ready_state(), tol);
    json report = report_skeleton("audit-variance", tol, {{"model", opt.model}, {"state", opt.state}});
    report["results"] = to_json(audit);
    report["verdict"] = audit.paper_claim_holds ? "product_claim_holds" : "product_claim_fails";
    report["model"] = model_to_json(file);
    return {canonical_json(report), audit.corrected_holds ? kSuccess : kFalsified};
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Audit toolkit for measurement limits under multiplicative conserved quantities", "waycheck"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Options opt;

    auto add_model = [&](CLI::App *sub) { sub->add_option("--model", opt.model, "Model file (JSON)")->required(); };
    auto add_tol = [&](CLI::App *sub) {
        sub->add_option("--tol", opt.tol, "Decision tolerance for conservation, leakage and exactness")
            ->capture_default_str();
    };
    auto add_out = [&](CLI::App *sub) {
        sub->add_option("--out", opt.out, "Output file (default: stdout)");
        sub->add_option("--format", opt.format, "json or csv")->capture_default_str();
    };
    auto add_state = [&](CLI::App *sub) {
        sub->add_option("--state", opt.state, "System state: index, plus, minus, plus_i or [[re,im],...]")
            ->capture_default_str();
    };

    CLI::App *check = app.add_subcommand("check", "Conservation, nondestructiveness and exactness of a model");
    CLI::App *verdict = app.add_subcommand("verdict", "Theorem hypotheses and conclusion for a model");
    CLI::App *bound = app.add_subcommand("bound", "Noise and its lower bounds on one state");
    CLI::App *rank = app.add_subcommand("rank", "Rank of the pointer Gram matrix of L^B");
    CLI::App *audit = app.add_subcommand("audit-variance", "Product-state variance identity audit");
    CLI::App *optimize = app.add_subcommand("optimize", "Search conserving unitaries");
    CLI::App *sweep = app.add_subcommand("sweep", "Randomized counterexample or bound-audit sweep");

    for (CLI::App *sub : {check, verdict, bound, rank, audit, optimize}) {
        add_model(sub);
    }
    for (CLI::App *sub : {check, verdict, bound, rank, audit, optimize, sweep}) {
        add_tol(sub);
        add_out(sub);
    }
    add_state(bound);
    add_state(audit);
    add_state(optimize);
    optimize->add_option("--seed", opt.seed, "RNG seed")->required();
    optimize->add_option("--count", opt.count, "Number of restarts")->default_val(8);
    optimize->add_option("--kind", opt.kind, "feasibility or epsilon")->default_val("feasibility");
    sweep->add_option("--seed", opt.seed, "RNG seed")->required();
    sweep->add_option("--count", opt.count, "Number of trials")->default_val(1000);
    sweep->add_option("--kind", opt.kind, "counterexample or bound-audit")->required();
    sweep->add_option("--n1", opt.n1, "System dimension")->capture_default_str();
    sweep->add_option("--n2", opt.n2, "Apparatus dimension")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            // --help or --version
            out << (dynamic_cast<const CLI::CallForVersion *>(&e) != nullptr ? std::string(kVersion) + "\n"
                                                                              : app.help());
            return kSuccess;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInputError;
    }

    opt.state_given = [&] {
        for (CLI::App *sub : {bound, audit, optimize}) {
            if (sub->parsed() && sub->count("--state") > 0) {
                return true;
            }
        }
        return false;
    }();

    Output result;
    try {
        if (check->parsed()) {
            result = cmd_check(opt);
        } else if (verdict->parsed()) {
            result = cmd_verdict(opt);
        } else if (bound->parsed()) {
            result = cmd_bound(opt);
        } else if (rank->parsed()) {
            result = cmd_rank(opt);
        } else if (audit->parsed()) {
            result = cmd_audit_variance(opt);
        } else if (optimize->parsed()) {
            // Without --state the epsilon objective averages over the default probe set.
            result = cmd_optimize(opt);
        } else {
            result = cmd_sweep(opt);
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    if (opt.out.empty()) {
        out << result.body;
    } else {
        std::ofstream file(opt.out, std::ios::binary | std::ios::trunc);
        file << result.body;
        if (!file) {
            err << "error: --out: cannot write " << opt.out << '\n';
            return kInputError;
        }
    }
    return result.code;
}

}  // namespace waycheck::cli
