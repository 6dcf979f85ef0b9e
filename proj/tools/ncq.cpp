// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "cli.hpp"
#include "ncq/error.hpp"

using namespace ncq;
using namespace ncq::cli;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct Output {
    std::string path;
    const RunConfig *cfg = nullptr;

    void emit(const json &j, const std::string &text) const {
        std::string body = cfg->format == "json" ? j.dump(2) + "\n" : text;
        if (path.empty()) {
            std::cout << body;
            return;
        }
        std::ofstream out(path);
        if (!out) fail("cannot write '" + path + "'");
        out << body;
    }
};

int verdict_code(Verdict v) { return v == Verdict::nonclassical ? kExitNonclassical : kExitClassical; }

std::string stem(const std::string &path) { return std::filesystem::path(path).stem().string(); }

TargetKind parse_kind(const std::string &k) {
    if (k == "measurement") return TargetKind::measurement;
    if (k == "states") return TargetKind::states;
    fail("--kind must be measurement or states");
}

struct Target {
    std::string name;
    TargetKind kind = TargetKind::measurement;
    MultiMeasurement m;
    StateSet s;
    std::vector<std::string> warnings;

    OperatorFamily family() const {
        return kind == TargetKind::measurement ? measurement_family(m, name) : state_family(s, name);
    }
    VertexSet vertices(const RunConfig &cfg) const {
        return kind == TargetKind::measurement ? vertices_of(m, cfg) : vertices_of(s, cfg);
    }
    json document() const { return kind == TargetKind::measurement ? to_json(m) : to_json(s); }
    Target noisy(double eta) const {
        Target t = *this;
        if (kind == TargetKind::measurement)
            t.m = add_white_noise_measurement(m, eta);
        else
            t.s = add_white_noise_states(s, eta);
        return t;
    }
};

Target load_target(TargetKind kind, const std::string &target, bool builtin, const RunConfig &cfg) {
    Target t;
    t.kind = kind;
    t.name = builtin ? target : stem(target);
    if (kind == TargetKind::measurement) {
        if (builtin) {
            auto m = builtin_measurement(target);
            if (!m) fail("unknown builtin measurement '" + target + "'");
            t.m = *m;
        } else {
            t.m = measurement_from_json(read_json_file(target), cfg.tol);
        }
        return t;
    }
    if (builtin) {
        auto s = builtin_states(target);
        if (!s) fail("unknown builtin state set '" + target + "'");
        t.s = *s;
        return t;
    }
    json j = read_json_file(target);
    if (j.is_object() && j.value("type", "") == "source") {
        StateSetReduction red = multisource_to_state_set(source_from_json(j, cfg.tol));
        t.s = red.states;
        t.warnings = red.warnings;
    } else {
        t.s = states_from_json(j, cfg.tol);
    }
    return t;
}

std::vector<double> parse_sweep(const std::string &spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            parts.push_back(std::stod(item));
        } catch (const std::exception &) {
            fail("--sweep expects eta0:eta1:steps");
        }
    }
    require(parts.size() == 3, "--sweep expects eta0:eta1:steps");
    const int n = static_cast<int>(parts[2]);
    require(n >= 1 && parts[2] == n, "--sweep steps must be a positive integer");
    require(parts[0] >= 0 && parts[0] <= 1 && parts[1] >= 0 && parts[1] <= 1, "--sweep bounds must lie in [0, 1]");
    std::vector<double> etas;
    for (int i = 0; i < n; ++i) etas.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (n - 1));
    return etas;
}

/// Runs body(i) for i < n on up to `jobs` threads; rethrows the first failure.
void parallel_for(int n, int jobs, const std::function<void(int)> &body) {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min(jobs, n); ++t) pool.emplace_back(worker);
    worker();
    for (auto &th : pool) th.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

std::string report_text(const QuantifierReport &r) {
    std::ostringstream o;
    o << r.target << " " << to_string(r.quantity) << " = " << (std::isfinite(r.value) ? num(r.value) : "inf") << " ["
      << to_string(r.verdict) << "]\n";
    o << "  status " << conic::to_string(r.status) << ", form " << r.solver_form << ", iterations " << r.iterations
      << ", gap " << num(r.gap) << "\n";
    if (r.from_dual_program || r.dual_value != 0.0) o << "  dual value " << num(r.dual_value) << "\n";
    o << "  certificate residual " << num(r.certificate_residual) << "\n";
    return o.str();
}

QuantifierReport run_quantity(const std::string &q, bool dual, const Target &t, const VertexSet &v,
                              const QuantifierOptions &qo) {
    OperatorFamily f = t.family();
    if (q == "mu") return certify(f, v, qo);
    if (q == "eta") return dual ? robustness_dual(f, v, qo) : robustness(f, v, qo);
    if (q == "omega") return dual ? fraction_dual(f, v, qo) : fraction(f, v, qo);
    fail("unknown quantity '" + q + "'");
}

struct QuantityArgs {
    std::string kind = "measurement";
    std::string target;
    bool builtin = false;
    bool dual = false;
    std::string sweep;
};

void add_target_args(CLI::App *sub, QuantityArgs &a) {
    sub->add_option("--kind", a.kind, "measurement or states")->check(CLI::IsMember({"measurement", "states"}));
    sub->add_option("target", a.target, "JSON file, or a builtin name with --builtin")->required();
    sub->add_flag("--builtin", a.builtin, "Resolve the target in the builtin registry");
}

int run_quantifier(const std::string &quantity, const QuantityArgs &a, const RunConfig &cfg, const Output &out,
                   QuantifierOptions qo) {
    Target t = load_target(parse_kind(a.kind), a.target, a.builtin, cfg);
    for (const auto &w : t.warnings) std::cerr << "warning: " << w << "\n";
    if (!a.sweep.empty()) {
        std::vector<double> etas = parse_sweep(a.sweep);
        std::vector<QuantifierReport> reports(etas.size());
        RunConfig inner = cfg;
        if (cfg.jobs > 1) inner.jobs = 1;
        parallel_for(static_cast<int>(etas.size()), cfg.jobs, [&](int i) {
            Target n = t.noisy(etas[i]);
            reports[i] = run_quantity(quantity, a.dual, n, n.vertices(inner), qo);
        });
        json rows = json::array();
        std::ostringstream text;
        text << "eta\t" << quantity << "\tverdict\n";
        for (size_t i = 0; i < etas.size(); ++i) {
            rows.push_back({{"eta", etas[i]}, {"value", reports[i].value}, {"verdict", to_string(reports[i].verdict)}});
            text << num(etas[i]) << "\t" << num(reports[i].value) << "\t" << to_string(reports[i].verdict) << "\n";
        }
        out.emit(json{{"schema", kSchemaVersion}, {"type", "sweep"}, {"target", t.name}, {"quantity", quantity},
                      {"rows", rows}},
                 text.str());
        return kExitClassical;
    }
    VertexSet v = t.vertices(cfg);
    QuantifierReport r = run_quantity(quantity, a.dual, t, v, qo);
    json j = to_json(r);
    std::string text = report_text(r);
    if (quantity == "eta") {
        double b = analytic_upper_bound(t.family(), v);
        j["analytic_upper_bound"] = std::isfinite(b) ? json(b) : json(nullptr);
        text += "  analytic upper bound " + (std::isfinite(b) ? num(b) : std::string("inf")) + "\n";
    }
    j["vertices"] = v.count();
    out.emit(j, text);
    return verdict_code(r.verdict);
}

std::string ineq_text(const NCInequality &i, const Behavior *beh) { return format_inequality(i, beh) + "\n"; }

void print_builtins(std::ostream &o) {
    for (const char *c : {"measurement", "states", "scenario"}) {
        o << c << ":";
        for (const auto &n : builtin_names(c)) o << " " << n;
        o << "\n";
    }
    o << "inequality:";
    for (const auto &n : builtin_inequalities()) o << " " << n;
    o << "\n";
}

int exit_code(const Error &e) {
    switch (e.kind()) {
    case ErrorKind::parse:
    case ErrorKind::invalid_argument:
    case ErrorKind::infeasible_input: return kExitInput;
    case ErrorKind::solver: return kExitSolver;
    case ErrorKind::enumeration_cap: return kExitCap;
    }
    return kExitInput;
}

}  // namespace

int main(int argc, char **argv) {
    RunConfig cfg;
    if (const char *e = std::getenv("NCQ_JOBS")) cfg.jobs = std::atoi(e);
    if (const char *e = std::getenv("NCQ_SOLVER_EPS")) cfg.tol.solver_eps = std::strtod(e, nullptr);
    if (const char *e = std::getenv("NCQ_MAX_ITERS")) cfg.max_iters = std::atoi(e);
    Output out;
    out.cfg = &cfg;

    CLI::App app{"Classicality quantifiers for measurements, state sets and prepare-and-measure scenarios"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol-herm", cfg.tol.herm, "Hermiticity tolerance");
    app.add_option("--tol-psd", cfg.tol.psd, "Positivity tolerance");
    app.add_option("--tol-null", cfg.null_tol, "Absolute null-space cut (0 = relative rule)");
    app.add_option("--tol-vert", cfg.tol.vert, "Vertex feasibility tolerance");
    app.add_option("--tol-dedup", cfg.tol.dedup, "Vertex deduplication tolerance");
    app.add_option("--tol-verdict", cfg.tol.verdict, "Band around the classical boundary");
    app.add_option("--solver-eps", cfg.tol.solver_eps, "Interior-point stopping tolerance");
    app.add_option("--max-iters", cfg.max_iters, "Interior-point iteration limit");
    app.add_option("--max-candidates", cfg.max_candidates, "Enumeration cap on candidate bases");
    app.add_option("--jobs", cfg.jobs, "Worker threads for enumeration and sweeps");
    app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("-o,--output", out.path, "Write the result to a file instead of stdout");

    std::function<int()> action;
    QuantityArgs qa;
    bool no_facial = false, no_refine = false;

    auto *certify_cmd = app.add_subcommand("certify", "Decide classicality (mu) through the parent-POVM SDP");
    add_target_args(certify_cmd, qa);
    certify_cmd->callback([&] { action = [&] { return run_quantifier("mu", qa, cfg, out, cfg.quantifier()); }; });

    auto *rob_cmd = app.add_subcommand("robustness", "White-noise robustness eta");
    add_target_args(rob_cmd, qa);
    rob_cmd->add_flag("--dual", qa.dual, "Solve the dual program");
    rob_cmd->add_option("--sweep", qa.sweep, "eta0:eta1:steps noise sweep");
    rob_cmd->callback([&] { action = [&] { return run_quantifier("eta", qa, cfg, out, cfg.quantifier()); }; });

    auto *frac_cmd = app.add_subcommand("fraction", "Nonclassical fraction omega");
    add_target_args(frac_cmd, qa);
    frac_cmd->add_flag("--dual", qa.dual, "Solve the dual program");
    frac_cmd->add_option("--sweep", qa.sweep, "eta0:eta1:steps noise sweep");
    frac_cmd->add_flag("--no-facial-reduction", no_facial, "Keep full-size parent blocks");
    frac_cmd->add_flag("--no-refine", no_refine, "Skip the least-trace pass of the dual");
    frac_cmd->callback([&] {
        action = [&] {
            QuantifierOptions qo = cfg.quantifier();
            qo.facial_reduction = !no_facial;
            qo.refine_dual = !no_refine;
            return run_quantifier("omega", qa, cfg, out, qo);
        };
    });

    std::string on_target;
    bool on_builtin = false;
    auto *wit_cmd = app.add_subcommand("witness", "Build a witness from the fraction dual and evaluate it");
    add_target_args(wit_cmd, qa);
    wit_cmd->add_option("--on", on_target, "Evaluate on this object instead of the target");
    wit_cmd->add_flag("--on-builtin", on_builtin, "Resolve --on in the builtin registry");
    wit_cmd->callback([&] {
        action = [&] {
            Target t = load_target(parse_kind(qa.kind), qa.target, qa.builtin, cfg);
            QuantifierReport r = fraction(t.family(), t.vertices(cfg), cfg.quantifier());
            Target eval = on_target.empty() ? t : load_target(t.kind, on_target, on_builtin, cfg);
            json j{{"schema", kSchemaVersion}, {"type", "witness"}, {"target", t.name}, {"fraction", r.value}};
            WitnessValue wv;
            std::ostringstream text;
            if (t.kind == TargetKind::measurement) {
                MeasurementWitness w = witness_from_dual_measurement(r.dual_certificate, cfg.tol.psd);
                for (const auto &msg : w.warnings) std::cerr << "warning: " << msg << "\n";
                wv = evaluate_measurement_witness(w, eval.m, cfg.tol.witness);
                j["witness"] = to_json(w);
                text << "sum_b f_b Tr[rho_b M_b] >= 1 with f =";
                for (double f : w.weights) text << " " << num(f);
            } else {
                StateWitness w = witness_from_dual_states(r.dual_certificate, cfg.tol.psd);
                wv = evaluate_state_witness(w, eval.s, cfg.tol.witness);
                j["witness"] = to_json(w);
                text << "(1/k) sum_a f_a Tr[T_a rho_a] >= 1 with f =";
                for (double f : w.weights) text << " " << num(f);
            }
            j["evaluated_on"] = eval.name;
            j["value"] = wv.value;
            j["nonclassical"] = wv.nonclassical;
            text << "\n" << eval.name << ": value " << num(wv.value) << " ["
                 << (wv.nonclassical ? "nonclassical" : "not detected") << "]\n";
            out.emit(j, text.str());
            return wv.nonclassical ? kExitNonclassical : kExitClassical;
        };
    });

    std::string scenario, inequality_name;
    bool scenario_builtin = false;
    double eta = 1.0;
    auto *lp_cmd = app.add_subcommand("lp-model", "Noncontextual-model LP with a Farkas inequality on failure");
    lp_cmd->add_option("scenario", scenario, "Scenario JSON, or a builtin name with --builtin")->required();
    lp_cmd->add_flag("--builtin", scenario_builtin, "Resolve the scenario in the builtin registry");
    lp_cmd->add_option("--eta", eta, "Noise parameter of a builtin scenario");
    lp_cmd->add_option("--inequality", inequality_name, "Also evaluate a builtin inequality or inequality JSON");
    lp_cmd->callback([&] {
        action = [&] {
            Scenario sc;
            if (scenario_builtin) {
                auto s = builtin_scenario(scenario, eta);
                if (!s) fail("unknown builtin scenario '" + scenario + "'");
                sc = *s;
            } else {
                sc = scenario_from_json(read_json_file(scenario), cfg.tol);
            }
            StateSetReduction red = multisource_to_state_set(sc.source);
            for (const auto &w : red.warnings) std::cerr << "warning: " << w << "\n";
            Behavior beh = sc.behavior ? *sc.behavior : quantum_behavior(sc.source, sc.measurement);
            NCModelResult r = nc_model_lp(beh, vertices_of(red.states, cfg), vertices_of(sc.measurement, cfg),
                                          red.index, cfg.nc_model());
            json j = to_json(r);
            j["scenario"] = sc.name;
            std::ostringstream text;
            if (r.feasible) {
                text << sc.name << ": noncontextual model found (mismatch " << num(r.mismatch) << ")\n";
            } else {
                text << sc.name << ": no noncontextual model (mismatch " << num(r.mismatch) << ")\n";
                text << "inequality: " << ineq_text(*r.inequality, &beh);
                text << "violation " << num(r.violation) << "\n";
                j["inequality_text"] = format_inequality(*r.inequality, &beh);
            }
            if (!inequality_name.empty()) {
                auto names = builtin_inequalities();
                NCInequality ineq = std::find(names.begin(), names.end(), inequality_name) != names.end()
                                        ? builtin_inequality(inequality_name)
                                        : inequality_from_json(read_json_file(inequality_name));
                InequalityValue v = evaluate_inequality(ineq, beh);
                j["evaluated_inequality"] = {{"inequality", to_json(ineq)}, {"lhs", v.lhs},
                                             {"satisfied", v.satisfied}, {"margin", v.margin}};
                text << ineq_text(ineq, &beh) << "lhs " << num(v.lhs) << " ["
                     << (v.satisfied ? "satisfied" : "violated") << "]\n";
            }
            out.emit(j, text.str());
            return r.feasible ? kExitClassical : kExitNonclassical;
        };
    });

    std::string steer_state, steer_meas;
    bool steer_builtin = false, no_quantify = false;
    auto *steer_cmd = app.add_subcommand("steer", "Assemblage from a bipartite state and measurements on A");
    steer_cmd->add_option("state", steer_state, "Bipartite JSON, or 'isotropic' with --builtin")->required();
    steer_cmd->add_flag("--builtin", steer_builtin, "Use the builtin isotropic state");
    steer_cmd->add_option("--eta", eta, "Visibility of the isotropic state");
    steer_cmd->add_option("--measurements", steer_meas, "Measurement JSON or builtin name")->required();
    steer_cmd->add_flag("--no-quantify", no_quantify, "Skip the robustness of the steered states");
    steer_cmd->callback([&] {
        action = [&] {
            BipartiteState rho;
            if (steer_builtin) {
                if (steer_state != "isotropic") fail("unknown builtin bipartite state '" + steer_state + "'");
                rho = isotropic_state(eta);
            } else {
                rho = bipartite_from_json(read_json_file(steer_state), cfg.tol);
            }
            MultiMeasurement n;
            if (std::filesystem::exists(steer_meas)) {
                n = measurement_from_json(read_json_file(steer_meas), cfg.tol);
            } else {
                auto m = builtin_measurement(steer_meas);
                if (!m) fail("'" + steer_meas + "' is neither a file nor a builtin measurement");
                n = *m;
            }
            MultiSource src = steer(rho, n);
            double ns = no_signaling_residual(src);
            json j{{"schema", kSchemaVersion}, {"type", "steering"}, {"source", to_json(src)},
                   {"no_signaling_residual", ns}};
            std::ostringstream text;
            text << "assemblage: " << src.num_settings() << " settings, no-signaling residual " << num(ns) << "\n";
            int code = kExitClassical;
            if (!no_quantify) {
                StateSetReduction red = multisource_to_state_set(src);
                QuantifierReport r =
                    white_noise_robustness_states(red.states, vertices_of(red.states, cfg), cfg.quantifier());
                r.target = "steered states";
                j["report"] = to_json(r);
                text << report_text(r);
                code = verdict_code(r.verdict);
            }
            out.emit(j, text.str());
            return code;
        };
    });

    bool compare = false;
    auto *poly_cmd = app.add_subcommand("polytope", "Operational identities, assignment polytope and vertices");
    add_target_args(poly_cmd, qa);
    poly_cmd->add_flag("--compare", compare, "Check the shortcut against the general enumerator");
    poly_cmd->callback([&] {
        action = [&] {
            Target t = load_target(parse_kind(qa.kind), qa.target, qa.builtin, cfg);
            IdentitySpace o = t.kind == TargetKind::measurement ? measurement_identity_space(t.m, cfg.identities())
                                                                : preparation_identity_space(t.s, cfg.identities());
            AssignmentPolytope p = t.kind == TargetKind::measurement
                                       ? build_measurement_polytope(t.m, o, cfg.enumeration())
                                       : build_preparation_polytope(t.s, o, cfg.enumeration());
            VertexSet v = polytope_vertices(p, cfg.enumeration());
            json j{{"schema", kSchemaVersion}, {"type", "polytope_report"}, {"target", t.name},
                   {"identities", to_json(o)}, {"polytope", to_json(p)}, {"vertices", to_json(v)}};
            std::ostringstream text;
            text << t.name << ": " << o.basis.cols() << " identities, " << v.count() << " vertices\n";
            if (compare) {
                VertexSet g = enumerate_vertices(p, cfg.enumeration());
                auto s = simplex_product_vertices(p, cfg.enumeration());
                bool agree = !s || (s->count() == g.count() && (s->vertices - g.vertices).norm() <= 1e-9);
                j["general_count"] = g.count();
                j["shortcut_applies"] = s.has_value();
                j["agree"] = agree;
                text << "general enumerator " << g.count() << ", shortcut "
                     << (s ? std::to_string(s->count()) : std::string("n/a")) << (agree ? ", agree\n" : ", DISAGREE\n");
            }
            out.emit(j, text.str());
            return kExitClassical;
        };
    });

    double noise_eta = 1.0;
    auto *noise_cmd = app.add_subcommand("noise", "Mix white noise into a measurement or state set");
    add_target_args(noise_cmd, qa);
    noise_cmd->add_option("--eta", noise_eta, "Visibility")->required();
    noise_cmd->callback([&] {
        action = [&] {
            Target t = load_target(parse_kind(qa.kind), qa.target, qa.builtin, cfg).noisy(noise_eta);
            out.emit(t.document(), t.document().dump(2) + "\n");
            return kExitClassical;
        };
    });

    std::vector<double> flag_dist;
    auto *flag_cmd = app.add_subcommand("flag", "Flag-convexify a multi-measurement");
    flag_cmd->add_option("target", qa.target, "Measurement JSON or builtin name with --builtin")->required();
    flag_cmd->add_flag("--builtin", qa.builtin, "Resolve the target in the builtin registry");
    flag_cmd->add_option("--dist", flag_dist, "Setting distribution (default uniform)")->delimiter(',');
    flag_cmd->callback([&] {
        action = [&] {
            Target t = load_target(TargetKind::measurement, qa.target, qa.builtin, cfg);
            json j = to_json(flag_convexify_measurement(t.m, flag_dist));
            out.emit(j, j.dump(2) + "\n");
            return kExitClassical;
        };
    });

    std::string reduce_file;
    auto *reduce_cmd = app.add_subcommand("reduce", "Distinct normalized states of a multi-source");
    reduce_cmd->add_option("source", reduce_file, "Source JSON")->required();
    reduce_cmd->callback([&] {
        action = [&] {
            StateSetReduction red = multisource_to_state_set(source_from_json(read_json_file(reduce_file), cfg.tol));
            json j = to_json(red.states);
            j["index"] = red.index;
            if (!red.warnings.empty()) j["warnings"] = red.warnings;
            out.emit(j, j.dump(2) + "\n");
            return kExitClassical;
        };
    });

    std::string export_cat, export_name;
    auto *export_cmd = app.add_subcommand("export", "Write a builtin object as JSON");
    export_cmd->add_option("category", export_cat, "measurement, states, scenario or inequality")
        ->required()
        ->check(CLI::IsMember({"measurement", "states", "scenario", "inequality"}));
    export_cmd->add_option("name", export_name, "Builtin name")->required();
    export_cmd->add_option("--eta", eta, "Noise parameter of a builtin scenario");
    export_cmd->callback([&] {
        action = [&] {
            json j;
            if (export_cat == "measurement") {
                auto m = builtin_measurement(export_name);
                if (!m) fail("unknown builtin measurement '" + export_name + "'");
                j = to_json(*m);
            } else if (export_cat == "states") {
                auto s = builtin_states(export_name);
                if (!s) fail("unknown builtin state set '" + export_name + "'");
                j = to_json(*s);
            } else if (export_cat == "scenario") {
                auto s = builtin_scenario(export_name, eta);
                if (!s) fail("unknown builtin scenario '" + export_name + "'");
                j = scenario_to_json(*s);
            } else {
                j = to_json(builtin_inequality(export_name));
            }
            out.emit(j, j.dump(2) + "\n");
            return kExitClassical;
        };
    });

    std::string prog_quantity = "eta";
    auto *prog_cmd = app.add_subcommand("program", "Dump the conic program behind a quantifier");
    add_target_args(prog_cmd, qa);
    prog_cmd->add_option("--quantity", prog_quantity, "mu, eta or omega")->check(CLI::IsMember({"mu", "eta", "omega"}));
    prog_cmd->add_flag("--dual", qa.dual, "Dump the dual program");
    prog_cmd->callback([&] {
        action = [&] {
            Target t = load_target(parse_kind(qa.kind), qa.target, qa.builtin, cfg);
            OperatorFamily f = t.family();
            VertexSet v = t.vertices(cfg);
            conic::Program p = prog_quantity == "mu"      ? certify_program(f, v)
                               : prog_quantity == "eta"   ? (qa.dual ? robustness_dual_program(f, v)
                                                                     : robustness_program(f, v))
                               : qa.dual                  ? fraction_dual_program(f, v)
                                                          : fraction_program(f, v);
            json j = to_json(p);
            out.emit(j, j.dump(2) + "\n");
            return kExitClassical;
        };
    });

    std::string prog_file;
    auto *solve_cmd = app.add_subcommand("solve", "Solve a program JSON");
    solve_cmd->add_option("program", prog_file, "Program JSON")->required();
    solve_cmd->callback([&] {
        action = [&] {
            conic::Program p = program_from_json(read_json_file(prog_file));
            conic::SolveOptions so = cfg.quantifier().solver;
            conic::Solution s = conic::solve(p, so);
            json j{{"schema", kSchemaVersion}, {"type", "solution"},          {"status", conic::to_string(s.status)},
                   {"objective", s.objective}, {"dual_objective", s.dual_objective}, {"scalars", s.scalars},
                   {"iterations", s.iterations}, {"form", s.form}};
            std::ostringstream text;
            text << conic::to_string(s.status) << " objective " << num(s.objective) << " dual " << num(s.dual_objective)
                 << " (" << s.iterations << " iterations, " << s.form << " form)\n";
            out.emit(j, text.str());
            return s.optimal() ? kExitClassical : kExitSolver;
        };
    });

    std::string table;
    ReproduceOptions ro;
    auto *rep_cmd = app.add_subcommand("reproduce", "Recompute a published table and compare");
    rep_cmd->add_option("table", table, "table1, table2, table3, state-examples, appendixE, appendixF or all")
        ->required();
    rep_cmd->add_flag("--include-slow", ro.include_slow, "Add the d=4 MUB row to table3");
    rep_cmd->callback([&] {
        action = [&] {
            std::vector<std::string> tables = table == "all" ? reproduce_tables() : std::vector<std::string>{table};
            json all = json::array();
            std::ostringstream text;
            bool ok = true;
            for (const auto &name : tables) {
                json t;
                ok = reproduce(name, ro, cfg, t) && ok;
                all.push_back(t);
                text << "== " << name << (t["passed"].get<bool>() ? " (pass)" : " (FAIL)") << "\n";
                text << "name\tcomputed\tpublished\t|delta|\n";
                for (const auto &r : t["rows"])
                    text << r["name"].get<std::string>() << "\t" << num(r["computed"].get<double>()) << "\t"
                         << num(r["published"].get<double>()) << "\t" << num(r["delta"].get<double>()) << "\n";
            }
            out.emit(tables.size() == 1 ? all[0] : all, text.str());
            return ok ? 0 : 1;
        };
    });

    auto *list_cmd = app.add_subcommand("list", "List builtin names");
    list_cmd->callback([&] {
        action = [&] {
            print_builtins(std::cout);
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }
    try {
        cfg.validate();
        return action();
    } catch (const Error &e) {
        std::cerr << "ncq: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception &e) {
        std::cerr << "ncq: " << e.what() << "\n";
        return 1;
    }
}
