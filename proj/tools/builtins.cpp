// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>

#include "cli.hpp"
#include "ncq/error.hpp"

namespace ncq::cli {

void RunConfig::validate() const {
    for (double t : {tol.herm, tol.psd, tol.vert, tol.verdict, tol.solver_eps})
        require(t > 0.0, "tolerances must be positive");
    require(null_tol >= 0.0, "null tolerance must be non-negative");
    require(max_candidates >= 1.0, "enumeration cap must be at least 1");
    require(jobs >= 1, "--jobs must be at least 1");
    require(max_iters >= 1, "--max-iters must be at least 1");
    require(format == "json" || format == "text", "--format must be json or text");
}

IdentityOptions RunConfig::identities() const {
    IdentityOptions o;
    o.null_tol = null_tol;
    o.null_rel = tol.null_rel;
    return o;
}

EnumerationOptions RunConfig::enumeration() const {
    EnumerationOptions o;
    o.vert_tol = tol.vert;
    o.dedup_tol = tol.dedup;
    o.max_candidates = max_candidates;
    o.jobs = jobs;
    return o;
}

QuantifierOptions RunConfig::quantifier() const {
    QuantifierOptions o;
    o.tol = tol;
    o.solver.eps = tol.solver_eps;
    o.solver.max_iters = max_iters;
    o.solver.env_overrides = false;
    return o;
}

NCModelOptions RunConfig::nc_model() const {
    NCModelOptions o;
    o.solver.eps = tol.solver_eps;
    o.solver.max_iters = max_iters;
    o.solver.env_overrides = false;
    return o;
}

VertexSet vertices_of(const MultiMeasurement &m, const RunConfig &cfg) {
    IdentitySpace o = measurement_identity_space(m, cfg.identities());
    return polytope_vertices(build_measurement_polytope(m, o, cfg.enumeration()), cfg.enumeration());
}

VertexSet vertices_of(const StateSet &s, const RunConfig &cfg) {
    IdentitySpace o = preparation_identity_space(s, cfg.identities());
    return polytope_vertices(build_preparation_polytope(s, o, cfg.enumeration()), cfg.enumeration());
}

json scenario_to_json(const Scenario &s) {
    json j{{"schema", kSchemaVersion}, {"type", "scenario"}, {"name", s.name}};
    j["source"] = to_json(s.source);
    j["measurement"] = to_json(s.measurement);
    if (s.behavior) j["behavior"] = to_json(*s.behavior);
    return j;
}

Scenario scenario_from_json(const json &j, const Tolerances &tol) {
    try {
        if (!j.is_object() || j.value("type", "") != "scenario") throw Error(ErrorKind::parse, "expected a 'scenario' document");
        Scenario s;
        s.name = j.value("name", "scenario");
        s.source = source_from_json(j.at("source"), tol);
        s.measurement = measurement_from_json(j.at("measurement"), tol);
        if (j.contains("behavior")) s.behavior = behavior_from_json(j.at("behavior"));
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::parse, std::string("scenario: ") + e.what());
    }
}

namespace {

/// "planar5" with prefix "planar" gives 5.
std::optional<int> suffix_int(const std::string &name, const std::string &prefix) {
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
    std::string rest = name.substr(prefix.size());
    if (!std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c); })) return std::nullopt;
    if (rest.size() > 4) return std::nullopt;
    return std::stoi(rest);
}

MultiMeasurement bb84_measurement() {
    auto setting = [](std::string label, Bloch r) {
        Bloch m{-r[0], -r[1], -r[2]};
        return MeasurementSetting{std::move(label), {HermitianOp(bloch_operator(r)), HermitianOp(bloch_operator(m))}};
    };
    return MultiMeasurement(2, {setting("z", {0, 0, 1}), setting("x", {1, 0, 0})});
}

}  // namespace

std::optional<MultiMeasurement> builtin_measurement(const std::string &name) {
    if (auto k = suffix_int(name, "planar")) return make_planar_measurement(*k);
    if (auto d = suffix_int(name, "mub")) return make_mub_multimeasurement(*d);
    if (auto d = suffix_int(name, "trivial")) return make_trivial_measurement(*d);
    if (name == "bb84") return bb84_measurement();
    if (name == "icosahedron_steering") return icosahedron_scenario(1.0).steering;
    if (name == "dodecahedron_test") return icosahedron_scenario(1.0).measurement;
    for (const char *s : {"tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron"})
        if (name == s) return make_platonic_measurement(parse_solid(name));
    return std::nullopt;
}

std::optional<StateSet> builtin_states(const std::string &name) {
    auto names = named_state_sets();
    if (std::find(names.begin(), names.end(), name) != names.end()) return make_named_state_set(name);
    if (auto k = suffix_int(name, "planar_states")) return make_planar_states(*k);
    if (name == "pentagon") return pentagon_states(false);
    if (name == "pentagon_rotated") return pentagon_states(true);
    if (name == "anti_aligned_bb84") return anti_aligned_bb84_example().states;
    return std::nullopt;
}

std::optional<Scenario> builtin_scenario(const std::string &name, double eta) {
    require(eta >= 0.0 && eta <= 1.0, "--eta must lie in [0, 1]");
    if (name == "pentagon" || name == "pentagon_rotated") {
        Scenario s;
        s.name = name;
        s.source = one_state_per_setting(pentagon_states(name == "pentagon_rotated"));
        s.measurement = add_white_noise_measurement(make_planar_measurement(5), eta);
        return s;
    }
    if (name == "anti_aligned_bb84") {
        AntiAlignedExample ex = anti_aligned_bb84_example();
        return Scenario{name, ex.source, add_white_noise_measurement(ex.measurement, eta), std::nullopt};
    }
    if (name == "icosahedron") {
        IcosahedronScenario sc = icosahedron_scenario(eta);
        return Scenario{name, sc.source, sc.measurement, std::nullopt};
    }
    return std::nullopt;
}

std::vector<std::string> builtin_names(const std::string &category) {
    if (category == "measurement")
        return {"planarK", "mubD", "trivialD", "bb84", "tetrahedron", "octahedron", "cube", "icosahedron",
                "dodecahedron", "icosahedron_steering", "dodecahedron_test"};
    if (category == "states") {
        std::vector<std::string> n = named_state_sets();
        for (const char *s : {"planar_statesK", "pentagon", "pentagon_rotated", "anti_aligned_bb84"}) n.push_back(s);
        return n;
    }
    if (category == "scenario") return {"pentagon", "pentagon_rotated", "anti_aligned_bb84", "icosahedron"};
    return {};
}

}  // namespace ncq::cli
