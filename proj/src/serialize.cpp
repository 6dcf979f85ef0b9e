// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ncq/error.hpp"

namespace ncq {

namespace {

[[noreturn]] void parse_fail(const std::string &what) { throw Error(ErrorKind::parse, what); }

json header(const char *type) { return json{{"schema", kSchemaVersion}, {"type", type}}; }

void check_type(const json &j, const char *type) {
    if (!j.is_object()) parse_fail(std::string("expected a JSON object for ") + type);
    if (j.contains("schema") && j.at("schema").get<int>() != kSchemaVersion)
        parse_fail("unsupported schema version " + j.at("schema").dump());
    if (j.contains("type") && j.at("type").get<std::string>() != type)
        parse_fail("expected a '" + std::string(type) + "' document, got '" + j.at("type").get<std::string>() + "'");
}

/// Runs f, turning JSON library exceptions into parse errors.
template <class F>
auto guarded(const char *what, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception &e) {
        parse_fail(std::string(what) + ": " + e.what());
    }
}

cplx entry_from_json(const json &e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    parse_fail("matrix entry must be a number or a [re, im] pair");
}

json real_matrix(const RealMatrix &m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

RealMatrix real_matrix_from_json(const json &j, int cols_if_empty = 0) {
    if (!j.is_array()) parse_fail("expected an array of rows");
    const int r = static_cast<int>(j.size());
    const int c = r ? static_cast<int>(j[0].size()) : cols_if_empty;
    RealMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) parse_fail("ragged real matrix");
        for (int k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

json vector_json(const Vector &v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json layout_json(const std::vector<std::pair<int, int>> &layout) {
    json a = json::array();
    for (const auto &[s, o] : layout) a.push_back({s, o});
    return a;
}

std::vector<std::pair<int, int>> layout_from_json(const json &j) {
    std::vector<std::pair<int, int>> out;
    for (const auto &e : j) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return out;
}

json matrices_json(const std::vector<Matrix> &ms) {
    json a = json::array();
    for (const auto &m : ms) a.push_back(to_json(m));
    return a;
}

json lin_json(const conic::LinExpr &e) {
    json s = json::array();
    for (const auto &[j, c] : e.scalars) s.push_back({j, c});
    json b = json::array();
    for (const auto &t : e.blocks) b.push_back({{"block", t.block}, {"coeff", to_json(t.coeff)}});
    return json{{"scalars", s}, {"blocks", b}, {"constant", e.constant}};
}

conic::LinExpr lin_from_json(const json &j) {
    conic::LinExpr e;
    for (const auto &s : j.at("scalars")) e.add(s.at(0).get<int>(), s.at(1).get<double>());
    for (const auto &b : j.at("blocks")) e.add_block(b.at("block").get<int>(), matrix_from_json(b.at("coeff")));
    e.constant = j.value("constant", 0.0);
    return e;
}

json mat_json(const conic::MatExpr &e) {
    json s = json::array();
    for (const auto &[j, h] : e.scalars) s.push_back({{"scalar", j}, {"coeff", to_json(h)}});
    json b = json::array();
    for (const auto &t : e.blocks) {
        json o{{"block", t.block}, {"weight", t.weight}};
        if (t.v.size()) o["v"] = to_json(t.v);
        b.push_back(o);
    }
    return json{{"dim", e.dim}, {"constant", to_json(e.constant)}, {"scalars", s}, {"blocks", b}};
}

conic::MatExpr mat_from_json(const json &j) {
    conic::MatExpr e(j.at("dim").get<int>());
    e.constant = matrix_from_json(j.at("constant"));
    for (const auto &s : j.at("scalars")) e.add(s.at("scalar").get<int>(), matrix_from_json(s.at("coeff")));
    for (const auto &b : j.at("blocks"))
        e.add_block(b.at("block").get<int>(), b.at("weight").get<double>(),
                    b.contains("v") ? matrix_from_json(b.at("v")) : Matrix());
    return e;
}

const char *rel_name(conic::Rel r) {
    switch (r) {
    case conic::Rel::eq: return "eq";
    case conic::Rel::ge: return "ge";
    case conic::Rel::le: return "le";
    }
    return "eq";
}

conic::Rel rel_from(const std::string &s) {
    if (s == "eq") return conic::Rel::eq;
    if (s == "ge") return conic::Rel::ge;
    if (s == "le") return conic::Rel::le;
    parse_fail("unknown relation '" + s + "'");
}

}  // namespace

json to_json(const Matrix &m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json &j) {
    return guarded("matrix", [&] {
        if (!j.is_array() || j.empty()) parse_fail("matrix must be a non-empty array");
        const json &first = j[0];
        bool nested = first.is_array() && !(first.size() == 2 && first[0].is_number() && first[1].is_number());
        // A 2x2 real matrix [[a, b], [c, d]] is ambiguous with a flat list of
        // two pairs; the flat form needs d*d entries, which 2 is not.
        if (!nested && first.is_array() && j.size() == 2) nested = true;
        if (nested) {
            const int r = static_cast<int>(j.size());
            const int c = static_cast<int>(first.size());
            Matrix m(r, c);
            for (int i = 0; i < r; ++i) {
                if (!j[i].is_array() || static_cast<int>(j[i].size()) != c) parse_fail("ragged matrix row");
                for (int k = 0; k < c; ++k) m(i, k) = entry_from_json(j[i][k]);
            }
            return m;
        }
        const int n = static_cast<int>(j.size());
        const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (d * d != n) parse_fail("flat matrix needs a square number of entries");
        Matrix m(d, d);
        for (int i = 0; i < n; ++i) m(i / d, i % d) = entry_from_json(j[i]);
        return m;
    });
}

json to_json(const MultiMeasurement &m) {
    json j = header("measurement");
    j["dim"] = m.dim();
    json settings = json::array();
    for (const auto &s : m.settings()) {
        json effects = json::array();
        for (const auto &e : s.effects) effects.push_back(to_json(e.matrix()));
        settings.push_back({{"label", s.label}, {"effects", effects}});
    }
    j["settings"] = settings;
    return j;
}

MultiMeasurement measurement_from_json(const json &j, const Tolerances &tol) {
    return guarded("measurement", [&] {
        check_type(j, "measurement");
        std::vector<MeasurementSetting> settings;
        int y = 0;
        for (const auto &s : j.at("settings")) {
            MeasurementSetting ms{s.value("label", std::to_string(y)), {}};
            for (const auto &e : s.at("effects")) ms.effects.emplace_back(matrix_from_json(e), tol.herm);
            settings.push_back(std::move(ms));
            ++y;
        }
        return MultiMeasurement(j.at("dim").get<int>(), std::move(settings), tol);
    });
}

json to_json(const MultiSource &p) {
    json j = header("source");
    j["dim"] = p.dim();
    json settings = json::array();
    for (const auto &s : p.settings()) {
        json els = json::array();
        for (const auto &e : s.elements) els.push_back({{"weight", e.weight}, {"state", to_json(e.state.matrix())}});
        settings.push_back({{"label", s.label}, {"elements", els}});
    }
    j["settings"] = settings;
    return j;
}

MultiSource source_from_json(const json &j, const Tolerances &tol) {
    return guarded("source", [&] {
        check_type(j, "source");
        std::vector<SourceSetting> settings;
        int x = 0;
        for (const auto &s : j.at("settings")) {
            SourceSetting ss{s.value("label", std::to_string(x)), {}};
            for (const auto &e : s.at("elements"))
                ss.elements.push_back({e.at("weight").get<double>(), HermitianOp(matrix_from_json(e.at("state")), tol.herm)});
            settings.push_back(std::move(ss));
            ++x;
        }
        return MultiSource(j.at("dim").get<int>(), std::move(settings), tol);
    });
}

json to_json(const StateSet &s) {
    json j = header("states");
    j["dim"] = s.dim();
    j["labels"] = s.labels();
    json states = json::array();
    for (const auto &r : s.states()) states.push_back(to_json(r.matrix()));
    j["states"] = states;
    return j;
}

StateSet states_from_json(const json &j, const Tolerances &tol) {
    return guarded("states", [&] {
        check_type(j, "states");
        std::vector<HermitianOp> states;
        for (const auto &r : j.at("states")) states.emplace_back(matrix_from_json(r), tol.herm);
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        return StateSet(j.at("dim").get<int>(), std::move(states), std::move(labels), tol);
    });
}

json to_json(const Behavior &b) {
    json j = header("behavior");
    j["a_sizes"] = b.a_sizes();
    j["b_sizes"] = b.b_sizes();
    j["table"] = b.table();
    return j;
}

Behavior behavior_from_json(const json &j) {
    return guarded("behavior", [&] {
        check_type(j, "behavior");
        Behavior b(j.at("a_sizes").get<std::vector<int>>(), j.at("b_sizes").get<std::vector<int>>());
        auto t = j.at("table").get<std::vector<double>>();
        if (static_cast<int>(t.size()) != b.size()) parse_fail("behavior table has the wrong length");
        b.table() = std::move(t);
        b.validate();
        return b;
    });
}

json to_json(const BipartiteState &r) {
    json j = header("bipartite");
    j["dims"] = {r.dim_a(), r.dim_b()};
    j["rho"] = to_json(r.matrix());
    return j;
}

BipartiteState bipartite_from_json(const json &j, const Tolerances &tol) {
    return guarded("bipartite", [&] {
        check_type(j, "bipartite");
        return BipartiteState(j.at("dims").at(0).get<int>(), j.at("dims").at(1).get<int>(),
                              matrix_from_json(j.at("rho")), tol);
    });
}

json to_json(const IdentitySpace &o) {
    json j = header("identity_space");
    j["side"] = o.side == Side::measurement ? "measurement" : "preparation";
    j["layout"] = layout_json(o.layout);
    j["rank"] = o.rank;
    j["null_tol"] = o.null_tol;
    j["singular_values"] = vector_json(o.singular_values);
    json basis = json::array();
    for (int c = 0; c < o.basis.cols(); ++c) basis.push_back(vector_json(o.basis.col(c)));
    j["basis"] = basis;
    return j;
}

json to_json(const AssignmentPolytope &p) {
    json j = header("polytope");
    j["side"] = p.side == Side::measurement ? "measurement" : "preparation";
    j["layout"] = layout_json(p.layout);
    j["group"] = p.group;
    j["num_groups"] = p.num_groups;
    j["eq"] = real_matrix(p.eq);
    j["rhs"] = vector_json(p.rhs);
    j["interior"] = vector_json(p.interior);
    return j;
}

json to_json(const VertexSet &v) {
    json j = header("vertices");
    j["layout"] = layout_json(v.layout);
    j["count"] = v.count();
    json vs = json::array();
    for (int l = 0; l < v.count(); ++l) vs.push_back(vector_json(v.vertex(l)));
    j["vertices"] = vs;
    return j;
}

VertexSet vertices_from_json(const json &j) {
    return guarded("vertices", [&] {
        check_type(j, "vertices");
        VertexSet v;
        v.layout = layout_from_json(j.at("layout"));
        RealMatrix t = real_matrix_from_json(j.at("vertices"), static_cast<int>(v.layout.size()));
        v.vertices = t.transpose();
        if (v.vertices.rows() != static_cast<int>(v.layout.size())) parse_fail("vertex length does not match layout");
        return v;
    });
}

json to_json(const QuantifierReport &r) {
    json j = header("report");
    j["target"] = r.target;
    j["kind"] = to_string(r.kind);
    j["quantity"] = to_string(r.quantity);
    if (std::isfinite(r.value))
        j["value"] = r.value;
    else
        j["value"] = nullptr;
    j["verdict"] = to_string(r.verdict);
    j["primal_certificate"] = matrices_json(r.primal_certificate);
    j["dual_certificate"] = matrices_json(r.dual_certificate);
    j["diagnostics"] = {{"status", conic::to_string(r.status)},
                        {"dual_value", r.dual_value},
                        {"from_dual_program", r.from_dual_program},
                        {"certificate_residual", r.certificate_residual},
                        {"iterations", r.iterations},
                        {"primal_residual", r.primal_residual},
                        {"dual_residual", r.dual_residual},
                        {"gap", r.gap},
                        {"form", r.solver_form}};
    return j;
}

json to_json(const NCInequality &i) {
    json j = header("inequality");
    j["name"] = i.name;
    j["sense"] = i.sense == IneqSense::ge ? "ge" : "le";
    j["bound"] = i.bound;
    j["conditional"] = i.conditional;
    json terms = json::array();
    for (const auto &t : i.terms) terms.push_back({{"a", t.a}, {"b", t.b}, {"x", t.x}, {"y", t.y}, {"coeff", t.coeff}});
    j["terms"] = terms;
    return j;
}

NCInequality inequality_from_json(const json &j) {
    return guarded("inequality", [&] {
        check_type(j, "inequality");
        NCInequality i;
        i.name = j.value("name", "");
        std::string s = j.at("sense").get<std::string>();
        if (s != "ge" && s != "le") parse_fail("inequality sense must be 'ge' or 'le'");
        i.sense = s == "ge" ? IneqSense::ge : IneqSense::le;
        i.bound = j.at("bound").get<double>();
        i.conditional = j.value("conditional", false);
        for (const auto &t : j.at("terms"))
            i.terms.push_back({t.at("a").get<int>(), t.at("b").get<int>(), t.at("x").get<int>(), t.at("y").get<int>(),
                               t.at("coeff").get<double>()});
        return i;
    });
}

json to_json(const NCModelResult &r) {
    json j = header("nc_model");
    j["feasible"] = r.feasible;
    j["mismatch"] = r.mismatch;
    j["status"] = conic::to_string(r.status);
    j["iterations"] = r.iterations;
    if (r.feasible) j["weights"] = real_matrix(r.weights);
    if (r.inequality) {
        j["inequality"] = to_json(*r.inequality);
        j["violation"] = r.violation;
    }
    return j;
}

json to_json(const MeasurementWitness &w) {
    json j = header("measurement_witness");
    j["index"] = w.index;
    j["weights"] = w.weights;
    j["states"] = matrices_json(w.states);
    j["threshold"] = 1.0;
    if (!w.warnings.empty()) j["warnings"] = w.warnings;
    return j;
}

json to_json(const StateWitness &w) {
    json j = header("state_witness");
    j["k"] = w.k;
    j["weights"] = w.weights;
    j["tests"] = matrices_json(w.tests);
    j["threshold"] = 1.0;
    return j;
}

json to_json(const conic::Program &p) {
    json j = header("program");
    json scalars = json::array();
    for (const auto &s : p.scalars())
        scalars.push_back({{"name", s.name}, {"domain", s.domain == conic::Domain::free ? "free" : "nonneg"}});
    json blocks = json::array();
    for (const auto &b : p.blocks()) blocks.push_back({{"name", b.name}, {"dim", b.dim}});
    json cons = json::array();
    for (const auto &c : p.constraints()) {
        json o{{"name", c.name}};
        switch (c.kind) {
        case conic::ConstraintKind::linear:
            o["kind"] = "linear";
            o["lin"] = lin_json(c.lin);
            o["rel"] = rel_name(c.rel);
            o["rhs"] = c.rhs;
            break;
        case conic::ConstraintKind::matrix_eq:
            o["kind"] = "matrix_eq";
            o["mat"] = mat_json(c.mat);
            break;
        case conic::ConstraintKind::lmi:
            o["kind"] = "lmi";
            o["mat"] = mat_json(c.mat);
            if (c.u.size()) o["u"] = to_json(c.u);
            break;
        }
        cons.push_back(o);
    }
    j["scalars"] = scalars;
    j["blocks"] = blocks;
    j["constraints"] = cons;
    j["objective"] = {{"sense", p.sense() == conic::Sense::maximize ? "maximize" : "minimize"},
                      {"expr", lin_json(p.objective())}};
    return j;
}

conic::Program program_from_json(const json &j) {
    return guarded("program", [&] {
        check_type(j, "program");
        conic::Program p;
        for (const auto &s : j.at("scalars")) {
            std::string d = s.at("domain").get<std::string>();
            if (d != "free" && d != "nonneg") parse_fail("unknown scalar domain '" + d + "'");
            p.add_scalar(d == "free" ? conic::Domain::free : conic::Domain::nonneg, s.value("name", ""));
        }
        for (const auto &b : j.at("blocks")) p.add_psd(b.at("dim").get<int>(), b.value("name", ""));
        for (const auto &c : j.at("constraints")) {
            std::string kind = c.at("kind").get<std::string>();
            std::string name = c.value("name", "");
            if (kind == "linear") {
                p.add_linear(lin_from_json(c.at("lin")), rel_from(c.at("rel").get<std::string>()),
                             c.at("rhs").get<double>(), name);
            } else if (kind == "matrix_eq") {
                p.add_matrix_eq(mat_from_json(c.at("mat")), name);
            } else if (kind == "lmi") {
                p.add_lmi(mat_from_json(c.at("mat")), c.contains("u") ? matrix_from_json(c.at("u")) : Matrix(), name);
            } else {
                parse_fail("unknown constraint kind '" + kind + "'");
            }
        }
        const json &obj = j.at("objective");
        std::string sense = obj.at("sense").get<std::string>();
        if (sense != "maximize" && sense != "minimize") parse_fail("unknown objective sense '" + sense + "'");
        p.set_objective(sense == "maximize" ? conic::Sense::maximize : conic::Sense::minimize,
                        lin_from_json(obj.at("expr")));
        p.validate();
        return p;
    });
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const nlohmann::json::parse_error &e) {
        parse_fail("'" + path + "': " + e.what());
    }
}

void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace ncq
