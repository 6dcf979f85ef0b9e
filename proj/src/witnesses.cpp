// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/witnesses.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "ncq/error.hpp"

namespace ncq {

namespace {

const double kQ = (std::sqrt(5.0) + 1.0) / 2.0;
constexpr double kPi = 3.14159265358979323846;

double lambda_min(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

double lambda_max(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[m.rows() - 1];
}

double tr_prod(const Matrix &a, const Matrix &b) { return (a * b).trace().real(); }

}  // namespace

MeasurementWitness witness_from_dual_measurement(const std::vector<Matrix> &f, double psd_tol) {
    MeasurementWitness w;
    for (size_t b = 0; b < f.size(); ++b) {
        require(lambda_min(f[b]) >= -psd_tol * std::max(1.0, f[b].norm()),
                "dual operator " + std::to_string(b) + " is not positive semidefinite");
        double t = f[b].trace().real();
        if (t <= psd_tol) {
            w.warnings.push_back("dropped zero-trace dual operator " + std::to_string(b));
            continue;
        }
        w.index.push_back(static_cast<int>(b));
        w.weights.push_back(t);
        w.states.push_back(f[b] / t);
    }
    require(!w.index.empty(), "dual certificate is zero: no witness");
    return w;
}

WitnessValue evaluate_measurement_witness(const MeasurementWitness &w, const MultiMeasurement &m, double tol) {
    WitnessValue v;
    for (size_t t = 0; t < w.index.size(); ++t) {
        require(w.index[t] < m.num_effects(), "witness refers to a missing effect");
        require(w.states[t].rows() == m.dim(), "witness dimension does not match the measurement");
        v.value += w.weights[t] * tr_prod(w.states[t], m.effect(w.index[t]).matrix());
    }
    v.nonclassical = v.value < v.threshold - tol;
    return v;
}

StateWitness witness_from_dual_states(const std::vector<Matrix> &f, double psd_tol) {
    StateWitness w;
    w.k = static_cast<int>(f.size());
    require(w.k > 0, "dual certificate is empty");
    bool any = false;
    for (size_t a = 0; a < f.size(); ++a) {
        require(lambda_min(f[a]) >= -psd_tol * std::max(1.0, f[a].norm()),
                "dual operator " + std::to_string(a) + " is not positive semidefinite");
        double top = lambda_max(f[a]);
        if (top <= psd_tol) {
            w.tests.push_back(Matrix::Zero(f[a].rows(), f[a].cols()));
            w.weights.push_back(0.0);
            continue;
        }
        any = true;
        w.tests.push_back(f[a] / top);
        w.weights.push_back(top);
    }
    require(any, "dual certificate is zero: no witness");
    return w;
}

WitnessValue evaluate_state_witness(const StateWitness &w, const StateSet &s, double tol) {
    require(static_cast<int>(w.tests.size()) == s.size(), "witness size does not match the state set");
    WitnessValue v;
    for (int a = 0; a < s.size(); ++a) {
        require(w.tests[a].rows() == s.dim(), "witness dimension does not match the states");
        v.value += w.weights[a] * tr_prod(w.tests[a], s.state(a).matrix());
    }
    v.value /= w.k;
    v.nonclassical = v.value < v.threshold - tol;
    return v;
}

InequalityValue evaluate_inequality(const NCInequality &ineq, const Behavior &beh, double tol) {
    InequalityValue r;
    for (const auto &t : ineq.terms) {
        require(t.x >= 0 && t.x < beh.num_x() && t.y >= 0 && t.y < beh.num_y() && t.a >= 0 &&
                    t.a < beh.num_a(t.x) && t.b >= 0 && t.b < beh.num_b(t.y),
                "inequality term outside the behavior layout");
        double p = ineq.conditional ? beh.conditional(t.a, t.b, t.x, t.y) : beh(t.a, t.b, t.x, t.y);
        r.lhs += t.coeff * p;
    }
    r.margin = ineq.sense == IneqSense::ge ? r.lhs - ineq.bound : ineq.bound - r.lhs;
    r.satisfied = r.margin >= -tol;
    return r;
}

std::string format_inequality(const NCInequality &ineq, const Behavior *beh) {
    bool short_form = beh != nullptr && beh->num_y() == 1;
    if (short_form)
        for (int n : beh->a_sizes()) short_form = short_form && n == 1;
    std::ostringstream os;
    os << std::setprecision(6);
    bool first = true;
    for (const auto &t : ineq.terms) {
        double c = t.coeff;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        double ac = std::abs(c);
        if (std::abs(ac - 1.0) > 1e-9) os << ac << " ";
        if (short_form)
            os << "p_{" << t.b << "|" << t.x << "}";
        else if (ineq.conditional)
            os << "p(" << t.b << "|" << t.a << "," << t.x << "," << t.y << ")";
        else
            os << "p(" << t.a << t.b << "|" << t.x << t.y << ")";
    }
    if (first) os << "0";
    os << (ineq.sense == IneqSense::ge ? " >= " : " <= ") << std::setprecision(10) << ineq.bound;
    return os.str();
}

namespace {

NCInequality pb_a_inequality(std::string name, std::vector<std::pair<std::pair<int, int>, double>> terms) {
    NCInequality ineq;
    ineq.name = std::move(name);
    for (const auto &[ba, c] : terms) ineq.terms.push_back({0, ba.first, ba.second, 0, c});
    ineq.bound = 0.0;
    ineq.sense = IneqSense::ge;
    ineq.conditional = true;
    return ineq;
}

}  // namespace

NCInequality pentagon_inequality() {
    // Keys are (b, a) of p_{b|a}.
    return pb_a_inequality("pentagon", {{{1, 0}, kQ}, {{1, 2}, kQ}, {{2, 0}, kQ - 1.0}, {{0, 2}, 1.0}, {{1, 1}, -(kQ + 1.0)}});
}

NCInequality rotated_pentagon_inequality() {
    return pb_a_inequality("rotated_pentagon", {{{3, 0}, 1.0},
                                                {{1, 0}, kQ - 1.0},
                                                {{0, 0}, -1.0},
                                                {{0, 1}, kQ},
                                                {{1, 1}, -1.0},
                                                {{1, 3}, 1.0}});
}

NCInequality icosahedron_inequality() {
    NCInequality ineq;
    ineq.name = "icosahedron";
    // p(00|xy) terms.
    const int pos[][2] = {{0, 2}, {1, 2}, {2, 2}};
    const int neg[][2] = {{0, 1}, {1, 0}, {2, 3}};
    for (const auto &t : pos) ineq.terms.push_back({0, 0, t[0], t[1], 1.0});
    for (const auto &t : neg) ineq.terms.push_back({0, 0, t[0], t[1], -1.0});
    ineq.bound = 1.0 / (kQ * kQ);
    ineq.sense = IneqSense::le;
    ineq.conditional = true;
    return ineq;
}

std::vector<std::string> builtin_inequalities() { return {"pentagon", "rotated_pentagon", "icosahedron"}; }

NCInequality builtin_inequality(const std::string &name) {
    if (name == "pentagon") return pentagon_inequality();
    if (name == "rotated_pentagon") return rotated_pentagon_inequality();
    if (name == "icosahedron") return icosahedron_inequality();
    fail("unknown inequality '" + name + "'");
}

NCModelResult nc_model_lp(const Behavior &beh, const VertexSet &vprep, const VertexSet &vmeas,
                          const std::vector<std::vector<int>> &state_of, const NCModelOptions &opt) {
    require(vprep.count() > 0 && vmeas.count() > 0, "nc_model_lp: empty vertex set");
    const int kstates = static_cast<int>(vprep.vertices.rows());
    const int K = vprep.count(), L = vmeas.count();

    std::vector<std::vector<int>> sidx = state_of;
    if (sidx.empty()) {
        int s = 0;
        sidx.resize(beh.num_x());
        for (int x = 0; x < beh.num_x(); ++x)
            for (int a = 0; a < beh.num_a(x); ++a) sidx[x].push_back(s++);
    }
    require(static_cast<int>(sidx.size()) == beh.num_x(), "state map does not match the behavior");
    std::vector<int> boff;
    int nb = 0;
    for (int y = 0; y < beh.num_y(); ++y) {
        boff.push_back(nb);
        nb += beh.num_b(y);
    }
    require(nb == vmeas.vertices.rows(), "measurement vertices do not match the behavior");

    // R(row, kappa * L + lambda) = k p(a|x) Dprep(s|kappa) Dmeas(b,y|lambda).
    const int rows = beh.size();
    RealMatrix r = RealMatrix::Zero(rows, K * L);
    Vector p(rows);
    for (int x = 0; x < beh.num_x(); ++x) {
        require(static_cast<int>(sidx[x].size()) == beh.num_a(x), "state map does not match the behavior");
        for (int a = 0; a < beh.num_a(x); ++a) {
            double pa = beh.marginal_a(a, x);
            int s = sidx[x][a];
            require(s < kstates, "state map refers to a missing state");
            for (int y = 0; y < beh.num_y(); ++y)
                for (int b = 0; b < beh.num_b(y); ++b) {
                    int row = beh.index(a, b, x, y);
                    p[row] = beh(a, b, x, y);
                    if (s < 0 || pa == 0.0) continue;
                    for (int kk = 0; kk < K; ++kk) {
                        double dp = vprep.vertices(s, kk);
                        if (dp == 0.0) continue;
                        for (int l = 0; l < L; ++l)
                            r(row, kk * L + l) = kstates * pa * dp * vmeas.vertices(boff[y] + b, l);
                    }
                }
        }
    }

    conic::Program prog;
    std::vector<int> nu(K * L), sp(rows), sm(rows);
    for (int j = 0; j < K * L; ++j) nu[j] = prog.add_scalar(conic::Domain::nonneg);
    for (int i = 0; i < rows; ++i) {
        sp[i] = prog.add_scalar(conic::Domain::nonneg);
        sm[i] = prog.add_scalar(conic::Domain::nonneg);
    }
    for (int i = 0; i < rows; ++i) {
        conic::LinExpr e;
        for (int j = 0; j < K * L; ++j)
            if (r(i, j) != 0.0) e.add(nu[j], r(i, j));
        e.add(sp[i], 1.0).add(sm[i], -1.0);
        prog.add_linear(std::move(e), conic::Rel::eq, p[i]);
    }
    conic::LinExpr total;
    for (int j = 0; j < K * L; ++j) total.add(nu[j], 1.0);
    prog.add_linear(std::move(total), conic::Rel::eq, 1.0, "normalization");
    conic::LinExpr obj;
    for (int i = 0; i < rows; ++i) obj.add(sp[i], 1.0).add(sm[i], 1.0);
    prog.set_objective(conic::Sense::minimize, std::move(obj));

    conic::Solution sol = conic::solve(prog, opt.solver);
    NCModelResult res;
    res.status = sol.status;
    res.iterations = sol.iterations;
    if (!sol.optimal())
        throw Error(ErrorKind::solver, "nc_model_lp: solver returned " + conic::to_string(sol.status) + " (" +
                                           sol.message + ")");
    res.mismatch = std::max(0.0, sol.objective);
    res.weights.resize(K, L);
    for (int kk = 0; kk < K; ++kk)
        for (int l = 0; l < L; ++l) res.weights(kk, l) = std::max(0.0, sol.scalars[nu[kk * L + l]]);

    // Multipliers of the behavior rows give the separating functional w; the
    // bound is recomputed exactly over all noncontextual vertices.
    Vector w(rows);
    for (int i = 0; i < rows; ++i) w[i] = sol.duals[i](0, 0).real();
    double scale = w.cwiseAbs().maxCoeff();
    if (scale > 0.0) {
        w /= scale;
        for (int i = 0; i < rows; ++i)
            if (std::abs(w[i]) < opt.coeff_zero) w[i] = 0.0;
        double bound = (r.transpose() * w).maxCoeff();
        double lhs = w.dot(p);
        res.violation = lhs - bound;
        if (res.mismatch > opt.feasibility_tol && res.violation > 0.0) {
            NCInequality ineq;
            ineq.name = "farkas";
            ineq.sense = IneqSense::le;
            ineq.bound = bound;
            for (int x = 0; x < beh.num_x(); ++x)
                for (int a = 0; a < beh.num_a(x); ++a)
                    for (int y = 0; y < beh.num_y(); ++y)
                        for (int b = 0; b < beh.num_b(y); ++b) {
                            double c = w[beh.index(a, b, x, y)];
                            if (c != 0.0) ineq.terms.push_back({a, b, x, y, c});
                        }
            res.inequality = std::move(ineq);
        }
    }
    res.feasible = !res.inequality.has_value();
    if (!res.feasible) res.weights.resize(0, 0);
    return res;
}

NCModelResult nc_model_lp(const MultiSource &p, const MultiMeasurement &m, const NCModelOptions &opt,
                          const EnumerationOptions &eopt) {
    StateSetReduction red = multisource_to_state_set(p);
    VertexSet vp = state_vertices(red.states, eopt);
    VertexSet vm = measurement_vertices(m, eopt);
    return nc_model_lp(quantum_behavior(p, m), vp, vm, red.index, opt);
}

ModelCheck verify_ontological_model(const OntologicalModel &model, const Behavior &beh, const IdentitySpace &oprep,
                                    const IdentitySpace &omeas) {
    const int n = model.num_ontic;
    require(n > 0, "ontological model has no ontic states");
    require(static_cast<int>(model.epistemic.size()) == beh.num_x(), "epistemic states do not match the behavior");
    require(static_cast<int>(model.response.size()) == beh.num_y(), "response functions do not match the behavior");
    ModelCheck c;
    for (int x = 0; x < beh.num_x(); ++x) {
        require(static_cast<int>(model.epistemic[x].size()) == beh.num_a(x), "epistemic states do not match");
        for (const auto &mu : model.epistemic[x]) {
            require(static_cast<int>(mu.size()) == n, "epistemic state has the wrong length");
            double s = 0.0;
            for (double v : mu) {
                c.normalization = std::max(c.normalization, -v);
                s += v;
            }
            c.normalization = std::max(c.normalization, std::abs(s - 1.0));
        }
    }
    for (int y = 0; y < beh.num_y(); ++y) {
        require(static_cast<int>(model.response[y].size()) == n, "response functions have the wrong length");
        for (const auto &xi : model.response[y]) {
            require(static_cast<int>(xi.size()) == beh.num_b(y), "response function has the wrong length");
            double s = 0.0;
            for (double v : xi) {
                c.normalization = std::max(c.normalization, std::max(-v, v - 1.0));
                s += v;
            }
            c.normalization = std::max(c.normalization, std::abs(s - 1.0));
        }
    }
    for (int x = 0; x < beh.num_x(); ++x)
        for (int a = 0; a < beh.num_a(x); ++a) {
            double pa = beh.marginal_a(a, x);
            for (int y = 0; y < beh.num_y(); ++y)
                for (int b = 0; b < beh.num_b(y); ++b) {
                    double q = 0.0;
                    for (int l = 0; l < n; ++l) q += model.epistemic[x][a][l] * model.response[y][l][b];
                    c.statistics = std::max(c.statistics, std::abs(pa * q - beh(a, b, x, y)));
                }
        }
    for (int j = 0; j < oprep.basis.cols(); ++j)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (size_t i = 0; i < oprep.layout.size(); ++i) {
                auto [x, a] = oprep.layout[i];
                require(x < beh.num_x() && a < beh.num_a(x), "preparation identity layout does not match");
                s += oprep.basis(i, j) * beh.marginal_a(a, x) * model.epistemic[x][a][l];
            }
            c.preparation_identities = std::max(c.preparation_identities, std::abs(s));
        }
    for (int j = 0; j < omeas.basis.cols(); ++j)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (size_t i = 0; i < omeas.layout.size(); ++i) {
                auto [y, b] = omeas.layout[i];
                require(y < beh.num_y() && b < beh.num_b(y), "measurement identity layout does not match");
                s += omeas.basis(i, j) * model.response[y][l][b];
            }
            c.measurement_identities = std::max(c.measurement_identities, std::abs(s));
        }
    return c;
}

AntiAlignedExample anti_aligned_bb84_example() {
    AntiAlignedExample ex;
    ex.measurement = make_planar_measurement(4);
    std::vector<HermitianOp> states;
    const double c = (2.0 + std::sqrt(2.0)) / 2.0;
    for (int b = 0; b < 4; ++b) {
        double th = kPi * b / 2.0;
        Matrix f = c * (identity(2) - std::cos(th) * pauli_x() - std::sin(th) * pauli_z());
        ex.dual.push_back(f);
        states.emplace_back(f / f.trace().real());
    }
    ex.states = StateSet(2, std::move(states));
    ex.source = one_state_per_setting(ex.states);
    ex.behavior = quantum_behavior(ex.source, ex.measurement);
    ex.model.num_ontic = 4;
    ex.model.epistemic = {{{0, 0.5, 0.5, 0}}, {{0.5, 0, 0.5, 0}}, {{0.5, 0, 0, 0.5}}, {{0, 0.5, 0, 0.5}}};
    ex.model.response = {{{0.5, 0, 0, 0.5}, {0, 0.5, 0.5, 0}, {0, 0, 0.5, 0.5}, {0.5, 0.5, 0, 0}}};
    return ex;
}

IcosahedronScenario icosahedron_scenario(double eta) {
    IcosahedronScenario sc;
    const double q = kQ;
    const double ni = 1.0 / std::sqrt(1.0 + q * q);
    const double mi = 1.0 / std::sqrt(3.0);
    auto scale = [](Bloch v, double s) { return Bloch{v[0] * s, v[1] * s, v[2] * s}; };
    sc.n_axes = {scale({-1, -q, 0}, ni), scale({-q, 0, 1}, ni), scale({-q, 0, -1}, ni),
                 scale({1, -q, 0}, ni),  scale({0, 1, q}, ni),  scale({0, 1, -q}, ni)};
    sc.m_axes = {scale({-1, -1, -1}, mi),     scale({-q, 1 / q, 0}, mi), scale({-q, -1 / q, 0}, mi),
                 scale({-1, -1, 1}, mi),      scale({1, -1, 1}, mi),     scale({-1, 1, 1}, mi),
                 scale({0, q, 1 / q}, mi),    scale({0, q, -1 / q}, mi), scale({1 / q, 0, q}, mi),
                 scale({-1 / q, 0, q}, mi)};
    std::vector<MeasurementSetting> ns, ms;
    for (size_t x = 0; x < sc.n_axes.size(); ++x) {
        Bloch v = sc.n_axes[x];
        ns.push_back({"n" + std::to_string(x), {HermitianOp(bloch_operator(v)), HermitianOp(bloch_operator(scale(v, -1)))}});
    }
    for (size_t y = 0; y < sc.m_axes.size(); ++y) {
        Bloch v = sc.m_axes[y];
        ms.push_back({"m" + std::to_string(y),
                      {HermitianOp(Matrix(bloch_operator(v).transpose())),
                       HermitianOp(Matrix(bloch_operator(scale(v, -1)).transpose()))}});
    }
    sc.steering = MultiMeasurement(2, ns);
    sc.measurement = MultiMeasurement(2, ms);
    sc.source = steer(isotropic_state(eta), sc.steering);
    sc.behavior = quantum_behavior(sc.source, sc.measurement);
    return sc;
}

StateSet pentagon_states(bool rotated) { return make_planar_states(5, rotated ? kPi / 5.0 : 0.0); }

Behavior pentagon_behavior(double eta, bool rotated) {
    MultiMeasurement m = add_white_noise_measurement(make_planar_measurement(5), eta);
    return quantum_behavior(one_state_per_setting(pentagon_states(rotated)), m);
}

}  // namespace ncq
