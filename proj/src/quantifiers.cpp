// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/quantifiers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ncq/error.hpp"

namespace ncq {

std::string to_string(TargetKind k) { return k == TargetKind::measurement ? "measurement" : "states"; }

std::string to_string(Quantity q) {
    switch (q) {
    case Quantity::mu: return "mu";
    case Quantity::eta: return "eta";
    case Quantity::omega: return "omega";
    case Quantity::eta_upper_bound: return "eta_upper_bound";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::classical: return "classical";
    case Verdict::nonclassical: return "nonclassical";
    case Verdict::boundary: return "boundary";
    }
    return "?";
}

OperatorFamily measurement_family(const MultiMeasurement &m, std::string name) {
    OperatorFamily f;
    f.kind = TargetKind::measurement;
    f.name = std::move(name);
    f.dim = m.dim();
    for (int i = 0; i < m.num_effects(); ++i) f.ops.push_back(m.effect(i).matrix());
    f.groups = m.num_settings();
    f.total_trace = m.dim();
    return f;
}

OperatorFamily state_family(const StateSet &s, std::string name) {
    OperatorFamily f;
    f.kind = TargetKind::states;
    f.name = std::move(name);
    f.dim = s.dim();
    for (const auto &r : s.states()) f.ops.push_back(r.matrix());
    f.groups = 1;
    f.total_trace = s.size();
    return f;
}

VertexSet measurement_vertices(const MultiMeasurement &m, const EnumerationOptions &opt) {
    IdentitySpace o = measurement_identity_space(m);
    return polytope_vertices(build_measurement_polytope(m, o, opt), opt);
}

VertexSet state_vertices(const StateSet &s, const EnumerationOptions &opt) {
    IdentitySpace o = preparation_identity_space(s);
    return polytope_vertices(build_preparation_polytope(s, o, opt), opt);
}

namespace {

constexpr double kZero = 1e-12;

using clock_type = std::chrono::steady_clock;

void check_shapes(const OperatorFamily &f, const VertexSet &v) {
    require(f.dim >= 1, "operator family has no dimension");
    require(!f.ops.empty(), "operator family is empty");
    require(v.vertices.rows() == static_cast<int>(f.ops.size()),
            "vertex set does not match the operator family");
    require(v.count() > 0, "vertex set is empty");
}

double tr(const Matrix &m) { return m.trace().real(); }

double lambda_min(const Matrix &m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

double lambda_max(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[m.rows() - 1];
}

/// Orthonormal basis of the range of a PSD operator.
Matrix range_basis(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    const Vector &ev = es.eigenvalues();
    double cut = 1e-9 * std::max(1.0, std::abs(ev[ev.size() - 1]));
    std::vector<int> keep;
    for (int i = 0; i < ev.size(); ++i)
        if (ev[i] > cut) keep.push_back(i);
    Matrix u(m.rows(), static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) u.col(j) = es.eigenvectors().col(keep[j]);
    return u;
}

/// Orthonormal basis of the intersection of the spans of the given bases.
Matrix intersect_ranges(const std::vector<const Matrix *> &us, int d) {
    if (us.empty()) return identity(d);
    Matrix stacked(0, d);
    for (const Matrix *u : us) {
        if (u->cols() == d) continue;
        Matrix comp = identity(d) - (*u) * u->adjoint();
        Matrix next(stacked.rows() + d, d);
        next << stacked, comp;
        stacked = next;
    }
    if (stacked.rows() == 0) return identity(d);
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const Vector &sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-8) ++rank;
    return svd.matrixV().rightCols(d - rank);
}

void append(conic::MatExpr &dst, const conic::MatExpr &src, double w) {
    dst.constant += w * src.constant;
    for (const auto &[j, h] : src.scalars) dst.add(j, w * h);
    for (const auto &e : src.blocks) dst.blocks.push_back({e.block, e.v, w * e.weight});
}

void append(conic::LinExpr &dst, const conic::LinExpr &src) {
    dst.constant += src.constant;
    dst.scalars.insert(dst.scalars.end(), src.scalars.begin(), src.scalars.end());
    dst.blocks.insert(dst.blocks.end(), src.blocks.begin(), src.blocks.end());
}

conic::Solution run(const conic::Program &p, const QuantifierOptions &opt, const char *what) {
    conic::Solution s = conic::solve(p, opt.solver);
    if (!s.optimal())
        throw Error(ErrorKind::solver,
                    std::string(what) + ": solver returned " + conic::to_string(s.status) + " (" + s.message + ")");
    return s;
}

QuantifierReport start(const OperatorFamily &f, Quantity q) {
    QuantifierReport r;
    r.target = f.name;
    r.kind = f.kind;
    r.quantity = q;
    return r;
}

void fill_diagnostics(QuantifierReport &r, const conic::Solution &s) {
    r.status = s.status;
    r.iterations += s.iterations;
    r.primal_residual = std::max(r.primal_residual, s.primal_residual);
    r.dual_residual = std::max(r.dual_residual, s.dual_residual);
    r.gap = std::max(r.gap, s.gap);
    r.solver_form = r.solver_form.empty() ? s.form : r.solver_form + "+" + s.form;
}

/// Max over i of ||sum_l D(i|l) G_l - target_i|| and over l of the PSD violation below floor.
double decomposition_residual(const OperatorFamily &f, const VertexSet &v, const std::vector<Matrix> &g,
                              const std::vector<Matrix> &target, double floor) {
    double res = 0.0;
    for (size_t i = 0; i < f.ops.size(); ++i) {
        Matrix acc = -target[i];
        for (int l = 0; l < v.count(); ++l) acc += v.vertices(i, l) * g[l];
        res = std::max(res, acc.norm());
    }
    for (const auto &gl : g) res = std::max(res, floor - lambda_min(gl));
    return res;
}

std::vector<Matrix> noisy_targets(const OperatorFamily &f, double eta) {
    std::vector<Matrix> t;
    for (const auto &o : f.ops) t.push_back(eta * o + (1.0 - eta) * tr(o) / f.dim * identity(f.dim));
    return t;
}

double robustness_dual_objective(const OperatorFamily &f, const std::vector<Matrix> &x) {
    double v = 1.0;
    for (size_t i = 0; i < f.ops.size(); ++i) v += (x[i] * f.ops[i]).trace().real();
    return v;
}

/// Violation of the robustness dual constraints by x.
double robustness_dual_residual(const OperatorFamily &f, const VertexSet &v, const std::vector<Matrix> &x) {
    double lin = 1.0;
    for (size_t i = 0; i < f.ops.size(); ++i)
        lin += (x[i] * f.ops[i]).trace().real() - tr(x[i]) * tr(f.ops[i]) / f.dim;
    double res = std::max(0.0, -lin);
    for (int l = 0; l < v.count(); ++l) {
        Matrix acc = Matrix::Zero(f.dim, f.dim);
        for (size_t i = 0; i < f.ops.size(); ++i) acc += v.vertices(i, l) * x[i];
        res = std::max(res, -lambda_min(acc));
    }
    return res;
}

/// Scale from F' (normalized to dual constraint >= 1/N) to the reported F.
double fraction_scale(const OperatorFamily &f) { return f.kind == TargetKind::states ? f.total_trace : 1.0; }

double fraction_dual_residual(const OperatorFamily &f, const VertexSet &v, const std::vector<Matrix> &fp) {
    double res = 0.0;
    Matrix floor = identity(f.dim) / f.total_trace;
    for (int l = 0; l < v.count(); ++l) {
        Matrix acc = -floor;
        for (size_t i = 0; i < f.ops.size(); ++i) acc += v.vertices(i, l) * fp[i];
        res = std::max(res, -lambda_min(acc));
    }
    for (const auto &x : fp) res = std::max(res, -lambda_min(x));
    return res;
}

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

conic::Program certify_program(const OperatorFamily &f, const VertexSet &v) {
    check_shapes(f, v);
    const int d = f.dim;
    conic::Program p;
    int mu = p.add_scalar(conic::Domain::free, "mu");
    std::vector<int> h;
    for (int l = 0; l < v.count(); ++l) h.push_back(p.add_psd(d, "H" + std::to_string(l)));
    for (size_t i = 0; i < f.ops.size(); ++i) {
        conic::MatExpr e(d);
        e.constant = -f.ops[i];
        double mass = 0.0;
        for (int l = 0; l < v.count(); ++l) {
            double w = v.vertices(i, l);
            if (std::abs(w) <= kZero) continue;
            e.add_block(h[l], w);
            mass += w;
        }
        if (mass != 0.0) e.add(mu, mass * identity(d));
        p.add_matrix_eq(std::move(e), "decomp" + std::to_string(i));
    }
    p.set_objective(conic::Sense::maximize, conic::LinExpr{}.add(mu, 1.0));
    return p;
}

conic::Program robustness_program(const OperatorFamily &f, const VertexSet &v) {
    check_shapes(f, v);
    const int d = f.dim;
    conic::Program p;
    int eta = p.add_scalar(conic::Domain::nonneg, "eta");
    std::vector<int> g;
    for (int l = 0; l < v.count(); ++l) g.push_back(p.add_psd(d, "G" + std::to_string(l)));
    p.add_linear(conic::LinExpr{}.add(eta, 1.0), conic::Rel::le, 1.0, "eta_max");
    for (size_t i = 0; i < f.ops.size(); ++i) {
        double t = tr(f.ops[i]) / d;
        conic::MatExpr e(d);
        e.constant = -t * identity(d);
        e.add(eta, -(f.ops[i] - t * identity(d)));
        for (int l = 0; l < v.count(); ++l) {
            double w = v.vertices(i, l);
            if (std::abs(w) > kZero) e.add_block(g[l], w);
        }
        p.add_matrix_eq(std::move(e), "decomp" + std::to_string(i));
    }
    p.set_objective(conic::Sense::maximize, conic::LinExpr{}.add(eta, 1.0));
    return p;
}

conic::Program robustness_dual_program(const OperatorFamily &f, const VertexSet &v) {
    check_shapes(f, v);
    const int d = f.dim;
    conic::Program p;
    std::vector<std::vector<int>> x;
    for (size_t i = 0; i < f.ops.size(); ++i) x.push_back(p.add_hermitian(d, "X" + std::to_string(i)));

    conic::LinExpr obj;
    obj.constant = 1.0;
    conic::LinExpr lin;
    lin.constant = 1.0;
    for (size_t i = 0; i < f.ops.size(); ++i) {
        append(obj, conic::hermitian_trace(x[i], f.ops[i]));
        append(lin, conic::hermitian_trace(x[i], f.ops[i] - tr(f.ops[i]) / d * identity(d)));
    }
    p.add_linear(std::move(lin), conic::Rel::ge, 0.0, "noise");
    for (int l = 0; l < v.count(); ++l) {
        conic::MatExpr e(d);
        for (size_t i = 0; i < f.ops.size(); ++i) {
            double w = v.vertices(i, l);
            if (std::abs(w) > kZero) append(e, conic::hermitian_expr(x[i], d), w);
        }
        p.add_lmi(std::move(e), {}, "vertex" + std::to_string(l));
    }
    p.set_objective(conic::Sense::minimize, std::move(obj));
    return p;
}

namespace {

struct FractionLayout {
    /// Block index per vertex, -1 when the block is forced to vanish.
    std::vector<int> block;
    std::vector<Matrix> v;
};

conic::Program build_fraction(const OperatorFamily &f, const VertexSet &v, bool facial, FractionLayout &lay) {
    check_shapes(f, v);
    const int d = f.dim;
    const int n = static_cast<int>(f.ops.size());
    std::vector<Matrix> ranges;
    for (const auto &o : f.ops) ranges.push_back(range_basis(o));

    conic::Program p;
    lay.block.assign(v.count(), -1);
    lay.v.assign(v.count(), Matrix());
    conic::LinExpr obj;
    obj.constant = 1.0;
    for (int l = 0; l < v.count(); ++l) {
        Matrix basis = identity(d);
        if (facial) {
            std::vector<const Matrix *> us;
            for (int i = 0; i < n; ++i)
                if (v.vertices(i, l) > kZero) us.push_back(&ranges[i]);
            basis = intersect_ranges(us, d);
        }
        if (basis.cols() == 0) continue;
        int r = static_cast<int>(basis.cols());
        lay.block[l] = p.add_psd(r, "G" + std::to_string(l));
        lay.v[l] = basis;
        obj.add_block(lay.block[l], -identity(r) / f.total_trace);
    }
    for (int i = 0; i < n; ++i) {
        const Matrix &u = ranges[i];
        if (facial && u.cols() == 0) continue;
        conic::MatExpr e(d);
        e.constant = f.ops[i];
        for (int l = 0; l < v.count(); ++l) {
            double w = v.vertices(i, l);
            if (lay.block[l] < 0 || std::abs(w) <= kZero) continue;
            e.add_block(lay.block[l], -w, lay.v[l].cols() == d ? Matrix() : lay.v[l]);
        }
        Matrix comp = (!facial || u.cols() == d) ? Matrix() : u;
        p.add_lmi(std::move(e), comp, "residual" + std::to_string(i));
    }
    p.set_objective(conic::Sense::minimize, std::move(obj));
    return p;
}

}  // namespace

conic::Program fraction_program(const OperatorFamily &f, const VertexSet &v, bool facial_reduction) {
    FractionLayout lay;
    return build_fraction(f, v, facial_reduction, lay);
}

conic::Program fraction_dual_program(const OperatorFamily &f, const VertexSet &v) {
    check_shapes(f, v);
    const int d = f.dim;
    conic::Program p;
    std::vector<int> fb;
    for (size_t i = 0; i < f.ops.size(); ++i) fb.push_back(p.add_psd(d, "F" + std::to_string(i)));
    for (int l = 0; l < v.count(); ++l) {
        conic::MatExpr e(d);
        e.constant = -identity(d) / f.total_trace;
        for (size_t i = 0; i < f.ops.size(); ++i) {
            double w = v.vertices(i, l);
            if (std::abs(w) > kZero) e.add_block(fb[i], w);
        }
        p.add_lmi(std::move(e), {}, "vertex" + std::to_string(l));
    }
    conic::LinExpr obj;
    obj.constant = 1.0;
    for (size_t i = 0; i < f.ops.size(); ++i) obj.add_block(fb[i], -f.ops[i]);
    p.set_objective(conic::Sense::maximize, std::move(obj));
    return p;
}

QuantifierReport certify(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt) {
    auto t0 = clock_type::now();
    QuantifierReport r = start(f, Quantity::mu);
    conic::Solution s = run(certify_program(f, v), opt, "certify");
    fill_diagnostics(r, s);
    r.value = s.objective;
    r.dual_value = s.dual_objective;
    for (int l = 0; l < v.count(); ++l) r.primal_certificate.push_back(s.blocks[l] + r.value * identity(f.dim));
    r.certificate_residual = decomposition_residual(f, v, r.primal_certificate, f.ops, r.value);
    const double tol = opt.tol.verdict;
    r.verdict = r.value > tol ? Verdict::classical : (r.value < -tol ? Verdict::nonclassical : Verdict::boundary);
    r.seconds = seconds_since(t0);
    return r;
}

QuantifierReport robustness(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt) {
    auto t0 = clock_type::now();
    QuantifierReport r = start(f, Quantity::eta);
    conic::Solution s = run(robustness_program(f, v), opt, "robustness");
    fill_diagnostics(r, s);
    r.value = std::clamp(s.objective, 0.0, 1.0);
    r.primal_certificate = s.blocks;
    r.certificate_residual = decomposition_residual(f, v, r.primal_certificate, noisy_targets(f, r.value), 0.0);
    // Multipliers of the decomposition equalities are the dual operators X_i.
    for (size_t i = 0; i < f.ops.size(); ++i) r.dual_certificate.push_back(s.duals[1 + i]);
    r.dual_value = robustness_dual_objective(f, r.dual_certificate);
    r.verdict = r.value >= 1.0 - opt.tol.verdict ? Verdict::classical : Verdict::nonclassical;
    r.seconds = seconds_since(t0);
    return r;
}

QuantifierReport robustness_dual(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt) {
    auto t0 = clock_type::now();
    QuantifierReport r = start(f, Quantity::eta);
    r.from_dual_program = true;
    conic::Solution s = run(robustness_dual_program(f, v), opt, "robustness dual");
    fill_diagnostics(r, s);
    const int d2 = f.dim * f.dim;
    for (size_t i = 0; i < f.ops.size(); ++i) {
        std::vector<int> coords(d2);
        for (int t = 0; t < d2; ++t) coords[t] = static_cast<int>(i) * d2 + t;
        r.dual_certificate.push_back(conic::hermitian_value(coords, s.scalars, f.dim));
    }
    r.value = s.objective;
    r.dual_value = s.dual_objective;
    r.certificate_residual = robustness_dual_residual(f, v, r.dual_certificate);
    r.verdict = r.value >= 1.0 - opt.tol.verdict ? Verdict::classical : Verdict::nonclassical;
    r.seconds = seconds_since(t0);
    return r;
}

QuantifierReport fraction_dual(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt) {
    auto t0 = clock_type::now();
    QuantifierReport r = start(f, Quantity::omega);
    r.from_dual_program = true;
    conic::Solution s = run(fraction_dual_program(f, v), opt, "fraction dual");
    fill_diagnostics(r, s);
    r.value = std::clamp(s.objective, 0.0, 1.0);
    r.dual_value = s.objective;
    std::vector<Matrix> fp(s.blocks.begin(), s.blocks.begin() + f.ops.size());
    if (opt.refine_dual) {
        // The optimal face can be unbounded; keep the refined point only if it
        // re-verifies, since the tie row leaves almost no interior.
        conic::Program p2 = fraction_dual_program(f, v);
        conic::LinExpr tie, tr_all;
        for (size_t i = 0; i < f.ops.size(); ++i) {
            tie.add_block(static_cast<int>(i), f.ops[i]);
            tr_all.add_block(static_cast<int>(i), identity(f.dim));
        }
        p2.add_linear(std::move(tie), conic::Rel::le, 1.0 - s.objective + 1e-9, "tie");
        p2.set_objective(conic::Sense::minimize, std::move(tr_all));
        conic::Solution s2 = conic::solve(p2, opt.solver);
        r.iterations += s2.iterations;
        if (s2.blocks.size() >= f.ops.size()) {
            std::vector<Matrix> cand(s2.blocks.begin(), s2.blocks.begin() + f.ops.size());
            double val = 1.0;
            for (size_t i = 0; i < f.ops.size(); ++i) val -= (cand[i] * f.ops[i]).trace().real();
            if (fraction_dual_residual(f, v, cand) <= opt.tol.cert && std::abs(val - s.objective) <= opt.tol.cert)
                fp = std::move(cand);
        }
    }
    double k = fraction_scale(f);
    for (const auto &x : fp) r.dual_certificate.push_back(k * x);
    r.certificate_residual = fraction_dual_residual(f, v, fp);
    r.verdict = r.value <= opt.tol.verdict ? Verdict::classical : Verdict::nonclassical;
    r.seconds = seconds_since(t0);
    return r;
}

QuantifierReport fraction(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt) {
    auto t0 = clock_type::now();
    QuantifierReport r = start(f, Quantity::omega);
    FractionLayout lay;
    conic::Program prog = build_fraction(f, v, opt.facial_reduction, lay);
    conic::Solution s = run(prog, opt, "fraction");
    fill_diagnostics(r, s);
    r.value = std::clamp(s.objective, 0.0, 1.0);
    for (int l = 0; l < v.count(); ++l) {
        if (lay.block[l] < 0) {
            r.primal_certificate.push_back(Matrix::Zero(f.dim, f.dim));
        } else {
            const Matrix &b = lay.v[l];
            r.primal_certificate.push_back(b * s.blocks[lay.block[l]] * b.adjoint());
        }
    }
    double res = 0.0;
    for (size_t i = 0; i < f.ops.size(); ++i) {
        Matrix acc = f.ops[i];
        for (int l = 0; l < v.count(); ++l) acc -= v.vertices(i, l) * r.primal_certificate[l];
        res = std::max(res, -lambda_min(acc));
    }
    for (const auto &g : r.primal_certificate) res = std::max(res, -lambda_min(g));

    QuantifierReport dual = fraction_dual(f, v, opt);
    r.iterations += dual.iterations;
    r.primal_residual = std::max(r.primal_residual, dual.primal_residual);
    r.dual_residual = std::max(r.dual_residual, dual.dual_residual);
    r.gap = std::max(r.gap, dual.gap);
    r.solver_form += "+" + dual.solver_form;
    r.dual_certificate = dual.dual_certificate;
    r.dual_value = dual.dual_value;
    r.certificate_residual = std::max(res, dual.certificate_residual);
    r.verdict = r.value <= opt.tol.verdict ? Verdict::classical : Verdict::nonclassical;
    r.seconds = seconds_since(t0);
    return r;
}

double analytic_upper_bound(const OperatorFamily &f, const VertexSet &v) {
    check_shapes(f, v);
    const double d = f.dim;
    double lam = 0.0;
    for (int l = 0; l < v.count(); ++l) {
        Matrix acc = Matrix::Zero(f.dim, f.dim);
        for (size_t i = 0; i < f.ops.size(); ++i) acc += v.vertices(i, l) * f.ops[i];
        lam = std::max(lam, lambda_max(acc));
    }
    double sum_t = 0.0, sum_t2 = 0.0, sum_o2 = 0.0;
    for (const auto &o : f.ops) {
        double t = tr(o);
        sum_t += t;
        sum_t2 += t * t;
        sum_o2 += (o * o).trace().real();
    }
    double den = d * sum_o2 - sum_t2;
    if (den <= 1e-12 * std::max(1.0, sum_t2)) return std::numeric_limits<double>::infinity();
    return (d * lam * sum_t / f.groups - sum_t2) / den;
}

QuantifierReport certify_measurement(const MultiMeasurement &m, const VertexSet &v, const QuantifierOptions &opt) {
    return certify(measurement_family(m), v, opt);
}

QuantifierReport white_noise_robustness_measurement(const MultiMeasurement &m, const VertexSet &v,
                                                    const QuantifierOptions &opt) {
    return robustness(measurement_family(m), v, opt);
}

QuantifierReport white_noise_robustness_measurement_dual(const MultiMeasurement &m, const VertexSet &v,
                                                         const QuantifierOptions &opt) {
    return robustness_dual(measurement_family(m), v, opt);
}

double analytic_upper_bound_measurement(const MultiMeasurement &m, const VertexSet &v) {
    return analytic_upper_bound(measurement_family(m), v);
}

QuantifierReport nonclassical_fraction_measurement(const MultiMeasurement &m, const VertexSet &v,
                                                   const QuantifierOptions &opt) {
    return fraction(measurement_family(m), v, opt);
}

QuantifierReport certify_states(const StateSet &s, const VertexSet &v, const QuantifierOptions &opt) {
    return certify(state_family(s), v, opt);
}

QuantifierReport white_noise_robustness_states(const StateSet &s, const VertexSet &v, const QuantifierOptions &opt) {
    return robustness(state_family(s), v, opt);
}

QuantifierReport white_noise_robustness_states_dual(const StateSet &s, const VertexSet &v,
                                                    const QuantifierOptions &opt) {
    return robustness_dual(state_family(s), v, opt);
}

double analytic_upper_bound_states(const StateSet &s, const VertexSet &v) {
    return analytic_upper_bound(state_family(s), v);
}

QuantifierReport nonclassical_fraction_states(const StateSet &s, const VertexSet &v, const QuantifierOptions &opt) {
    return fraction(state_family(s), v, opt);
}

}  // namespace ncq
