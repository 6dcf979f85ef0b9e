// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "ipm.hpp"
#include "ncq/error.hpp"

namespace ncq::conic {

std::string to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::numerical_failure: return "numerical_failure";
    }
    return "";
}

int Program::add_scalar(Domain d, std::string name) {
    scalars_.push_back({std::move(name), d});
    return static_cast<int>(scalars_.size()) - 1;
}

std::vector<int> Program::add_hermitian(int dim, const std::string &name) {
    std::vector<int> out;
    for (int t = 0; t < dim * dim; ++t) out.push_back(add_scalar(Domain::free, name + "[" + std::to_string(t) + "]"));
    return out;
}

int Program::add_psd(int dim, std::string name) {
    require(dim >= 1, "PSD block needs a positive dimension");
    blocks_.push_back({std::move(name), dim});
    return static_cast<int>(blocks_.size()) - 1;
}

int Program::add_linear(LinExpr e, Rel rel, double rhs, std::string name) {
    Constraint c;
    c.kind = ConstraintKind::linear;
    c.name = std::move(name);
    c.lin = std::move(e);
    c.rel = rel;
    c.rhs = rhs;
    constraints_.push_back(std::move(c));
    return static_cast<int>(constraints_.size()) - 1;
}

int Program::add_matrix_eq(MatExpr e, std::string name) {
    Constraint c;
    c.kind = ConstraintKind::matrix_eq;
    c.name = std::move(name);
    c.mat = std::move(e);
    constraints_.push_back(std::move(c));
    return static_cast<int>(constraints_.size()) - 1;
}

int Program::add_lmi(MatExpr e, Matrix u, std::string name) {
    Constraint c;
    c.kind = ConstraintKind::lmi;
    c.name = std::move(name);
    c.mat = std::move(e);
    c.u = std::move(u);
    constraints_.push_back(std::move(c));
    return static_cast<int>(constraints_.size()) - 1;
}

void Program::set_objective(Sense s, LinExpr e) {
    sense_ = s;
    objective_ = std::move(e);
}

namespace {

void check_lin(const Program &p, const LinExpr &e) {
    const int ns = static_cast<int>(p.scalars().size()), nb = static_cast<int>(p.blocks().size());
    for (const auto &[j, a] : e.scalars) {
        require(j >= 0 && j < ns, "linear expression references an unknown scalar");
        require(std::isfinite(a), "non-finite coefficient");
    }
    for (const auto &t : e.blocks) {
        require(t.block >= 0 && t.block < nb, "linear expression references an unknown block");
        int d = p.blocks()[t.block].dim;
        require(t.coeff.rows() == d && t.coeff.cols() == d, "block coefficient has the wrong shape");
    }
}

void check_mat(const Program &p, const MatExpr &e) {
    const int ns = static_cast<int>(p.scalars().size()), nb = static_cast<int>(p.blocks().size());
    require(e.dim >= 1, "matrix expression needs a positive dimension");
    require(e.constant.rows() == e.dim && e.constant.cols() == e.dim, "matrix constant has the wrong shape");
    for (const auto &[j, h] : e.scalars) {
        require(j >= 0 && j < ns, "matrix expression references an unknown scalar");
        require(h.rows() == e.dim && h.cols() == e.dim, "matrix coefficient has the wrong shape");
    }
    for (const auto &t : e.blocks) {
        require(t.block >= 0 && t.block < nb, "matrix expression references an unknown block");
        int d = p.blocks()[t.block].dim;
        if (t.v.size() == 0)
            require(d == e.dim, "block dimension differs from the expression dimension");
        else
            require(t.v.rows() == e.dim && t.v.cols() == d, "embedding has the wrong shape");
    }
}

}  // namespace

void Program::validate() const {
    check_lin(*this, objective_);
    for (const auto &c : constraints_) {
        if (c.kind == ConstraintKind::linear) {
            check_lin(*this, c.lin);
        } else {
            check_mat(*this, c.mat);
            if (c.kind == ConstraintKind::lmi && c.u.size())
                require(c.u.rows() == c.mat.dim && c.u.cols() >= 1, "LMI compression has the wrong shape");
        }
    }
}

MatExpr hermitian_expr(const std::vector<int> &coords, int dim, double scale) {
    MatExpr e(dim);
    for (int t = 0; t < dim * dim; ++t) {
        Vector v = Vector::Zero(dim * dim);
        v[t] = scale;
        e.add(coords.at(t), reconstruct(v, dim));
    }
    return e;
}

LinExpr hermitian_trace(const std::vector<int> &coords, const Matrix &c, double scale) {
    LinExpr e;
    Vector v = vectorize(c);
    for (int t = 0; t < v.size(); ++t)
        if (v[t] != 0.0) e.add(coords.at(t), scale * v[t]);
    return e;
}

Matrix hermitian_value(const std::vector<int> &coords, const std::vector<double> &scalars, int dim) {
    Vector v(dim * dim);
    for (int t = 0; t < dim * dim; ++t) v[t] = scalars.at(coords.at(t));
    return reconstruct(v, dim);
}

namespace {

using detail::CoreBlock;
using detail::CoreProblem;
using detail::CoreResult;
using detail::CoreStatus;

const std::vector<Matrix> &basis_mats(int n) {
    static thread_local std::map<int, std::vector<Matrix>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<Matrix> out;
    for (int t = 0; t < n * n; ++t) {
        Vector e = Vector::Zero(n * n);
        e[t] = 1.0;
        out.push_back(reconstruct(e, n));
    }
    return cache.emplace(n, std::move(out)).first->second;
}

Matrix project(const Matrix &u, const Matrix &m) { return u.size() ? Matrix(u.adjoint() * m * u) : m; }

int projected_dim(const Constraint &c) { return c.u.size() ? static_cast<int>(c.u.cols()) : c.mat.dim; }

// Coefficient matrix (p^2 x q^2) of a block term inside a projected matrix expression.
RealMatrix block_term_matrix(const Embedding &t, int q, const Matrix &u) {
    const auto &bq = basis_mats(q);
    Matrix probe = project(u, t.v.size() ? Matrix(t.v * bq[0] * t.v.adjoint()) : bq[0]);
    const int p = static_cast<int>(probe.rows());
    RealMatrix out(p * p, q * q);
    for (int s = 0; s < q * q; ++s) {
        Matrix m = t.v.size() ? Matrix(t.v * bq[s] * t.v.adjoint()) : bq[s];
        out.col(s) = t.weight * vectorize(project(u, m));
    }
    return out;
}

// Accumulates sparse block coefficients row by row before densifying.
struct BlockBuilder {
    int n = 0;
    std::map<int, Vector> rows;
    Vector c;

    void add(int row, const Vector &coef) {
        auto it = rows.find(row);
        if (it == rows.end())
            rows.emplace(row, coef);
        else
            it->second += coef;
    }

    CoreBlock build() const {
        CoreBlock b;
        b.n = n;
        b.c = c.size() ? c : Vector(Vector::Zero(n * n));
        b.a.resize(rows.size(), n * n);
        int i = 0;
        for (const auto &[r, v] : rows) {
            b.rows.push_back(r);
            b.a.row(i++) = v.transpose();
        }
        return b;
    }
};

struct Mapping {
    bool dual_form = false;
    // Primal form.
    std::vector<int> scalar_col;  // index into free or lp columns
    std::vector<bool> scalar_is_lp;
    std::vector<int> row_of;  // first core row of each constraint (P-form)
    // Dual form.
    std::vector<int> cone_of;  // first column / block index of each constraint (D-form)
    std::vector<int> cone_kind;  // 0 free, 1 lp, 2 block
};

void set_col(RealMatrix &a, int row, int col, double v) { a(row, col) += v; }

CoreProblem build_primal(const Program &prog, Mapping &map) {
    const auto &sc = prog.scalars();
    const auto &cons = prog.constraints();
    map.dual_form = false;
    int nf = 0, nl = 0;
    for (const auto &s : sc) {
        map.scalar_is_lp.push_back(s.domain == Domain::nonneg);
        map.scalar_col.push_back(s.domain == Domain::nonneg ? nl++ : nf++);
    }
    // Rows and slack columns.
    int m = 0;
    std::vector<int> slack_col(cons.size(), -1), slack_block(cons.size(), -1);
    int nblocks = static_cast<int>(prog.blocks().size());
    for (size_t i = 0; i < cons.size(); ++i) {
        const auto &c = cons[i];
        map.row_of.push_back(m);
        if (c.kind == ConstraintKind::linear) {
            if (c.rel != Rel::eq) slack_col[i] = nl++;
            m += 1;
        } else if (c.kind == ConstraintKind::matrix_eq) {
            m += c.mat.dim * c.mat.dim;
        } else {
            int p = projected_dim(c);
            slack_block[i] = nblocks++;
            m += p * p;
        }
    }
    CoreProblem cp;
    cp.m = m;
    cp.b = Vector::Zero(m);
    cp.a_free = RealMatrix::Zero(m, nf);
    cp.a_lp = RealMatrix::Zero(m, nl);
    cp.c_free = Vector::Zero(nf);
    cp.c_lp = Vector::Zero(nl);
    std::vector<BlockBuilder> bb(nblocks);
    for (size_t k = 0; k < prog.blocks().size(); ++k) bb[k].n = prog.blocks()[k].dim;

    auto add_scalar_coef = [&](int row, int j, double v) {
        if (map.scalar_is_lp[j])
            set_col(cp.a_lp, row, map.scalar_col[j], v);
        else
            set_col(cp.a_free, row, map.scalar_col[j], v);
    };

    for (size_t i = 0; i < cons.size(); ++i) {
        const auto &c = cons[i];
        const int r0 = map.row_of[i];
        if (c.kind == ConstraintKind::linear) {
            for (const auto &[j, a] : c.lin.scalars) add_scalar_coef(r0, j, a);
            for (const auto &t : c.lin.blocks) bb[t.block].add(r0, vectorize(t.coeff));
            if (slack_col[i] >= 0) cp.a_lp(r0, slack_col[i]) = c.rel == Rel::ge ? -1.0 : 1.0;
            cp.b[r0] = c.rhs - c.lin.constant;
            continue;
        }
        const Matrix &u = c.kind == ConstraintKind::lmi ? c.u : Matrix();
        const int p = c.kind == ConstraintKind::lmi ? projected_dim(c) : c.mat.dim;
        Vector cst = vectorize(project(u, c.mat.constant));
        for (int r = 0; r < p * p; ++r) cp.b[r0 + r] = -cst[r];
        for (const auto &[j, h] : c.mat.scalars) {
            Vector v = vectorize(project(u, h));
            for (int r = 0; r < p * p; ++r)
                if (v[r] != 0.0) add_scalar_coef(r0 + r, j, v[r]);
        }
        for (const auto &t : c.mat.blocks) {
            int q = prog.blocks()[t.block].dim;
            RealMatrix coef = block_term_matrix(t, q, u);
            for (int r = 0; r < p * p; ++r)
                if (coef.row(r).cwiseAbs().maxCoeff() > 0.0) bb[t.block].add(r0 + r, coef.row(r).transpose());
        }
        if (slack_block[i] >= 0) {
            auto &sb = bb[slack_block[i]];
            sb.n = p;
            for (int r = 0; r < p * p; ++r) {
                Vector e = Vector::Zero(p * p);
                e[r] = -1.0;
                sb.add(r0 + r, e);
            }
        }
    }
    const double tau = prog.sense() == Sense::minimize ? 1.0 : -1.0;
    for (const auto &[j, a] : prog.objective().scalars) {
        if (map.scalar_is_lp[j])
            cp.c_lp[map.scalar_col[j]] += tau * a;
        else
            cp.c_free[map.scalar_col[j]] += tau * a;
    }
    for (auto &b : bb)
        if (b.c.size() == 0) b.c = Vector::Zero(b.n * b.n);
    for (const auto &t : prog.objective().blocks) bb[t.block].c += tau * vectorize(t.coeff);
    for (auto &b : bb) cp.blocks.push_back(b.build());
    return cp;
}

CoreProblem build_dual(const Program &prog, Mapping &map) {
    require(prog.blocks().empty(), "dual form needs a program without PSD variables");
    require(prog.objective().blocks.empty(), "dual form objective cannot reference blocks");
    const auto &sc = prog.scalars();
    const auto &cons = prog.constraints();
    map.dual_form = true;
    const int m = static_cast<int>(sc.size());
    const double s = prog.sense() == Sense::maximize ? 1.0 : -1.0;
    CoreProblem cp;
    cp.m = m;
    cp.b = Vector::Zero(m);
    for (const auto &[j, a] : prog.objective().scalars) cp.b[j] += s * a;

    int nf = 0, nl = 0;
    for (const auto &v : sc)
        if (v.domain == Domain::nonneg) ++nl;
    for (const auto &c : cons) {
        if (c.kind == ConstraintKind::linear) {
            if (c.rel == Rel::eq)
                ++nf;
            else
                ++nl;
        } else if (c.kind == ConstraintKind::matrix_eq) {
            nf += c.mat.dim * c.mat.dim;
        }
    }
    cp.a_free = RealMatrix::Zero(m, nf);
    cp.a_lp = RealMatrix::Zero(m, nl);
    cp.c_free = Vector::Zero(nf);
    cp.c_lp = Vector::Zero(nl);
    int fcol = 0, lcol = 0;
    for (int j = 0; j < m; ++j)
        if (sc[j].domain == Domain::nonneg) cp.a_lp(j, lcol++) = -1.0;
    for (const auto &c : cons) {
        if (c.kind == ConstraintKind::linear) {
            require(c.lin.blocks.empty(), "dual form constraints cannot reference blocks");
            if (c.rel == Rel::eq) {
                map.cone_of.push_back(fcol);
                map.cone_kind.push_back(0);
                cp.c_free[fcol] = c.lin.constant - c.rhs;
                for (const auto &[j, a] : c.lin.scalars) cp.a_free(j, fcol) -= a;
                ++fcol;
            } else {
                map.cone_of.push_back(lcol);
                map.cone_kind.push_back(1);
                double sg = c.rel == Rel::ge ? 1.0 : -1.0;
                cp.c_lp[lcol] = sg * (c.lin.constant - c.rhs);
                for (const auto &[j, a] : c.lin.scalars) cp.a_lp(j, lcol) -= sg * a;
                ++lcol;
            }
        } else if (c.kind == ConstraintKind::matrix_eq) {
            const int n2 = c.mat.dim * c.mat.dim;
            map.cone_of.push_back(fcol);
            map.cone_kind.push_back(0);
            cp.c_free.segment(fcol, n2) = vectorize(c.mat.constant);
            for (const auto &[j, h] : c.mat.scalars) {
                Vector v = vectorize(h);
                for (int r = 0; r < n2; ++r) cp.a_free(j, fcol + r) -= v[r];
            }
            fcol += n2;
        } else {
            const int p = projected_dim(c);
            map.cone_of.push_back(static_cast<int>(cp.blocks.size()));
            map.cone_kind.push_back(2);
            BlockBuilder b;
            b.n = p;
            b.c = vectorize(project(c.u, c.mat.constant));
            for (const auto &[j, h] : c.mat.scalars) b.add(j, -vectorize(project(c.u, h)));
            cp.blocks.push_back(b.build());
        }
    }
    return cp;
}

Solution map_primal(const Program &prog, const Mapping &map, const CoreResult &r) {
    Solution sol;
    const double tau = prog.sense() == Sense::minimize ? 1.0 : -1.0;
    const double cst = prog.objective().constant;
    sol.objective = tau * r.pobj + cst;
    sol.dual_objective = tau * r.dobj + cst;
    for (size_t j = 0; j < prog.scalars().size(); ++j) {
        const Vector &x = map.scalar_is_lp[j] ? r.x_lp : r.x_free;
        sol.scalars.push_back(x.size() ? x[map.scalar_col[j]] : 0.0);
    }
    for (size_t k = 0; k < prog.blocks().size(); ++k)
        sol.blocks.push_back(k < r.x_blocks.size() ? r.x_blocks[k] : Matrix::Zero(prog.blocks()[k].dim, prog.blocks()[k].dim));
    const auto &cons = prog.constraints();
    for (size_t i = 0; i < cons.size(); ++i) {
        const auto &c = cons[i];
        const int r0 = map.row_of[i];
        if (c.kind == ConstraintKind::linear) {
            Matrix d(1, 1);
            d(0, 0) = tau * (r.y.size() ? r.y[r0] : 0.0);
            sol.duals.push_back(d);
        } else {
            const int p = c.kind == ConstraintKind::lmi ? projected_dim(c) : c.mat.dim;
            Vector v = r.y.size() ? Vector(r.y.segment(r0, p * p)) : Vector::Zero(p * p);
            sol.duals.push_back(tau * reconstruct(v, p));
        }
    }
    return sol;
}

Solution map_dual(const Program &prog, const Mapping &map, const CoreResult &r) {
    Solution sol;
    const double s = prog.sense() == Sense::maximize ? 1.0 : -1.0;
    const double tau = prog.sense() == Sense::minimize ? 1.0 : -1.0;
    const double cst = prog.objective().constant;
    sol.objective = s * r.dobj + cst;
    sol.dual_objective = s * r.pobj + cst;
    for (size_t j = 0; j < prog.scalars().size(); ++j) sol.scalars.push_back(r.y.size() ? r.y[j] : 0.0);
    const auto &cons = prog.constraints();
    for (size_t i = 0; i < cons.size(); ++i) {
        const auto &c = cons[i];
        const int at = map.cone_of[i];
        if (c.kind == ConstraintKind::linear) {
            Matrix d(1, 1);
            if (map.cone_kind[i] == 0)
                d(0, 0) = tau * (r.x_free.size() ? r.x_free[at] : 0.0);
            else
                d(0, 0) = (c.rel == Rel::ge ? tau : -tau) * (r.x_lp.size() ? r.x_lp[at] : 0.0);
            sol.duals.push_back(d);
        } else if (c.kind == ConstraintKind::matrix_eq) {
            const int n2 = c.mat.dim * c.mat.dim;
            Vector v = r.x_free.size() ? Vector(r.x_free.segment(at, n2)) : Vector::Zero(n2);
            sol.duals.push_back(tau * reconstruct(v, c.mat.dim));
        } else {
            const int p = projected_dim(c);
            sol.duals.push_back(at < static_cast<int>(r.x_blocks.size()) ? Matrix(tau * r.x_blocks[at])
                                                                          : Matrix(Matrix::Zero(p, p)));
        }
    }
    return sol;
}

double lin_value(const LinExpr &e, const Solution &s) {
    double v = e.constant;
    for (const auto &[j, a] : e.scalars) v += a * s.scalars.at(j);
    for (const auto &t : e.blocks) v += (t.coeff * s.blocks.at(t.block)).trace().real();
    return v;
}

Matrix mat_value(const MatExpr &e, const Solution &s) {
    Matrix m = e.constant;
    for (const auto &[j, h] : e.scalars) m += s.scalars.at(j) * h;
    for (const auto &t : e.blocks) {
        const Matrix &x = s.blocks.at(t.block);
        m += t.weight * (t.v.size() ? Matrix(t.v * x * t.v.adjoint()) : x);
    }
    return m;
}

}  // namespace

double constraint_violation(const Program &p, const Solution &s) {
    double worst = 0.0;
    for (size_t j = 0; j < p.scalars().size(); ++j)
        if (p.scalars()[j].domain == Domain::nonneg) worst = std::max(worst, -s.scalars.at(j));
    for (const auto &x : s.blocks) {
        Eigen::SelfAdjointEigenSolver<Matrix> es((x + x.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        worst = std::max(worst, -es.eigenvalues().minCoeff());
    }
    for (const auto &c : p.constraints()) {
        if (c.kind == ConstraintKind::linear) {
            double g = lin_value(c.lin, s) - c.rhs;
            if (c.rel == Rel::eq) worst = std::max(worst, std::abs(g));
            if (c.rel == Rel::ge) worst = std::max(worst, -g);
            if (c.rel == Rel::le) worst = std::max(worst, g);
        } else {
            Matrix m = project(c.kind == ConstraintKind::lmi ? c.u : Matrix(), mat_value(c.mat, s));
            if (c.kind == ConstraintKind::matrix_eq) {
                worst = std::max(worst, m.cwiseAbs().maxCoeff());
            } else {
                Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
                worst = std::max(worst, -es.eigenvalues().minCoeff());
            }
        }
    }
    return worst;
}

Solution solve(const Program &p, const SolveOptions &opt_in) {
    p.validate();
    SolveOptions opt = opt_in;
    if (opt.env_overrides) {
        if (const char *e = std::getenv("NCQ_SOLVER_EPS")) opt.eps = std::strtod(e, nullptr);
        if (const char *e = std::getenv("NCQ_MAX_ITERS")) opt.max_iters = std::atoi(e);
    }
    require(opt.eps > 0.0, "solver eps must be positive");
    if (p.scalars().empty() && p.blocks().empty()) {
        // Nothing to optimize: the constraints are constants.
        Solution sol;
        sol.sense = p.sense();
        sol.form = "constant";
        for (const auto &c : p.constraints()) {
            int n = c.kind == ConstraintKind::linear ? 1 : (c.kind == ConstraintKind::lmi && c.u.size() ? c.u.cols() : c.mat.dim);
            sol.duals.push_back(Matrix::Zero(n, n));
        }
        double viol = constraint_violation(p, sol);
        sol.objective = sol.dual_objective = p.objective().constant;
        sol.primal_residual = viol;
        sol.status = viol <= opt.eps ? Status::optimal : Status::infeasible;
        sol.message = "program has no variables";
        return sol;
    }
    bool has_lmi = false;
    for (const auto &c : p.constraints()) has_lmi = has_lmi || c.kind == ConstraintKind::lmi;
    bool dual_form = opt.form == Form::dual || (opt.form == Form::automatic && p.blocks().empty() && has_lmi);

    Mapping map;
    CoreProblem cp = dual_form ? build_dual(p, map) : build_primal(p, map);
    CoreResult r = detail::solve_core(cp, opt.eps, opt.max_iters, opt.verbose);
    Solution sol = dual_form ? map_dual(p, map, r) : map_primal(p, map, r);
    sol.sense = p.sense();
    sol.form = dual_form ? "dual" : "primal";
    sol.iterations = r.iterations;
    sol.gap = r.relgap;
    sol.primal_residual = dual_form ? r.reld : r.relp;
    sol.dual_residual = dual_form ? r.relp : r.reld;
    sol.message = r.message;
    switch (r.status) {
        case CoreStatus::optimal: sol.status = Status::optimal; break;
        case CoreStatus::primal_infeasible: sol.status = dual_form ? Status::unbounded : Status::infeasible; break;
        case CoreStatus::dual_infeasible: sol.status = dual_form ? Status::infeasible : Status::unbounded; break;
        case CoreStatus::failure: sol.status = Status::numerical_failure; break;
    }
    return sol;
}

double check_duality_gap(const Solution &primal, const Solution &dual) {
    require(primal.optimal() && dual.optimal(), "duality gap needs two optimal solutions");
    return primal.sense == Sense::maximize ? dual.objective - primal.objective : primal.objective - dual.objective;
}

}  // namespace ncq::conic
