// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace ncq::conic::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inner(const Matrix &a, const Matrix &b) { return a.cwiseProduct(b.conjugate()).sum().real(); }

Matrix herm(const Matrix &m) { return (m + m.adjoint()) / 2.0; }

const std::vector<Matrix> &basis_of(int n) {
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

// Longest alpha with x + alpha dx >= 0 for a PSD block.
double max_step(const Matrix &x, const Matrix &dx) {
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) return 0.0;
    Matrix t = llt.matrixL().solve(dx);
    Matrix w = llt.matrixL().solve(t.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm(w), Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : kInf;
}

double max_step(const Vector &x, const Vector &dx) {
    double a = kInf;
    for (int i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
    return a;
}

struct Iterate {
    Vector xf, xl, zl, y;
    std::vector<Matrix> X, Z;
};

struct Direction {
    Vector dxf, dxl, dzl, dy;
    std::vector<Matrix> dX, dZ;
};

class Solver {
  public:
    Solver(const CoreProblem &p, double eps, int max_iters, bool verbose)
        : p_(p), eps_(eps), max_iters_(max_iters), verbose_(verbose) {
        nb_ = static_cast<int>(p.blocks.size());
        nu_ = static_cast<double>(p.c_lp.size());
        for (const auto &b : p.blocks) nu_ += b.n;
        bnorm_ = p.b.norm();
        double c2 = p.c_free.squaredNorm() + p.c_lp.squaredNorm();
        for (const auto &b : p.blocks) c2 += b.c.squaredNorm();
        cnorm_ = std::sqrt(c2);
        for (const auto &b : p.blocks) cmat_.push_back(reconstruct(b.c, b.n));
    }

    CoreResult run();

  private:
    Vector apply_a(const Vector &xf, const Vector &xl, const std::vector<Matrix> &X) const {
        Vector r = Vector::Zero(p_.m);
        if (xf.size()) r += p_.a_free * xf;
        if (xl.size()) r += p_.a_lp * xl;
        for (int k = 0; k < nb_; ++k) {
            const auto &blk = p_.blocks[k];
            Vector v = blk.a * vectorize(X[k]);
            for (size_t i = 0; i < blk.rows.size(); ++i) r[blk.rows[i]] += v[i];
        }
        return r;
    }

    Matrix apply_at_block(int k, const Vector &y) const {
        const auto &blk = p_.blocks[k];
        Vector yy(blk.rows.size());
        for (size_t i = 0; i < blk.rows.size(); ++i) yy[i] = y[blk.rows[i]];
        return reconstruct(blk.a.transpose() * yy, blk.n);
    }

    void initial_point(Iterate &it) const;
    bool build_schur(const Iterate &it);
    void direction(const Iterate &it, const Vector &rp, const Vector &rdf, const Vector &rdl,
                   const std::vector<Matrix> &rdk, const Vector &rl, const std::vector<Matrix> &rk,
                   Direction &d) const;

    const CoreProblem &p_;
    double eps_;
    int max_iters_;
    bool verbose_;
    int nb_ = 0;
    double nu_ = 0.0;
    double bnorm_ = 0.0, cnorm_ = 0.0;
    std::vector<Matrix> cmat_;

    // Factorizations valid for the current iterate.
    Eigen::LLT<RealMatrix> schur_;
    RealMatrix minv_af_;
    Eigen::LDLT<RealMatrix> free_schur_;
    std::vector<Matrix> zinv_;
};

void Solver::initial_point(Iterate &it) const {
    const int m = p_.m;
    Vector brow = p_.b.cwiseAbs();
    auto primal_scale = [&](int n, const std::vector<double> &rownorm) {
        double s = std::max(10.0, std::sqrt(double(n)));
        for (size_t i = 0; i < rownorm.size(); ++i)
            if (rownorm[i] > 0.0) s = std::max(s, n * (1.0 + brow[i]) / (1.0 + rownorm[i]));
        return s;
    };
    it.xf = Vector::Zero(p_.c_free.size());
    it.y = Vector::Zero(m);
    const int nl = static_cast<int>(p_.c_lp.size());
    if (nl > 0) {
        std::vector<double> rn(m);
        for (int i = 0; i < m; ++i) rn[i] = p_.a_lp.row(i).norm();
        double xi = primal_scale(1, rn);
        double amax = 0.0;
        for (int j = 0; j < nl; ++j) amax = std::max(amax, p_.a_lp.col(j).norm());
        double zeta = std::max(10.0, 1.0 + std::max(amax, p_.c_lp.cwiseAbs().maxCoeff()));
        it.xl = Vector::Constant(nl, xi);
        it.zl = Vector::Constant(nl, zeta);
    } else {
        it.xl = Vector::Zero(0);
        it.zl = Vector::Zero(0);
    }
    it.X.clear();
    it.Z.clear();
    for (const auto &blk : p_.blocks) {
        std::vector<double> rn(m, 0.0);
        double amax = 0.0;
        for (size_t i = 0; i < blk.rows.size(); ++i) {
            double nr = blk.a.row(i).norm();
            rn[blk.rows[i]] = nr;
            amax = std::max(amax, nr);
        }
        double xi = primal_scale(blk.n, rn);
        double zeta = std::max({10.0, std::sqrt(double(blk.n)), (1.0 + std::max(amax, blk.c.norm())) / std::sqrt(double(blk.n))});
        it.X.push_back(xi * Matrix::Identity(blk.n, blk.n));
        it.Z.push_back(zeta * Matrix::Identity(blk.n, blk.n));
    }
}

bool Solver::build_schur(const Iterate &it) {
    const int m = p_.m;
    RealMatrix M = RealMatrix::Zero(m, m);
    if (it.xl.size()) {
        Vector w = it.xl.cwiseQuotient(it.zl);
        M.noalias() += p_.a_lp * w.asDiagonal() * p_.a_lp.transpose();
    }
    zinv_.resize(nb_);
    for (int k = 0; k < nb_; ++k) {
        const auto &blk = p_.blocks[k];
        const int n = blk.n;
        zinv_[k] = herm(it.Z[k].inverse());
        const auto &basis = basis_of(n);
        RealMatrix K(n * n, n * n);
        for (int v = 0; v < n * n; ++v) K.col(v) = vectorize(Matrix(it.X[k] * basis[v] * zinv_[k]));
        K = (K + K.transpose()) / 2.0;
        RealMatrix mk = blk.a * K * blk.a.transpose();
        const int r = static_cast<int>(blk.rows.size());
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) M(blk.rows[i], blk.rows[j]) += mk(i, j);
    }
    M = (M + M.transpose()) / 2.0;
    double dmax = M.diagonal().cwiseAbs().maxCoeff();
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        RealMatrix Mr = M;
        if (reg > 0.0) Mr.diagonal().array() += reg;
        schur_.compute(Mr);
        if (schur_.info() == Eigen::Success) break;
        reg = reg == 0.0 ? 1e-14 * std::max(1.0, dmax) : reg * 100.0;
    }
    if (schur_.info() != Eigen::Success) return false;
    const int nf = static_cast<int>(p_.c_free.size());
    if (nf > 0) {
        minv_af_ = schur_.solve(p_.a_free);
        RealMatrix S = p_.a_free.transpose() * minv_af_;
        S = (S + S.transpose()) / 2.0;
        free_schur_.compute(S);
        if (free_schur_.info() != Eigen::Success) return false;
    }
    return true;
}

// Solves the linearized system for complementarity right-hand sides rl, rk:
//   dx = r - K dz,  dz = rd - A'dy,  A dx = rp.
void Solver::direction(const Iterate &it, const Vector &rp, const Vector &rdf, const Vector &rdl,
                       const std::vector<Matrix> &rdk, const Vector &rl, const std::vector<Matrix> &rk,
                       Direction &d) const {
    const int nf = static_cast<int>(p_.c_free.size());
    // t = r - K rd, h = rp - A_c t.
    Vector tl;
    if (it.xl.size()) tl = rl - it.xl.cwiseQuotient(it.zl).cwiseProduct(rdl);
    std::vector<Matrix> tk(nb_);
    for (int k = 0; k < nb_; ++k) tk[k] = rk[k] - herm(it.X[k] * rdk[k] * zinv_[k]);
    Vector h = rp - apply_a(Vector::Zero(0), it.xl.size() ? tl : Vector(Vector::Zero(0)), tk);
    if (nf > 0) {
        Vector rhs = minv_af_.transpose() * h - rdf;
        d.dxf = free_schur_.solve(rhs);
        d.dy = schur_.solve(h - p_.a_free * d.dxf);
    } else {
        d.dxf = Vector::Zero(0);
        d.dy = schur_.solve(h);
    }
    if (it.xl.size()) {
        d.dzl = rdl - p_.a_lp.transpose() * d.dy;
        d.dxl = rl - it.xl.cwiseQuotient(it.zl).cwiseProduct(d.dzl);
    } else {
        d.dzl = d.dxl = Vector::Zero(0);
    }
    d.dX.resize(nb_);
    d.dZ.resize(nb_);
    for (int k = 0; k < nb_; ++k) {
        d.dZ[k] = herm(rdk[k] - apply_at_block(k, d.dy));
        d.dX[k] = herm(rk[k] - herm(it.X[k] * d.dZ[k] * zinv_[k]));
    }
}

CoreResult Solver::run() {
    CoreResult res;
    Iterate it;
    initial_point(it);
    const int nf = static_cast<int>(p_.c_free.size());
    double gamma = 0.9;
    int stall = 0;
    double best_score = kInf;
    for (int iter = 0; iter <= max_iters_; ++iter) {
        // Residuals.
        Vector rp = p_.b - apply_a(it.xf, it.xl, it.X);
        Vector rdf = nf ? Vector(p_.c_free - p_.a_free.transpose() * it.y) : Vector::Zero(0);
        Vector rdl = it.xl.size() ? Vector(p_.c_lp - p_.a_lp.transpose() * it.y - it.zl) : Vector::Zero(0);
        std::vector<Matrix> rdk(nb_);
        double rd2 = rdf.squaredNorm() + rdl.squaredNorm();
        double comp = it.xl.dot(it.zl);
        double pobj = p_.c_free.dot(it.xf) + p_.c_lp.dot(it.xl);
        for (int k = 0; k < nb_; ++k) {
            Matrix aty = apply_at_block(k, it.y);
            rdk[k] = herm(cmat_[k] - aty - it.Z[k]);
            rd2 += rdk[k].squaredNorm();
            comp += inner(it.X[k], it.Z[k]);
            pobj += inner(cmat_[k], it.X[k]);
        }
        double dobj = p_.b.dot(it.y);
        double mu = nu_ > 0 ? comp / nu_ : 0.0;
        double relp = rp.norm() / (1.0 + bnorm_);
        double reld = std::sqrt(rd2) / (1.0 + cnorm_);
        double relgap = std::max(std::abs(pobj - dobj), std::abs(comp)) / (1.0 + std::abs(pobj) + std::abs(dobj));
        res.iterations = iter;
        res.relp = relp;
        res.reld = reld;
        res.relgap = relgap;
        res.pobj = pobj;
        res.dobj = dobj;
        if (verbose_)
            std::fprintf(stderr, "it %3d  pobj % .10e  dobj % .10e  relp %.2e  reld %.2e  gap %.2e  mu %.2e\n", iter, pobj,
                         dobj, relp, reld, relgap, mu);
        auto store = [&]() {
            res.x_free = it.xf;
            res.x_lp = it.xl;
            res.x_blocks = it.X;
            res.y = it.y;
            res.z_lp = it.zl;
            res.z_blocks = it.Z;
        };
        if (relp <= eps_ && reld <= eps_ && relgap <= eps_) {
            store();
            res.status = CoreStatus::optimal;
            return res;
        }
        // Infeasibility certificates along diverging iterates.
        {
            // |A'y + z| = |c - rd|.
            double s2 = (p_.c_free - rdf).squaredNorm() + (p_.c_lp - rdl).squaredNorm();
            for (int k = 0; k < nb_; ++k) s2 += (cmat_[k] - rdk[k]).squaredNorm();
            double aty_z = std::sqrt(s2);
            if (dobj > 0.0 && relp > eps_ && aty_z <= 1e-8 * dobj && dobj > 1e-6) {
                store();
                res.status = CoreStatus::primal_infeasible;
                res.message = "dual ray found";
                return res;
            }
            Vector ax = apply_a(it.xf, it.xl, it.X);
            if (pobj < 0.0 && reld > eps_ && ax.norm() <= 1e-8 * -pobj && -pobj > 1e-6) {
                store();
                res.status = CoreStatus::dual_infeasible;
                res.message = "primal ray found";
                return res;
            }
        }
        double score = std::max({relp, reld, relgap});
        if (score < best_score * 0.999) {
            best_score = score;
            stall = 0;
        } else if (++stall > 30) {
            break;
        }
        if (iter == max_iters_) break;
        if (!build_schur(it)) {
            res.message = "Schur complement factorization failed";
            store();
            res.status = CoreStatus::failure;
            return res;
        }
        // Predictor.
        Direction pred;
        Vector rl = -it.xl;
        std::vector<Matrix> rk(nb_);
        for (int k = 0; k < nb_; ++k) rk[k] = -it.X[k];
        direction(it, rp, rdf, rdl, rdk, rl, rk, pred);
        double ap = 1.0, ad = 1.0;
        if (it.xl.size()) {
            ap = std::min(ap, max_step(it.xl, pred.dxl));
            ad = std::min(ad, max_step(it.zl, pred.dzl));
        }
        for (int k = 0; k < nb_; ++k) {
            ap = std::min(ap, max_step(it.X[k], pred.dX[k]));
            ad = std::min(ad, max_step(it.Z[k], pred.dZ[k]));
        }
        double comp_aff = 0.0;
        if (it.xl.size()) comp_aff += (it.xl + ap * pred.dxl).dot(it.zl + ad * pred.dzl);
        for (int k = 0; k < nb_; ++k) comp_aff += inner(it.X[k] + ap * pred.dX[k], it.Z[k] + ad * pred.dZ[k]);
        double mu_aff = comp_aff / nu_;
        double sigma = mu > 0.0 ? std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3) : 0.0;
        sigma = std::clamp(sigma, 0.0, 1.0);
        // Corrector.
        Vector rlc;
        if (it.xl.size())
            rlc = (sigma * mu) * it.zl.cwiseInverse() - it.xl - pred.dxl.cwiseProduct(pred.dzl).cwiseQuotient(it.zl);
        else
            rlc = Vector::Zero(0);
        std::vector<Matrix> rkc(nb_);
        for (int k = 0; k < nb_; ++k)
            rkc[k] = herm((sigma * mu) * zinv_[k] - it.X[k] - herm(pred.dX[k] * pred.dZ[k] * zinv_[k]));
        Direction d;
        direction(it, rp, rdf, rdl, rdk, rlc, rkc, d);
        ap = 1.0, ad = 1.0;
        double apm = kInf, adm = kInf;
        if (it.xl.size()) {
            apm = std::min(apm, max_step(it.xl, d.dxl));
            adm = std::min(adm, max_step(it.zl, d.dzl));
        }
        for (int k = 0; k < nb_; ++k) {
            apm = std::min(apm, max_step(it.X[k], d.dX[k]));
            adm = std::min(adm, max_step(it.Z[k], d.dZ[k]));
        }
        ap = std::min(1.0, gamma * apm);
        ad = std::min(1.0, gamma * adm);
        if (ap < 1e-12 && ad < 1e-12) {
            res.message = "step length collapsed";
            store();
            res.status = CoreStatus::failure;
            return res;
        }
        it.xf += ap * d.dxf;
        if (it.xl.size()) {
            it.xl += ap * d.dxl;
            it.zl += ad * d.dzl;
        }
        for (int k = 0; k < nb_; ++k) {
            it.X[k] = herm(it.X[k] + ap * d.dX[k]);
            it.Z[k] = herm(it.Z[k] + ad * d.dZ[k]);
        }
        it.y += ad * d.dy;
        gamma = 0.9 + 0.09 * std::min(ap, ad);
    }
    res.x_free = it.xf;
    res.x_lp = it.xl;
    res.x_blocks = it.X;
    res.y = it.y;
    res.z_lp = it.zl;
    res.z_blocks = it.Z;
    res.status = CoreStatus::failure;
    if (res.message.empty()) res.message = "no convergence within the iteration budget";
    return res;
}

}  // namespace

namespace {

// Rows of A kept after removing linear dependencies, by pivoted Cholesky on A A'.
std::vector<int> independent_rows(const CoreProblem &p, RealMatrix &gram) {
    const int m = p.m;
    gram = RealMatrix::Zero(m, m);
    if (p.a_free.cols()) gram.noalias() += p.a_free * p.a_free.transpose();
    if (p.a_lp.cols()) gram.noalias() += p.a_lp * p.a_lp.transpose();
    for (const auto &blk : p.blocks) {
        RealMatrix g = blk.a * blk.a.transpose();
        for (size_t i = 0; i < blk.rows.size(); ++i)
            for (size_t j = 0; j < blk.rows.size(); ++j) gram(blk.rows[i], blk.rows[j]) += g(i, j);
    }
    RealMatrix w = gram;
    std::vector<bool> used(m, false);
    std::vector<int> keep;
    const Vector d0 = gram.diagonal();
    while (true) {
        int piv = -1;
        double best = 0.0;
        for (int i = 0; i < m; ++i) {
            if (used[i] || d0[i] <= 0.0) continue;
            double ratio = w(i, i) / d0[i];
            if (ratio > best) best = ratio, piv = i;
        }
        if (piv < 0 || best <= 1e-13) break;
        used[piv] = true;
        keep.push_back(piv);
        Vector col = w.col(piv) / std::sqrt(w(piv, piv));
        w.noalias() -= col * col.transpose();
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

}  // namespace

CoreResult solve_core(const CoreProblem &p, double eps, int max_iters, bool verbose) {
    RealMatrix gram;
    std::vector<int> keep = independent_rows(p, gram);
    const int m = p.m;
    const int mk = static_cast<int>(keep.size());
    std::vector<int> newidx(m, -1);
    for (int i = 0; i < mk; ++i) newidx[keep[i]] = i;

    // Consistency of dropped rows with the kept ones.
    if (mk < m) {
        RealMatrix gkk(mk, mk);
        for (int i = 0; i < mk; ++i)
            for (int j = 0; j < mk; ++j) gkk(i, j) = gram(keep[i], keep[j]);
        Eigen::LDLT<RealMatrix> ldlt(gkk);
        Vector bk(mk);
        for (int i = 0; i < mk; ++i) bk[i] = p.b[keep[i]];
        Vector wk = mk ? Vector(ldlt.solve(bk)) : Vector::Zero(0);
        for (int r = 0; r < m; ++r) {
            if (newidx[r] >= 0) continue;
            double pred = 0.0;
            for (int i = 0; i < mk; ++i) pred += gram(r, keep[i]) * wk[i];
            if (std::abs(p.b[r] - pred) > 1e-8 * (1.0 + p.b.cwiseAbs().maxCoeff())) {
                CoreResult res;
                res.status = CoreStatus::primal_infeasible;
                res.message = "inconsistent linear equalities";
                res.y = Vector::Zero(m);
                return res;
            }
        }
    }

    CoreProblem q;
    q.m = mk;
    q.b.resize(mk);
    for (int i = 0; i < mk; ++i) q.b[i] = p.b[keep[i]];
    q.c_free = p.c_free;
    q.c_lp = p.c_lp;
    q.a_free.resize(mk, p.a_free.cols());
    q.a_lp.resize(mk, p.a_lp.cols());
    for (int i = 0; i < mk; ++i) {
        if (p.a_free.cols()) q.a_free.row(i) = p.a_free.row(keep[i]);
        if (p.a_lp.cols()) q.a_lp.row(i) = p.a_lp.row(keep[i]);
    }
    for (const auto &blk : p.blocks) {
        CoreBlock nb;
        nb.n = blk.n;
        nb.c = blk.c;
        std::vector<int> src;
        for (size_t i = 0; i < blk.rows.size(); ++i)
            if (newidx[blk.rows[i]] >= 0) {
                nb.rows.push_back(newidx[blk.rows[i]]);
                src.push_back(static_cast<int>(i));
            }
        nb.a.resize(src.size(), blk.a.cols());
        for (size_t i = 0; i < src.size(); ++i) nb.a.row(i) = blk.a.row(src[i]);
        q.blocks.push_back(std::move(nb));
    }

    CoreResult res;
    if (mk == 0) {
        // No constraints: the cone program is bounded only when c lies in the dual cone.
        res.status = CoreStatus::failure;
        res.message = "program has no independent constraints";
        res.y = Vector::Zero(m);
        return res;
    }
    Solver solver(q, eps, max_iters, verbose);
    res = solver.run();
    Vector y = Vector::Zero(m);
    for (int i = 0; i < mk; ++i) y[keep[i]] = res.y.size() ? res.y[i] : 0.0;
    res.y = y;
    return res;
}

}  // namespace ncq::conic::detail
