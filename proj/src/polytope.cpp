// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ncq/error.hpp"

namespace ncq {

namespace {

// Rows of `a` brought to reduced row echelon form, dropping zero rows.
RealMatrix rref(RealMatrix a, double tol = 1e-10) {
    int lead = 0;
    const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
    int r = 0;
    for (; r < m && lead < n; ++lead) {
        int piv = r;
        for (int i = r + 1; i < m; ++i)
            if (std::abs(a(i, lead)) > std::abs(a(piv, lead))) piv = i;
        if (std::abs(a(piv, lead)) <= tol) continue;
        a.row(piv).swap(a.row(r));
        a.row(r) /= a(r, lead);
        for (int i = 0; i < m; ++i)
            if (i != r) a.row(i) -= a(i, lead) * a.row(r);
        ++r;
    }
    return a.topRows(r);
}

AssignmentPolytope assemble(Side side, std::vector<std::pair<int, int>> layout, std::vector<int> group,
                            int num_groups, const RealMatrix &identities, Vector interior,
                            const EnumerationOptions &opt) {
    const int n = static_cast<int>(layout.size());
    RealMatrix id_rows = identities.transpose();
    if (opt.snap && id_rows.rows() > 0) {
        id_rows = rref(id_rows);
        for (int i = 0; i < id_rows.rows(); ++i) id_rows.row(i) = snap_rational(id_rows.row(i).transpose()).transpose();
    }
    AssignmentPolytope p;
    p.side = side;
    p.layout = std::move(layout);
    p.group = std::move(group);
    p.num_groups = num_groups;
    p.eq = RealMatrix::Zero(num_groups + id_rows.rows(), n);
    p.rhs = Vector::Zero(p.eq.rows());
    for (int i = 0; i < n; ++i) p.eq(p.group[i], i) = 1.0;
    p.rhs.head(num_groups).setOnes();
    if (id_rows.rows() > 0) p.eq.bottomRows(id_rows.rows()) = id_rows;
    p.interior = std::move(interior);
    return p;
}

double choose(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

bool next_combination(std::vector<int> &c, int n) {
    const int k = static_cast<int>(c.size());
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    return true;
}

RealMatrix canonicalize(std::vector<Vector> pts, int n, double dedup_tol) {
    auto key = [](const Vector &v) {
        std::vector<double> k(v.size());
        for (int i = 0; i < v.size(); ++i) {
            double r = std::round(v[i] * 1e12) / 1e12;
            k[i] = r == 0.0 ? 0.0 : r;
        }
        return k;
    };
    std::stable_sort(pts.begin(), pts.end(), [&](const Vector &a, const Vector &b) { return key(a) < key(b); });
    std::vector<Vector> uniq;
    for (auto &p : pts) {
        bool dup = false;
        for (const auto &u : uniq)
            if ((u - p).cwiseAbs().maxCoeff() <= dedup_tol) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(std::move(p));
    }
    RealMatrix out(n, uniq.size());
    for (size_t j = 0; j < uniq.size(); ++j) out.col(j) = uniq[j];
    return out;
}

}  // namespace

AssignmentPolytope build_measurement_polytope(const MultiMeasurement &m, const IdentitySpace &o,
                                              const EnumerationOptions &opt) {
    require(o.side == Side::measurement, "measurement polytope needs a measurement identity space");
    require(static_cast<int>(o.layout.size()) == m.num_effects() && o.basis.rows() == m.num_effects(),
            "identity space layout does not match the measurement");
    std::vector<std::pair<int, int>> layout;
    std::vector<int> group;
    Vector interior(m.num_effects());
    for (int i = 0; i < m.num_effects(); ++i) {
        auto so = m.setting_outcome(i);
        require(o.layout[i] == so, "identity space layout does not match the measurement");
        layout.push_back(so);
        group.push_back(so.first);
        interior[i] = m.effect(i).trace() / m.dim();
    }
    return assemble(Side::measurement, std::move(layout), std::move(group), m.num_settings(), o.basis,
                    std::move(interior), opt);
}

AssignmentPolytope build_preparation_polytope(const StateSet &s, const IdentitySpace &o,
                                              const EnumerationOptions &opt) {
    require(o.side == Side::preparation, "preparation polytope needs a preparation identity space");
    require(static_cast<int>(o.layout.size()) == s.size() && o.basis.rows() == s.size(),
            "identity space layout does not match the state set");
    std::vector<std::pair<int, int>> layout;
    for (int a = 0; a < s.size(); ++a) layout.emplace_back(0, a);
    return assemble(Side::preparation, std::move(layout), std::vector<int>(s.size(), 0), 1, o.basis,
                    Vector::Constant(s.size(), 1.0 / s.size()), opt);
}

double constraint_violation(const AssignmentPolytope &p, const Vector &x) {
    double v = (p.eq * x - p.rhs).cwiseAbs().maxCoeff();
    v = std::max(v, std::max(0.0, -x.minCoeff()));
    return v;
}

int active_rank(const AssignmentPolytope &p, const Vector &x, double tol) {
    std::vector<int> zeros;
    for (int i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) <= tol) zeros.push_back(i);
    RealMatrix a(p.eq.rows() + zeros.size(), p.num_vars());
    a.topRows(p.eq.rows()) = p.eq;
    a.bottomRows(zeros.size()).setZero();
    for (size_t j = 0; j < zeros.size(); ++j) a(p.eq.rows() + j, zeros[j]) = 1.0;
    Eigen::ColPivHouseholderQR<RealMatrix> qr(a);
    qr.setThreshold(1e-9);
    return static_cast<int>(qr.rank());
}

VertexSet enumerate_vertices(const AssignmentPolytope &p, const EnumerationOptions &opt) {
    const int n = p.num_vars();
    require(n > 0, "polytope has no variables");
    // Row-reduce the equalities to an equivalent full-rank system.
    Eigen::JacobiSVD<RealMatrix> svd(p.eq, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector &sv = svd.singularValues();
    double tol = (sv.size() ? sv[0] : 0.0) * std::max(p.eq.rows(), p.eq.cols()) * 1e-12;
    int r = 0;
    while (r < sv.size() && sv[r] > tol) ++r;
    RealMatrix ur = svd.matrixU().leftCols(r);
    RealMatrix e = ur.transpose() * p.eq;
    Vector f = ur.transpose() * p.rhs;
    Vector resid = p.rhs - ur * f;
    if (resid.cwiseAbs().maxCoeff() > 1e-9) throw Error(ErrorKind::infeasible_input, "polytope equalities are inconsistent");

    const double candidates = choose(n, r);
    if (candidates > opt.max_candidates)
        throw Error(ErrorKind::enumeration_cap, "vertex enumeration needs " + std::to_string(candidates) +
                                                    " candidate bases, above the cap of " +
                                                    std::to_string(opt.max_candidates));

    const int jobs = std::max(1, opt.jobs);
    // Tagged with the candidate index so the merge order is independent of jobs.
    std::vector<std::vector<std::pair<long long, Vector>>> found(jobs);
    auto worker = [&](int id) {
        std::vector<int> c(r);
        for (int i = 0; i < r; ++i) c[i] = i;
        long long counter = 0;
        RealMatrix eb(r, r);
        do {
            const long long idx = counter++;
            if (idx % jobs != id) continue;
            for (int j = 0; j < r; ++j) eb.col(j) = e.col(c[j]);
            Eigen::FullPivLU<RealMatrix> lu(eb);
            lu.setThreshold(1e-10);
            if (!lu.isInvertible()) continue;
            Vector xb = lu.solve(f);
            if (r > 0 && xb.minCoeff() < -opt.vert_tol) continue;
            Vector x = Vector::Zero(n);
            for (int j = 0; j < r; ++j) x[c[j]] = std::max(0.0, xb[j]);
            if (constraint_violation(p, x) > opt.vert_tol) continue;
            found[id].emplace_back(idx, std::move(x));
        } while (next_combination(c, n));
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> th;
        for (int id = 0; id < jobs; ++id) th.emplace_back(worker, id);
        for (auto &t : th) t.join();
    }
    std::vector<std::pair<long long, Vector>> tagged;
    for (auto &f2 : found)
        for (auto &v : f2) tagged.push_back(std::move(v));
    std::sort(tagged.begin(), tagged.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<Vector> all;
    for (auto &t : tagged) all.push_back(std::move(t.second));
    if (all.empty()) throw Error(ErrorKind::infeasible_input, "polytope is empty");
    VertexSet vs;
    vs.layout = p.layout;
    vs.vertices = canonicalize(std::move(all), n, opt.dedup_tol);
    return vs;
}

std::optional<VertexSet> simplex_product_vertices(const AssignmentPolytope &p, const EnumerationOptions &opt) {
    const int n = p.num_vars();
    const int g = p.num_groups;
    RealMatrix ind = RealMatrix::Zero(n, g);
    for (int i = 0; i < n; ++i) ind(i, p.group[i]) = 1.0;
    // Each identity must be sum_y c_y * 1_y with sum_y c_y = 0.
    for (int row = g; row < p.eq.rows(); ++row) {
        Vector beta = p.eq.row(row).transpose();
        Vector c = ind.colPivHouseholderQr().solve(beta);
        if ((ind * c - beta).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
        if (std::abs(c.sum()) > 1e-9) return std::nullopt;
    }
    std::vector<std::vector<int>> members(g);
    for (int i = 0; i < n; ++i) members[p.group[i]].push_back(i);
    double total = 1.0;
    for (const auto &m : members) total *= double(m.size());
    if (total > opt.max_candidates)
        throw Error(ErrorKind::enumeration_cap, "deterministic assignment count exceeds the enumeration cap");
    std::vector<Vector> pts;
    std::vector<int> pick(g, 0);
    while (true) {
        Vector x = Vector::Zero(n);
        for (int y = 0; y < g; ++y) x[members[y][pick[y]]] = 1.0;
        pts.push_back(std::move(x));
        int y = g - 1;
        while (y >= 0 && ++pick[y] == static_cast<int>(members[y].size())) pick[y--] = 0;
        if (y < 0) break;
    }
    VertexSet vs;
    vs.layout = p.layout;
    vs.vertices = canonicalize(std::move(pts), n, opt.dedup_tol);
    return vs;
}

VertexSet polytope_vertices(const AssignmentPolytope &p, const EnumerationOptions &opt) {
    if (auto v = simplex_product_vertices(p, opt)) return *v;
    return enumerate_vertices(p, opt);
}

}  // namespace ncq
