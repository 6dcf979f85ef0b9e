// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "ncq/error.hpp"
#include "ncq/quantifiers.hpp"
#include "test_util.hpp"

using namespace ncq;
using namespace ncq::test;

namespace {

struct Instance {
    std::string name;
    AssignmentPolytope polytope;
};

std::vector<Instance> instances() {
    std::vector<Instance> out;
    for (int k = 3; k <= 8; ++k) {
        MultiMeasurement m = make_planar_measurement(k);
        out.push_back({"planar" + std::to_string(k), build_measurement_polytope(m, measurement_identity_space(m))});
    }
    for (Solid s : {Solid::tetrahedron, Solid::octahedron, Solid::cube, Solid::icosahedron, Solid::dodecahedron}) {
        MultiMeasurement m = make_platonic_measurement(s);
        out.push_back({solid_name(s), build_measurement_polytope(m, measurement_identity_space(m))});
    }
    for (int d = 2; d <= 3; ++d) {
        MultiMeasurement m = make_mub_multimeasurement(d);
        out.push_back({"mub" + std::to_string(d), build_measurement_polytope(m, measurement_identity_space(m))});
    }
    for (const auto &n : named_state_sets()) {
        StateSet s = make_named_state_set(n);
        out.push_back({n, build_preparation_polytope(s, preparation_identity_space(s))});
    }
    return out;
}

/// Random feasible point: a short walk from the interior inside the affine hull.
std::vector<Vector> feasible_samples(const AssignmentPolytope &p, int count, std::mt19937 &rng) {
    Eigen::JacobiSVD<RealMatrix> svd(p.eq, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-10 * svd.singularValues()[0]) ++rank;
    RealMatrix dirs = svd.matrixV().rightCols(p.num_vars() - rank);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> out;
    Vector x = p.interior;
    while (static_cast<int>(out.size()) < count) {
        if (dirs.cols() == 0) {
            out.push_back(x);
            continue;
        }
        Vector g(dirs.cols());
        for (int i = 0; i < g.size(); ++i) g[i] = n(rng);
        Vector step = dirs * g;
        double lo = -1e300, hi = 1e300;
        for (int i = 0; i < x.size(); ++i) {
            if (std::abs(step[i]) < 1e-14) continue;
            double t = -x[i] / step[i];
            if (step[i] > 0) lo = std::max(lo, t);
            else hi = std::min(hi, t);
        }
        x = x + (lo + (hi - lo) * u(rng)) * step;
        for (int i = 0; i < x.size(); ++i) x[i] = std::max(x[i], 0.0);
        out.push_back(x);
    }
    return out;
}

/// Least l1 residual of x as a convex combination of the vertices.
double hull_residual(const VertexSet &v, const Vector &x) {
    conic::Program p;
    std::vector<int> w;
    for (int l = 0; l < v.count(); ++l) w.push_back(p.add_scalar(conic::Domain::nonneg));
    conic::LinExpr sum;
    for (int l : w) sum.add(l, 1.0);
    p.add_linear(sum, conic::Rel::eq, 1.0);
    conic::LinExpr obj;
    for (int i = 0; i < x.size(); ++i) {
        int a = p.add_scalar(conic::Domain::nonneg), b = p.add_scalar(conic::Domain::nonneg);
        conic::LinExpr row;
        for (int l = 0; l < v.count(); ++l) row.add(w[l], v.vertices(i, l));
        row.add(a, 1.0).add(b, -1.0);
        p.add_linear(row, conic::Rel::eq, x[i]);
        obj.add(a, 1.0).add(b, 1.0);
    }
    p.set_objective(conic::Sense::minimize, obj);
    conic::SolveOptions so;
    so.env_overrides = false;
    return conic::solve(p, so).objective;
}

}  // namespace

TEST(Polytope, VertexCounts) {
    // One-hot vertices of a single POVM without identities.
    MultiMeasurement m3 = make_planar_measurement(3);
    VertexSet v3 = measurement_vertices(m3);
    EXPECT_EQ(v3.count(), 3);
    for (int l = 0; l < 3; ++l) EXPECT_NEAR(v3.vertex(l).sum(), 1.0, 1e-12);
    EXPECT_EQ(measurement_vertices(make_mub_multimeasurement(3)).count(), 81);
    EXPECT_EQ(measurement_vertices(make_mub_multimeasurement(2)).count(), 8);
    EXPECT_EQ(state_vertices(make_named_state_set("icosahedron12")).count(), 20);
}

TEST(Polytope, ShortcutAppliesToMubOnly) {
    MultiMeasurement mub = make_mub_multimeasurement(3);
    AssignmentPolytope p = build_measurement_polytope(mub, measurement_identity_space(mub));
    auto s = simplex_product_vertices(p);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(s->count(), 81);
    MultiMeasurement pent = make_planar_measurement(5);
    AssignmentPolytope q = build_measurement_polytope(pent, measurement_identity_space(pent));
    EXPECT_FALSE(simplex_product_vertices(q).has_value());
}

TEST(Polytope, ShortcutAgreesWithGeneralEnumerator) {
    for (int d = 2; d <= 3; ++d) {
        MultiMeasurement m = make_mub_multimeasurement(d);
        for (const auto &mm : {m, flag_convexify_measurement(m)}) {
            AssignmentPolytope p = build_measurement_polytope(mm, measurement_identity_space(mm));
            auto s = simplex_product_vertices(p);
            VertexSet g = enumerate_vertices(p);
            if (!s) continue;
            ASSERT_EQ(s->count(), g.count());
            EXPECT_LT((s->vertices - g.vertices).norm(), 1e-8);
        }
    }
    MultiMeasurement noisy = add_white_noise_measurement(make_mub_multimeasurement(2), 0.5);
    AssignmentPolytope p = build_measurement_polytope(noisy, measurement_identity_space(noisy));
    auto s = simplex_product_vertices(p);
    ASSERT_TRUE(s.has_value());
    EXPECT_LT((s->vertices - enumerate_vertices(p).vertices).norm(), 1e-8);
}

TEST(Polytope, VerticesSatisfyConstraintsAndAreExtreme) {
    for (const auto &inst : instances()) {
        VertexSet v = polytope_vertices(inst.polytope);
        ASSERT_GT(v.count(), 0) << inst.name;
        for (int l = 0; l < v.count(); ++l) {
            EXPECT_LE(constraint_violation(inst.polytope, v.vertex(l)), 1e-9) << inst.name;
            EXPECT_EQ(active_rank(inst.polytope, v.vertex(l)), inst.polytope.num_vars()) << inst.name;
        }
        EXPECT_LE(constraint_violation(inst.polytope, inst.polytope.interior), 1e-12) << inst.name;
    }
}

TEST(Polytope, CompletenessAgainstLinearPrograms) {
    std::mt19937 rng(17);
    std::normal_distribution<double> n;
    for (const auto &inst : instances()) {
        VertexSet v = polytope_vertices(inst.polytope);
        for (int t = 0; t < 10; ++t) {
            Vector c(inst.polytope.num_vars());
            for (int i = 0; i < c.size(); ++i) c[i] = n(rng);
            double best = (v.vertices.transpose() * c).maxCoeff();
            EXPECT_NEAR(lp_max(inst.polytope, c), best, 1e-7) << inst.name;
        }
    }
}

TEST(Polytope, RandomFeasiblePointsLieInHull) {
    std::mt19937 rng(23);
    for (const auto &inst : instances()) {
        VertexSet v = polytope_vertices(inst.polytope);
        for (const Vector &x : feasible_samples(inst.polytope, 100, rng)) {
            ASSERT_LE(constraint_violation(inst.polytope, x), 1e-9);
            ASSERT_LT(hull_residual(v, x), 1e-8) << inst.name;
        }
    }
}

TEST(Polytope, DeterministicAcrossWorkers) {
    MultiMeasurement m = make_platonic_measurement(Solid::dodecahedron);
    AssignmentPolytope p = build_measurement_polytope(m, measurement_identity_space(m));
    EnumerationOptions one, four;
    four.jobs = 4;
    VertexSet a = enumerate_vertices(p, one), b = enumerate_vertices(p, four);
    ASSERT_EQ(a.count(), b.count());
    EXPECT_EQ(a.vertices, b.vertices);
}

TEST(Polytope, EnumerationCap) {
    MultiMeasurement m = make_platonic_measurement(Solid::dodecahedron);
    AssignmentPolytope p = build_measurement_polytope(m, measurement_identity_space(m));
    EnumerationOptions opt;
    opt.max_candidates = 10;
    try {
        enumerate_vertices(p, opt);
        FAIL() << "expected the enumeration cap";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::enumeration_cap);
    }
}

TEST(Polytope, StatePolytopeUsesRescaledStates) {
    StateSet s = make_named_state_set("bb84_states");
    AssignmentPolytope p = build_preparation_polytope(s, preparation_identity_space(s));
    EXPECT_EQ(p.num_groups, 1);
    for (int i = 0; i < p.num_vars(); ++i) EXPECT_NEAR(p.interior[i], 0.25, 1e-15);
    EXPECT_EQ(polytope_vertices(p).count(), 4);
}
