// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <algorithm>

#include "ncq/error.hpp"
#include "test_util.hpp"

using namespace ncq;
using namespace ncq::test;

namespace {

/// Real coordinates (Re, Im of every entry) of each operator, one column each.
RealMatrix stack(const std::vector<Matrix> &ops) {
    const int d = static_cast<int>(ops[0].rows());
    RealMatrix a(2 * d * d, ops.size());
    for (size_t j = 0; j < ops.size(); ++j)
        for (int r = 0; r < d * d; ++r) {
            a(2 * r, j) = ops[j](r / d, r % d).real();
            a(2 * r + 1, j) = ops[j](r / d, r % d).imag();
        }
    return a;
}

int rank_oracle(const std::vector<Matrix> &ops) {
    Eigen::JacobiSVD<RealMatrix> svd(stack(ops));
    const auto &s = svd.singularValues();
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s[i] > 1e-9 * s[0]) ++r;
    return r;
}

std::vector<std::pair<int, int>> flat_layout(int n) {
    std::vector<std::pair<int, int>> l;
    for (int i = 0; i < n; ++i) l.emplace_back(0, i);
    return l;
}

}  // namespace

TEST(Identities, PlanarNullDimension) {
    for (int k = 3; k <= 8; ++k) {
        MultiMeasurement m = make_planar_measurement(k);
        IdentitySpace o = measurement_identity_space(m);
        const int n = m.num_effects();
        EXPECT_EQ(o.basis.cols(), n - rank_oracle(effect_matrices(m))) << "k=" << k;
        EXPECT_EQ(o.rank, rank_oracle(effect_matrices(m)));
        EXPECT_EQ(o.basis.cols(), std::max(0, k - 3));
    }
}

TEST(Identities, BasisResidualsBelowTolerance) {
    std::vector<MultiMeasurement> ms = {make_planar_measurement(6), make_mub_multimeasurement(2),
                                        make_mub_multimeasurement(3), make_platonic_measurement(Solid::dodecahedron)};
    for (const auto &m : ms) {
        IdentitySpace o = measurement_identity_space(m);
        for (int c = 0; c < o.basis.cols(); ++c) {
            EXPECT_NEAR(o.basis.col(c).norm(), 1.0, 1e-10);
            EXPECT_LE(verify_identity(o, o.basis.col(c)), o.null_tol);
        }
        EXPECT_EQ(verify_identity(o, Vector::Zero(m.num_effects())), 0.0);
    }
}

TEST(Identities, ComplementBoundedBySmallestSingularValue) {
    IdentitySpace o = measurement_identity_space(make_planar_measurement(7));
    std::mt19937 rng(3);
    std::normal_distribution<double> n;
    double smin = 0.0;
    for (int i = 0; i < o.singular_values.size(); ++i)
        if (o.singular_values[i] > o.null_tol) smin = o.singular_values[i];
    for (int t = 0; t < 20; ++t) {
        Vector v(7);
        for (int i = 0; i < 7; ++i) v[i] = n(rng);
        v -= o.basis * (o.basis.transpose() * v);
        EXPECT_GE(verify_identity(o, v), smin * v.norm() * (1 - 1e-9));
    }
}

TEST(Identities, RankInvariantUnderReindexing) {
    MultiMeasurement m = make_platonic_measurement(Solid::icosahedron);
    std::vector<Matrix> ops = effect_matrices(m);
    IdentitySpace base = identity_space_of(ops, Side::measurement, flat_layout(12));
    std::mt19937 rng(5);
    for (int t = 0; t < 5; ++t) {
        std::shuffle(ops.begin(), ops.end(), rng);
        IdentitySpace o = identity_space_of(ops, Side::measurement, flat_layout(12));
        EXPECT_EQ(o.rank, base.rank);
        EXPECT_EQ(o.basis.cols(), base.basis.cols());
    }
}

TEST(Identities, TruncatedMubsAreIndependent) {
    for (int d = 2; d <= 3; ++d) {
        MultiMeasurement m = make_mub_multimeasurement(d);
        for (int keep = 1; keep < d; ++keep) {
            std::vector<Matrix> ops;
            std::vector<std::pair<int, int>> layout;
            for (int y = 0; y < m.num_settings(); ++y)
                for (int b = 0; b < keep; ++b) {
                    ops.push_back(m.effect(b, y).matrix());
                    layout.emplace_back(y, b);
                }
            IdentitySpace o = identity_space_of(ops, Side::measurement, layout);
            EXPECT_EQ(o.basis.cols(), 0) << "d=" << d << " keep=" << keep;
        }
    }
}

TEST(Identities, MubIdentityCount) {
    // d+1 complete bases: normalizations give d independent differences.
    for (int d = 2; d <= 3; ++d) {
        MultiMeasurement m = make_mub_multimeasurement(d);
        IdentitySpace o = measurement_identity_space(m);
        EXPECT_EQ(o.basis.cols(), m.num_effects() - rank_oracle(effect_matrices(m)));
        EXPECT_EQ(o.basis.cols(), d);
    }
}

TEST(Identities, Bb84StatesIdentity) {
    StateSet s = make_named_state_set("bb84_states");
    IdentitySpace o = preparation_identity_space(s);
    ASSERT_EQ(o.basis.cols(), 1);
    Vector v = o.basis.col(0) / o.basis(0, 0);
    EXPECT_NEAR(v[1], 1.0, 1e-12);
    EXPECT_NEAR(v[2], -1.0, 1e-12);
    EXPECT_NEAR(v[3], -1.0, 1e-12);
}

TEST(Identities, WeightedSourceMatchesUniformStateSet) {
    StateSet s = make_named_state_set("six_state");
    IdentitySpace a = preparation_identity_space(s);
    IdentitySpace b = preparation_identity_space(uniform_source(s));
    EXPECT_EQ(a.rank, b.rank);
    EXPECT_EQ(a.basis.cols(), b.basis.cols());
}

TEST(Identities, LayoutMismatch) {
    std::vector<Matrix> ops = {identity(2)};
    EXPECT_THROW(identity_space_of(ops, Side::measurement, flat_layout(2)), Error);
    IdentitySpace o = measurement_identity_space(make_planar_measurement(4));
    EXPECT_THROW(verify_identity(o, Vector::Zero(3)), Error);
}

TEST(Identities, AbsoluteThresholdOverride) {
    IdentityOptions opt;
    opt.null_tol = 1e-6;
    IdentitySpace o = measurement_identity_space(make_planar_measurement(5), opt);
    EXPECT_DOUBLE_EQ(o.null_tol, 1e-6);
    EXPECT_EQ(o.basis.cols(), 2);
}

TEST(Identities, RationalApproximation) {
    EXPECT_EQ(rational_approx(1.0 / 3.0, 1000), (std::pair<long long, long long>{1, 3}));
    EXPECT_EQ(rational_approx(-0.75, 1000), (std::pair<long long, long long>{-3, 4}));
    EXPECT_EQ(rational_approx(2.0, 10), (std::pair<long long, long long>{2, 1}));
    Vector v(3);
    v << 0.5 + 1e-12, kQ, -2.0 / 7.0;
    Vector s = snap_rational(v, 1000, 1e-9);
    EXPECT_DOUBLE_EQ(s[0], 0.5);
    EXPECT_DOUBLE_EQ(s[1], kQ);
    EXPECT_DOUBLE_EQ(s[2], -2.0 / 7.0);
}
