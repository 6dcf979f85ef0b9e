// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "ncq/error.hpp"
#include "test_util.hpp"

using namespace ncq;
using namespace ncq::test;

namespace {

void expect_povm(const MultiMeasurement &m) {
    for (int y = 0; y < m.num_settings(); ++y) {
        Matrix sum = Matrix::Zero(m.dim(), m.dim());
        for (int b = 0; b < m.num_outcomes(y); ++b) {
            EXPECT_GE(eig_min(m.effect(b, y).matrix()), -1e-12);
            sum += m.effect(b, y).matrix();
        }
        EXPECT_LT((sum - identity(m.dim())).norm(), 1e-12);
    }
}

}  // namespace

TEST(Operators, VectorizeRoundTrip) {
    std::mt19937 rng(7);
    for (int d = 2; d <= 4; ++d) {
        auto basis = hermitian_basis(d);
        for (int t = 0; t < 50; ++t) {
            Matrix h = random_hermitian(d, rng);
            Vector v = vectorize(HermitianOp(h), basis);
            EXPECT_LT((reconstruct(v, basis) - h).norm(), 1e-12);
            EXPECT_LT((reconstruct(vectorize(h), d) - h).norm(), 1e-12);
        }
    }
}

TEST(Operators, HermitianBasisIsOrthonormal) {
    for (int d = 2; d <= 4; ++d) {
        auto basis = hermitian_basis(d);
        ASSERT_EQ(static_cast<int>(basis.size()), d * d);
        EXPECT_NEAR(tr(basis[0].matrix(), identity(d)), std::sqrt(static_cast<double>(d)), 1e-12);
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j)
                EXPECT_NEAR(tr(basis[i].matrix(), basis[j].matrix()), i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Operators, HermitianOpRejectsNonHermitian) {
    Matrix m = pauli_x();
    m(0, 1) = 2.0;
    EXPECT_THROW(HermitianOp{m}, Error);
    Matrix almost = pauli_z();
    almost(0, 1) = 1e-14;
    HermitianOp h(almost);
    EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(Operators, InvalidPovmRejected) {
    MeasurementSetting s{"bad", {HermitianOp(identity(2) / 2.0), HermitianOp(identity(2) / 3.0)}};
    EXPECT_THROW(MultiMeasurement(2, {s}), Error);
    MeasurementSetting neg{"neg", {HermitianOp(Matrix(2.0 * pauli_z())), HermitianOp(Matrix(identity(2) - 2.0 * pauli_z()))}};
    EXPECT_THROW(MultiMeasurement(2, {neg}), Error);
}

TEST(Operators, PlanarMeasurements) {
    for (int k = 3; k <= 9; ++k) {
        MultiMeasurement m = make_planar_measurement(k);
        expect_povm(m);
        ASSERT_EQ(m.num_effects(), k);
        for (int b = 0; b < k; ++b) {
            const Matrix &e = m.effect(b, 0).matrix();
            EXPECT_NEAR(e.trace().real(), 2.0 / k, 1e-12);
            Bloch r = bloch_of(e);
            EXPECT_NEAR(r[0], std::cos(2 * kPi * b / k), 1e-12);
            EXPECT_NEAR(r[1], 0.0, 1e-12);
            EXPECT_NEAR(r[2], std::sin(2 * kPi * b / k), 1e-12);
        }
    }
}

TEST(Operators, PlatonicMeasurements) {
    const std::pair<Solid, int> solids[] = {{Solid::tetrahedron, 4},
                                            {Solid::octahedron, 6},
                                            {Solid::cube, 8},
                                            {Solid::icosahedron, 12},
                                            {Solid::dodecahedron, 20}};
    for (auto [s, n] : solids) {
        auto vs = platonic_vertices(s);
        ASSERT_EQ(static_cast<int>(vs.size()), n);
        for (const auto &v : vs) EXPECT_NEAR(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 1.0, 1e-12);
        MultiMeasurement m = make_platonic_measurement(s);
        expect_povm(m);
        EXPECT_EQ(m.num_effects(), n);
        EXPECT_EQ(parse_solid(solid_name(s)), s);
    }
    EXPECT_THROW(parse_solid("sphere"), Error);
}

TEST(Operators, MubAreMutuallyUnbiased) {
    for (int d = 2; d <= 4; ++d) {
        MultiMeasurement m = make_mub_multimeasurement(d);
        ASSERT_EQ(m.num_settings(), d + 1);
        expect_povm(m);
        for (int y = 0; y < m.num_settings(); ++y)
            for (int b = 0; b < d; ++b)
                for (int y2 = 0; y2 < m.num_settings(); ++y2)
                    for (int b2 = 0; b2 < d; ++b2) {
                        double overlap = tr(m.effect(b, y).matrix(), m.effect(b2, y2).matrix());
                        double want = y == y2 ? (b == b2 ? 1.0 : 0.0) : 1.0 / d;
                        EXPECT_NEAR(overlap, want, 1e-12);
                    }
    }
}

TEST(Operators, TrivialMeasurement) {
    MultiMeasurement m = make_trivial_measurement(3);
    ASSERT_EQ(m.num_effects(), 1);
    EXPECT_LT((m.effect(0).matrix() - identity(3)).norm(), 1e-15);
}

TEST(Operators, NamedStateSets) {
    const std::pair<const char *, int> sets[] = {
        {"bb84_states", 4}, {"six_state", 6}, {"spekkens6", 6}, {"cube8", 8}, {"icosahedron12", 12}};
    for (auto [name, k] : sets) {
        StateSet s = make_named_state_set(name);
        EXPECT_EQ(s.size(), k) << name;
        for (const auto &r : s.states()) {
            EXPECT_NEAR(r.trace(), 1.0, 1e-12);
            EXPECT_NEAR(tr(r.matrix(), r.matrix()), 1.0, 1e-12);
        }
    }
    EXPECT_THROW(make_named_state_set("nope"), Error);
}

TEST(Operators, StateSetRejectsInvalid) {
    EXPECT_THROW(StateSet(2, {HermitianOp(identity(2))}), Error);
    EXPECT_THROW(StateSet(2, {HermitianOp(Matrix(pauli_z() + identity(2) / 2.0))}), Error);
}

TEST(Operators, MaximallyMixedBehavior) {
    StateSet s(2, {HermitianOp(identity(2) / 2.0)});
    Behavior beh = quantum_behavior(uniform_source(s), make_planar_measurement(4));
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(beh(0, b, 0, 0), 0.25, 1e-15);
}

TEST(Operators, AntiAlignedStatesBehavior) {
    AntiAlignedExample ex = anti_aligned_bb84_example();
    const double want[] = {0.0, 0.25, 0.5, 0.25};
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(ex.behavior(0, b, 0, 0), want[b], 1e-12);
}

TEST(Operators, QuantumBehaviorEntriesAreProbabilities) {
    std::mt19937 rng(11);
    for (int t = 0; t < 20; ++t) {
        std::vector<HermitianOp> states;
        for (int a = 0; a < 3; ++a) states.emplace_back(random_state(2, rng), 1e-10);
        Behavior beh = quantum_behavior(one_state_per_setting(StateSet(2, states)), make_mub_multimeasurement(2));
        for (double p : beh.table()) {
            EXPECT_GE(p, -1e-15);
            EXPECT_LE(p, 1.0 + 1e-15);
        }
        for (int x = 0; x < beh.num_x(); ++x)
            for (int y = 0; y < beh.num_y(); ++y) {
                double row = 0.0;
                for (int b = 0; b < beh.num_b(y); ++b) row += beh(0, b, x, y);
                EXPECT_NEAR(row, 1.0, 1e-12);
            }
    }
}

TEST(Operators, BehaviorValidation) {
    Behavior b({1}, {2});
    b(0, 0, 0, 0) = 0.7;
    b(0, 1, 0, 0) = 0.7;
    EXPECT_THROW(b.validate(), Error);
    b(0, 1, 0, 0) = 0.3;
    EXPECT_NO_THROW(b.validate());
    EXPECT_NEAR(b.conditional(0, 0, 0, 0), 0.7, 1e-15);
}

TEST(Operators, WhiteNoise) {
    MultiMeasurement m = add_white_noise_measurement(make_planar_measurement(4), 0.0);
    for (int b = 0; b < 4; ++b) EXPECT_LT((m.effect(b).matrix() - identity(2) / 4.0).norm(), 1e-15);
    StateSet s = add_white_noise_states(make_named_state_set("six_state"), 0.5);
    for (const auto &r : s.states()) {
        Bloch v = bloch_of(r.matrix());
        EXPECT_NEAR(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]), 0.5, 1e-12);
    }
    EXPECT_THROW(add_white_noise_measurement(make_planar_measurement(4), 1.5), Error);
}

TEST(Operators, TraceDistance) {
    Matrix up = bloch_operator({0, 0, 1}), down = bloch_operator({0, 0, -1});
    EXPECT_NEAR(trace_distance(up, down), 1.0, 1e-12);
    EXPECT_NEAR(trace_distance(up, up), 0.0, 1e-15);
    EXPECT_NEAR(trace_distance(up, identity(2) / 2.0), 0.5, 1e-12);
}

TEST(Operators, SourcesFromStateSets) {
    StateSet s = make_named_state_set("bb84_states");
    MultiSource u = uniform_source(s);
    ASSERT_EQ(u.num_settings(), 1);
    for (int a = 0; a < 4; ++a) EXPECT_DOUBLE_EQ(u.element(a, 0).weight, 0.25);
    MultiSource o = one_state_per_setting(s);
    ASSERT_EQ(o.num_settings(), 4);
    for (int x = 0; x < 4; ++x) EXPECT_DOUBLE_EQ(o.element(0, x).weight, 1.0);
}
