// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "ncq/error.hpp"
#include "test_util.hpp"

using namespace ncq;
using namespace ncq::test;

namespace {

std::vector<Bloch> icosahedron_axes() {
    const double s = 1.0 / std::sqrt(1 + kQ * kQ);
    return {{-s, -kQ * s, 0}, {-kQ * s, 0, s}, {-kQ * s, 0, -s}, {s, -kQ * s, 0}, {0, s, kQ * s}, {0, s, -kQ * s}};
}

MultiMeasurement axis_measurements(const std::vector<Bloch> &axes) {
    std::vector<MeasurementSetting> out;
    for (const auto &v : axes)
        out.push_back({"", {HermitianOp(bloch_operator(v)), HermitianOp(bloch_operator({-v[0], -v[1], -v[2]}))}});
    return MultiMeasurement(2, out);
}

}  // namespace

TEST(Flag, SingleSettingUnchanged) {
    MultiMeasurement m = make_planar_measurement(5);
    MultiMeasurement f = flag_convexify_measurement(m);
    ASSERT_EQ(f.num_effects(), 5);
    for (int b = 0; b < 5; ++b) EXPECT_EQ(f.effect(b).matrix(), m.effect(b).matrix());
}

TEST(Flag, UniformMub2) {
    MultiMeasurement f = flag_convexify_measurement(make_mub_multimeasurement(2));
    ASSERT_EQ(f.num_settings(), 1);
    ASSERT_EQ(f.num_effects(), 6);
    for (int b = 0; b < 6; ++b) EXPECT_NEAR(f.effect(b).matrix().trace().real(), 1.0 / 3.0, 1e-15);
}

TEST(Flag, NonUniformDistribution) {
    MultiMeasurement m = make_mub_multimeasurement(2);
    MultiMeasurement f = flag_convexify_measurement(m, {0.5, 0.3, 0.2});
    for (int y = 0; y < 3; ++y)
        for (int b = 0; b < 2; ++b) {
            double w = y == 0 ? 0.5 : y == 1 ? 0.3 : 0.2;
            EXPECT_LT((f.effect(2 * y + b).matrix() - w * m.effect(b, y).matrix()).norm(), 1e-15);
        }
    EXPECT_THROW(flag_convexify_measurement(m, {0.5, 0.5, 0.0}), Error);
    EXPECT_THROW(flag_convexify_measurement(m, {0.5, 0.5}), Error);
    EXPECT_THROW(flag_convexify_measurement(m, {0.5, 0.3, 0.3}), Error);
}

TEST(Reduction, DeduplicatesAndMapsElements) {
    StateSet s = make_named_state_set("bb84_states");
    std::vector<SourceSetting> settings = {
        {"x0", {{0.5, s.state(0)}, {0.5, s.state(1)}}},
        {"x1", {{0.5, s.state(2)}, {0.5, s.state(3)}}},
        {"x2", {{0.5, s.state(0)}, {0.5, s.state(2)}}},
    };
    StateSetReduction r = multisource_to_state_set(MultiSource(2, settings));
    EXPECT_EQ(r.states.size(), 4);
    EXPECT_EQ(r.index[2], (std::vector<int>{0, 2}));
    EXPECT_TRUE(r.warnings.empty());
}

TEST(Reduction, ZeroWeightElementWarns) {
    StateSet s = make_named_state_set("bb84_states");
    std::vector<SourceSetting> settings = {{"x0", {{1.0, s.state(0)}, {0.0, s.state(1)}}}};
    StateSetReduction r = multisource_to_state_set(MultiSource(2, settings));
    EXPECT_EQ(r.states.size(), 1);
    EXPECT_EQ(r.index[0][1], -1);
    EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Isotropic, Spectrum) {
    auto spectrum = [](const BipartiteState &b) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(b.matrix(), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    };
    auto e0 = spectrum(isotropic_state(0.0));
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(e0[i], 0.25, 1e-15);
    auto e1 = spectrum(isotropic_state(1.0));
    EXPECT_NEAR(e1[3], 1.0, 1e-14);
    EXPECT_NEAR(e1[0], 0.0, 1e-14);
    auto eh = spectrum(isotropic_state(0.5));
    EXPECT_NEAR(eh[3], 0.625, 1e-14);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(eh[i], 0.125, 1e-14);
    EXPECT_THROW(isotropic_state(-0.1), Error);
    EXPECT_THROW(isotropic_state(1.1), Error);
}

TEST(Steering, ProductStateGivesOneState) {
    std::mt19937 rng(4);
    HermitianOp a(random_state(2, rng), 1e-10), b(random_state(2, rng), 1e-10);
    MultiSource p = steer(product_state(a, b), make_mub_multimeasurement(2));
    for (int x = 0; x < p.num_settings(); ++x)
        for (int a2 = 0; a2 < p.num_outcomes(x); ++a2)
            EXPECT_LT((p.element(a2, x).state.matrix() - b.matrix()).norm(), 1e-12);
    EXPECT_LT(no_signaling_residual(p), 1e-12);
    EXPECT_TRUE(white_noise_robustness_source(p).classical());
}

TEST(Steering, IsotropicGivesNoisyTransposedAxes) {
    for (double eta : {0.3, 0.45, 1.0}) {
        MultiSource p = steer(isotropic_state(eta), axis_measurements(icosahedron_axes()));
        EXPECT_LT(no_signaling_residual(p), 1e-12);
        for (int x = 0; x < 6; ++x) {
            Bloch n = icosahedron_axes()[x];
            for (int a = 0; a < 2; ++a) {
                double s = a == 0 ? eta : -eta;
                EXPECT_NEAR(p.element(a, x).weight, 0.5, 1e-12);
                Bloch r = bloch_of(p.element(a, x).state.matrix());
                EXPECT_NEAR(r[0], s * n[0], 1e-12);
                EXPECT_NEAR(r[1], -s * n[1], 1e-12);
                EXPECT_NEAR(r[2], s * n[2], 1e-12);
            }
        }
    }
}

TEST(Steering, IcosahedronThresholdChain) {
    const double base = white_noise_robustness_states(make_named_state_set("icosahedron12"),
                                                      state_vertices(make_named_state_set("icosahedron12")))
                            .value;
    MultiSource hi = steer(isotropic_state(0.45), axis_measurements(icosahedron_axes()));
    QuantifierReport rh = white_noise_robustness_source(hi);
    EXPECT_NEAR(rh.value, base / 0.45, 1e-5);
    EXPECT_EQ(rh.verdict, Verdict::nonclassical);
    MultiSource lo = steer(isotropic_state(0.41), axis_measurements(icosahedron_axes()));
    EXPECT_TRUE(white_noise_robustness_source(lo).classical());
}

TEST(Steering, ClassicallyCorrelatedMixtureSteersClassically) {
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = rho(3, 3) = 0.5;
    MultiSource p = steer(BipartiteState(2, 2, rho), make_mub_multimeasurement(2));
    EXPECT_LT(no_signaling_residual(p), 1e-12);
    EXPECT_TRUE(white_noise_robustness_source(p).classical());
}

TEST(Steering, DimensionMismatch) {
    EXPECT_THROW(steer(isotropic_state(0.5), make_mub_multimeasurement(3)), Error);
    EXPECT_THROW(BipartiteState(2, 2, identity(3) / 3.0), Error);
    EXPECT_THROW(BipartiteState(2, 2, Matrix(identity(4) / 2.0)), Error);
}

TEST(Scenarios, UniformRescale) {
    StateSet s = make_named_state_set("six_state");
    MultiSource p = uniform_rescale_state_set(s);
    ASSERT_EQ(p.num_settings(), 1);
    ASSERT_EQ(p.num_outcomes(0), 6);
    for (int a = 0; a < 6; ++a) {
        EXPECT_NEAR(p.element(a, 0).weight, 1.0 / 6.0, 1e-15);
        EXPECT_EQ(p.element(a, 0).state.matrix(), s.state(a).matrix());
    }
    EXPECT_NEAR(white_noise_robustness_source(p).value, 1 / std::sqrt(3.0), 1e-6);
}
