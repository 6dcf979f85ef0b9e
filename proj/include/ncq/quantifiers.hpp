// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ncq/conic.hpp"
#include "ncq/polytope.hpp"

namespace ncq {

enum class TargetKind { measurement, states };
enum class Quantity { mu, eta, omega, eta_upper_bound };
enum class Verdict { classical, nonclassical, boundary };

std::string to_string(TargetKind k);
std::string to_string(Quantity q);
std::string to_string(Verdict v);

/// The operators a quantifier acts on: effects of a (multi-)measurement or the
/// states of a state set, with the constants that distinguish the two cases.
struct OperatorFamily {
    TargetKind kind = TargetKind::measurement;
    std::string name;
    int dim = 0;
    std::vector<Matrix> ops;
    /// Number of normalization groups (settings for measurements, 1 for states).
    int groups = 1;
    /// Trace of sum_lambda G_lambda for a classical decomposition: d or k.
    double total_trace = 0.0;
};

OperatorFamily measurement_family(const MultiMeasurement &m, std::string name = {});
OperatorFamily state_family(const StateSet &s, std::string name = {});

struct QuantifierOptions {
    Tolerances tol;
    conic::SolveOptions solver;
    /// Restrict fraction-primal blocks to the common range of their effects.
    bool facial_reduction = true;
    /// Second pass for the fraction dual: least total trace among optimal F.
    bool refine_dual = true;
};

struct QuantifierReport {
    std::string target;
    TargetKind kind = TargetKind::measurement;
    Quantity quantity = Quantity::eta;
    double value = 0.0;
    Verdict verdict = Verdict::boundary;
    /// G_lambda (measurements) or unnormalized sigma_lambda (states), one per vertex.
    std::vector<Matrix> primal_certificate;
    /// X_i for robustness, F_i for fraction.
    std::vector<Matrix> dual_certificate;
    /// Objective of the separately solved or implied dual program.
    double dual_value = 0.0;
    bool from_dual_program = false;
    /// Max violation of the defining constraints by the returned certificate.
    double certificate_residual = 0.0;
    conic::Status status = conic::Status::optimal;
    int iterations = 0;
    double primal_residual = 0.0, dual_residual = 0.0, gap = 0.0;
    std::string solver_form;
    double seconds = 0.0;

    bool classical() const { return verdict != Verdict::nonclassical; }
};

/// Identities, polytope and vertices in one step.
VertexSet measurement_vertices(const MultiMeasurement &m, const EnumerationOptions &opt = {});
VertexSet state_vertices(const StateSet &s, const EnumerationOptions &opt = {});

QuantifierReport certify(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt = {});
QuantifierReport robustness(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt = {});
QuantifierReport robustness_dual(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt = {});
/// Primal value with the dual certificate from the dual program.
QuantifierReport fraction(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt = {});
QuantifierReport fraction_dual(const OperatorFamily &f, const VertexSet &v, const QuantifierOptions &opt = {});
double analytic_upper_bound(const OperatorFamily &f, const VertexSet &v);

/// Programs behind the quantifiers, exposed for dumping and cross-checks.
conic::Program certify_program(const OperatorFamily &f, const VertexSet &v);
conic::Program robustness_program(const OperatorFamily &f, const VertexSet &v);
conic::Program robustness_dual_program(const OperatorFamily &f, const VertexSet &v);
conic::Program fraction_program(const OperatorFamily &f, const VertexSet &v, bool facial_reduction = true);
conic::Program fraction_dual_program(const OperatorFamily &f, const VertexSet &v);

QuantifierReport certify_measurement(const MultiMeasurement &m, const VertexSet &v, const QuantifierOptions &opt = {});
QuantifierReport white_noise_robustness_measurement(const MultiMeasurement &m, const VertexSet &v,
                                                    const QuantifierOptions &opt = {});
QuantifierReport white_noise_robustness_measurement_dual(const MultiMeasurement &m, const VertexSet &v,
                                                         const QuantifierOptions &opt = {});
double analytic_upper_bound_measurement(const MultiMeasurement &m, const VertexSet &v);
QuantifierReport nonclassical_fraction_measurement(const MultiMeasurement &m, const VertexSet &v,
                                                   const QuantifierOptions &opt = {});

QuantifierReport certify_states(const StateSet &s, const VertexSet &v, const QuantifierOptions &opt = {});
QuantifierReport white_noise_robustness_states(const StateSet &s, const VertexSet &v, const QuantifierOptions &opt = {});
QuantifierReport white_noise_robustness_states_dual(const StateSet &s, const VertexSet &v,
                                                    const QuantifierOptions &opt = {});
double analytic_upper_bound_states(const StateSet &s, const VertexSet &v);
QuantifierReport nonclassical_fraction_states(const StateSet &s, const VertexSet &v, const QuantifierOptions &opt = {});

}  // namespace ncq
