// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncq/scenarios.hpp"

namespace ncq {

/// sum_b f_b Tr[rho_b M_b] >= 1 for every classical measurement.
struct MeasurementWitness {
    /// Effect (flat) index of each retained term.
    std::vector<int> index;
    std::vector<Matrix> states;
    std::vector<double> weights;
    std::vector<std::string> warnings;
};

/// (1/k) sum_a f_a Tr[T_a rho_a] >= 1 for every classical set of k states, with
/// tests {T_a, 1 - T_a}.
struct StateWitness {
    std::vector<Matrix> tests;
    std::vector<double> weights;
    int k = 0;
};

struct WitnessValue {
    double value = 0.0;
    double threshold = 1.0;
    bool nonclassical = false;
};

MeasurementWitness witness_from_dual_measurement(const std::vector<Matrix> &f, double psd_tol = Tolerances{}.psd);
WitnessValue evaluate_measurement_witness(const MeasurementWitness &w, const MultiMeasurement &m,
                                          double tol = Tolerances{}.witness);
StateWitness witness_from_dual_states(const std::vector<Matrix> &f, double psd_tol = Tolerances{}.psd);
WitnessValue evaluate_state_witness(const StateWitness &w, const StateSet &s, double tol = Tolerances{}.witness);

enum class IneqSense { ge, le };

struct IneqTerm {
    int a = 0, b = 0, x = 0, y = 0;
    double coeff = 0.0;
};

/// sum coeff * p(ab|xy) (or p(b|a,x,y) when conditional) compared against bound.
struct NCInequality {
    std::string name;
    std::vector<IneqTerm> terms;
    double bound = 0.0;
    IneqSense sense = IneqSense::ge;
    bool conditional = false;
};

struct InequalityValue {
    double lhs = 0.0;
    bool satisfied = true;
    /// Signed distance to the bound; negative when violated.
    double margin = 0.0;
};

InequalityValue evaluate_inequality(const NCInequality &ineq, const Behavior &beh, double tol = 1e-9);
/// Human-readable form; p_{b|a} notation when every preparation setting has one outcome and there is one measurement.
std::string format_inequality(const NCInequality &ineq, const Behavior *beh = nullptr);

/// Five-preparation pentagon inequality on p_{b|a} = p(0,b|a,0).
NCInequality pentagon_inequality();
/// Its counterpart for the rotated pentagon states.
NCInequality rotated_pentagon_inequality();
/// Icosahedron/dodecahedron inequality on p(b|a,x,y).
NCInequality icosahedron_inequality();
std::vector<std::string> builtin_inequalities();
NCInequality builtin_inequality(const std::string &name);

struct NCModelOptions {
    conic::SolveOptions solver;
    /// Behavior mismatch below which the LP counts as feasible.
    double feasibility_tol = 1e-7;
    double coeff_zero = 1e-10;
};

struct NCModelResult {
    bool feasible = false;
    /// Optimal l1 mismatch between the behavior and the closest noncontextual one.
    double mismatch = 0.0;
    /// nu(kappa, lambda): preparation vertex by measurement vertex.
    RealMatrix weights;
    std::optional<NCInequality> inequality;
    /// lhs - bound of the inequality on the input behavior (positive = violated for le-form).
    double violation = 0.0;
    conic::Status status = conic::Status::optimal;
    int iterations = 0;
};

/// Noncontextual-model LP over pairs of preparation and measurement vertices.
/// state_of[x][a] names the row of vprep for element (a, x); empty means one
/// state per element in flat order.
NCModelResult nc_model_lp(const Behavior &beh, const VertexSet &vprep, const VertexSet &vmeas,
                          const std::vector<std::vector<int>> &state_of = {}, const NCModelOptions &opt = {});

/// Full pipeline: reduce the source, build both polytopes, run the LP.
NCModelResult nc_model_lp(const MultiSource &p, const MultiMeasurement &m, const NCModelOptions &opt = {},
                          const EnumerationOptions &eopt = {});

struct OntologicalModel {
    int num_ontic = 0;
    /// epistemic[x][a][lambda] = mu(lambda | a, x).
    std::vector<std::vector<std::vector<double>>> epistemic;
    /// response[y][lambda][b] = xi(b | y, lambda).
    std::vector<std::vector<std::vector<double>>> response;
};

struct ModelCheck {
    double normalization = 0.0;
    double statistics = 0.0;
    double preparation_identities = 0.0;
    double measurement_identities = 0.0;

    bool passed(double tol = 1e-10) const {
        return normalization <= tol && statistics <= tol && preparation_identities <= tol &&
               measurement_identities <= tol;
    }
};

/// oprep acts on p(a|x) rho_{a|x} with layout (x, a); omeas on M_{b|y} with layout (y, b).
ModelCheck verify_ontological_model(const OntologicalModel &model, const Behavior &beh, const IdentitySpace &oprep,
                                    const IdentitySpace &omeas);

/// Anti-aligned BB84 example: measurement, dual operators, states, behavior and model.
struct AntiAlignedExample {
    MultiMeasurement measurement;
    std::vector<Matrix> dual;
    StateSet states;
    MultiSource source;
    Behavior behavior;
    OntologicalModel model;
};
AntiAlignedExample anti_aligned_bb84_example();

/// Steered isotropic assemblage tested with dodecahedron-axis measurements.
struct IcosahedronScenario {
    std::vector<Bloch> n_axes;
    std::vector<Bloch> m_axes;
    MultiMeasurement steering;
    MultiSource source;
    /// Transposed dodecahedron-axis measurements.
    MultiMeasurement measurement;
    Behavior behavior;
};
IcosahedronScenario icosahedron_scenario(double eta);

/// State set of the pentagon scenario (rotated by pi/5 when asked).
StateSet pentagon_states(bool rotated);
/// One state per preparation setting, measured by the eta-noisy pentagon measurement.
Behavior pentagon_behavior(double eta, bool rotated);

}  // namespace ncq
