// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncq/serialize.hpp"

namespace ncq::cli {

inline constexpr int kExitClassical = 0;
inline constexpr int kExitNonclassical = 10;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitCap = 4;

struct RunConfig {
    Tolerances tol;
    /// Absolute null-space cut; 0 keeps the relative rule.
    double null_tol = 0.0;
    double max_candidates = 1e7;
    int jobs = 1;
    int max_iters = 250;
    std::string format = "text";

    void validate() const;
    IdentityOptions identities() const;
    EnumerationOptions enumeration() const;
    QuantifierOptions quantifier() const;
    NCModelOptions nc_model() const;
};

/// A prepare-and-measure scenario: the source, the measurement and,
/// optionally, a behavior that replaces the quantum prediction.
struct Scenario {
    std::string name;
    MultiSource source;
    MultiMeasurement measurement;
    std::optional<Behavior> behavior;
};

json scenario_to_json(const Scenario &s);
Scenario scenario_from_json(const json &j, const Tolerances &tol);

std::optional<MultiMeasurement> builtin_measurement(const std::string &name);
std::optional<StateSet> builtin_states(const std::string &name);
std::optional<Scenario> builtin_scenario(const std::string &name, double eta);
std::vector<std::string> builtin_names(const std::string &category);

VertexSet vertices_of(const MultiMeasurement &m, const RunConfig &cfg);
VertexSet vertices_of(const StateSet &s, const RunConfig &cfg);

struct ReproduceOptions {
    bool include_slow = false;
};

/// Computed vs published rows; returns true when every |delta| <= 1e-4.
bool reproduce(const std::string &table, const ReproduceOptions &opt, const RunConfig &cfg, json &out);
std::vector<std::string> reproduce_tables();

}  // namespace ncq::cli
