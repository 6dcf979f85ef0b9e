// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

// JSON documents carry "schema": 1 and a "type" tag. Complex matrices are
// arrays of rows, each row an array of [re, im] pairs; a flat row-major array
// of d*d pairs and plain real entries are accepted on input.

#pragma once

#include <string>

#include "json.hpp"
#include "ncq/witnesses.hpp"

namespace ncq {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const Matrix &m);
Matrix matrix_from_json(const json &j);

json to_json(const MultiMeasurement &m);
json to_json(const MultiSource &p);
json to_json(const StateSet &s);
json to_json(const Behavior &b);
json to_json(const BipartiteState &r);
json to_json(const IdentitySpace &o);
json to_json(const AssignmentPolytope &p);
json to_json(const VertexSet &v);
json to_json(const QuantifierReport &r);
json to_json(const NCInequality &i);
json to_json(const NCModelResult &r);
json to_json(const MeasurementWitness &w);
json to_json(const StateWitness &w);
json to_json(const conic::Program &p);

MultiMeasurement measurement_from_json(const json &j, const Tolerances &tol = {});
MultiSource source_from_json(const json &j, const Tolerances &tol = {});
StateSet states_from_json(const json &j, const Tolerances &tol = {});
Behavior behavior_from_json(const json &j);
BipartiteState bipartite_from_json(const json &j, const Tolerances &tol = {});
VertexSet vertices_from_json(const json &j);
NCInequality inequality_from_json(const json &j);
conic::Program program_from_json(const json &j);

/// Parse a file; throws Error(parse) on I/O or syntax problems.
json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const json &j);

}  // namespace ncq
