// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ncq/identities.hpp"

namespace ncq {

/// {p >= 0 : eq * p = rhs}. Variables follow `layout`; `group` maps each
/// variable to its normalization group (a setting for measurements, the
/// single group 0 for state sets).
struct AssignmentPolytope {
    Side side = Side::measurement;
    std::vector<std::pair<int, int>> layout;
    std::vector<int> group;
    int num_groups = 0;
    /// First num_groups rows are the normalizations, the rest are identities.
    RealMatrix eq;
    Vector rhs;
    /// A strictly feasible-in-the-equalities point (Tr M / d, or uniform 1/k).
    Vector interior;

    int num_vars() const { return static_cast<int>(layout.size()); }
};

struct VertexSet {
    std::vector<std::pair<int, int>> layout;
    /// One column per extreme point.
    RealMatrix vertices;

    int count() const { return static_cast<int>(vertices.cols()); }
    Vector vertex(int l) const { return vertices.col(l); }
};

struct EnumerationOptions {
    double vert_tol = Tolerances{}.vert;
    double dedup_tol = Tolerances{}.dedup;
    /// Cap on the number of candidate bases C(n, rank).
    double max_candidates = 1e7;
    int jobs = 1;
    /// Snap identity rows to nearby rationals before enumeration.
    bool snap = false;
};

AssignmentPolytope build_measurement_polytope(const MultiMeasurement &m, const IdentitySpace &o,
                                              const EnumerationOptions &opt = {});
/// Polytope of the uniformly rescaled set {rho_a / k}.
AssignmentPolytope build_preparation_polytope(const StateSet &s, const IdentitySpace &o,
                                              const EnumerationOptions &opt = {});

/// All extreme points of the polytope by exhaustive basic-solution search.
VertexSet enumerate_vertices(const AssignmentPolytope &p, const EnumerationOptions &opt = {});

/// Deterministic assignments when every identity is a combination of
/// normalization differences; nullopt otherwise.
std::optional<VertexSet> simplex_product_vertices(const AssignmentPolytope &p, const EnumerationOptions &opt = {});

/// Shortcut when it applies, general enumeration otherwise.
VertexSet polytope_vertices(const AssignmentPolytope &p, const EnumerationOptions &opt = {});

/// Max violation of the polytope constraints at x (equalities and nonnegativity).
double constraint_violation(const AssignmentPolytope &p, const Vector &x);

/// Rank of the constraints active at x (the equalities plus the zero coordinates).
int active_rank(const AssignmentPolytope &p, const Vector &x, double tol = 1e-9);

}  // namespace ncq
