// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "ncq/operators.hpp"

namespace ncq {

enum class Side { measurement, preparation };

/// Null space of a family of vectorized operators. Column j of `basis` is an
/// identity: sum_i basis(i, j) * op_i = 0, with ops ordered as in `layout`.
struct IdentitySpace {
    Side side = Side::measurement;
    /// (setting, outcome) of each coefficient.
    std::vector<std::pair<int, int>> layout;
    RealMatrix basis;
    /// Rank of the operator family; basis has n - rank columns.
    int rank = 0;
    /// Vectorized operators (one column each) the identities act on.
    RealMatrix operators;
    double null_tol = 0.0;
    /// Singular values of `operators`, descending.
    Vector singular_values;
};

struct IdentityOptions {
    /// Absolute threshold; when <= 0 the relative rule sigma_max * max(m, n) * rel is used.
    double null_tol = 0.0;
    double null_rel = Tolerances{}.null_rel;
};

IdentitySpace identity_space_of(const std::vector<Matrix> &ops, Side side, std::vector<std::pair<int, int>> layout,
                                const IdentityOptions &opt = {});
IdentitySpace measurement_identity_space(const MultiMeasurement &m, const IdentityOptions &opt = {});
IdentitySpace preparation_identity_space(const StateSet &s, const IdentityOptions &opt = {});
/// Identities of the weighted states p(a|x) rho_{a|x}.
IdentitySpace preparation_identity_space(const MultiSource &p, const IdentityOptions &opt = {});

/// Norm of sum_i coeffs_i * op_i.
double verify_identity(const IdentitySpace &space, const Vector &coeffs);

/// Continued-fraction approximation with bounded denominator.
std::pair<long long, long long> rational_approx(double x, long long max_den);
/// Replace each entry of v by its best rational approximation when that lies within tol.
Vector snap_rational(const Vector &v, long long max_den = 1000000, double tol = 1e-9);

}  // namespace ncq
