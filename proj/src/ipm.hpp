// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

// Primal-dual interior-point method for
//   min c'x  s.t.  A x = b,  x in R^nf x R+^nl x S+^{n_1} x ... ,
//   max b'y  s.t.  A'y + z = c,  z in {0}^nf x R+^nl x S+^{n_1} x ... ,
// where each PSD block is a complex Hermitian matrix stored through its
// coordinates in hermitian_basis(n).

#pragma once

#include <string>
#include <vector>

#include "ncq/operators.hpp"

namespace ncq::conic::detail {

struct CoreBlock {
    int n = 0;
    /// Rows of A this block touches, ascending.
    std::vector<int> rows;
    /// rows.size() x n^2.
    RealMatrix a;
    /// n^2 coordinates of the cost matrix.
    Vector c;
};

struct CoreProblem {
    int m = 0;
    Vector b;
    RealMatrix a_free;
    Vector c_free;
    RealMatrix a_lp;
    Vector c_lp;
    std::vector<CoreBlock> blocks;
};

enum class CoreStatus { optimal, primal_infeasible, dual_infeasible, failure };

struct CoreResult {
    CoreStatus status = CoreStatus::failure;
    Vector x_free, x_lp;
    std::vector<Matrix> x_blocks;
    Vector y;
    Vector z_lp;
    std::vector<Matrix> z_blocks;
    double pobj = 0.0, dobj = 0.0;
    int iterations = 0;
    double relp = 0.0, reld = 0.0, relgap = 0.0;
    std::string message;
};

CoreResult solve_core(const CoreProblem &p, double eps, int max_iters, bool verbose);

}  // namespace ncq::conic::detail
