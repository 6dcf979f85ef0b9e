// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ncq/operators.hpp"

namespace ncq::conic {

enum class Sense { minimize, maximize };
enum class Rel { eq, ge, le };
enum class Domain { free, nonneg };
enum class Status { optimal, infeasible, unbounded, numerical_failure };

std::string to_string(Status s);

/// Re Tr[coeff * X_block].
struct BlockTerm {
    int block = 0;
    Matrix coeff;
};

/// sum_j a_j s_j + sum_k Re Tr[C_k X_k] + constant.
struct LinExpr {
    std::vector<std::pair<int, double>> scalars;
    std::vector<BlockTerm> blocks;
    double constant = 0.0;

    LinExpr &add(int scalar, double coeff) {
        scalars.emplace_back(scalar, coeff);
        return *this;
    }
    LinExpr &add_block(int block, Matrix coeff) {
        blocks.push_back({block, std::move(coeff)});
        return *this;
    }
};

/// weight * V X_block V^dag. An empty V stands for the identity.
struct Embedding {
    int block = 0;
    Matrix v;
    double weight = 1.0;
};

/// Hermitian-valued affine expression C + sum_j s_j H_j + sum_k w_k V_k X_k V_k^dag.
struct MatExpr {
    int dim = 0;
    Matrix constant;
    std::vector<std::pair<int, Matrix>> scalars;
    std::vector<Embedding> blocks;

    explicit MatExpr(int d = 0) : dim(d), constant(Matrix::Zero(d, d)) {}
    MatExpr &add(int scalar, Matrix h) {
        scalars.emplace_back(scalar, std::move(h));
        return *this;
    }
    MatExpr &add_block(int block, double weight = 1.0, Matrix v = {}) {
        blocks.push_back({block, std::move(v), weight});
        return *this;
    }
};

struct ScalarVar {
    std::string name;
    Domain domain = Domain::free;
};

struct PsdVar {
    std::string name;
    int dim = 0;
};

enum class ConstraintKind { linear, matrix_eq, lmi };

struct Constraint {
    ConstraintKind kind = ConstraintKind::linear;
    std::string name;
    LinExpr lin;
    Rel rel = Rel::eq;
    double rhs = 0.0;
    MatExpr mat;
    /// Compression for LMIs: U^dag expr U >= 0. Empty means identity.
    Matrix u;
};

/// A linear program over free and nonnegative scalars and Hermitian PSD blocks,
/// with scalar constraints, Hermitian matrix equalities and LMIs.
class Program {
  public:
    int add_scalar(Domain d = Domain::free, std::string name = {});
    /// dim^2 free scalars: the coordinates of a Hermitian matrix in hermitian_basis(dim).
    std::vector<int> add_hermitian(int dim, const std::string &name = {});
    int add_psd(int dim, std::string name = {});

    int add_linear(LinExpr e, Rel rel, double rhs, std::string name = {});
    /// expr == 0.
    int add_matrix_eq(MatExpr e, std::string name = {});
    /// U^dag expr U >= 0 (PSD).
    int add_lmi(MatExpr e, Matrix u = {}, std::string name = {});
    void set_objective(Sense s, LinExpr e);

    const std::vector<ScalarVar> &scalars() const { return scalars_; }
    const std::vector<PsdVar> &blocks() const { return blocks_; }
    const std::vector<Constraint> &constraints() const { return constraints_; }
    Sense sense() const { return sense_; }
    const LinExpr &objective() const { return objective_; }

    /// Throws if any index is out of range or a coefficient has the wrong shape.
    void validate() const;

  private:
    std::vector<ScalarVar> scalars_;
    std::vector<PsdVar> blocks_;
    std::vector<Constraint> constraints_;
    Sense sense_ = Sense::minimize;
    LinExpr objective_;
};

/// Matrix-valued sum of hermitian coordinates: sum_t coords[t] * B_t.
MatExpr hermitian_expr(const std::vector<int> &coords, int dim, double scale = 1.0);
/// Linear functional Re Tr[c X] for X given by hermitian coordinates.
LinExpr hermitian_trace(const std::vector<int> &coords, const Matrix &c, double scale = 1.0);
Matrix hermitian_value(const std::vector<int> &coords, const std::vector<double> &scalars, int dim);

enum class Form { automatic, primal, dual };

struct SolveOptions {
    double eps = 1e-9;
    int max_iters = 250;
    Form form = Form::automatic;
    bool verbose = false;
    /// Read NCQ_SOLVER_EPS / NCQ_MAX_ITERS when set.
    bool env_overrides = true;
};

/// Dual multipliers follow one convention for both senses:
///   grad f = sum_i y_i grad g_i + sum_k <W_k, grad LMI_k> + (variable cone terms).
/// For minimization ge-rows have y >= 0, le-rows y <= 0 and W >= 0; signs flip
/// for maximization.
struct Solution {
    Status status = Status::numerical_failure;
    Sense sense = Sense::minimize;
    double objective = 0.0;
    /// Objective of the other side of the solver's primal-dual pair.
    double dual_objective = 0.0;
    std::vector<double> scalars;
    std::vector<Matrix> blocks;
    /// One entry per constraint: 1x1 for linear rows, dim x dim for matrix
    /// equalities, compressed dim for LMIs.
    std::vector<Matrix> duals;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    std::string form;
    std::string message;

    bool optimal() const { return status == Status::optimal; }
};

Solution solve(const Program &p, const SolveOptions &opt = {});

/// Gap between a program and the separately solved dual program: dual minus
/// primal for a maximization primal, primal minus dual for a minimization.
double check_duality_gap(const Solution &primal, const Solution &dual);

/// Max violation of the constraints of p at the values in s.
double constraint_violation(const Program &p, const Solution &s);

}  // namespace ncq::conic
