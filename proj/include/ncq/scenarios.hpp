// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ncq/quantifiers.hpp"

namespace ncq {

/// Single measurement with effects dist(y) * M_{b|y}, flat-indexed by (y, b).
/// An empty dist means uniform.
MultiMeasurement flag_convexify_measurement(const MultiMeasurement &m, std::vector<double> dist = {});

struct StateSetReduction {
    StateSet states;
    /// index[x][a] is the state of element (a, x), or -1 for zero-weight elements.
    std::vector<std::vector<int>> index;
    std::vector<std::string> warnings;
};

/// Distinct normalized states of a multi-source (trace-distance dedup).
StateSetReduction multisource_to_state_set(const MultiSource &p, double dedup_tol = 1e-10);

class BipartiteState {
  public:
    BipartiteState() = default;
    BipartiteState(int da, int db, const Matrix &rho, const Tolerances &tol = {});

    int dim_a() const { return da_; }
    int dim_b() const { return db_; }
    /// Basis index i_A * d_B + i_B.
    const Matrix &matrix() const { return rho_; }

  private:
    int da_ = 0, db_ = 0;
    Matrix rho_;
};

/// eta |Psi+><Psi+| + (1 - eta) 1/4.
BipartiteState isotropic_state(double eta);
BipartiteState product_state(const HermitianOp &a, const HermitianOp &b);

/// Assemblage p(a|x) rho_{a|x} = Tr_A[(N_{a|x} (x) 1) rho_AB]. Elements with
/// p(a|x) = 0 carry the maximally mixed state.
MultiSource steer(const BipartiteState &rho, const MultiMeasurement &n);

/// max over x, x' of || sum_a p(a|x) rho_{a|x} - sum_a p(a|x') rho_{a|x'} ||.
double no_signaling_residual(const MultiSource &p);

/// The single-setting source {1/k, rho_a}.
MultiSource uniform_rescale_state_set(const StateSet &s);

/// Robustness of a multi-source through its normalized state set.
QuantifierReport white_noise_robustness_source(const MultiSource &p, const QuantifierOptions &opt = {},
                                               const EnumerationOptions &eopt = {});

}  // namespace ncq
