// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace ncq {

/// Numerical tolerances shared by every stage of the pipeline.
struct Tolerances {
    double herm = 1e-12;
    double psd = 1e-10;
    double trace = 1e-10;
    double prob = 1e-12;
    /// Relative factor for the numerical-rank cut in null-space extraction.
    double null_rel = 1e-10;
    double vert = 1e-9;
    double dedup = 1e-8;
    double verdict = 1e-7;
    double cert = 1e-7;
    double witness = 1e-9;
    double solver_eps = 1e-9;
};

}  // namespace ncq
