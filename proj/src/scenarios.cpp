// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/scenarios.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ncq/error.hpp"

namespace ncq {

MultiMeasurement flag_convexify_measurement(const MultiMeasurement &m, std::vector<double> dist) {
    const int ny = m.num_settings();
    if (dist.empty()) dist.assign(ny, 1.0 / ny);
    require(static_cast<int>(dist.size()) == ny, "flag distribution size does not match the settings");
    double total = 0.0;
    for (double p : dist) {
        require(p > 0.0, "flag distribution must have full support");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12 * ny, "flag distribution does not sum to 1");
    if (ny == 1) return m;
    MeasurementSetting out{"flag", {}};
    for (int y = 0; y < ny; ++y)
        for (int b = 0; b < m.num_outcomes(y); ++b) out.effects.emplace_back(dist[y] * m.effect(b, y).matrix());
    return MultiMeasurement(m.dim(), {out});
}

StateSetReduction multisource_to_state_set(const MultiSource &p, double dedup_tol) {
    StateSetReduction r;
    std::vector<HermitianOp> states;
    std::vector<std::string> labels;
    r.index.resize(p.num_settings());
    for (int x = 0; x < p.num_settings(); ++x) {
        for (int a = 0; a < p.num_outcomes(x); ++a) {
            const auto &el = p.element(a, x);
            if (el.weight <= Tolerances{}.prob) {
                r.index[x].push_back(-1);
                r.warnings.push_back("skipped zero-weight element a=" + std::to_string(a) + " x=" + std::to_string(x));
                continue;
            }
            int found = -1;
            for (size_t s = 0; s < states.size() && found < 0; ++s)
                if (trace_distance(states[s].matrix(), el.state.matrix()) <= dedup_tol) found = static_cast<int>(s);
            if (found < 0) {
                found = static_cast<int>(states.size());
                states.push_back(el.state);
                labels.push_back(std::to_string(a) + "|" + std::to_string(x));
            }
            r.index[x].push_back(found);
        }
    }
    require(!states.empty(), "multi-source has no element with positive weight");
    r.states = StateSet(p.dim(), std::move(states), std::move(labels));
    return r;
}

BipartiteState::BipartiteState(int da, int db, const Matrix &rho, const Tolerances &tol) : da_(da), db_(db) {
    require(da >= 1 && db >= 1, "bipartite dimensions must be positive");
    require(rho.rows() == da * db && rho.cols() == da * db, "bipartite state has the wrong size");
    HermitianOp h(rho, tol.herm);
    require(h.min_eigenvalue() >= -tol.psd, "bipartite state is not positive semidefinite");
    require(std::abs(h.trace() - 1.0) <= tol.trace, "bipartite state does not have unit trace");
    rho_ = h.matrix();
}

BipartiteState isotropic_state(double eta) {
    require(eta >= 0.0 && eta <= 1.0, "isotropic_state: eta must lie in [0, 1]");
    Matrix psi = Matrix::Zero(4, 1);
    psi(0, 0) = psi(3, 0) = 1.0 / std::sqrt(2.0);
    Matrix rho = eta * psi * psi.adjoint() + (1.0 - eta) * identity(4) / 4.0;
    return BipartiteState(2, 2, rho);
}

BipartiteState product_state(const HermitianOp &a, const HermitianOp &b) {
    const int da = a.dim(), db = b.dim();
    Matrix rho(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) rho.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return BipartiteState(da, db, rho);
}

MultiSource steer(const BipartiteState &rho, const MultiMeasurement &n) {
    require(n.dim() == rho.dim_a(), "steer: measurement dimension does not match subsystem A");
    const int da = rho.dim_a(), db = rho.dim_b();
    const Matrix &r = rho.matrix();
    std::vector<SourceSetting> settings;
    for (int x = 0; x < n.num_settings(); ++x) {
        SourceSetting s{n.settings()[x].label, {}};
        for (int a = 0; a < n.num_outcomes(x); ++a) {
            const Matrix &e = n.effect(a, x).matrix();
            // Tr_A[(E (x) 1) rho] = sum_{ij} E_ji rho_{(i,.),(j,.)}
            Matrix cond = Matrix::Zero(db, db);
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < da; ++j) cond += e(j, i) * r.block(i * db, j * db, db, db);
            double p = cond.trace().real();
            if (p <= 1e-14) {
                s.elements.push_back({0.0, HermitianOp(identity(db) / db)});
            } else {
                s.elements.push_back({p, HermitianOp(cond / p, 1e-10)});
            }
        }
        double total = 0.0;
        for (const auto &el : s.elements) total += el.weight;
        for (auto &el : s.elements) el.weight /= total;
        settings.push_back(std::move(s));
    }
    return MultiSource(db, std::move(settings));
}

double no_signaling_residual(const MultiSource &p) {
    std::vector<Matrix> marg;
    for (int x = 0; x < p.num_settings(); ++x) {
        Matrix m = Matrix::Zero(p.dim(), p.dim());
        for (int a = 0; a < p.num_outcomes(x); ++a) m += p.element(a, x).weight * p.element(a, x).state.matrix();
        marg.push_back(m);
    }
    double worst = 0.0;
    for (size_t i = 0; i < marg.size(); ++i)
        for (size_t j = i + 1; j < marg.size(); ++j) worst = std::max(worst, (marg[i] - marg[j]).norm());
    return worst;
}

MultiSource uniform_rescale_state_set(const StateSet &s) { return uniform_source(s); }

QuantifierReport white_noise_robustness_source(const MultiSource &p, const QuantifierOptions &opt,
                                               const EnumerationOptions &eopt) {
    StateSetReduction red = multisource_to_state_set(p);
    VertexSet v = state_vertices(red.states, eopt);
    return white_noise_robustness_states(red.states, v, opt);
}

}  // namespace ncq
