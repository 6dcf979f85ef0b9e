// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/identities.hpp"

#include <algorithm>
#include <cmath>

#include "ncq/error.hpp"

namespace ncq {

IdentitySpace identity_space_of(const std::vector<Matrix> &ops, Side side, std::vector<std::pair<int, int>> layout,
                                const IdentityOptions &opt) {
    require(!ops.empty(), "identity space of an empty family");
    require(layout.size() == ops.size(), "identity layout does not match operator count");
    const int d = static_cast<int>(ops.front().rows());
    const int n = static_cast<int>(ops.size());
    RealMatrix a(d * d, n);
    for (int i = 0; i < n; ++i) {
        require(ops[i].rows() == d, "identity family has mixed dimensions");
        a.col(i) = vectorize(ops[i]);
    }
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    Vector sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    double tol = opt.null_tol > 0.0 ? opt.null_tol : smax * std::max(d * d, n) * opt.null_rel;
    int r = 0;
    while (r < sv.size() && sv[r] > tol) ++r;

    IdentitySpace out;
    out.side = side;
    out.layout = std::move(layout);
    out.operators = a;
    out.null_tol = tol;
    out.singular_values = sv;
    out.rank = r;
    out.basis = svd.matrixV().rightCols(n - r);
    return out;
}

IdentitySpace measurement_identity_space(const MultiMeasurement &m, const IdentityOptions &opt) {
    std::vector<Matrix> ops;
    std::vector<std::pair<int, int>> layout;
    for (int i = 0; i < m.num_effects(); ++i) {
        ops.push_back(m.effect(i).matrix());
        layout.push_back(m.setting_outcome(i));
    }
    return identity_space_of(ops, Side::measurement, std::move(layout), opt);
}

IdentitySpace preparation_identity_space(const StateSet &s, const IdentityOptions &opt) {
    std::vector<Matrix> ops;
    std::vector<std::pair<int, int>> layout;
    for (int a = 0; a < s.size(); ++a) {
        ops.push_back(s.state(a).matrix());
        layout.emplace_back(0, a);
    }
    return identity_space_of(ops, Side::preparation, std::move(layout), opt);
}

IdentitySpace preparation_identity_space(const MultiSource &p, const IdentityOptions &opt) {
    std::vector<Matrix> ops;
    std::vector<std::pair<int, int>> layout;
    for (int x = 0; x < p.num_settings(); ++x)
        for (int a = 0; a < p.num_outcomes(x); ++a) {
            const auto &el = p.element(a, x);
            ops.push_back(el.weight * el.state.matrix());
            layout.emplace_back(x, a);
        }
    return identity_space_of(ops, Side::preparation, std::move(layout), opt);
}

double verify_identity(const IdentitySpace &space, const Vector &coeffs) {
    require(coeffs.size() == space.operators.cols(), "identity coefficients do not match the layout");
    return (space.operators * coeffs).norm();
}

std::pair<long long, long long> rational_approx(double x, long long max_den) {
    // Convergents h/k of the continued fraction of x.
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(r);
        long long a = static_cast<long long>(fl);
        long long h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        double frac = r - fl;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return {h1, k1};
}

Vector snap_rational(const Vector &v, long long max_den, double tol) {
    Vector out = v;
    for (int i = 0; i < v.size(); ++i) {
        auto [h, k] = rational_approx(v[i], max_den);
        if (k > 0) {
            double c = double(h) / double(k);
            if (std::abs(c - v[i]) <= tol) out[i] = c;
        }
    }
    return out;
}

}  // namespace ncq
