// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ncq/operators.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ncq/error.hpp"

namespace ncq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_square(const Matrix &m) {
    require(m.rows() == m.cols() && m.rows() > 0, "operator must be a nonempty square matrix");
}

void check_state(const HermitianOp &rho, int dim, const Tolerances &tol, const std::string &what) {
    require(rho.dim() == dim, what + ": dimension mismatch");
    require(std::abs(rho.trace() - 1.0) <= tol.trace, what + ": trace is not 1");
    require(rho.min_eigenvalue() >= -tol.psd, what + ": not positive semidefinite");
}

}  // namespace

HermitianOp::HermitianOp(const Matrix &m, double herm_tol) {
    check_square(m);
    double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > herm_tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian (max |A - A^dag| = " << asym << ")";
        fail(os.str());
    }
    m_ = (m + m.adjoint()) / 2.0;
}

Vector HermitianOp::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double HermitianOp::min_eigenvalue() const { return eigenvalues().minCoeff(); }
double HermitianOp::max_eigenvalue() const { return eigenvalues().maxCoeff(); }

MultiMeasurement::MultiMeasurement(int dim, std::vector<MeasurementSetting> settings, const Tolerances &tol)
    : dim_(dim), settings_(std::move(settings)) {
    require(dim >= 1, "measurement dimension must be positive");
    require(!settings_.empty(), "measurement needs at least one setting");
    for (int y = 0; y < num_settings(); ++y) {
        const auto &s = settings_[y];
        require(!s.effects.empty(), "measurement setting " + std::to_string(y) + " has no effects");
        offsets_.push_back(static_cast<int>(flat_.size()));
        Matrix sum = Matrix::Zero(dim, dim);
        for (int b = 0; b < static_cast<int>(s.effects.size()); ++b) {
            const auto &e = s.effects[b];
            require(e.dim() == dim, "effect dimension mismatch");
            require(e.min_eigenvalue() >= -tol.psd,
                    "effect " + std::to_string(b) + " of setting " + std::to_string(y) + " is not PSD");
            sum += e.matrix();
            flat_.emplace_back(y, b);
        }
        double err = (sum - identity(dim)).cwiseAbs().maxCoeff();
        require(err <= std::max(tol.herm, 1e-10), "effects of setting " + std::to_string(y) + " do not sum to identity");
    }
}

const HermitianOp &MultiMeasurement::effect(int flat) const {
    auto [y, b] = flat_.at(flat);
    return settings_[y].effects[b];
}

std::vector<HermitianOp> MultiMeasurement::effects() const {
    std::vector<HermitianOp> out;
    out.reserve(flat_.size());
    for (const auto &s : settings_)
        for (const auto &e : s.effects) out.push_back(e);
    return out;
}

MultiSource::MultiSource(int dim, std::vector<SourceSetting> settings, const Tolerances &tol)
    : dim_(dim), settings_(std::move(settings)) {
    require(dim >= 1, "source dimension must be positive");
    require(!settings_.empty(), "source needs at least one setting");
    for (int x = 0; x < num_settings(); ++x) {
        const auto &s = settings_[x];
        require(!s.elements.empty(), "source setting " + std::to_string(x) + " is empty");
        double total = 0.0;
        for (const auto &el : s.elements) {
            require(el.weight >= -tol.prob, "negative source weight");
            total += el.weight;
            check_state(el.state, dim, tol, "source element");
        }
        require(std::abs(total - 1.0) <= std::max(tol.prob, 1e-12) * s.elements.size(),
                "weights of source setting " + std::to_string(x) + " do not sum to 1");
    }
}

int MultiSource::num_elements() const {
    int n = 0;
    for (const auto &s : settings_) n += static_cast<int>(s.elements.size());
    return n;
}

StateSet::StateSet(int dim, std::vector<HermitianOp> states, std::vector<std::string> labels, const Tolerances &tol)
    : dim_(dim), states_(std::move(states)), labels_(std::move(labels)) {
    require(dim >= 1, "state dimension must be positive");
    require(!states_.empty(), "state set is empty");
    for (const auto &r : states_) check_state(r, dim, tol, "state");
    if (labels_.empty())
        for (int a = 0; a < size(); ++a) labels_.push_back(std::to_string(a));
    require(static_cast<int>(labels_.size()) == size(), "label count does not match state count");
}

Behavior::Behavior(std::vector<int> a_sizes, std::vector<int> b_sizes)
    : a_sizes_(std::move(a_sizes)), b_sizes_(std::move(b_sizes)) {
    require(!a_sizes_.empty() && !b_sizes_.empty(), "behavior needs settings on both sides");
    int ta = 0;
    for (int n : a_sizes_) {
        require(n > 0, "empty preparation setting");
        a_off_.push_back(ta);
        ta += n;
    }
    for (int n : b_sizes_) {
        require(n > 0, "empty measurement setting");
        b_off_.push_back(total_b_);
        total_b_ += n;
    }
    table_.assign(static_cast<size_t>(ta) * total_b_, 0.0);
}

int Behavior::index(int a, int b, int x, int y) const {
    assert(x >= 0 && x < num_x() && y >= 0 && y < num_y());
    assert(a >= 0 && a < a_sizes_[x] && b >= 0 && b < b_sizes_[y]);
    return (a_off_[x] + a) * total_b_ + b_off_[y] + b;
}

double Behavior::marginal_a(int a, int x) const {
    double s = 0.0;
    for (int b = 0; b < b_sizes_[0]; ++b) s += (*this)(a, b, x, 0);
    return s;
}

double Behavior::conditional(int a, int b, int x, int y) const {
    double pa = 0.0;
    for (int bb = 0; bb < b_sizes_[y]; ++bb) pa += (*this)(a, bb, x, y);
    return pa > 0.0 ? (*this)(a, b, x, y) / pa : 0.0;
}

void Behavior::validate(double tol) const {
    for (double v : table_) require(v >= -tol, "behavior has a negative entry");
    for (int x = 0; x < num_x(); ++x)
        for (int y = 0; y < num_y(); ++y) {
            double s = 0.0;
            for (int a = 0; a < a_sizes_[x]; ++a)
                for (int b = 0; b < b_sizes_[y]; ++b) s += (*this)(a, b, x, y);
            require(std::abs(s - 1.0) <= tol * std::max(1, a_sizes_[x] * b_sizes_[y]),
                    "behavior block (x=" + std::to_string(x) + ", y=" + std::to_string(y) + ") is not normalized");
        }
}

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix bloch_operator(const Bloch &r) {
    return (identity(2) + r[0] * pauli_x() + r[1] * pauli_y() + r[2] * pauli_z()) / 2.0;
}

Bloch normalized(const Bloch &r) {
    double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    require(n > 0.0, "cannot normalize a zero vector");
    return {r[0] / n, r[1] / n, r[2] / n};
}

std::vector<HermitianOp> hermitian_basis(int dim) {
    require(dim >= 2, "hermitian_basis needs dim >= 2");
    std::vector<HermitianOp> out;
    out.reserve(dim * dim);
    out.emplace_back(identity(dim) / std::sqrt(double(dim)));
    const double r2 = std::sqrt(2.0);
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
            Matrix s = Matrix::Zero(dim, dim);
            s(j, k) = s(k, j) = 1.0 / r2;
            out.emplace_back(s);
            Matrix a = Matrix::Zero(dim, dim);
            a(j, k) = cplx(0, -1.0 / r2);
            a(k, j) = cplx(0, 1.0 / r2);
            out.emplace_back(a);
        }
    for (int l = 1; l < dim; ++l) {
        Matrix g = Matrix::Zero(dim, dim);
        double n = std::sqrt(double(l) * (l + 1));
        for (int j = 0; j < l; ++j) g(j, j) = 1.0 / n;
        g(l, l) = -double(l) / n;
        out.emplace_back(g);
    }
    return out;
}

Vector vectorize(const HermitianOp &op, const std::vector<HermitianOp> &basis) {
    require(!basis.empty(), "empty basis");
    require(op.dim() == basis.front().dim(), "vectorize: dimension mismatch");
    Vector v(basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
        v[i] = (basis[i].matrix().cwiseProduct(op.matrix().transpose())).sum().real();
    return v;
}

Vector vectorize(const Matrix &m) {
    // Direct evaluation of Re Tr[B_u m] for the basis order of hermitian_basis.
    const int d = static_cast<int>(m.rows());
    Vector v(d * d);
    int u = 0;
    v[u++] = m.trace().real() / std::sqrt(double(d));
    const double r2 = std::sqrt(2.0);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            v[u++] = (m(k, j) + m(j, k)).real() / r2;
            // Tr[a m] with a(j,k) = -i/r2, a(k,j) = i/r2.
            v[u++] = (cplx(0, -1) * m(k, j) + cplx(0, 1) * m(j, k)).real() / r2;
        }
    for (int l = 1; l < d; ++l) {
        double n = std::sqrt(double(l) * (l + 1));
        double s = 0.0;
        for (int j = 0; j < l; ++j) s += m(j, j).real();
        v[u++] = (s - l * m(l, l).real()) / n;
    }
    return v;
}

Matrix reconstruct(const Vector &v, const std::vector<HermitianOp> &basis) {
    require(static_cast<size_t>(v.size()) == basis.size(), "reconstruct: length mismatch");
    Matrix m = Matrix::Zero(basis.front().dim(), basis.front().dim());
    for (size_t i = 0; i < basis.size(); ++i) m += v[i] * basis[i].matrix();
    return m;
}

Matrix reconstruct(const Vector &v, int dim) {
    require(v.size() == dim * dim, "reconstruct: length mismatch");
    Matrix m = Matrix::Zero(dim, dim);
    int u = 0;
    m.diagonal().array() += v[u++] / std::sqrt(double(dim));
    const double r2 = std::sqrt(2.0);
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
            double s = v[u++] / r2, a = v[u++] / r2;
            m(j, k) += cplx(s, -a);
            m(k, j) += cplx(s, a);
        }
    for (int l = 1; l < dim; ++l) {
        double c = v[u++] / std::sqrt(double(l) * (l + 1));
        for (int j = 0; j < l; ++j) m(j, j) += c;
        m(l, l) -= l * c;
    }
    return m;
}

MultiMeasurement make_trivial_measurement(int dim) {
    return MultiMeasurement(dim, {{"trivial", {HermitianOp(identity(dim))}}});
}

MultiMeasurement make_planar_measurement(int k) {
    require(k >= 3, "planar measurement needs k >= 3");
    MeasurementSetting s{"planar" + std::to_string(k), {}};
    for (int b = 0; b < k; ++b) {
        double th = 2.0 * kPi * b / k;
        s.effects.emplace_back((identity(2) + std::cos(th) * pauli_x() + std::sin(th) * pauli_z()) / double(k));
    }
    return MultiMeasurement(2, {s});
}

Solid parse_solid(const std::string &name) {
    if (name == "tetrahedron") return Solid::tetrahedron;
    if (name == "octahedron") return Solid::octahedron;
    if (name == "cube") return Solid::cube;
    if (name == "icosahedron") return Solid::icosahedron;
    if (name == "dodecahedron") return Solid::dodecahedron;
    fail("unknown platonic solid '" + name + "'");
}

std::string solid_name(Solid s) {
    switch (s) {
        case Solid::tetrahedron: return "tetrahedron";
        case Solid::octahedron: return "octahedron";
        case Solid::cube: return "cube";
        case Solid::icosahedron: return "icosahedron";
        case Solid::dodecahedron: return "dodecahedron";
    }
    return "";
}

std::vector<Bloch> platonic_vertices(Solid s) {
    const double q = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Bloch> v;
    const double pm[2] = {1.0, -1.0};
    switch (s) {
        case Solid::tetrahedron:
            v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
            break;
        case Solid::octahedron:
            v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
            break;
        case Solid::cube:
            for (double a : pm)
                for (double b : pm)
                    for (double c : pm) v.push_back({a, b, c});
            break;
        case Solid::icosahedron:
            for (double a : pm)
                for (double b : pm) v.push_back({0, a, b * q});
            for (double a : pm)
                for (double b : pm) v.push_back({a, b * q, 0});
            for (double a : pm)
                for (double b : pm) v.push_back({a * q, 0, b});
            break;
        case Solid::dodecahedron:
            for (double a : pm)
                for (double b : pm)
                    for (double c : pm) v.push_back({a, b, c});
            for (double a : pm)
                for (double b : pm) v.push_back({0, a * q, b / q});
            for (double a : pm)
                for (double b : pm) v.push_back({a * q, b / q, 0});
            for (double a : pm)
                for (double b : pm) v.push_back({a / q, 0, b * q});
            break;
    }
    for (auto &r : v) r = normalized(r);
    return v;
}

MultiMeasurement make_platonic_measurement(Solid s) {
    auto vs = platonic_vertices(s);
    const double k = double(vs.size());
    MeasurementSetting st{solid_name(s), {}};
    for (const auto &r : vs) st.effects.emplace_back(bloch_operator(r) * (2.0 / k));
    return MultiMeasurement(2, {st});
}

namespace {

std::vector<HermitianOp> projectors_of_columns(const Matrix &basis) {
    std::vector<HermitianOp> out;
    for (int j = 0; j < basis.cols(); ++j) {
        Eigen::VectorXcd v = basis.col(j);
        out.emplace_back(v * v.adjoint(), 1e-12);
    }
    return out;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace

MultiMeasurement make_mub_multimeasurement(int dim) {
    std::vector<MeasurementSetting> settings;
    if (dim == 2) {
        const char *names[3] = {"Z", "X", "Y"};
        const std::vector<Bloch> axes = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
        for (int y = 0; y < 3; ++y) {
            const auto &n = axes[y];
            Bloch m{-n[0], -n[1], -n[2]};
            settings.push_back({names[y], {HermitianOp(bloch_operator(n)), HermitianOp(bloch_operator(m))}});
        }
    } else if (dim == 3) {
        settings.push_back({"computational", projectors_of_columns(Matrix::Identity(3, 3))});
        const cplx w = std::polar(1.0, 2.0 * kPi / 3.0);
        for (int k = 0; k < 3; ++k) {
            Matrix cols(3, 3);
            for (int j = 0; j < 3; ++j)
                for (int n = 0; n < 3; ++n) cols(n, j) = std::pow(w, (k * n * n + j * n) % 3) / std::sqrt(3.0);
            settings.push_back({"phase" + std::to_string(k), projectors_of_columns(cols)});
        }
    } else if (dim == 4) {
        // Each basis is the joint eigenbasis of two commuting two-qubit Paulis.
        const Matrix I = identity(2), X = pauli_x(), Y = pauli_y(), Z = pauli_z();
        struct Pair {
            const char *name;
            Matrix p1, p2;
        };
        std::vector<Pair> pairs = {
            {"ZI,IZ", kron(Z, I), kron(I, Z)}, {"XI,IX", kron(X, I), kron(I, X)}, {"YI,IY", kron(Y, I), kron(I, Y)},
            {"XY,YZ", kron(X, Y), kron(Y, Z)}, {"YX,ZY", kron(Y, X), kron(Z, Y)},
        };
        const Matrix I4 = identity(4);
        for (const auto &p : pairs) {
            MeasurementSetting s{p.name, {}};
            for (double s1 : {1.0, -1.0})
                for (double s2 : {1.0, -1.0}) s.effects.emplace_back((I4 + s1 * p.p1) * (I4 + s2 * p.p2) / 4.0, 1e-12);
            settings.push_back(std::move(s));
        }
    } else {
        fail("MUB construction is only available for dim 2, 3 and 4");
    }
    return MultiMeasurement(dim, std::move(settings));
}

StateSet states_from_bloch(const std::vector<Bloch> &vs, const std::vector<std::string> &labels) {
    std::vector<HermitianOp> states;
    for (const auto &r : vs) states.emplace_back(bloch_operator(normalized(r)));
    return StateSet(2, std::move(states), labels);
}

StateSet make_planar_states(int k, double offset) {
    require(k >= 1, "planar state set needs k >= 1");
    std::vector<Bloch> vs;
    for (int a = 0; a < k; ++a) {
        double th = 2.0 * kPi * a / k + offset;
        vs.push_back({std::cos(th), 0.0, std::sin(th)});
    }
    return states_from_bloch(vs);
}

std::vector<std::string> named_state_sets() {
    return {"bb84_states", "six_state", "spekkens6", "cube8", "icosahedron12"};
}

StateSet make_named_state_set(const std::string &name) {
    if (name == "bb84_states")
        return states_from_bloch({{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}}, {"0", "1", "+", "-"});
    if (name == "six_state")
        return states_from_bloch({{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}},
                                 {"0", "1", "+", "-", "+i", "-i"});
    if (name == "spekkens6") {
        // Three antipodal pairs at 120 degrees in one great circle.
        std::vector<Bloch> vs;
        for (int a = 0; a < 6; ++a) {
            double th = kPi * a / 3.0;
            vs.push_back({std::sin(th), 0.0, std::cos(th)});
        }
        return states_from_bloch(vs);
    }
    if (name == "cube8") return states_from_bloch(platonic_vertices(Solid::cube));
    if (name == "icosahedron12") return states_from_bloch(platonic_vertices(Solid::icosahedron));
    fail("unknown state set '" + name + "'");
}

MultiMeasurement add_white_noise_measurement(const MultiMeasurement &m, double eta) {
    require(eta >= 0.0 && eta <= 1.0, "noise parameter must lie in [0,1]");
    const int d = m.dim();
    std::vector<MeasurementSetting> out;
    for (const auto &s : m.settings()) {
        MeasurementSetting ns{s.label, {}};
        for (const auto &e : s.effects)
            ns.effects.emplace_back(eta * e.matrix() + (1.0 - eta) * e.trace() / d * identity(d));
        out.push_back(std::move(ns));
    }
    return MultiMeasurement(d, std::move(out));
}

StateSet add_white_noise_states(const StateSet &s, double eta) {
    require(eta >= 0.0 && eta <= 1.0, "noise parameter must lie in [0,1]");
    const int d = s.dim();
    std::vector<HermitianOp> out;
    for (const auto &r : s.states()) out.emplace_back(eta * r.matrix() + (1.0 - eta) / d * identity(d));
    return StateSet(d, std::move(out), s.labels());
}

MultiSource uniform_source(const StateSet &s) {
    SourceSetting st{"uniform", {}};
    for (const auto &r : s.states()) st.elements.push_back({1.0 / s.size(), r});
    return MultiSource(s.dim(), {st});
}

MultiSource one_state_per_setting(const StateSet &s) {
    std::vector<SourceSetting> out;
    for (int a = 0; a < s.size(); ++a) out.push_back({s.labels()[a], {{1.0, s.state(a)}}});
    return MultiSource(s.dim(), std::move(out));
}

Behavior quantum_behavior(const MultiSource &p, const MultiMeasurement &m) {
    require(p.dim() == m.dim(), "quantum_behavior: dimension mismatch");
    std::vector<int> as, bs;
    for (int x = 0; x < p.num_settings(); ++x) as.push_back(p.num_outcomes(x));
    for (int y = 0; y < m.num_settings(); ++y) bs.push_back(m.num_outcomes(y));
    Behavior beh(as, bs);
    for (int x = 0; x < p.num_settings(); ++x)
        for (int a = 0; a < p.num_outcomes(x); ++a) {
            const auto &el = p.element(a, x);
            for (int y = 0; y < m.num_settings(); ++y)
                for (int b = 0; b < m.num_outcomes(y); ++b)
                    beh(a, b, x, y) = el.weight * (m.effect(b, y).matrix() * el.state.matrix()).trace().real();
        }
    return beh;
}

double trace_distance(const Matrix &a, const Matrix &b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((a - b + (a - b).adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace ncq
