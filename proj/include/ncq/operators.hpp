// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "ncq/config.hpp"

namespace ncq {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Bloch = std::array<double, 3>;

/// A d x d Hermitian matrix. The stored matrix is exactly Hermitian: the
/// constructor checks the input against `herm_tol` and then symmetrizes it.
class HermitianOp {
  public:
    HermitianOp() = default;
    explicit HermitianOp(const Matrix &m, double herm_tol = Tolerances{}.herm);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix &matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }
    Vector eigenvalues() const;
    double min_eigenvalue() const;
    double max_eigenvalue() const;

  private:
    Matrix m_;
};

struct MeasurementSetting {
    std::string label;
    std::vector<HermitianOp> effects;
};

/// Indexed family of POVMs {M_{b|y}} on one system. Effects are also
/// addressable by a flat index that runs over settings in order and, inside a
/// setting, over outcomes.
class MultiMeasurement {
  public:
    MultiMeasurement() = default;
    MultiMeasurement(int dim, std::vector<MeasurementSetting> settings, const Tolerances &tol = {});

    int dim() const { return dim_; }
    int num_settings() const { return static_cast<int>(settings_.size()); }
    int num_outcomes(int y) const { return static_cast<int>(settings_.at(y).effects.size()); }
    int num_effects() const { return static_cast<int>(flat_.size()); }
    const std::vector<MeasurementSetting> &settings() const { return settings_; }
    const HermitianOp &effect(int b, int y) const { return settings_.at(y).effects.at(b); }
    const HermitianOp &effect(int flat) const;
    int flat_index(int b, int y) const { return offsets_.at(y) + b; }
    /// (setting, outcome) of a flat index.
    std::pair<int, int> setting_outcome(int flat) const { return flat_.at(flat); }
    std::vector<HermitianOp> effects() const;

  private:
    int dim_ = 0;
    std::vector<MeasurementSetting> settings_;
    std::vector<int> offsets_;
    std::vector<std::pair<int, int>> flat_;
};

struct SourceElement {
    double weight = 0.0;
    HermitianOp state;
};

struct SourceSetting {
    std::string label;
    std::vector<SourceElement> elements;
};

/// Indexed family of ensembles {p(a|x), rho_{a|x}}.
class MultiSource {
  public:
    MultiSource() = default;
    MultiSource(int dim, std::vector<SourceSetting> settings, const Tolerances &tol = {});

    int dim() const { return dim_; }
    int num_settings() const { return static_cast<int>(settings_.size()); }
    int num_outcomes(int x) const { return static_cast<int>(settings_.at(x).elements.size()); }
    int num_elements() const;
    const std::vector<SourceSetting> &settings() const { return settings_; }
    const SourceElement &element(int a, int x) const { return settings_.at(x).elements.at(a); }

  private:
    int dim_ = 0;
    std::vector<SourceSetting> settings_;
};

/// Unweighted set of density operators.
class StateSet {
  public:
    StateSet() = default;
    StateSet(int dim, std::vector<HermitianOp> states, std::vector<std::string> labels = {},
             const Tolerances &tol = {});

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(states_.size()); }
    const std::vector<HermitianOp> &states() const { return states_; }
    const HermitianOp &state(int a) const { return states_.at(a); }
    const std::vector<std::string> &labels() const { return labels_; }

  private:
    int dim_ = 0;
    std::vector<HermitianOp> states_;
    std::vector<std::string> labels_;
};

/// Table p(a,b|x,y) with ragged outcome counts per setting.
class Behavior {
  public:
    Behavior() = default;
    Behavior(std::vector<int> a_sizes, std::vector<int> b_sizes);

    int num_x() const { return static_cast<int>(a_sizes_.size()); }
    int num_y() const { return static_cast<int>(b_sizes_.size()); }
    int num_a(int x) const { return a_sizes_.at(x); }
    int num_b(int y) const { return b_sizes_.at(y); }
    const std::vector<int> &a_sizes() const { return a_sizes_; }
    const std::vector<int> &b_sizes() const { return b_sizes_; }
    int size() const { return static_cast<int>(table_.size()); }

    /// Flat position of (a,b|x,y).
    int index(int a, int b, int x, int y) const;
    double operator()(int a, int b, int x, int y) const { return table_[index(a, b, x, y)]; }
    double &operator()(int a, int b, int x, int y) { return table_[index(a, b, x, y)]; }
    const std::vector<double> &table() const { return table_; }
    std::vector<double> &table() { return table_; }

    /// p(a|x), read off the y = 0 block.
    double marginal_a(int a, int x) const;
    /// p(b|a,x,y); zero when p(a|x) vanishes.
    double conditional(int a, int b, int x, int y) const;
    void validate(double tol = Tolerances{}.prob) const;

  private:
    std::vector<int> a_sizes_, b_sizes_;
    std::vector<int> a_off_, b_off_;
    int total_b_ = 0;
    std::vector<double> table_;
};

Matrix identity(int dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// (1 + r.sigma) / 2 without normalization of r.
Matrix bloch_operator(const Bloch &r);
Bloch normalized(const Bloch &r);

/// Orthonormal Hermitian basis of d x d matrices: identity/sqrt(d), then the
/// off-diagonal generalized Gell-Mann pairs, then the diagonal ones.
std::vector<HermitianOp> hermitian_basis(int dim);
Vector vectorize(const HermitianOp &op, const std::vector<HermitianOp> &basis);
/// Real coordinates of the Hermitian part of an arbitrary matrix.
Vector vectorize(const Matrix &m);
Matrix reconstruct(const Vector &v, const std::vector<HermitianOp> &basis);
Matrix reconstruct(const Vector &v, int dim);

MultiMeasurement make_trivial_measurement(int dim);
MultiMeasurement make_planar_measurement(int k);

enum class Solid { tetrahedron, octahedron, cube, icosahedron, dodecahedron };
Solid parse_solid(const std::string &name);
std::string solid_name(Solid s);
/// Unit vertex vectors in the fixed canonical order.
std::vector<Bloch> platonic_vertices(Solid s);
MultiMeasurement make_platonic_measurement(Solid s);
MultiMeasurement make_mub_multimeasurement(int dim);

/// k pure states in the x-z plane at angles 2 pi a / k + offset.
StateSet make_planar_states(int k, double offset = 0.0);
StateSet make_named_state_set(const std::string &name);
std::vector<std::string> named_state_sets();
StateSet states_from_bloch(const std::vector<Bloch> &vs, const std::vector<std::string> &labels = {});

MultiMeasurement add_white_noise_measurement(const MultiMeasurement &m, double eta);
StateSet add_white_noise_states(const StateSet &s, double eta);

/// Source with one setting and uniform weights 1/k.
MultiSource uniform_source(const StateSet &s);
/// Source with one setting per state, each deterministic.
MultiSource one_state_per_setting(const StateSet &s);

Behavior quantum_behavior(const MultiSource &p, const MultiMeasurement &m);

double trace_distance(const Matrix &a, const Matrix &b);

}  // namespace ncq
