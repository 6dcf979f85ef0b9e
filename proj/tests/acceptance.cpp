// Copyright 2026 The ncq Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include "ncq/error.hpp"
#include "test_util.hpp"

using namespace ncq;
using namespace ncq::test;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Instance {
    std::string name;
    OperatorFamily family;
    VertexSet vertices;
    double expected;
    double tol;
    QuantifierReport primal;
    int settings = 1;
};

struct Criterion {
    int id;
    std::string title;
    bool ok = true;
    std::ostringstream detail;

    void check(bool cond, const std::string &what) {
        if (!cond) {
            ok = false;
            detail << " [" << what << "]";
        }
    }
};

Instance measurement_instance(const std::string &name, const MultiMeasurement &m, double expected, double tol) {
    Instance in{name, measurement_family(m, name), measurement_vertices(m), expected, tol, {}, m.num_settings()};
    in.primal = robustness(in.family, in.vertices);
    return in;
}

Instance state_instance(const std::string &name, double expected, double tol) {
    StateSet s = make_named_state_set(name);
    Instance in{name, state_family(s, name), state_vertices(s), expected, tol, {}, 1};
    in.primal = robustness(in.family, in.vertices);
    return in;
}

double worst_error(const std::vector<Instance> &v) {
    double w = 0.0;
    for (const auto &in : v) w = std::max(w, std::abs(in.primal.value - in.expected));
    return w;
}

void check_values(Criterion &c, const std::vector<Instance> &v) {
    for (const auto &in : v)
        c.check(std::abs(in.primal.value - in.expected) <= in.tol, in.name + " = " + std::to_string(in.primal.value));
    c.detail << " max|err|=" << worst_error(v);
}

double decomposition_error(const Instance &in) {
    const auto &g = in.primal.primal_certificate;
    double worst = 0.0;
    for (size_t i = 0; i < in.family.ops.size(); ++i) {
        const Matrix &o = in.family.ops[i];
        Matrix target = in.primal.value * o + (1 - in.primal.value) * o.trace().real() / in.family.dim * identity(in.family.dim);
        Matrix acc = Matrix::Zero(o.rows(), o.cols());
        for (int l = 0; l < in.vertices.count(); ++l) acc += in.vertices.vertices(static_cast<int>(i), l) * g[l];
        worst = std::max(worst, (acc - target).norm());
    }
    for (const auto &x : g) worst = std::max(worst, -eig_min(x));
    return worst;
}

double farkas_worst(const Behavior &beh, const VertexSet &vp, const VertexSet &vm,
                    const std::vector<std::vector<int>> &state_of, const NCInequality &ineq, int samples,
                    std::mt19937 &rng) {
    std::exponential_distribution<double> e(1.0);
    double worst = -1e300;
    for (int t = 0; t < samples; ++t) {
        RealMatrix nu(vp.count(), vm.count());
        for (int i = 0; i < nu.rows(); ++i)
            for (int j = 0; j < nu.cols(); ++j) nu(i, j) = e(rng);
        nu /= nu.sum();
        double lhs = evaluate_inequality(ineq, noncontextual_behavior(beh, vp, vm, state_of, nu)).lhs;
        worst = std::max(worst, ineq.sense == IneqSense::le ? lhs - ineq.bound : ineq.bound - lhs);
    }
    return worst;
}

}  // namespace

int main(int argc, char **argv) {
    bool include_slow = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--include-slow") == 0) include_slow = true;

    std::vector<Criterion> out;
    auto start = [&](int id, std::string title) -> Criterion & {
        out.push_back(Criterion{id, std::move(title)});
        return out.back();
    };
    auto guard = [](Criterion &c, const std::function<void()> &f) {
        try {
            f();
        } catch (const std::exception &e) {
            c.check(false, std::string("exception: ") + e.what());
        }
    };

    std::vector<Instance> planar, solids, mubs, states;

    {
        Criterion &c = start(1, "planar measurement robustness, k=3..8");
        guard(c, [&] {
            auto t0 = Clock::now();
            const double vals[] = {1.0,
                                   std::sqrt(2.0) / 2.0,
                                   (std::sqrt(5.0) - 1.0) / 2.0,
                                   std::sqrt(3.0) / 3.0,
                                   1.0 / (2.0 * std::cos(kPi / 7.0)),
                                   std::sqrt((2.0 - std::sqrt(2.0)) / 2.0)};
            for (int k = 3; k <= 8; ++k)
                planar.push_back(
                    measurement_instance("planar" + std::to_string(k), make_planar_measurement(k), vals[k - 3], 1e-5));
            check_values(c, planar);
            double dt = seconds_since(t0);
            c.check(dt < 30.0, "runtime");
            c.detail << " runtime=" << dt << "s";
        });
    }
    {
        Criterion &c = start(2, "platonic measurement robustness");
        guard(c, [&] {
            const double ico = std::sqrt((5.0 - 2.0 * std::sqrt(5.0)) / 3.0);
            const std::pair<Solid, double> list[] = {{Solid::tetrahedron, 1.0},
                                                     {Solid::octahedron, std::sqrt(3.0) / 3.0},
                                                     {Solid::cube, std::sqrt(3.0) / 3.0},
                                                     {Solid::icosahedron, ico},
                                                     {Solid::dodecahedron, ico}};
            for (auto [s, v] : list)
                solids.push_back(measurement_instance(solid_name(s), make_platonic_measurement(s), v, 1e-5));
            check_values(c, solids);
        });
    }
    {
        Criterion &c = start(3, "MUB multi-measurement robustness");
        guard(c, [&] {
            auto t0 = Clock::now();
            mubs.push_back(measurement_instance("mub2", make_mub_multimeasurement(2), std::sqrt(3.0) / 3.0, 1e-5));
            mubs.push_back(
                measurement_instance("mub3", make_mub_multimeasurement(3), (1.0 + 3.0 * std::sqrt(5.0)) / 16.0, 1e-5));
            if (include_slow) {
                mubs.push_back(measurement_instance("mub4", make_mub_multimeasurement(4),
                                                    (3.0 + 2.0 * std::sqrt(3.0)) / 15.0, 1e-4));
                c.check(seconds_since(t0) < 900.0, "runtime");
            } else {
                c.detail << " (d=4 skipped; pass --include-slow)";
            }
            check_values(c, mubs);
        });
    }
    {
        Criterion &c = start(4, "state-set robustness");
        guard(c, [&] {
            const double r3 = 1.0 / std::sqrt(3.0);
            states.push_back(state_instance("bb84_states", 1.0 / std::sqrt(2.0), 1e-5));
            states.push_back(state_instance("six_state", r3, 1e-5));
            states.push_back(state_instance("spekkens6", r3, 1e-5));
            states.push_back(state_instance("cube8", r3, 1e-4));
            states.push_back(state_instance("icosahedron12", std::sqrt((1 + kQ * kQ) / (3 * std::pow(kQ, 4))), 1e-5));
            check_values(c, states);
        });
    }

    std::vector<const Instance *> all;
    for (auto *group : {&planar, &solids, &mubs, &states})
        for (const auto &in : *group) all.push_back(&in);

    {
        Criterion &c = start(5, "analytic upper bound tightness");
        guard(c, [&] {
            double lo = 1e300, hi = -1e300;
            for (const Instance *in : all) {
                double gap = analytic_upper_bound(in->family, in->vertices) - in->primal.value;
                lo = std::min(lo, gap);
                hi = std::max(hi, gap);
                c.check(gap >= -1e-6 && gap <= 1e-5, in->name + " gap " + std::to_string(gap));
            }
            c.detail << " bound-sdp in [" << lo << ", " << hi << "] over " << all.size() << " instances";
        });
    }
    {
        Criterion &c = start(6, "primal/dual agreement");
        guard(c, [&] {
            double worst = 0.0;
            for (const Instance *in : all) {
                QuantifierReport d = robustness_dual(in->family, in->vertices);
                double diff = d.value - in->primal.value;
                worst = std::max(worst, std::abs(diff));
                c.check(std::abs(diff) < 1e-6 && diff >= -1e-6, in->name);
            }
            c.detail << " max|dual-primal|=" << worst;
        });
    }
    {
        Criterion &c = start(7, "nonclassical fraction extremes");
        guard(c, [&] {
            double worst = 0.0;
            auto expect = [&](const std::string &name, double got, double want) {
                worst = std::max(worst, std::abs(got - want));
                c.check(std::abs(got - want) <= 1e-6, name + " = " + std::to_string(got));
            };
            for (const auto &[name, m] : std::vector<std::pair<std::string, MultiMeasurement>>{
                     {"planar4", make_planar_measurement(4)},
                     {"planar5", make_planar_measurement(5)},
                     {"icosahedron", make_platonic_measurement(Solid::icosahedron)}})
                expect(name, nonclassical_fraction_measurement(m, measurement_vertices(m)).value, 1.0);
            for (const auto &n : named_state_sets()) {
                StateSet s = make_named_state_set(n);
                expect(n, nonclassical_fraction_states(s, state_vertices(s)).value, 1.0);
            }
            for (const auto &[name, m] : std::vector<std::pair<std::string, MultiMeasurement>>{
                     {"planar3", make_planar_measurement(3)}, {"trivial2", make_trivial_measurement(2)}})
                expect(name, nonclassical_fraction_measurement(m, measurement_vertices(m)).value, 0.0);
            c.detail << " max|err|=" << worst;
        });
    }
    {
        Criterion &c = start(8, "flag-convexification invariance");
        guard(c, [&] {
            double worst = 0.0;
            for (int d = 2; d <= 3; ++d) {
                for (double eta : {1.0, 0.9}) {
                    MultiMeasurement m = add_white_noise_measurement(make_mub_multimeasurement(d), eta);
                    MultiMeasurement f = flag_convexify_measurement(m);
                    VertexSet vm = measurement_vertices(m), vf = measurement_vertices(f);
                    double dr = std::abs(white_noise_robustness_measurement(m, vm).value -
                                         white_noise_robustness_measurement(f, vf).value);
                    double dw = std::abs(nonclassical_fraction_measurement(m, vm).value -
                                         nonclassical_fraction_measurement(f, vf).value);
                    worst = std::max({worst, dr, dw});
                    c.check(dr <= 1e-6 && dw <= 1e-6, "mub" + std::to_string(d));
                }
            }
            c.detail << " max|diff|=" << worst;
        });
    }
    {
        Criterion &c = start(9, "pentagon LP and inequalities");
        guard(c, [&] {
            MultiMeasurement m = make_planar_measurement(5);
            NCModelResult plain = nc_model_lp(one_state_per_setting(pentagon_states(false)), m);
            InequalityValue v = evaluate_inequality(pentagon_inequality(), pentagon_behavior(1.0, false));
            c.check(!plain.feasible, "plain pentagon LP feasible");
            c.check(!v.satisfied, "pentagon inequality satisfied");
            c.detail << " plain: mismatch=" << plain.mismatch << " lhs=" << v.lhs << ";";
            for (double eta : {0.63, 0.70, 0.90}) {
                NCModelResult r =
                    nc_model_lp(one_state_per_setting(pentagon_states(true)), add_white_noise_measurement(m, eta));
                c.check(!r.feasible, "rotated feasible at " + std::to_string(eta));
            }
            NCModelResult r =
                nc_model_lp(one_state_per_setting(pentagon_states(true)), add_white_noise_measurement(m, 0.61));
            c.check(r.feasible, "rotated infeasible at 0.61");
            c.detail << " rotated: infeasible at 0.63/0.70/0.90, feasible at 0.61 mismatch=" << r.mismatch;
        });
    }
    {
        Criterion &c = start(10, "anti-aligned witness example");
        guard(c, [&] {
            AntiAlignedExample ex = anti_aligned_bb84_example();
            WitnessValue w = evaluate_measurement_witness(witness_from_dual_measurement(ex.dual), ex.measurement);
            c.check(std::abs(w.value) <= 1e-9, "witness value");
            double outcome_sum = 0.0;
            for (int b = 0; b < 4; ++b) outcome_sum += ex.behavior(0, b, b, 0);
            c.check(std::abs(outcome_sum) <= 1e-12, "sum_b p(b|rho_b)");
            ModelCheck mc = verify_ontological_model(ex.model, ex.behavior, preparation_identity_space(ex.source),
                                                     measurement_identity_space(ex.measurement));
            c.check(mc.passed(1e-10), "ontological model residuals");
            std::vector<Matrix> rho;
            for (const auto &f : ex.dual) rho.push_back(2.0 / (2.0 + std::sqrt(2.0)) * f);
            double trace2_value = 0.0;
            for (int b = 0; b < 4; ++b) trace2_value += tr(rho[b], ex.measurement.effect(b).matrix());
            const double bound = classical_witness_minimum(rho, measurement_vertices(ex.measurement));
            c.check(std::abs(trace2_value) <= 1e-12, "trace-2 witness value");
            c.check(std::abs(bound - (2.0 - std::sqrt(2.0))) <= 1e-6, "classical bound");
            NCModelResult lp = nc_model_lp(ex.source, ex.measurement);
            c.check(lp.feasible, "LP infeasible");
            c.detail << " witness=" << w.value << " sum_b p(b|rho_b)=" << outcome_sum
                     << " model residual=" << std::max({mc.normalization, mc.statistics, mc.preparation_identities,
                                                        mc.measurement_identities})
                     << " lp mismatch=" << lp.mismatch << " classical bound=" << bound << " (2-sqrt2=" << 2 - std::sqrt(2.0) << ")";
        });
    }
    {
        Criterion &c = start(11, "icosahedron inequality");
        guard(c, [&] {
            NCInequality ineq = icosahedron_inequality();
            const double slope = 3.0 / std::sqrt(3.0 * (1 + kQ * kQ));
            double worst = 0.0;
            for (double eta : {0.0, 0.42, 1.0}) {
                double lhs = evaluate_inequality(ineq, icosahedron_scenario(eta).behavior).lhs;
                worst = std::max(worst, std::abs(lhs - eta * slope));
            }
            c.check(worst <= 1e-9, "lhs");
            c.check(std::abs(ineq.bound - 1 / (kQ * kQ)) <= 1e-12, "bound");
            const double thr = std::sqrt((1 + kQ * kQ) / (3 * std::pow(kQ, 4)));
            for (double eta : {0.0, 0.3, 0.41, thr - 1e-6, thr + 1e-6, 0.43, 0.7, 1.0}) {
                bool violated = !evaluate_inequality(ineq, icosahedron_scenario(eta).behavior).satisfied;
                c.check(violated == (eta > thr), "violation at " + std::to_string(eta));
            }
            double top = evaluate_inequality(ineq, icosahedron_scenario(1.0).behavior).lhs;
            c.check(std::abs(top - 0.9106) <= 1e-4, "max value");
            c.detail << " max|lhs err|=" << worst << " threshold=" << thr << " max=" << top;
        });
    }
    {
        Criterion &c = start(12, "isotropic steering chain");
        guard(c, [&] {
            QuantifierReport hi = white_noise_robustness_source(icosahedron_scenario(0.45).source);
            QuantifierReport lo = white_noise_robustness_source(icosahedron_scenario(0.41).source);
            c.check(hi.verdict == Verdict::nonclassical, "0.45 not nonclassical");
            c.check(lo.classical(), "0.41 not classical");
            double thr = 0.45 * hi.value;
            c.check(std::abs(thr - 0.4195) <= 5e-3, "threshold");
            c.detail << " eta(0.45)=" << hi.value << " eta(0.41)=" << lo.value << " threshold=" << thr;
        });
    }
    {
        Criterion &c = start(13, "property suites");
        guard(c, [&] {
            std::mt19937 rng(2026);
            std::normal_distribution<double> n;
            // Polytopes of every built-in instance.
            std::vector<std::pair<std::string, AssignmentPolytope>> polys;
            for (int k = 3; k <= 8; ++k) {
                MultiMeasurement m = make_planar_measurement(k);
                polys.push_back({"planar" + std::to_string(k), build_measurement_polytope(m, measurement_identity_space(m))});
            }
            for (Solid s : {Solid::tetrahedron, Solid::octahedron, Solid::cube, Solid::icosahedron, Solid::dodecahedron}) {
                MultiMeasurement m = make_platonic_measurement(s);
                polys.push_back({solid_name(s), build_measurement_polytope(m, measurement_identity_space(m))});
            }
            for (int d = 2; d <= 3; ++d) {
                MultiMeasurement m = make_mub_multimeasurement(d);
                polys.push_back({"mub" + std::to_string(d), build_measurement_polytope(m, measurement_identity_space(m))});
            }
            MultiMeasurement triv = make_trivial_measurement(2);
            polys.push_back({"trivial2", build_measurement_polytope(triv, measurement_identity_space(triv))});
            for (const auto &s : named_state_sets()) {
                StateSet st = make_named_state_set(s);
                polys.push_back({s, build_preparation_polytope(st, preparation_identity_space(st))});
            }

            double lp_worst = 0.0;
            int shortcut_checked = 0;
            for (const auto &[name, p] : polys) {
                VertexSet v = polytope_vertices(p);
                for (int t = 0; t < 5; ++t) {
                    Vector dir(p.num_vars());
                    for (int i = 0; i < dir.size(); ++i) dir[i] = n(rng);
                    double err = std::abs(lp_max(p, dir) - (v.vertices.transpose() * dir).maxCoeff());
                    lp_worst = std::max(lp_worst, err);
                }
                if (auto s = simplex_product_vertices(p)) {
                    VertexSet g = enumerate_vertices(p);
                    c.check(s->count() == g.count() && (s->vertices - g.vertices).norm() < 1e-8, name + " shortcut");
                    ++shortcut_checked;
                }
            }
            c.check(lp_worst <= 1e-7, "vertex completeness");

            double mono_worst = 0.0, cert_worst = 0.0;
            for (const Instance *in : all) {
                cert_worst = std::max(cert_worst, decomposition_error(*in));
                if (in->name == "mub4") continue;
                for (double eta : {0.5, 0.8}) {
                    OperatorFamily f = in->family;
                    for (auto &o : f.ops) o = eta * o + (1 - eta) * o.trace().real() / f.dim * identity(f.dim);
                    double got = robustness(f, in->vertices).value;
                    mono_worst = std::max(mono_worst, std::abs(got - std::min(1.0, in->primal.value / eta)));
                }
            }
            c.check(mono_worst <= 1e-5, "monotone noise response");
            c.check(cert_worst <= 1e-7, "certificate re-verification");

            // Farkas soundness on the infeasible built-in scenarios.
            double farkas = -1e300;
            int farkas_cases = 0;
            auto sample = [&](const MultiSource &src, const MultiMeasurement &m) {
                StateSetReduction red = multisource_to_state_set(src);
                VertexSet vp = state_vertices(red.states), vm = measurement_vertices(m);
                Behavior beh = quantum_behavior(src, m);
                NCModelResult r = nc_model_lp(beh, vp, vm, red.index);
                if (!r.inequality) return;
                ++farkas_cases;
                farkas = std::max(farkas, farkas_worst(beh, vp, vm, red.index, *r.inequality, 300, rng));
                farkas = std::max(farkas, worst_vertex_pair(*r.inequality, beh, vp, vm, red.index));
            };
            sample(one_state_per_setting(pentagon_states(false)), make_planar_measurement(5));
            sample(one_state_per_setting(pentagon_states(true)),
                   add_white_noise_measurement(make_planar_measurement(5), 0.9));
            IcosahedronScenario sc = icosahedron_scenario(1.0);
            sample(sc.source, sc.measurement);
            c.check(farkas_cases == 3, "expected three infeasible scenarios");
            c.check(farkas <= 1e-9, "Farkas soundness");

            c.detail << " polytopes=" << polys.size() << " lp|err|=" << lp_worst << " shortcut=" << shortcut_checked
                     << " monotone|err|=" << mono_worst << " certificate|err|=" << cert_worst
                     << " farkas max(lhs-bound)=" << farkas;
        });
    }

    bool all_ok = true;
    for (const auto &c : out) {
        all_ok = all_ok && c.ok;
        std::cout << (c.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " |" << c.detail.str()
                  << "\n";
    }
    std::cout << (all_ok ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
    return all_ok ? 0 : 1;
}
