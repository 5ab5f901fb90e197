// Acceptance suite: every release-gating property in one binary, one
// pass/fail line per criterion. Tolerances are pinned here, not configured.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "kron/dynamics.hpp"
#include "kron/errors.hpp"
#include "kron/io.hpp"
#include "kron/parse.hpp"
#include "kron/verify.hpp"

using namespace kron;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d %-38s %s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

// 1. Exceptional-torus frequency over the 2x3x3 grid, 1e-6 relative.
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    int cases = 0;
    for (int l : {1, 2}) {
        for (double chi : {0.25, 1.0, 4.0}) {
            for (double xi1 : {0.0, 1.0, 3.0}) {
                PeriodMeasurement pm = measure_exceptional_period(l, chi, xi1);
                worst = std::max(worst, pm.relative_error);
                ++cases;
            }
        }
    }
    PeriodMeasurement pin = measure_exceptional_period(1, 1.0, 3.0);
    bool pin_ok = std::abs(pin.varpi_measured - 2.0) <= 1e-6 * 2.0;
    double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << cases << " cases, worst rel err " << worst << ", " << elapsed << " s";
    report(1, "exceptional-torus frequency", worst < 1e-6 && pin_ok && elapsed < 10.0, os.str());
}

// 2. Exact bracket suite, bit-reproducible, < 1 s.
void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string transcript[2];
    for (int run = 0; run < 2; ++run) {
        std::ostringstream os;
        // d = s+2l system: coordinate integrals and their bracket matrix.
        HamParams p;
        p.spec = default_structure_spec({1, 1, 2});
        p.zeta = {rat(0)};
        p.xi = {rat(0), rat(0)};
        p.eta = {rat(0), rat(0)};
        p.h = PolyExpr::variable("u1");
        SystemModel free_sys = make_system(p);
        auto chart = phase_chart(p.spec.dims, false);

        for (int v = 1; v <= 2; ++v) {
            PolyExpr br = poisson_bracket(PolyExpr::variable("q" + std::to_string(v)),
                                          PolyExpr::variable("p" + std::to_string(v)),
                                          *free_sys.structure, chart);
            ok = ok && br == PolyExpr::constant(rat(1));
            os << print_expr(br) << ";";
        }
        IntegralSet free_set = first_integrals(free_sys);
        ok = ok && free_set.coordinate_bracket_matrix.has_value();
        if (free_set.coordinate_bracket_matrix) {
            const RatMatrix& P = *free_set.coordinate_bracket_matrix;
            RatMatrix expected = RatMatrix::zero(5, 5);
            for (int v = 0; v < 2; ++v) {
                expected.at(1 + v, 3 + v) = -1;
                expected.at(3 + v, 1 + v) = 1;
            }
            ok = ok && P == expected && P.rank() == 4;
            for (std::size_t r = 0; r < P.rows(); ++r)
                for (std::size_t c = 0; c < P.cols(); ++c) os << rat_to_string(P.at(r, c)) << ",";
        }

        // Generic system: {u_i, H} = 0 and {H, f_v} = 0 symbolically.
        HamParams g;
        g.spec = default_structure_spec({2, 0, 2});
        g.zeta = {rat(1), rat(3, 2)};
        g.xi = {rat(2), rat(1)};
        g.eta = {rat(1), rat(5)};
        g.h = PolyExpr::variable("u1").scaled(rat(2)) + PolyExpr::variable("u2").pow(2);
        SystemModel gen = make_system(g);
        auto gchart = phase_chart(g.spec.dims, false);
        for (int i = 1; i <= 2; ++i) {
            PolyExpr br = poisson_bracket(PolyExpr::variable("u" + std::to_string(i)),
                                          *gen.hamiltonian, *gen.structure, gchart);
            ok = ok && br.is_zero();
        }
        IntegralSet set = first_integrals(gen);
        for (std::size_t i = 0; i < set.integrals.size(); ++i) {
            PolyExpr br =
                poisson_bracket(*gen.hamiltonian, set.integrals[i], *gen.structure, gchart);
            ok = ok && br.is_zero();
            os << set.names[i] << ":" << print_expr(br) << ";";
        }
        transcript[run] = os.str();
    }
    ok = ok && transcript[0] == transcript[1];
    double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "bit-identical reruns, " << elapsed << " s";
    report(2, "exact bracket suite", ok && elapsed < 1.0, os.str());
}

// 3. Structure identities: det J = (det Z)^2 (k = 0, 100 random Z), the
// special-form determinant, the exactness criterion across the sweep.
void criterion_3() {
    std::mt19937 rng(2718);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    auto random_matrix = [&](std::size_t r, std::size_t c) {
        RatMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rat(num(rng), den(rng));
        return m;
    };

    bool ok = true;
    int checked = 0;
    while (checked < 100) {
        int s = 1 + checked % 3;
        StructureSpec spec;
        spec.dims = {s, 0, checked % 3};
        spec.Z = random_matrix(s, s);
        if (spec.Z.rank() != static_cast<std::size_t>(s)) continue;
        RatMatrix raw = random_matrix(s, s);
        spec.L = RatMatrix(s, s);
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c) spec.L.at(r, c) = raw.at(r, c) - raw.at(c, r);
        StructureMatrix sm = assemble_structure(spec);
        Rat dz = spec.Z.determinant();
        ok = ok && sm.J.determinant() == dz * dz;
        ++checked;
    }

    int special_checked = 0;
    for (int trial = 0; trial < 40 && special_checked < 20; ++trial) {
        int s = 1 + trial % 2, k = 1 + trial % 2;
        StructureSpec spec;
        spec.dims = {s, k, trial % 2};
        RatMatrix zs = random_matrix(s, s);
        if (zs.determinant() == 0) continue;
        spec.Z = RatMatrix::zero(s + 2 * k, s);
        spec.Z.set_block(0, 0, random_matrix(2 * k, s));
        spec.Z.set_block(2 * k, 0, zs);
        RatMatrix lraw = random_matrix(2 * k, 2 * k);
        RatMatrix lsharp(2 * k, 2 * k);
        for (int r = 0; r < 2 * k; ++r)
            for (int c = 0; c < 2 * k; ++c) lsharp.at(r, c) = lraw.at(r, c) - lraw.at(c, r);
        if (lsharp.determinant() == 0) continue;
        spec.L = RatMatrix::zero(s + 2 * k, s + 2 * k);
        spec.L.set_block(0, 0, lsharp);
        StructureMatrix sm = assemble_structure(spec);
        Rat dz = zs.determinant();
        ok = ok && sm.J.determinant() == lsharp.determinant() * dz * dz;
        ++special_checked;
    }
    ok = ok && special_checked == 20;

    for (int s = 1; s <= 3; ++s) {
        for (int k = 0; k <= 2; ++k) {
            for (int l = 0; l <= 2; ++l) {
                StructureMatrix sm = assemble_structure(default_structure_spec({s, k, l}));
                ok = ok && sm.form_is_exact() == (k == 0);
                ok = ok && sm.J.is_skew_symmetric();
                ok = ok && sm.W * sm.J == RatMatrix::identity(sm.J.rows());
            }
        }
    }
    std::ostringstream os;
    os << checked << " random Z, " << special_checked << " special-form cases, full sweep";
    report(3, "structure determinant identities", ok, os.str());
}

// 4. Classification table over 1 <= s <= 3, 0 <= k, l <= 2.
void criterion_4() {
    bool ok = true;
    int cells = 0;
    for (int s = 1; s <= 3; ++s) {
        for (int k = 0; k <= 2; ++k) {
            for (int l = 0; l <= 2; ++l) {
                StructureMatrix sm = assemble_structure(default_structure_spec({s, k, l}));
                TorusClass tc = classify_torus(sm);
                TorusKind expected =
                    k == 0 ? (l == 0 ? TorusKind::Lagrangian : TorusKind::StrictlyIsotropic)
                           : (l == 0 ? TorusKind::StrictlyCoisotropic : TorusKind::Atropic);
                RatMatrix comp = torus_tangent_complement(sm);
                ok = ok && tc.kind == expected;
                ok = ok && tc.intersection_dim == s;
                ok = ok && comp.cols() == static_cast<std::size_t>(s + 2 * l);
                ++cells;
            }
        }
    }
    std::ostringstream os;
    os << cells << " (s,k,l) cells, exact subspace tests";
    report(4, "classification table", ok, os.str());
}

// 5. J grad H equals the displayed field for every planner regime, N <= 5.
void criterion_5() {
    bool ok = true;
    int regimes = 0;
    for (int N = 2; N <= 5; ++N) {
        for (int n = 1; n <= 2 * N - 1; ++n) {
            for (TorusKind cls : {TorusKind::Lagrangian, TorusKind::StrictlyIsotropic,
                                  TorusKind::StrictlyCoisotropic, TorusKind::Atropic}) {
                std::vector<int> ds;
                if (cls == TorusKind::Lagrangian) {
                    ds = {n};
                } else if (cls == TorusKind::StrictlyCoisotropic) {
                    ds = {2 * N - n};
                } else {
                    ds = {0, 1, 2 * N - n};
                }
                for (int d : ds) {
                    PlanResult plan;
                    try {
                        plan = plan_parameters(N, n, cls, d);
                    } catch (const Error&) {
                        continue;
                    }
                    std::vector<double> omega(plan.dims.torus_dim());
                    for (std::size_t a = 0; a < omega.size(); ++a) {
                        omega[a] = 0.3 + 0.7 * static_cast<double>(a + 1);
                    }
                    for (bool compact : {false, true}) {
                        SystemModel sys =
                            make_system(planned_ham_params(plan, compact, omega));
                        // Independent recomputation of J grad H.
                        std::vector<PolyExpr> grad(sys.dim());
                        for (std::size_t b = 0; b < sys.dim(); ++b) {
                            grad[b] = sys.hamiltonian->derivative(sys.chart[b].name);
                        }
                        for (std::size_t a = 0; a < sys.dim(); ++a) {
                            PolyExpr xa;
                            for (std::size_t b = 0; b < sys.dim(); ++b) {
                                const Rat& j = sys.structure->J.at(a, b);
                                if (j == 0 || grad[b].is_zero()) continue;
                                xa = xa + grad[b].scaled(j);
                            }
                            ok = ok && xa == sys.vector_field[a];
                        }
                        ok = ok && classify_torus(*sys.structure).kind == cls;
                        ok = ok && sys.family.d == d;
                        ++regimes;
                    }
                }
            }
        }
    }
    std::ostringstream os;
    os << regimes << " planner regimes (both phase-space kinds), exact term maps";
    report(5, "vector-field cross-check", ok && regimes > 50, os.str());
}

// 6. Frequency realization for omega = (1, sqrt2, 1/sqrt2), (3,3) atropic d=0.
void criterion_6() {
    std::vector<double> omega{1.0, std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    PlanResult plan = plan_parameters(3, 3, TorusKind::Atropic, 0);
    SystemModel sys = make_system(planned_ham_params(plan, false, omega));

    IntegratorConfig cfg;
    cfg.method = Method::RK4;
    cfg.dt = 1e-3;
    cfg.horizon = 100.0;
    cfg.store_every = 10;
    Trajectory traj = integrate(sys, std::vector<double>(sys.dim(), 0.0), cfg);

    std::vector<std::size_t> phi_idx;
    for (int a = 0; a < sys.count_phi(); ++a) phi_idx.push_back(sys.phi_offset() + a);
    FrequencyEstimate est = estimate_frequencies(traj, phi_idx);
    double worst = 0;
    for (std::size_t a = 0; a < omega.size(); ++a) {
        worst = std::max(worst, std::abs(est.omega[a] - omega[a]));
    }
    std::ostringstream os;
    os << "max |est - omega| = " << worst << " over T = 100";
    report(6, "prescribed-frequency realization", worst < 1e-6, os.str());
}

// 7. Uniqueness / strong isolation evidence on all four kinds.
void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    ScanConfig scan;
    scan.samples = 1000;
    scan.seed = 42;

    bool ok = true;
    std::ostringstream os;

    std::vector<double> omega3{1.0, 0.61803398874989484, 0.41421356237309515};
    PlanResult ham_plan = plan_parameters(3, 3, TorusKind::Atropic, 0);
    RevPlanResult rev_plan = plan_rev_parameters(2, 1, 1, 0, 0);

    std::vector<SystemModel> systems;
    systems.push_back(make_system(planned_ham_params(ham_plan, false, omega3)));
    systems.push_back(make_system(planned_ham_params(ham_plan, true, omega3)));
    systems.push_back(make_system(planned_rev_params(rev_plan, false, {0.9, 1.7})));
    systems.push_back(make_system(planned_rev_params(rev_plan, true, {0.9, 1.7})));

    for (const SystemModel& sys : systems) {
        ClaimReport off = uniqueness_scan(sys, scan);
        ClaimReport on = family_stationarity_scan(sys, scan);
        long escapes = off.details["escapes"].get<long>();
        long flagged = on.details["false_positives"].get<long>();
        ok = ok && escapes == scan.samples && flagged == 0;
        os << system_kind_name(sys.kind) << ":" << escapes << "/" << scan.samples
           << " esc, " << flagged << " fp  ";
    }
    double elapsed = seconds_since(t0);
    os << elapsed << " s";
    report(7, "uniqueness / isolation evidence", ok && elapsed < 60.0, os.str());
}

// 8. Reversibility: exact identity on all four kinds plus the numeric
// G-round-trip within 1e-8.
void criterion_8() {
    bool ok = true;
    std::ostringstream os;

    std::vector<double> omega3{1.0, 0.8, 0.6};
    PlanResult ham_plan = plan_parameters(3, 3, TorusKind::Atropic, 0);
    RevPlanResult rev_plan = plan_rev_parameters(2, 1, 1, 0, 0);

    struct Case {
        SystemModel sys;
        std::vector<double> start;
    };
    std::vector<Case> cases;
    {
        SystemModel s1 = make_system(planned_ham_params(ham_plan, false, omega3));
        std::vector<double> x1(s1.dim(), 0.0);
        x1[0] = 0.05;                      // u1
        x1[s1.phi_offset()] = 0.3;         // phi1
        x1[s1.p_offset()] = 0.05;          // p1
        cases.push_back({s1, x1});
        SystemModel s2 = make_system(planned_ham_params(ham_plan, true, omega3));
        std::vector<double> x2(s2.dim(), 0.0);
        x2[0] = 0.4;
        x2[s2.phi_offset()] = 0.2;
        x2[s2.p_offset()] = 0.3;
        x2[s2.q_offset()] = 0.5;
        cases.push_back({s2, x2});
        SystemModel s3 = make_system(planned_rev_params(rev_plan, false, {0.9, 1.7}));
        std::vector<double> x3(s3.dim(), 0.0);
        x3[0] = 0.05;
        x3[s3.phi_offset()] = 0.7;
        cases.push_back({s3, x3});
        SystemModel s4 = make_system(planned_rev_params(rev_plan, true, {0.9, 1.7}));
        std::vector<double> x4(s4.dim(), 0.0);
        x4[0] = 0.6;
        x4[s4.phi_offset()] = 0.7;
        x4[s4.q_offset()] = 0.8;
        cases.push_back({s4, x4});
    }

    IntegratorConfig cfg;
    cfg.method = Method::RK4;
    cfg.dt = 1e-3;
    cfg.horizon = 10.0;
    cfg.store_every = 1000000;

    double worst = 0;
    for (const Case& c : cases) {
        ReversibilityReport rep = reversibility_check(c.sys);
        ok = ok && rep.reversible;

        auto apply_g = [&](std::vector<double> x) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] *= c.sys.involution.signs[i];
            }
            return x;
        };
        std::vector<double> x = integrate(c.sys, c.start, cfg).states.back();
        x = apply_g(x);
        x = integrate(c.sys, x, cfg).states.back();
        x = apply_g(x);
        double err = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            err = std::max(err, std::abs(x[i] - c.start[i]));
        }
        worst = std::max(worst, err);
    }
    os << "symbolic identity on 4 kinds, round-trip err " << worst;
    report(8, "reversibility", ok && worst < 1e-8, os.str());
}

// 9. Self-convergence orders on a d = 0 compact Hamiltonian system, T = 10.
void criterion_9() {
    std::vector<double> omega3{1.0, 0.8, 0.6};
    PlanResult plan = plan_parameters(3, 3, TorusKind::Atropic, 0);
    SystemModel sys = make_system(planned_ham_params(plan, true, omega3));
    std::vector<double> start(sys.dim(), 0.0);
    start[0] = 0.4;
    start[sys.phi_offset()] = 0.1;
    start[sys.p_offset()] = 0.3;
    start[sys.q_offset()] = 0.7;

    auto endpoint = [&](Method m, double dt) {
        IntegratorConfig cfg;
        cfg.method = m;
        cfg.dt = dt;
        cfg.horizon = 10.0;
        cfg.store_every = 1000000;
        return integrate(sys, start, cfg).states.back();
    };
    auto err = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double e = 0;
        for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
        return e;
    };

    bool ok = true;
    std::ostringstream os;
    for (Method m : {Method::RK4, Method::ImplicitMidpoint}) {
        std::vector<double> ref = endpoint(m, 0.02 / 16);
        double e1 = err(endpoint(m, 0.02), ref);
        double e2 = err(endpoint(m, 0.01), ref);
        double ratio = e1 / e2;
        if (m == Method::RK4) {
            ok = ok && ratio > 16.0 * 0.7 && ratio < 16.0 * 1.3;
            os << "rk4 ratio " << ratio << " (16 +- 30%)  ";
        } else {
            ok = ok && ratio > 4.0 * 0.8 && ratio < 4.0 * 1.2;
            os << "midpoint ratio " << ratio << " (4 +- 20%)";
        }
    }
    report(9, "integrator self-convergence orders", ok, os.str());
}

// 10. Recurrence-time finder: contract always holds, exact period pinned.
void criterion_10() {
    bool ok = true;

    RecurrenceQuery exact;
    exact.omega = {2 * M_PI / 10};
    exact.T = 1.0;
    exact.eps = 1e-9;
    RecurrenceResult r = find_recurrence_time(exact);
    ok = ok && r.Theta == 10.0;

    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> w(-4.0, 4.0);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RecurrenceQuery q;
        int n = 1 + trial % 3;
        for (int i = 0; i < n; ++i) q.omega.push_back(w(rng));
        q.T = 0.25 + (trial % 5) * 0.25;
        q.eps = (trial % 2) ? 0.25 : 0.05;
        RecurrenceResult rr = find_recurrence_time(q);
        ok = ok && rr.dist < q.eps && rr.Theta >= q.T;
        ++checked;
    }
    std::ostringstream os;
    os << "Theta(2pi/10, T=1) = " << r.Theta << ", contract on " << checked
       << " random queries";
    report(10, "recurrence-time finder", ok, os.str());
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s: %d/10 criteria passed (%.1f s)\n", failures == 0 ? "OK" : "FAILED",
                10 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
