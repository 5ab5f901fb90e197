#include "doctest.h"

#include <cmath>

#include "kron/errors.hpp"
#include "kron/verify.hpp"

using namespace kron;

namespace {

SystemModel unit_ham(bool compact, int s = 1, int l = 1) {
    HamParams p;
    p.spec = default_structure_spec({s, 0, l});
    p.zeta.assign(s, rat(1));
    p.xi.assign(l, rat(1));
    p.eta.assign(l, rat(1));
    p.compact = compact;
    p.h = compact ? PolyExpr::sin_of({{"u1", 1}}).scaled(rat(2))
                  : PolyExpr::variable("u1").scaled(rat(2));
    return make_system(p);
}

SystemModel unit_rev(bool compact, int n = 1, int m = 1, int l = 1) {
    RevParams p;
    p.n = n;
    p.m = m;
    p.l = l;
    p.zeta.assign(m, rat(1));
    p.xi.assign(l, rat(1));
    p.h.assign(n, PolyExpr::constant(rat(1)));
    p.compact = compact;
    return make_system(p);
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("family invariance is exact for all four kinds") {
    for (const SystemModel& sys :
         {unit_ham(false), unit_ham(true), unit_rev(false), unit_rev(true)}) {
        ClaimReport r = verify_family_invariance(sys);
        CHECK(r.verdict == Verdict::VerifiedExact);
    }
    // More branches: a compact system with several pinned coordinates.
    ClaimReport r = verify_family_invariance(unit_ham(true, 2, 2));
    CHECK(r.verdict == Verdict::VerifiedExact);
    CHECK(r.details["substitution_branches"].get<int>() == 64);
}

TEST_CASE("a corrupted field fails invariance with a witness") {
    SystemModel sys = unit_ham(false);
    std::vector<PolyExpr> field = sys.vector_field;
    field[1] = -field[1];  // sign-flip phidot; on the family it reads -omega
    ClaimReport r = verify_family_invariance(sys, field);
    CHECK(r.verdict == Verdict::Failed);
    CHECK(r.details.contains("witness"));
    CHECK(r.details["witness"]["coordinate"] == "phi1");
    CHECK(r.details["witness"]["residual"] == "-4");

    // A corruption that vanishes on the family is not an invariance failure.
    std::vector<PolyExpr> subtle = sys.vector_field;
    subtle[2] = subtle[2] + PolyExpr::variable("u1") * PolyExpr::variable("q1");
    CHECK(verify_family_invariance(sys, subtle).verdict == Verdict::VerifiedExact);
}

TEST_CASE("monotonicity: exact on three kinds, domain-guarded on compact Hamiltonian") {
    CHECK(verify_monotonicity(unit_ham(false)).verdict == Verdict::VerifiedExact);
    CHECK(verify_monotonicity(unit_rev(false)).verdict == Verdict::VerifiedExact);
    CHECK(verify_monotonicity(unit_rev(true)).verdict == Verdict::VerifiedExact);

    SystemModel hc = unit_ham(true);
    try {
        verify_monotonicity(hc);
        FAIL("expected MissingDomain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingDomain);
    }
    ClaimReport r = verify_monotonicity(hc, default_isolation_domain(hc), 20000);
    CHECK(r.verdict == Verdict::VerifiedNumeric);
    CHECK(r.details["sign_violations"].get<long>() == 0);

    // The negative-branch domain works too.
    DomainSpec dom = default_isolation_domain(hc);
    dom.eps[0] = -1;
    ClaimReport r2 = verify_monotonicity(hc, dom, 20000);
    CHECK(r2.verdict == Verdict::VerifiedNumeric);
    CHECK(r2.details["sign_violations"].get<long>() == 0);
}

TEST_CASE("domain membership predicate") {
    SystemModel hc = unit_ham(true);
    DomainSpec dom = default_isolation_domain(hc);
    // chart: u1, phi1, p1, q1
    CHECK(domain_contains(dom, hc, {0.3, 0.0, 0.4, 0.5}));
    CHECK(!domain_contains(dom, hc, {0.3, 0.0, 2.0, 0.5}));   // p outside I_+
    CHECK(!domain_contains(dom, hc, {0.3, 0.0, 0.4, M_PI}));  // q at q*
    dom.eps[0] = -1;
    CHECK(domain_contains(dom, hc, {0.3, 0.0, M_PI, 0.5}));
}

TEST_CASE("poisson matrix report") {
    CHECK(verify_poisson_matrix(unit_ham(false)).verdict == Verdict::VerifiedExact);
    CHECK(verify_poisson_matrix(unit_ham(true)).verdict == Verdict::VerifiedExact);

    HamParams p;
    p.spec = default_structure_spec({1, 1, 2});
    p.zeta = {rat(0)};
    p.xi = {rat(0), rat(0)};
    p.eta = {rat(0), rat(0)};
    p.h = PolyExpr::variable("u1");
    SystemModel free_sys = make_system(p);
    ClaimReport r = verify_poisson_matrix(free_sys);
    CHECK(r.verdict == Verdict::VerifiedExact);
    CHECK(r.details["coordinate_matrix_rank"].get<int>() == 4);
    // l = 2 > k = 1: more integrals than degrees of freedom, but the bracket
    // rank 2l differs from 2(l-k), so no superintegrability.
    CHECK(r.details["involutive_sublist_size"].get<int>() == 3);
    CHECK(r.details["superintegrability_rank_gap"].get<int>() == 2);
}

TEST_CASE("uniqueness scans certify escape on all four kinds") {
    ScanConfig cfg;
    cfg.samples = 120;
    for (const SystemModel& sys :
         {unit_ham(false), unit_ham(true), unit_rev(false), unit_rev(true)}) {
        CAPTURE(system_kind_name(sys.kind));
        ClaimReport r = uniqueness_scan(sys, cfg);
        CHECK(r.verdict == Verdict::EvidenceOnly);
        CHECK(r.details["escapes"].get<int>() == cfg.samples);

        ClaimReport c = family_stationarity_scan(sys, cfg);
        CHECK(c.verdict == Verdict::VerifiedNumeric);
        CHECK(c.details["false_positives"].get<int>() == 0);
    }
}

TEST_CASE("uniqueness scan requires a d = 0 regime") {
    HamParams p;
    p.spec = default_structure_spec({1, 0, 1});
    p.zeta = {rat(0)};
    p.xi = {rat(1)};
    p.eta = {rat(1)};
    p.h = PolyExpr::variable("u1");
    SystemModel sys = make_system(p);
    ScanConfig cfg;
    CHECK_THROWS_AS(uniqueness_scan(sys, cfg), Error);
}

TEST_CASE("the exceptional torus is not flagged and carries the closed-form frequency") {
    // Compact d = 0 system; the (s+2k+1)-torus {u = u0, p = 0, q_2.. = 0}
    // with chi > 0 is invariant and conditionally periodic.
    HamParams p;
    p.spec = default_structure_spec({1, 0, 2});
    p.zeta = {rat(1)};
    p.xi = {rat(3), rat(1)};
    p.eta = {rat(1), rat(1)};
    p.compact = true;
    p.h = PolyExpr::cos_of({{"u1", 1}}).scaled(rat(-2));  // dh/du = 2 sin u
    SystemModel sys = make_system(p);
    CHECK(sys.family.d == 0);

    // u0 = pi/2: chi = zeta sin^2 u0 = 1, omega(u0) = 2, varpi = sqrt(l chi (l chi + xi1))
    const double chi = 1.0;
    const double varpi = std::sqrt(2 * chi * (2 * chi + 3.0));
    std::vector<double> start{M_PI / 2, 0.0, 0.0, 0.0, 0.3, 0.0};

    IntegratorConfig icfg;
    icfg.dt = 1e-3;
    icfg.horizon = 200.0;
    icfg.store_every = 10;
    Trajectory traj = integrate(sys, start, icfg);
    CHECK(traj.stop == StopReason::Completed);

    // Not certified as escaping in the cut chart: q1 keeps wrapping past q*.
    DomainSpec dom = default_isolation_domain(sys);
    std::vector<std::vector<double>> cut(1);
    for (const auto& st : traj.states) {
        cut[0].push_back(dom.q_star[0] + wrap_angle(st[4] - dom.q_star[0]));
    }
    CHECK(escape_verdict(cut) == EscapeVerdict::Inconclusive);

    // phi stays exactly linear; q1's rotation number approaches varpi.
    FrequencyEstimate phi_est = estimate_frequencies(traj, {1}, 1e-6);
    CHECK(phi_est.omega[0] == doctest::Approx(2.0).epsilon(1e-9));
    double rotation = (traj.states.back()[4] - traj.states.front()[4]) / traj.stop_time;
    CHECK(rotation == doctest::Approx(varpi).epsilon(5e-3));

    // And the measured period matches the closed form tightly.
    PeriodMeasurement pm = measure_exceptional_period(2, chi, 3.0);
    CHECK(pm.relative_error < 1e-6);
    CHECK(pm.varpi_closed_form == doctest::Approx(varpi));
}

TEST_CASE("diophantine scan: resonances and golden-ratio constants") {
    DiophantineReport res = diophantine_scan({1.0, 2.0}, 1.0, 10,
                                             std::vector<Rat>{rat(1), rat(2)});
    CHECK(res.resonant);
    CHECK(res.witness_exact);
    CHECK(res.gamma_hat == 0.0);
    REQUIRE(res.witness_j.size() == 2);
    CHECK(res.witness_j[0] * 1 + res.witness_j[1] * 2 == 0);

    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    // tau = 1: every Fibonacci pair scores |<j,omega>| |j| ~ phi^2/sqrt(5)
    // ~ 1.17, so the flat j = (1, 0) with score exactly 1 is the minimum.
    DiophantineReport gold = diophantine_scan({1.0, golden}, 1.0, 100);
    CHECK(!gold.resonant);
    REQUIRE(gold.worst_j.size() == 2);
    CHECK(std::abs(gold.worst_j[0]) == 1);
    CHECK(gold.worst_j[1] == 0);
    CHECK(gold.gamma_hat == doctest::Approx(1.0).epsilon(1e-12));

    // tau = 1/2 weighs the small divisors enough for the largest Fibonacci
    // pair within the radius, (55, -34) with |<j,omega>| = phi^-9, to win.
    DiophantineReport fib = diophantine_scan({1.0, golden}, 0.5, 100);
    REQUIRE(fib.worst_j.size() == 2);
    CHECK(std::abs(fib.worst_j[0]) == 55);
    CHECK(std::abs(fib.worst_j[1]) == 34);
    CHECK(fib.gamma_hat == doctest::Approx(0.1241097).epsilon(1e-5));

    // A single nonzero frequency is never resonant.
    DiophantineReport single = diophantine_scan({0.7}, 0.0, 50);
    CHECK(!single.resonant);

    // gamma_hat is non-increasing in the scan radius.
    double prev = std::numeric_limits<double>::infinity();
    for (int jmax : {10, 20, 40, 80}) {
        DiophantineReport r = diophantine_scan({1.0, golden}, 1.0, jmax);
        CHECK(r.gamma_hat <= prev + 1e-15);
        prev = r.gamma_hat;
    }
}

TEST_CASE("regime suite: Hamiltonian regimes") {
    ScanConfig scan;
    scan.samples = 60;

    HamRegime regime;
    regime.N = 3;
    regime.n = 3;
    regime.target_class = TorusKind::Atropic;
    regime.d = 0;
    regime.omega = {1.0, 1.4142135623730951, 0.7071067811865476};
    auto reports = verify_regime_suite(regime, scan);
    for (const ClaimReport& r : reports) {
        CAPTURE(r.id);
        CHECK(r.ok());
    }
    bool has_uniqueness = false;
    for (const ClaimReport& r : reports) {
        if (r.id == "uniqueness-evidence") {
            has_uniqueness = true;
            CHECK(r.verdict == Verdict::EvidenceOnly);
        }
    }
    CHECK(has_uniqueness);

    regime.compact = true;
    for (const ClaimReport& r : verify_regime_suite(regime, scan)) {
        CAPTURE(r.id);
        CHECK(r.ok());
    }

    // d = s+2l: the family fills the phase space and the report notes the
    // non-involutive coordinate integrals via the bracket matrix rank.
    HamRegime full;
    full.N = 3;
    full.n = 3;
    full.target_class = TorusKind::Atropic;
    full.d = 3;  // s + 2l = 1 + 2
    full.omega = {};
    auto full_reports = verify_regime_suite(full, scan);
    for (const ClaimReport& r : full_reports) {
        CAPTURE(r.id);
        CHECK(r.ok());
    }
}

TEST_CASE("regime suite: reversible regimes") {
    ScanConfig scan;
    scan.samples = 60;

    RevRegime regime;
    regime.n = 2;
    regime.m = 2;
    regime.l = 1;
    regime.d_star = 1;
    regime.d = 2;
    regime.omega = {0.9, 1.7};
    for (const ClaimReport& r : verify_regime_suite(regime, scan)) {
        CAPTURE(r.id);
        CHECK(r.ok());
    }

    RevRegime isolated;
    isolated.n = 1;
    isolated.m = 1;
    isolated.l = 2;
    isolated.d_star = 0;
    isolated.d = 0;
    isolated.omega = {1.3};
    isolated.compact = true;
    auto reports = verify_regime_suite(isolated, scan);
    bool has_uniqueness = false;
    for (const ClaimReport& r : reports) {
        CAPTURE(r.id);
        CHECK(r.ok());
        if (r.id == "uniqueness-evidence") has_uniqueness = true;
    }
    CHECK(has_uniqueness);
}

}  // TEST_SUITE
