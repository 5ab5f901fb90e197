#include "doctest.h"

#include <sstream>

#include "kron/errors.hpp"
#include "kron/io.hpp"

using namespace kron;
using nlohmann::json;

TEST_SUITE("io") {

TEST_CASE("structure spec documents round trip exactly") {
    StructureSpec spec = default_structure_spec({2, 1, 1});
    spec.Z.at(0, 0) = rat(-7, 3);
    json doc = structure_spec_to_json(spec);
    StructureSpec back = structure_spec_from_json(doc);
    CHECK(back.dims == spec.dims);
    CHECK(back.Z == spec.Z);
    CHECK(back.L == spec.L);
    CHECK(doc["Z"][0] == "-7/3");

    json broken = doc;
    broken["Z"][0] = "0.5";  // floats are not accepted, ever
    CHECK_THROWS_AS(structure_spec_from_json(broken), Error);
    broken = doc;
    broken.erase("L");
    CHECK_THROWS_AS(structure_spec_from_json(broken), Error);
}

TEST_CASE("system documents round trip through make_system") {
    PlanResult plan = plan_parameters(3, 3, TorusKind::Atropic, 1);
    for (bool compact : {false, true}) {
        SystemModel sys =
            make_system(planned_ham_params(plan, compact, {0.5, 1.25, -2.0}));
        json doc = system_to_json(sys);
        SystemModel back = system_from_json(doc);
        CHECK(back.kind == sys.kind);
        CHECK(system_to_json(back) == doc);  // normalization is idempotent
        for (std::size_t a = 0; a < sys.dim(); ++a) {
            CHECK(back.vector_field[a] == sys.vector_field[a]);
        }
    }

    RevPlanResult rp = plan_rev_parameters(2, 1, 1, 1, 2);
    SystemModel rev = make_system(planned_rev_params(rp, true, {0.9, -0.4}));
    json rdoc = system_to_json(rev);
    SystemModel rback = system_from_json(rdoc);
    CHECK(system_to_json(rback) == rdoc);
    CHECK(rback.family.d == rev.family.d);
}

TEST_CASE("bad documents raise BadDocument") {
    auto expect_bad = [](const json& doc) {
        try {
            system_from_json(doc);
            FAIL_CHECK("expected BadDocument for " << doc.dump());
        } catch (const Error& e) {
            bool acceptable = e.code() == ErrorCode::BadDocument ||
                              e.code() == ErrorCode::ParseError ||
                              e.code() == ErrorCode::NegativeConstant;
            CHECK(acceptable);
        }
    };
    expect_bad(json{{"kind", "nonsense"}});
    expect_bad(json{{"kind", "ham-noncompact"}});

    PlanResult plan = plan_parameters(2, 1, TorusKind::StrictlyIsotropic, 0);
    json doc = system_to_json(make_system(planned_ham_params(plan, false, {1.0})));
    json neg = doc;
    neg["constants"]["zeta"][0] = "-1";
    expect_bad(neg);
    json garbled = doc;
    garbled["h"] = "u1 + ";
    expect_bad(garbled);
}

TEST_CASE("trajectory CSV format") {
    PlanResult plan = plan_parameters(2, 1, TorusKind::StrictlyIsotropic, 0);
    SystemModel sys = make_system(planned_ham_params(plan, false, {1.4142135623730951}));
    IntegratorConfig cfg;
    cfg.dt = 0.25;
    cfg.horizon = 1.0;
    Trajectory traj = integrate(sys, {0, 0.5, 0, 0}, cfg);

    std::ostringstream os;
    write_trajectory_csv(os, traj);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,u1,phi1,p1,q1");
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        // 17 significant digits: every stored double round-trips bitwise.
        std::stringstream fields(line);
        std::string cell;
        std::getline(fields, cell, ',');
        CHECK(std::stod(cell) == traj.times[rows]);
        for (std::size_t i = 0; i < traj.states[rows].size(); ++i) {
            std::getline(fields, cell, ',');
            CHECK(std::stod(cell) == traj.states[rows][i]);
        }
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("blow-up leaves a diagnostic trailer") {
    json doc;
    doc["kind"] = "ham-noncompact";
    doc["structure"] = structure_spec_to_json(default_structure_spec({1, 0, 1}));
    doc["constants"] = {{"zeta", {"0"}}, {"xi", {"1"}}, {"eta", {"0"}}};
    doc["h"] = "0";
    SystemModel sys = system_from_json(doc);
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 3.0;
    Trajectory traj = integrate(sys, {0, 0, 0, 1.0}, cfg);
    REQUIRE(traj.stop == StopReason::BlowUp);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    CHECK(os.str().find("# stop=blowup t=") != std::string::npos);
    CHECK(trajectory_diagnostics(traj)["stop"] == "blowup");
}

TEST_CASE("claim table renders one row per claim") {
    ClaimReport a{"alpha", Verdict::VerifiedExact, {}};
    ClaimReport b{"beta-long-name", Verdict::Failed, {{"witness", "boom"}}};
    std::string table = claims_to_table({a, b});
    CHECK(table.find("alpha") != std::string::npos);
    CHECK(table.find("verified-exact") != std::string::npos);
    CHECK(table.find("failed") != std::string::npos);
    CHECK(table.find("boom") != std::string::npos);
    CHECK(std::count(table.begin(), table.end(), '\n') == 2);
}

TEST_CASE("integrator and scan configs validate their ranges") {
    CHECK(integrator_config_from_json(json{{"method", "midpoint"}, {"dt", 0.5}}).dt == 0.5);
    CHECK(integrator_config_from_json(json{{"method", "exact-split"}}).method ==
          Method::ExactSplit);
    CHECK_THROWS_AS(integrator_config_from_json(json{{"dt", -1.0}}), Error);
    CHECK_THROWS_AS(integrator_config_from_json(json{{"method", "euler"}}), Error);
    CHECK(scan_config_from_json(json{{"samples", 5}, {"seed", 9}}).seed == 9);
    CHECK_THROWS_AS(scan_config_from_json(json{{"samples", 0}}), Error);
    DomainSpec d = domain_from_json(json{{"q_star", {3.14}}, {"eps", {-1}}});
    CHECK(d.eps[0] == -1);
    CHECK_THROWS_AS(domain_from_json(json{{"q_star", {3.14}}, {"eps", {2}}}), Error);
}

}  // TEST_SUITE
