#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kron/dynamics.hpp"
#include "kron/errors.hpp"
#include "kron/io.hpp"
#include "kron/parse.hpp"
#include "kron/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw kron::Error(kron::ErrorCode::BadDocument, "cannot open '" + path + "'");
    }
    json doc;
    in >> doc;
    return doc;
}

void emit(const json& doc, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw kron::Error(kron::ErrorCode::BadDocument, "cannot write '" + out_path + "'");
    }
    out << doc.dump(2) << "\n";
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

const json& system_block(const json& config) {
    if (config.contains("system")) return config["system"];
    if (config.contains("kind")) return config;  // bare system document
    throw kron::Error(kron::ErrorCode::BadDocument, "config has no system document");
}

// Command-line overrides merge into the loaded config before use, so the
// echoed config always describes the run that actually happened.
struct RunOverrides {
    std::string method;
    double dt = -1;
    double horizon = -1;
    int store_every = -1;
    std::string start_csv;
    std::string omega_csv;
    int samples = -1;
    long seed = -1;
};

void apply_overrides(json& config, const RunOverrides& ov) {
    if (!ov.method.empty()) config["integrator"]["method"] = ov.method;
    if (ov.dt > 0) config["integrator"]["dt"] = ov.dt;
    if (ov.horizon >= 0) config["integrator"]["horizon"] = ov.horizon;
    if (ov.store_every > 0) config["integrator"]["store_every"] = ov.store_every;
    if (!ov.start_csv.empty()) config["start"] = parse_doubles(ov.start_csv);
    if (!ov.omega_csv.empty()) config["omega"] = parse_doubles(ov.omega_csv);
    if (ov.samples > 0) config["scan"]["samples"] = ov.samples;
    if (ov.seed >= 0) config["scan"]["seed"] = static_cast<unsigned>(ov.seed);
}

std::vector<double> start_state(const json& config, const kron::SystemModel& system) {
    std::vector<double> x(system.dim(), 0.0);
    if (!config.contains("start")) return x;
    const json& start = config["start"];
    if (start.is_array()) {
        if (start.size() != system.dim()) {
            throw kron::Error(kron::ErrorCode::BadDocument,
                              "start has " + std::to_string(start.size()) +
                                  " entries, phase space has " +
                                  std::to_string(system.dim()));
        }
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = start[i].get<double>();
        return x;
    }
    // Object form: exact base point in the torus-spec convention (entries in
    // units of pi on compact phase spaces) plus float angles phi0.
    const bool compact = kind_is_compact(system.kind);
    double unit = compact ? M_PI : 1.0;
    auto fill = [&](const char* key, std::size_t offset, int count) {
        if (!start.contains(key)) return;
        const json& block = start[key];
        if (static_cast<int>(block.size()) != count) {
            throw kron::Error(kron::ErrorCode::BadDocument,
                              std::string(key) + " does not match the phase space");
        }
        for (int i = 0; i < count; ++i) {
            x[offset + i] = kron::rat_to_double(kron::parse_rat(block[i].get<std::string>())) * unit;
        }
    };
    fill("u0", 0, system.count_u());
    fill("p0", system.p_offset(), system.count_p());
    fill("q0", system.q_offset(), system.count_q());
    if (start.contains("phi0")) {
        const json& phi = start["phi0"];
        for (int a = 0; a < system.count_phi() && a < static_cast<int>(phi.size()); ++a) {
            x[system.phi_offset() + a] = phi[a].get<double>();
        }
    }
    return x;
}

int cmd_plan(bool ham, bool compact, int N, int n, const std::string& cls, int d, int m, int l,
             int d_star, const std::string& omega_csv, const std::string& out_path) {
    std::vector<double> omega =
        omega_csv.empty() ? std::vector<double>{} : parse_doubles(omega_csv);
    json out;
    if (ham) {
        kron::PlanResult plan = kron::plan_parameters(N, n, kron::torus_kind_from_name(cls), d);
        kron::HamParams params = kron::planned_ham_params(plan, compact, omega);
        kron::SystemModel system = kron::make_system(params);
        out["system"] = kron::system_to_json(system);
        out["config"] = {{"plan", {{"family", "hamiltonian"}, {"N", N}, {"n", n},
                                   {"class", cls}, {"d", d}, {"compact", compact},
                                   {"omega", omega}}}};
    } else {
        kron::RevPlanResult plan = kron::plan_rev_parameters(n, m, l, d_star, d);
        kron::RevParams params = kron::planned_rev_params(plan, compact, omega);
        kron::SystemModel system = kron::make_system(params);
        out["system"] = kron::system_to_json(system);
        out["config"] = {{"plan", {{"family", "reversible"}, {"n", n}, {"m", m}, {"l", l},
                                   {"d_star", d_star}, {"d", d}, {"compact", compact},
                                   {"omega", omega}}}};
    }
    emit(out, out_path);
    return kExitOk;
}

int cmd_build(const std::string& config_path, const std::string& out_path) {
    json config = load_json(config_path);
    kron::SystemModel system = kron::system_from_json(system_block(config));
    json out;
    out["system"] = kron::system_to_json(system);
    out["config"] = config;
    emit(out, out_path);
    return kExitOk;
}

int cmd_classify(const std::string& config_path, const std::string& out_path) {
    json config = load_json(config_path);
    kron::SystemModel system = kron::system_from_json(system_block(config));
    if (!kind_is_hamiltonian(system.kind)) {
        throw kron::Error(kron::ErrorCode::BadDocument,
                          "classification applies to Hamiltonian kinds");
    }
    const kron::StructureMatrix& sm = *system.structure;
    kron::TorusClass tc = kron::classify_torus(sm);
    kron::RatMatrix complement = kron::torus_tangent_complement(sm);
    const kron::Dims& dims = sm.dims;

    json out;
    out["class"] = kron::torus_kind_name(tc.kind);
    out["intersection_dim"] = tc.intersection_dim;
    out["complement_dim"] = complement.cols();
    out["torus_dim"] = dims.torus_dim();
    out["degrees_of_freedom"] = dims.dof();
    out["phi_phi_block_of_W_zero"] = sm.form_is_exact();
    if (system.kind == kron::SystemKind::HamNoncompact) {
        out["form_is_exact"] = sm.form_is_exact();
    }
    out["det_J"] = kron::rat_to_string(sm.J.determinant());
    out["identities"] = {{"J_skew", sm.J.is_skew_symmetric()},
                         {"WJ_is_identity",
                          sm.W * sm.J == kron::RatMatrix::identity(sm.J.rows())}};
    out["equilibrium_torus"] = dims.s == 0;
    out["family_dimension"] = system.family.d;
    out["config"] = config;
    emit(out, out_path);
    std::cerr << "class: " << kron::torus_kind_name(tc.kind)
              << "  dim(T^perp): " << complement.cols()
              << "  exact form: " << (sm.form_is_exact() ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& sidecar_path, const RunOverrides& overrides) {
    json config = load_json(config_path);
    apply_overrides(config, overrides);
    kron::SystemModel system = kron::system_from_json(system_block(config));
    kron::IntegratorConfig icfg = config.contains("integrator")
                                      ? kron::integrator_config_from_json(config["integrator"])
                                      : kron::IntegratorConfig{};
    std::vector<double> x0 = start_state(config, system);
    kron::Trajectory traj = kron::integrate(system, x0, icfg);

    if (out_path.empty() || out_path == "-") {
        kron::write_trajectory_csv(std::cout, traj);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            throw kron::Error(kron::ErrorCode::BadDocument, "cannot write '" + out_path + "'");
        }
        kron::write_trajectory_csv(out, traj);
    }
    json sidecar;
    sidecar["diagnostics"] = kron::trajectory_diagnostics(traj);
    sidecar["system"] = kron::system_to_json(system);
    sidecar["config"] = config;
    if (!sidecar_path.empty()) emit(sidecar, sidecar_path);
    if (traj.stop == kron::StopReason::BlowUp) {
        std::cerr << "blow-up at t = " << traj.stop_time
                  << " (expected for off-family starts of non-compact systems)\n";
    }
    return kExitOk;
}

int cmd_frequencies(const std::string& config_path, const std::string& out_path,
                    const RunOverrides& overrides) {
    json config = load_json(config_path);
    apply_overrides(config, overrides);
    kron::SystemModel system = kron::system_from_json(system_block(config));
    kron::IntegratorConfig icfg = config.contains("integrator")
                                      ? kron::integrator_config_from_json(config["integrator"])
                                      : kron::IntegratorConfig{};
    std::vector<double> x0 = start_state(config, system);
    kron::Trajectory traj = kron::integrate(system, x0, icfg);

    std::vector<std::size_t> phi_idx;
    for (int a = 0; a < system.count_phi(); ++a) phi_idx.push_back(system.phi_offset() + a);

    double threshold = config.value("residual_threshold", 1e-4);
    json out;
    out["config"] = config;
    out["diagnostics"] = kron::trajectory_diagnostics(traj);
    bool ok = true;
    try {
        kron::FrequencyEstimate est = kron::estimate_frequencies(traj, phi_idx, threshold);
        out["omega_estimated"] = est.omega;
        out["rms_residual"] = est.rms_residual;
        if (config.contains("omega")) {
            std::vector<double> planned = config["omega"].get<std::vector<double>>();
            double tol = config.value("tolerance", 1e-6);
            double worst = 0;
            for (std::size_t a = 0; a < planned.size() && a < est.omega.size(); ++a) {
                worst = std::max(worst, std::abs(planned[a] - est.omega[a]));
            }
            out["omega_planned"] = planned;
            out["max_error"] = worst;
            out["tolerance"] = tol;
            ok = worst <= tol;
        }
    } catch (const kron::Error& e) {
        if (e.code() != kron::ErrorCode::NotLinear) throw;
        out["not_linear"] = e.what();
        ok = false;
    }
    out["ok"] = ok;
    emit(out, out_path);
    return ok ? kExitOk : kExitClaimFailed;
}

int cmd_verify(const std::string& config_path, const std::string& out_path,
               const RunOverrides& overrides) {
    json config = load_json(config_path);
    apply_overrides(config, overrides);
    const json& th = config.contains("regime") ? config["regime"] : config;
    kron::ScanConfig scan;
    if (config.contains("scan")) scan = kron::scan_config_from_json(config["scan"]);

    std::string family = th.value("family", "hamiltonian");
    std::vector<kron::ClaimReport> reports;
    if (family == "hamiltonian" || family == "ham") {
        kron::HamRegime regime;
        regime.N = th.at("N").get<int>();
        regime.n = th.at("n").get<int>();
        regime.target_class = kron::torus_kind_from_name(th.at("class").get<std::string>());
        regime.d = th.at("d").get<int>();
        regime.compact = th.value("compact", false);
        if (th.contains("omega")) regime.omega = th["omega"].get<std::vector<double>>();
        reports = kron::verify_regime_suite(regime, scan);
    } else if (family == "reversible" || family == "rev") {
        kron::RevRegime regime;
        regime.n = th.at("n").get<int>();
        regime.m = th.at("m").get<int>();
        regime.l = th.at("l").get<int>();
        regime.d_star = th.at("d_star").get<int>();
        regime.d = th.at("d").get<int>();
        regime.compact = th.value("compact", false);
        if (th.contains("omega")) regime.omega = th["omega"].get<std::vector<double>>();
        reports = kron::verify_regime_suite(regime, scan);
    } else {
        throw kron::Error(kron::ErrorCode::BadDocument, "unknown regime family '" + family + "'");
    }

    std::cout << kron::claims_to_table(reports);
    json out;
    out["claims"] = json::array();
    bool all_ok = true;
    for (const kron::ClaimReport& r : reports) {
        out["claims"].push_back(kron::claim_to_json(r));
        all_ok = all_ok && r.ok();
    }
    out["ok"] = all_ok;
    out["config"] = config;
    if (!out_path.empty()) emit(out, out_path);
    return all_ok ? kExitOk : kExitClaimFailed;
}

int cmd_scan(const std::string& config_path, const std::string& out_path,
             const RunOverrides& overrides) {
    json config = load_json(config_path);
    apply_overrides(config, overrides);
    kron::SystemModel system = kron::system_from_json(system_block(config));
    kron::ScanConfig scan;
    if (config.contains("scan")) scan = kron::scan_config_from_json(config["scan"]);
    std::optional<kron::DomainSpec> domain;
    if (config.contains("domain")) domain = kron::domain_from_json(config["domain"]);

    std::vector<kron::ClaimReport> reports;
    reports.push_back(kron::uniqueness_scan(system, scan, domain));
    reports.push_back(kron::family_stationarity_scan(system, scan));
    std::cout << kron::claims_to_table(reports);

    json out;
    out["claims"] = {kron::claim_to_json(reports[0]), kron::claim_to_json(reports[1])};
    bool all_ok = reports[0].ok() && reports[1].ok();
    out["ok"] = all_ok;
    out["config"] = config;
    if (!out_path.empty()) emit(out, out_path);
    return all_ok ? kExitOk : kExitClaimFailed;
}

int cmd_diophantine(const std::string& omega_csv, double tau, int jmax,
                    const std::string& exact_csv, const std::string& out_path) {
    std::vector<double> omega = parse_doubles(omega_csv);
    std::optional<std::vector<kron::Rat>> exact;
    if (!exact_csv.empty()) {
        std::vector<kron::Rat> rats;
        std::stringstream ss(exact_csv);
        std::string item;
        while (std::getline(ss, item, ',')) rats.push_back(kron::parse_rat(item));
        exact = std::move(rats);
    }
    kron::DiophantineReport report = kron::diophantine_scan(omega, tau, jmax, exact);
    emit(kron::diophantine_to_json(report), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construct, simulate and verify systems with families of invariant tori"};
    app.require_subcommand(1);

    // plan
    auto* plan = app.add_subcommand("plan", "emit a system document for a parameter regime");
    bool plan_ham = false, plan_rev = false, plan_compact = false;
    int plan_N = 0, plan_n = 0, plan_d = 0, plan_m = 0, plan_l = 1, plan_dstar = 0;
    std::string plan_class, plan_omega, plan_out;
    plan->add_flag("--ham", plan_ham, "Hamiltonian family");
    plan->add_flag("--rev", plan_rev, "reversible family");
    plan->add_flag("--compact", plan_compact, "torus phase space");
    plan->add_option("-N,--dof", plan_N, "degrees of freedom (Hamiltonian)");
    plan->add_option("-n,--torus-dim", plan_n, "torus dimension");
    plan->add_option("--class", plan_class, "target torus class");
    plan->add_option("-d", plan_d, "family dimension");
    plan->add_option("-m", plan_m, "u count (reversible)");
    plan->add_option("-l", plan_l, "q count (reversible)");
    plan->add_option("--dstar", plan_dstar, "symmetric subfamily dimension (reversible)");
    plan->add_option("--omega", plan_omega, "frequency vector, comma separated");
    plan->add_option("-o,--output", plan_out, "output path (default stdout)");

    // build
    auto* build = app.add_subcommand("build", "validate and normalize a system document");
    std::string build_config, build_out;
    build->add_option("--config", build_config, "config or system document")->required();
    build->add_option("-o,--output", build_out, "output path");

    // classify
    auto* classify = app.add_subcommand("classify", "torus class and structure identities");
    std::string cls_config, cls_out;
    classify->add_option("--config", cls_config, "config or system document")->required();
    classify->add_option("-o,--output", cls_out, "output path");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate and write a trajectory CSV");
    std::string sim_config, sim_out, sim_sidecar;
    simulate->add_option("--config", sim_config, "config with system/integrator/start")
        ->required();
    simulate->add_option("-o,--output", sim_out, "CSV path (default stdout)");
    simulate->add_option("--sidecar", sim_sidecar, "JSON sidecar path");
    RunOverrides sim_over;
    simulate->add_option("--method", sim_over.method, "rk4 | midpoint | exact-split");
    simulate->add_option("--dt", sim_over.dt, "time step");
    simulate->add_option("-T,--horizon", sim_over.horizon, "integration horizon");
    simulate->add_option("--store-every", sim_over.store_every, "sample thinning");
    simulate->add_option("--start", sim_over.start_csv, "start state, comma separated");

    // frequencies
    auto* freq = app.add_subcommand("frequencies", "estimate frequencies against the plan");
    std::string freq_config, freq_out;
    freq->add_option("--config", freq_config, "config with system/integrator/start")->required();
    freq->add_option("-o,--output", freq_out, "output path");
    RunOverrides freq_over;
    freq->add_option("--dt", freq_over.dt, "time step");
    freq->add_option("-T,--horizon", freq_over.horizon, "integration horizon");
    freq->add_option("--start", freq_over.start_csv, "start state, comma separated");
    freq->add_option("--omega", freq_over.omega_csv, "planned frequencies to compare against");

    // verify
    auto* verify = app.add_subcommand("verify", "run the regime claim suite");
    std::string verify_config, verify_out;
    verify->add_option("--config", verify_config, "config with the regime to check")->required();
    verify->add_option("-o,--output", verify_out, "JSON report path");
    RunOverrides verify_over;
    verify->add_option("--samples", verify_over.samples, "scan sample count");
    verify->add_option("--seed", verify_over.seed, "scan seed");

    // scan
    auto* scan = app.add_subcommand("scan", "uniqueness / strong-isolation evidence scan");
    std::string scan_config, scan_out;
    scan->add_option("--config", scan_config, "config with system and scan block")->required();
    scan->add_option("-o,--output", scan_out, "JSON report path");
    RunOverrides scan_over;
    scan->add_option("--samples", scan_over.samples, "scan sample count");
    scan->add_option("--seed", scan_over.seed, "scan seed");

    // diophantine
    auto* dio = app.add_subcommand("diophantine", "resonance and Diophantine-constant scan");
    std::string dio_omega, dio_exact, dio_out;
    double dio_tau = 1.0;
    int dio_jmax = 100;
    dio->add_option("--omega", dio_omega, "frequency vector, comma separated")->required();
    dio->add_option("--tau", dio_tau, "Diophantine exponent");
    dio->add_option("--jmax", dio_jmax, "l1 radius of the integer scan");
    dio->add_option("--exact", dio_exact, "exact rational omega entries, comma separated");
    dio->add_option("-o,--output", dio_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*plan) {
            if (plan_ham == plan_rev) {
                std::cerr << "plan: exactly one of --ham / --rev is required\n";
                return kExitUsage;
            }
            return cmd_plan(plan_ham, plan_compact, plan_N, plan_n, plan_class, plan_d, plan_m,
                            plan_l, plan_dstar, plan_omega, plan_out);
        }
        if (*build) return cmd_build(build_config, build_out);
        if (*classify) return cmd_classify(cls_config, cls_out);
        if (*simulate) return cmd_simulate(sim_config, sim_out, sim_sidecar, sim_over);
        if (*freq) return cmd_frequencies(freq_config, freq_out, freq_over);
        if (*verify) return cmd_verify(verify_config, verify_out, verify_over);
        if (*scan) return cmd_scan(scan_config, scan_out, scan_over);
        if (*dio) return cmd_diophantine(dio_omega, dio_tau, dio_jmax, dio_exact, dio_out);
    } catch (const kron::Error& e) {
        std::cerr << "error [" << kron::error_code_name(e.code()) << "]: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error [BadDocument]: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitUsage;
}
