#include "kron/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "kron/errors.hpp"
#include "kron/parse.hpp"

namespace kron {

namespace {

[[noreturn]] void bad(const std::string& msg) {
    throw Error(ErrorCode::BadDocument, msg);
}

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) bad(std::string("missing field '") + key + "'");
    return *it;
}

std::vector<Rat> rats_from_json(const nlohmann::json& a, const char* what) {
    if (!a.is_array()) bad(std::string(what) + " must be an array of rational strings");
    std::vector<Rat> out;
    for (const auto& v : a) {
        if (!v.is_string()) bad(std::string(what) + " entries must be strings like \"3/4\"");
        out.push_back(parse_rat(v.get<std::string>()));
    }
    return out;
}

nlohmann::json rats_to_json(const std::vector<Rat>& rs) {
    nlohmann::json a = nlohmann::json::array();
    for (const Rat& r : rs) a.push_back(rat_to_string(r));
    return a;
}

}  // namespace

nlohmann::json matrix_to_json(const RatMatrix& m) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) a.push_back(rat_to_string(m.at(r, c)));
    return a;
}

RatMatrix matrix_from_json(const nlohmann::json& a, std::size_t rows, std::size_t cols) {
    std::vector<Rat> entries = rats_from_json(a, "matrix");
    if (entries.size() != rows * cols) {
        bad("matrix has " + std::to_string(entries.size()) + " entries, expected " +
            std::to_string(rows * cols));
    }
    return RatMatrix(rows, cols, std::move(entries));
}

nlohmann::json structure_spec_to_json(const StructureSpec& spec) {
    return {{"dims", {{"s", spec.dims.s}, {"k", spec.dims.k}, {"l", spec.dims.l}}},
            {"Z", matrix_to_json(spec.Z)},
            {"L", matrix_to_json(spec.L)}};
}

StructureSpec structure_spec_from_json(const nlohmann::json& doc) {
    const auto& dims = field(doc, "dims");
    StructureSpec spec;
    spec.dims.s = field(dims, "s").get<int>();
    spec.dims.k = field(dims, "k").get<int>();
    spec.dims.l = field(dims, "l").get<int>();
    if (spec.dims.s < 0 || spec.dims.k < 0 || spec.dims.l < 0) bad("dims must be non-negative");
    std::size_t n = static_cast<std::size_t>(spec.dims.torus_dim());
    std::size_t s = static_cast<std::size_t>(spec.dims.s);
    spec.Z = matrix_from_json(field(doc, "Z"), n, s);
    spec.L = matrix_from_json(field(doc, "L"), n, n);
    return spec;
}

nlohmann::json system_to_json(const SystemModel& system) {
    nlohmann::json doc;
    doc["kind"] = system_kind_name(system.kind);
    if (kind_is_hamiltonian(system.kind)) {
        const HamParams& p = *system.ham;
        doc["structure"] = structure_spec_to_json(p.spec);
        doc["constants"] = {{"zeta", rats_to_json(p.zeta)},
                            {"xi", rats_to_json(p.xi)},
                            {"eta", rats_to_json(p.eta)}};
        doc["h"] = print_expr(p.h);
    } else {
        const RevParams& p = *system.rev;
        doc["dims"] = {{"n", p.n}, {"m", p.m}, {"l", p.l}};
        doc["constants"] = {{"zeta", rats_to_json(p.zeta)}, {"xi", rats_to_json(p.xi)}};
        nlohmann::json hs = nlohmann::json::array();
        for (const PolyExpr& h : p.h) hs.push_back(print_expr(h));
        doc["h"] = hs;
    }
    return doc;
}

SystemModel system_from_json(const nlohmann::json& doc) {
    std::string kind = field(doc, "kind").get<std::string>();
    bool compact = kind == "ham-compact" || kind == "rev-compact";
    bool ham = kind == "ham-noncompact" || kind == "ham-compact";
    if (!ham && kind != "rev-noncompact" && kind != "rev-compact") {
        bad("unknown kind '" + kind + "'");
    }
    const auto& constants = field(doc, "constants");

    if (ham) {
        HamParams p;
        p.compact = compact;
        p.spec = structure_spec_from_json(field(doc, "structure"));
        p.zeta = rats_from_json(field(constants, "zeta"), "zeta");
        p.xi = rats_from_json(field(constants, "xi"), "xi");
        p.eta = rats_from_json(field(constants, "eta"), "eta");
        std::vector<Var> uvars;
        for (int i = 1; i <= p.spec.dims.s; ++i) {
            uvars.push_back({"u" + std::to_string(i),
                             compact ? VarKind::Angle : VarKind::Line});
        }
        p.h = parse_expr(field(doc, "h").get<std::string>(), uvars);
        return make_system(p);
    }

    RevParams p;
    p.compact = compact;
    const auto& dims = field(doc, "dims");
    p.n = field(dims, "n").get<int>();
    p.m = field(dims, "m").get<int>();
    p.l = field(dims, "l").get<int>();
    p.zeta = rats_from_json(field(constants, "zeta"), "zeta");
    p.xi = rats_from_json(field(constants, "xi"), "xi");
    std::vector<Var> uvars;
    for (int i = 1; i <= p.m; ++i) {
        uvars.push_back({"u" + std::to_string(i), compact ? VarKind::Angle : VarKind::Line});
    }
    const auto& hs = field(doc, "h");
    if (!hs.is_array()) bad("reversible h must be an array of expressions");
    for (const auto& h : hs) p.h.push_back(parse_expr(h.get<std::string>(), uvars));
    return make_system(p);
}

nlohmann::json claim_to_json(const ClaimReport& report) {
    return {{"id", report.id},
            {"verdict", verdict_name(report.verdict)},
            {"details", report.details}};
}

std::string claims_to_table(const std::vector<ClaimReport>& reports) {
    std::size_t width = 4;
    for (const ClaimReport& r : reports) width = std::max(width, r.id.size());
    std::ostringstream os;
    for (const ClaimReport& r : reports) {
        os << r.id << std::string(width - r.id.size() + 2, ' ')
           << verdict_name(r.verdict);
        nlohmann::json keys = nlohmann::json::object();
        for (const char* k : {"d", "class", "max_error", "escapes", "samples",
                              "sign_violations", "false_positives", "fraction"}) {
            if (r.details.contains(k)) keys[k] = r.details[k];
        }
        if (r.verdict == Verdict::Failed && r.details.contains("witness")) {
            keys["witness"] = r.details["witness"];
        }
        if (!keys.empty()) os << "  " << keys.dump();
        os << "\n";
    }
    return os.str();
}

nlohmann::json diophantine_to_json(const DiophantineReport& report) {
    nlohmann::json doc{{"omega", report.omega},
                       {"tau", report.tau},
                       {"tau_admissible", report.tau_admissible},
                       {"j_max", report.j_max},
                       {"gamma_hat", report.gamma_hat},
                       {"resonant", report.resonant}};
    doc["worst_j"] = report.worst_j;
    if (report.resonant) {
        doc["witness_j"] = report.witness_j;
        doc["witness_exact"] = report.witness_exact;
        doc["resonance_float_tolerance"] = report.float_tolerance;
    }
    return doc;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t";
    for (const std::string& c : traj.coordinates) os << "," << c;
    os << "\n";
    char buf[32];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[i]);
        os << buf;
        for (double v : traj.states[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << "," << buf;
        }
        os << "\n";
    }
    if (traj.stop == StopReason::BlowUp) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.stop_time);
        os << "# stop=blowup t=" << buf << "\n";
    }
}

nlohmann::json trajectory_diagnostics(const Trajectory& traj) {
    nlohmann::json doc{{"method", method_name(traj.method)},
                       {"dt", traj.dt},
                       {"samples", traj.times.size()},
                       {"stop", traj.stop == StopReason::BlowUp ? "blowup" : "completed"},
                       {"stop_time", traj.stop_time}};
    if (traj.method == Method::ImplicitMidpoint) {
        doc["fixed_point_iterations"] = {{"total", traj.total_fp_iterations},
                                         {"max_per_step", traj.max_fp_iterations}};
    }
    return doc;
}

IntegratorConfig integrator_config_from_json(const nlohmann::json& doc) {
    IntegratorConfig cfg;
    if (doc.contains("method")) cfg.method = method_from_name(doc["method"].get<std::string>());
    if (doc.contains("dt")) cfg.dt = doc["dt"].get<double>();
    if (doc.contains("horizon")) cfg.horizon = doc["horizon"].get<double>();
    if (doc.contains("fp_tol")) cfg.fp_tol = doc["fp_tol"].get<double>();
    if (doc.contains("fp_max_iters")) cfg.fp_max_iters = doc["fp_max_iters"].get<int>();
    if (doc.contains("blowup_bound")) cfg.blowup_bound = doc["blowup_bound"].get<double>();
    if (doc.contains("split_substeps")) cfg.split_substeps = doc["split_substeps"].get<int>();
    if (doc.contains("store_every")) cfg.store_every = doc["store_every"].get<int>();
    if (cfg.dt <= 0 || cfg.fp_tol <= 0 || cfg.fp_max_iters < 1 || cfg.store_every < 1) {
        bad("integrator config out of range");
    }
    return cfg;
}

ScanConfig scan_config_from_json(const nlohmann::json& doc) {
    ScanConfig cfg;
    if (doc.contains("samples")) cfg.samples = doc["samples"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<unsigned>();
    if (doc.contains("margin")) cfg.margin = doc["margin"].get<double>();
    if (doc.contains("delta")) cfg.delta = doc["delta"].get<double>();
    if (doc.contains("stationary_tol")) cfg.stationary_tol = doc["stationary_tol"].get<double>();
    if (doc.contains("horizon")) cfg.horizon = doc["horizon"].get<double>();
    if (doc.contains("dt")) cfg.dt = doc["dt"].get<double>();
    if (cfg.samples < 1 || cfg.delta <= 0 || cfg.dt <= 0 || cfg.margin <= 0) {
        bad("scan config out of range");
    }
    return cfg;
}

DomainSpec domain_from_json(const nlohmann::json& doc) {
    DomainSpec d;
    for (const auto& v : field(doc, "q_star")) d.q_star.push_back(v.get<double>());
    if (doc.contains("eps")) {
        for (const auto& v : doc["eps"]) {
            int e = v.get<int>();
            if (e != 1 && e != -1) bad("domain eps entries must be +1 or -1");
            d.eps.push_back(e);
        }
    }
    return d;
}

TorusKind torus_kind_from_name(const std::string& name) {
    if (name == "lagrangian") return TorusKind::Lagrangian;
    if (name == "strictly-isotropic" || name == "isotropic") return TorusKind::StrictlyIsotropic;
    if (name == "strictly-coisotropic" || name == "coisotropic")
        return TorusKind::StrictlyCoisotropic;
    if (name == "atropic") return TorusKind::Atropic;
    bad("unknown torus class '" + name + "'");
}

}  // namespace kron
