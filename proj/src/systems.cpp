#include "kron/systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kron/errors.hpp"
#include "kron/parse.hpp"

namespace kron {

const char* system_kind_name(SystemKind k) {
    switch (k) {
        case SystemKind::HamNoncompact: return "ham-noncompact";
        case SystemKind::HamCompact: return "ham-compact";
        case SystemKind::RevNoncompact: return "rev-noncompact";
        case SystemKind::RevCompact: return "rev-compact";
    }
    return "?";
}

bool kind_is_hamiltonian(SystemKind k) {
    return k == SystemKind::HamNoncompact || k == SystemKind::HamCompact;
}

bool kind_is_compact(SystemKind k) {
    return k == SystemKind::HamCompact || k == SystemKind::RevCompact;
}

int SystemModel::count_u() const {
    return ham ? ham->spec.dims.s : rev->m;
}

int SystemModel::count_phi() const {
    return ham ? ham->spec.dims.torus_dim() : rev->n;
}

int SystemModel::count_p() const {
    return ham ? ham->spec.dims.l : 0;
}

int SystemModel::count_q() const {
    return ham ? ham->spec.dims.l : rev->l;
}

namespace {

std::string coord(const char* stem, int i) { return stem + std::to_string(i); }

void check_nonnegative(const std::vector<Rat>& cs, const char* what) {
    for (const Rat& c : cs) {
        if (c < 0) {
            throw Error(ErrorCode::NegativeConstant,
                        std::string(what) + " constants must be non-negative");
        }
    }
}

void check_h_context(const PolyExpr& h, int u_count, bool compact, const char* what) {
    VarKind expected = compact ? VarKind::Angle : VarKind::Line;
    for (const Var& v : h.context()) {
        bool ok = false;
        for (int i = 1; i <= u_count; ++i) {
            if (v.name == coord("u", i)) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw Error(ErrorCode::ContextMismatch,
                        std::string(what) + " may only depend on the u coordinates, got '" +
                            v.name + "'");
        }
        if (v.kind != expected) {
            throw Error(ErrorCode::VariableKindClash,
                        std::string(what) + " uses '" + v.name + "' with the wrong kind");
        }
    }
}

PolyExpr sin1(const std::string& z) { return PolyExpr::sin_of({{z, 1}}); }
PolyExpr cos1(const std::string& z) { return PolyExpr::cos_of({{z, 1}}); }
PolyExpr sin2(const std::string& z) { return PolyExpr::sin_of({{z, 2}}); }

Involution make_involution(const std::vector<Var>& chart, const std::vector<int>& signs) {
    Involution inv;
    inv.signs = signs;
    for (std::size_t i = 0; i < chart.size(); ++i) {
        if (signs[i] == 1) {
            inv.fix_dim += 1;
        } else {
            inv.codim += 1;
            if (chart[i].kind == VarKind::Angle) inv.fixed_components *= 2;
        }
    }
    return inv;
}

TorusFamily make_ham_family(const HamParams& p, SystemKind kind) {
    const int s = p.spec.dims.s, l = p.spec.dims.l;
    TorusFamily fam;
    fam.kind = kind;
    fam.u_pinned.resize(s);
    fam.p_pinned.resize(l);
    fam.q_pinned.resize(l);
    for (int i = 0; i < s; ++i) fam.u_pinned[i] = (l >= 1 && p.zeta[i] > 0);
    for (int v = 0; v < l; ++v) fam.p_pinned[v] = (p.eta[v] > 0);
    for (int v = 0; v < l; ++v) fam.q_pinned[v] = (p.xi[v] > 0);
    int pinned = 0;
    for (bool b : fam.u_pinned) pinned += b;
    for (bool b : fam.p_pinned) pinned += b;
    for (bool b : fam.q_pinned) pinned += b;
    fam.d = s + 2 * l - pinned;
    return fam;
}

TorusFamily make_rev_family(const RevParams& p, SystemKind kind) {
    TorusFamily fam;
    fam.kind = kind;
    fam.u_pinned.resize(p.m);
    fam.q_pinned.resize(p.l);
    for (int i = 0; i < p.m; ++i) fam.u_pinned[i] = (p.l >= 1 && p.zeta[i] > 0);
    for (int v = 0; v < p.l; ++v) fam.q_pinned[v] = (p.xi[v] > 0);
    int pinned = 0;
    for (bool b : fam.u_pinned) pinned += b;
    for (bool b : fam.q_pinned) pinned += b;
    fam.d = p.m + p.l - pinned;
    if (p.l == 0) {
        fam.d_star = p.m;
    } else {
        int z = 0;
        for (const Rat& c : p.zeta) z += (c == 0);
        fam.d_star = z;
    }
    return fam;
}

}  // namespace

SystemModel make_system(const HamParams& params) {
    const Dims& dims = params.spec.dims;
    const int s = dims.s, l = dims.l, n = dims.torus_dim();
    if (static_cast<int>(params.zeta.size()) != s ||
        static_cast<int>(params.xi.size()) != l ||
        static_cast<int>(params.eta.size()) != l) {
        throw Error(ErrorCode::BadDocument, "constant vectors do not match (s, l)");
    }
    check_nonnegative(params.zeta, "zeta");
    check_nonnegative(params.xi, "xi");
    check_nonnegative(params.eta, "eta");
    check_h_context(params.h, s, params.compact, "h");

    SystemModel model;
    model.kind = params.compact ? SystemKind::HamCompact : SystemKind::HamNoncompact;
    model.ham = params;
    model.structure = assemble_structure(params.spec);
    model.chart = phase_chart(dims, params.compact);

    const Rat lr(l);
    PolyExpr H = params.h;
    if (!params.compact) {
        PolyExpr usq;  // sum zeta_i u_i^2
        for (int i = 1; i <= s; ++i) {
            usq = usq + PolyExpr::variable(coord("u", i)).pow(2).scaled(params.zeta[i - 1]);
        }
        if (l >= 1) {
            H = H + (PolyExpr::variable("p1") * usq).scaled(lr);
        }
        for (int v = 1; v <= l; ++v) {
            PolyExpr pv = PolyExpr::variable(coord("p", v));
            PolyExpr qv = PolyExpr::variable(coord("q", v));
            H = H + (pv * qv.pow(2)).scaled(params.xi[v - 1]) +
                pv.pow(3).scaled(params.eta[v - 1] / 3);
        }
    } else {
        PolyExpr usq;  // sum zeta_i sin^2 u_i
        for (int i = 1; i <= s; ++i) {
            usq = usq + sin1(coord("u", i)).pow(2).scaled(params.zeta[i - 1]);
        }
        if (l >= 1) {
            H = H + (sin1("p1") * usq).scaled(lr);
        }
        for (int v = 1; v <= l; ++v) {
            PolyExpr sp = sin1(coord("p", v));
            PolyExpr sq = sin1(coord("q", v));
            H = H + (sp * sq.pow(2)).scaled(params.xi[v - 1]) +
                sp.pow(3).scaled(params.eta[v - 1] / 3);
        }
    }
    model.hamiltonian = H;

    // Route one: J grad H.
    std::vector<PolyExpr> from_bracket(model.dim());
    {
        std::vector<PolyExpr> grad(model.dim());
        for (std::size_t b = 0; b < model.dim(); ++b) {
            grad[b] = H.derivative(model.chart[b].name);
        }
        for (std::size_t a = 0; a < model.dim(); ++a) {
            for (std::size_t b = 0; b < model.dim(); ++b) {
                const Rat& j = model.structure->J.at(a, b);
                if (j == 0 || grad[b].is_zero()) continue;
                from_bracket[a] = from_bracket[a] + grad[b].scaled(j);
            }
        }
    }

    // Route two: the displayed closed-form equations.
    std::vector<PolyExpr> field(model.dim());
    {
        std::vector<PolyExpr> u_terms(s);  // dh/du_i plus the zeta coupling
        for (int i = 1; i <= s; ++i) {
            PolyExpr t = params.h.derivative(coord("u", i));
            if (l >= 1) {
                if (!params.compact) {
                    t = t + (PolyExpr::variable(coord("u", i)) * PolyExpr::variable("p1"))
                                .scaled(2 * lr * params.zeta[i - 1]);
                } else {
                    t = t + (sin2(coord("u", i)) * sin1("p1"))
                                .scaled(lr * params.zeta[i - 1]);
                }
            }
            u_terms[i - 1] = t;
        }
        for (int a = 0; a < n; ++a) {
            PolyExpr phidot;
            for (int i = 0; i < s; ++i) {
                const Rat& z = params.spec.Z.at(a, i);
                if (z == 0 || u_terms[i].is_zero()) continue;
                phidot = phidot + u_terms[i].scaled(z);
            }
            field[model.phi_offset() + a] = phidot;
        }
        PolyExpr drive;  // l * sum zeta_i u_i^2 (sin^2 on tori)
        if (l >= 1) {
            for (int i = 1; i <= s; ++i) {
                PolyExpr sq = params.compact ? sin1(coord("u", i)).pow(2)
                                             : PolyExpr::variable(coord("u", i)).pow(2);
                drive = drive + sq.scaled(lr * params.zeta[i - 1]);
            }
        }
        for (int v = 1; v <= l; ++v) {
            const Rat& xi = params.xi[v - 1];
            const Rat& eta = params.eta[v - 1];
            PolyExpr pdot, qdot;
            if (!params.compact) {
                PolyExpr pv = PolyExpr::variable(coord("p", v));
                PolyExpr qv = PolyExpr::variable(coord("q", v));
                pdot = (pv * qv).scaled(-2 * xi);
                qdot = qv.pow(2).scaled(xi) + pv.pow(2).scaled(eta);
            } else {
                pdot = (sin1(coord("p", v)) * sin2(coord("q", v))).scaled(-xi);
                qdot = (sin1(coord("q", v)).pow(2).scaled(xi) +
                        sin1(coord("p", v)).pow(2).scaled(eta)) *
                       cos1(coord("p", v));
            }
            if (v == 1 && !drive.is_zero()) {
                qdot = qdot + (params.compact ? drive * cos1("p1") : drive);
            }
            field[model.p_offset() + (v - 1)] = pdot;
            field[model.q_offset() + (v - 1)] = qdot;
        }
    }

    for (std::size_t a = 0; a < model.dim(); ++a) {
        if (!(from_bracket[a] == field[a])) {
            throw std::logic_error("vector field cross-check failed at coordinate " +
                                   model.chart[a].name);
        }
    }
    model.vector_field = std::move(field);

    std::vector<int> signs(model.dim(), 1);
    for (int a = 0; a < n; ++a) signs[model.phi_offset() + a] = -1;
    for (int v = 0; v < l; ++v) signs[model.q_offset() + v] = -1;
    model.involution = make_involution(model.chart, signs);
    model.family = make_ham_family(params, model.kind);
    return model;
}

SystemModel make_system(const RevParams& params) {
    if (params.n < 0 || params.m < 0 || params.l < 0) {
        throw Error(ErrorCode::BadDocument, "negative dimension");
    }
    if (static_cast<int>(params.zeta.size()) != params.m ||
        static_cast<int>(params.xi.size()) != params.l ||
        static_cast<int>(params.h.size()) != params.n) {
        throw Error(ErrorCode::BadDocument, "constant/h vectors do not match (n, m, l)");
    }
    check_nonnegative(params.zeta, "zeta");
    check_nonnegative(params.xi, "xi");
    for (const PolyExpr& h : params.h) check_h_context(h, params.m, params.compact, "h");

    SystemModel model;
    model.kind = params.compact ? SystemKind::RevCompact : SystemKind::RevNoncompact;
    model.rev = params;

    VarKind real_kind = params.compact ? VarKind::Angle : VarKind::Line;
    for (int i = 1; i <= params.m; ++i) model.chart.push_back({coord("u", i), real_kind});
    for (int a = 1; a <= params.n; ++a)
        model.chart.push_back({coord("phi", a), VarKind::Angle});
    for (int v = 1; v <= params.l; ++v) model.chart.push_back({coord("q", v), real_kind});

    const Rat lr(params.l);
    std::vector<PolyExpr> field(model.dim());
    for (int a = 0; a < params.n; ++a) field[model.phi_offset() + a] = params.h[a];
    PolyExpr drive;
    for (int i = 1; i <= params.m; ++i) {
        PolyExpr sq = params.compact ? sin1(coord("u", i)).pow(2)
                                     : PolyExpr::variable(coord("u", i)).pow(2);
        drive = drive + sq.scaled(lr * params.zeta[i - 1]);
    }
    for (int v = 1; v <= params.l; ++v) {
        PolyExpr qdot = params.compact
                            ? sin1(coord("q", v)).pow(2).scaled(params.xi[v - 1])
                            : PolyExpr::variable(coord("q", v)).pow(2).scaled(params.xi[v - 1]);
        if (v == 1) qdot = qdot + drive;
        field[model.q_offset() + (v - 1)] = qdot;
    }
    model.vector_field = std::move(field);

    std::vector<int> signs(model.dim(), 1);
    for (int a = 0; a < params.n; ++a) signs[model.phi_offset() + a] = -1;
    for (int v = 0; v < params.l; ++v) signs[model.q_offset() + v] = -1;
    model.involution = make_involution(model.chart, signs);
    model.family = make_rev_family(params, model.kind);
    return model;
}

TorusFamily torus_family(const SystemModel& system) { return system.family; }

namespace {

bool pinned_value_ok(const Rat& value, bool compact) {
    if (!compact) return value == 0;
    return is_integer(value);  // multiples of pi
}

// Gradient of h at u0 (pi units when compact). Exact when possible.
void frequency_of(const SystemModel& system, const std::vector<Rat>& u0,
                  std::vector<double>& out, std::optional<std::vector<Rat>>& out_exact) {
    const bool compact = kind_is_compact(system.kind);
    bool exact_ok = true;
    ExactPoint pt;
    std::map<std::string, double> dpt;
    for (std::size_t i = 0; i < u0.size(); ++i) {
        std::string name = coord("u", static_cast<int>(i) + 1);
        if (!compact) {
            pt.line[name] = u0[i];
        } else {
            Rat qt = 2 * u0[i];  // quarter turns
            if (is_integer(qt)) {
                pt.angle_quarter_turns[name] = qt.get_num().get_si();
            } else {
                exact_ok = false;
            }
        }
        dpt[name] = rat_to_double(u0[i]) * (compact ? M_PI : 1.0);
    }

    auto grad_component = [&](const PolyExpr& dh) {
        return exact_ok ? rat_to_double(dh.evaluate_exact(pt)) : dh.evaluate(dpt);
    };

    out.clear();
    std::vector<Rat> exact;
    if (kind_is_hamiltonian(system.kind)) {
        const HamParams& p = *system.ham;
        const int s = p.spec.dims.s, n = p.spec.dims.torus_dim();
        std::vector<Rat> gh_exact(s);
        std::vector<double> gh(s);
        for (int i = 1; i <= s; ++i) {
            PolyExpr dh = p.h.derivative(coord("u", i));
            if (exact_ok) {
                gh_exact[i - 1] = dh.evaluate_exact(pt);
                gh[i - 1] = rat_to_double(gh_exact[i - 1]);
            } else {
                gh[i - 1] = dh.evaluate(dpt);
            }
        }
        for (int a = 0; a < n; ++a) {
            if (exact_ok) {
                Rat w(0);
                for (int i = 0; i < s; ++i) w += p.spec.Z.at(a, i) * gh_exact[i];
                exact.push_back(w);
                out.push_back(rat_to_double(w));
            } else {
                double w = 0;
                for (int i = 0; i < s; ++i) w += rat_to_double(p.spec.Z.at(a, i)) * gh[i];
                out.push_back(w);
            }
        }
    } else {
        for (const PolyExpr& h : system.rev->h) {
            if (exact_ok) {
                Rat w = h.evaluate_exact(pt);
                exact.push_back(w);
                out.push_back(rat_to_double(w));
            } else {
                out.push_back(grad_component(h));
            }
        }
    }
    if (exact_ok) out_exact = std::move(exact);
}

}  // namespace

TorusSpec family_member(const SystemModel& system, std::vector<Rat> u0,
                        std::vector<Rat> p0, std::vector<Rat> q0) {
    const bool compact = kind_is_compact(system.kind);
    if (static_cast<int>(u0.size()) != system.count_u() ||
        static_cast<int>(p0.size()) != system.count_p() ||
        static_cast<int>(q0.size()) != system.count_q()) {
        throw Error(ErrorCode::BadDocument, "base point does not match the phase space");
    }

    TorusSpec t;
    t.u0 = std::move(u0);
    t.p0 = std::move(p0);
    t.q0 = std::move(q0);

    const TorusFamily& fam = system.family;
    t.in_family = true;
    for (std::size_t i = 0; i < t.u0.size(); ++i) {
        if (fam.u_pinned[i] && !pinned_value_ok(t.u0[i], compact)) t.in_family = false;
    }
    for (std::size_t v = 0; v < t.p0.size(); ++v) {
        if (fam.p_pinned[v] && !pinned_value_ok(t.p0[v], compact)) t.in_family = false;
    }
    for (std::size_t v = 0; v < t.q0.size(); ++v) {
        if (fam.q_pinned[v] && !pinned_value_ok(t.q0[v], compact)) t.in_family = false;
    }

    t.symmetric = true;
    for (const Rat& q : t.q0) {
        if (!pinned_value_ok(q, compact)) t.symmetric = false;
    }

    if (t.in_family) frequency_of(system, t.u0, t.frequency, t.frequency_exact);
    return t;
}

std::vector<double> torus_frequency(const SystemModel& system, const TorusSpec& torus) {
    if (!torus.in_family) {
        throw Error(ErrorCode::NotInFamily, "torus is not a member of the invariant family");
    }
    std::vector<double> omega;
    std::optional<std::vector<Rat>> exact;
    frequency_of(system, torus.u0, omega, exact);
    return omega;
}

bool is_symmetric_torus(const SystemModel& system, const TorusSpec& torus) {
    if (!torus.in_family) {
        throw Error(ErrorCode::NotInFamily, "torus is not a member of the invariant family");
    }
    const bool compact = kind_is_compact(system.kind);
    for (const Rat& q : torus.q0) {
        if (!pinned_value_ok(q, compact)) return false;
    }
    return true;
}

ReversibilityReport reversibility_check(const SystemModel& system) {
    return reversibility_check(system, system.involution.signs);
}

ReversibilityReport reversibility_check(const SystemModel& system,
                                        const std::vector<int>& signs) {
    if (signs.size() != system.dim()) {
        throw Error(ErrorCode::ContextMismatch, "sign pattern does not match the chart");
    }
    std::map<std::string, int> sign_map;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        sign_map[system.chart[i].name] = signs[i];
    }

    ReversibilityReport rep;
    Involution inv = make_involution(system.chart, signs);
    rep.involution_type = inv.type();
    rep.fix_dim = inv.fix_dim;
    rep.fixed_components = inv.fixed_components;
    rep.reversible = true;
    for (std::size_t a = 0; a < system.dim(); ++a) {
        PolyExpr residual = system.vector_field[a].scaled(Rat(signs[a])) +
                            system.vector_field[a].apply_signs(sign_map);
        if (!residual.is_zero()) {
            rep.reversible = false;
            rep.failing_coordinate = a;
            rep.residual = print_expr(residual);
            break;
        }
    }
    return rep;
}

IntegralSet first_integrals(const SystemModel& system) {
    if (!kind_is_hamiltonian(system.kind)) {
        throw Error(ErrorCode::ContextMismatch, "first integrals need a Hamiltonian kind");
    }
    const HamParams& p = *system.ham;
    const int s = p.spec.dims.s, l = p.spec.dims.l;
    const bool compact = p.compact;
    const std::vector<Var> chart = phase_chart(p.spec.dims, compact);

    Rat zeta_sum(0);
    for (const Rat& z : p.zeta) zeta_sum += z;
    const bool coupled = (l >= 1 && zeta_sum > 0);  // f_1 fails to commute with H

    IntegralSet set;
    set.names.push_back("H");
    set.integrals.push_back(*system.hamiltonian);
    if (!compact) {
        for (int i = 1; i <= s; ++i) {
            set.names.push_back(coord("u", i));
            set.integrals.push_back(PolyExpr::variable(coord("u", i)));
        }
    }
    for (int v = coupled ? 2 : 1; v <= l; ++v) {
        PolyExpr f;
        if (!compact) {
            PolyExpr pv = PolyExpr::variable(coord("p", v));
            PolyExpr qv = PolyExpr::variable(coord("q", v));
            f = (pv * qv.pow(2)).scaled(p.xi[v - 1]) + pv.pow(3).scaled(p.eta[v - 1] / 3);
        } else {
            PolyExpr sp = sin1(coord("p", v));
            PolyExpr sq = sin1(coord("q", v));
            f = (sp * sq.pow(2)).scaled(p.xi[v - 1]) + sp.pow(3).scaled(p.eta[v - 1] / 3);
        }
        set.names.push_back(coord("f", v));
        set.integrals.push_back(f);
    }

    for (std::size_t i = 0; i < set.integrals.size(); ++i) {
        PolyExpr br = poisson_bracket(set.integrals[i], *system.hamiltonian,
                                      *system.structure, chart);
        if (!br.is_zero()) {
            throw std::logic_error("claimed first integral " + set.names[i] +
                                   " does not commute with H");
        }
    }

    if (!compact && system.family.d == s + 2 * l) {
        // All constants vanish: u, p, q are s+2l independent first integrals.
        std::vector<PolyExpr> coords;
        for (int i = 1; i <= s; ++i) coords.push_back(PolyExpr::variable(coord("u", i)));
        for (int v = 1; v <= l; ++v) coords.push_back(PolyExpr::variable(coord("p", v)));
        for (int v = 1; v <= l; ++v) coords.push_back(PolyExpr::variable(coord("q", v)));
        RatMatrix bm(coords.size(), coords.size());
        for (std::size_t a = 0; a < coords.size(); ++a) {
            for (std::size_t b = 0; b < coords.size(); ++b) {
                PolyExpr br = poisson_bracket(coords[a], coords[b], *system.structure, chart);
                bm.at(a, b) = br.constant_value();
            }
        }
        set.coordinate_bracket_matrix = std::move(bm);
    }
    return set;
}

namespace {

[[noreturn]] void infeasible(const std::string& msg) {
    throw Error(ErrorCode::InfeasibleRegime, msg);
}

void distribute_zeros(PlanResult& plan, int d) {
    const int s = plan.dims.s, l = plan.dims.l;
    plan.zeta.assign(s, Rat(1));
    plan.xi.assign(l, Rat(1));
    plan.eta.assign(l, Rat(1));
    if (l == 0) return;
    int remaining = d;
    for (int i = 0; i < s && remaining > 0; ++i, --remaining) plan.zeta[i] = 0;
    for (int v = 0; v < l && remaining > 0; ++v, --remaining) plan.xi[v] = 0;
    for (int v = 0; v < l && remaining > 0; ++v, --remaining) plan.eta[v] = 0;
}

}  // namespace

PlanResult plan_parameters(int N, int n, TorusKind target_class, int d) {
    PlanResult plan;
    switch (target_class) {
        case TorusKind::Lagrangian:
            if (n != N) infeasible("lagrangian tori require n = N");
            if (N < 1) infeasible("lagrangian tori require N >= 1");
            plan.dims = {n, 0, 0};
            if (d != n) infeasible("l = 0 families have d = s = n");
            break;
        case TorusKind::StrictlyCoisotropic:
            if (!(N + 1 <= n && n <= 2 * N - 1)) {
                infeasible("strictly coisotropic tori require N+1 <= n <= 2N-1");
            }
            plan.dims = {2 * N - n, n - N, 0};
            if (d != 2 * N - n) infeasible("l = 0 families have d = s = 2N-n");
            break;
        case TorusKind::StrictlyIsotropic:
            if (!(1 <= n && n <= N - 1)) {
                infeasible("strictly isotropic tori require 1 <= n <= N-1");
            }
            plan.dims = {n, 0, N - n};
            break;
        case TorusKind::Atropic:
            if (!(3 <= n && n <= 2 * N - 3)) {
                infeasible("atropic tori require 3 <= n <= 2N-3");
            }
            if (n >= N) {
                plan.dims = {2 * N - n - 2, n - N + 1, 1};
            } else {
                plan.dims = {n - 2, 1, N - n + 1};
            }
            break;
    }
    if (plan.dims.l >= 1) {
        int dmax = plan.dims.s + 2 * plan.dims.l;
        if (d < 0 || d > dmax) {
            infeasible("family dimension must satisfy 0 <= d <= s+2l = " +
                       std::to_string(dmax));
        }
    }
    distribute_zeros(plan, d);
    return plan;
}

RevPlanResult plan_rev_parameters(int n, int m, int l, int d_star, int d) {
    if (n < 0 || m < 0 || l < 0) infeasible("dimensions must be non-negative");
    RevPlanResult plan;
    plan.n = n;
    plan.m = m;
    plan.l = l;
    plan.zeta.assign(m, Rat(1));
    plan.xi.assign(l, Rat(1));
    if (l == 0) {
        if (d_star != m || d != m) infeasible("l = 0 reversible families have d = d* = m");
        return plan;
    }
    if (!(0 <= d_star && d_star <= m)) infeasible("d* must satisfy 0 <= d* <= m");
    if (!(d_star <= d && d <= d_star + l)) infeasible("d must satisfy d* <= d <= d* + l");
    for (int i = 0; i < d_star; ++i) plan.zeta[i] = 0;
    for (int v = 0; v < d - d_star; ++v) plan.xi[v] = 0;
    return plan;
}

Rat approx_rat(double x, long denominator) {
    if (!std::isfinite(x)) {
        throw Error(ErrorCode::BadDocument, "frequency entries must be finite");
    }
    Rat r(static_cast<long>(std::llround(x * static_cast<double>(denominator))), denominator);
    r.canonicalize();
    return r;
}

HamParams planned_ham_params(const PlanResult& plan, bool compact,
                             const std::vector<double>& omega) {
    const Dims& dims = plan.dims;
    const int s = dims.s, k = dims.k, n = dims.torus_dim();

    HamParams params;
    params.zeta = plan.zeta;
    params.xi = plan.xi;
    params.eta = plan.eta;
    params.compact = compact;

    auto h_linear = [&](const std::vector<Rat>& c) {
        PolyExpr h;
        for (int i = 1; i <= s; ++i) {
            if (c[i - 1] == 0) continue;
            h = h + (compact ? sin1(coord("u", i)) : PolyExpr::variable(coord("u", i)))
                        .scaled(c[i - 1]);
        }
        return h;
    };

    if (omega.empty()) {
        params.spec = default_structure_spec(dims);
        params.h = PolyExpr();
        return params;
    }
    if (static_cast<int>(omega.size()) != n) {
        throw Error(ErrorCode::BadDocument, "omega must have n = s+2k entries");
    }

    std::vector<Rat> om(n);
    bool omega_zero = true;
    for (int a = 0; a < n; ++a) {
        om[a] = approx_rat(omega[a]);
        if (om[a] != 0) omega_zero = false;
    }
    if (omega_zero) {
        params.spec = default_structure_spec(dims);
        params.h = PolyExpr();
        return params;
    }

    if (k == 0) {
        // Z = I_s has full row rank; solve Z dh(0)/du = omega directly.
        params.spec = default_structure_spec(dims);
        params.h = h_linear(om);
        return params;
    }

    // k >= 1: omega must lie in the column space of Z, so put it there as
    // the first column and complete with unit vectors until the structure
    // matrix is non-singular.
    StructureSpec base = default_structure_spec(dims);
    RatMatrix omega_col(n, 1);
    for (int a = 0; a < n; ++a) omega_col.at(a, 0) = om[a];

    for (int rotate = 0; rotate < n; ++rotate) {
        RatMatrix Z = omega_col;
        for (int j = 0; static_cast<int>(Z.cols()) < s && j < n; ++j) {
            int col = (n - 1 - ((j + rotate) % n));  // prefer bottom rows first
            RatMatrix unit(n, 1);
            unit.at(col, 0) = 1;
            RatMatrix candidate = Z.hcat(unit);
            if (candidate.rank() == Z.cols() + 1) Z = candidate;
        }
        if (Z.cols() != static_cast<std::size_t>(s)) continue;
        StructureSpec spec = base;
        spec.Z = Z;
        try {
            assemble_structure(spec);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularJ) continue;
            throw;
        }
        params.spec = spec;
        std::vector<Rat> c(s, Rat(0));
        c[0] = 1;  // dh(0)/du = e_1 picks out the omega column
        params.h = h_linear(c);
        return params;
    }
    infeasible("could not realize omega with a non-singular structure matrix");
}

RevParams planned_rev_params(const RevPlanResult& plan, bool compact,
                             const std::vector<double>& omega) {
    RevParams params;
    params.n = plan.n;
    params.m = plan.m;
    params.l = plan.l;
    params.zeta = plan.zeta;
    params.xi = plan.xi;
    params.compact = compact;
    params.h.assign(plan.n, PolyExpr());
    if (!omega.empty()) {
        if (static_cast<int>(omega.size()) != plan.n) {
            throw Error(ErrorCode::BadDocument, "omega must have n entries");
        }
        for (int a = 0; a < plan.n; ++a) {
            params.h[a] = PolyExpr::constant(approx_rat(omega[a]));
        }
    }
    return params;
}

}  // namespace kron
