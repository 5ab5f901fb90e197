#include "kron/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "kron/errors.hpp"
#include "kron/parse.hpp"

namespace kron {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::VerifiedExact: return "verified-exact";
        case Verdict::VerifiedNumeric: return "verified-numeric";
        case Verdict::EvidenceOnly: return "evidence-only";
        case Verdict::Failed: return "failed";
    }
    return "?";
}

namespace {

constexpr std::array<unsigned, 16> kPrimes{2,  3,  5,  7,  11, 13, 17, 19,
                                           23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(unsigned base, unsigned long i) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
        x += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return x;
}

std::string coord(const char* stem, int i) { return stem + std::to_string(i); }

struct PinnedVar {
    std::string name;
    VarKind kind;
};

std::vector<PinnedVar> pinned_vars(const SystemModel& system) {
    std::vector<PinnedVar> out;
    const bool compact = kind_is_compact(system.kind);
    VarKind kind = compact ? VarKind::Angle : VarKind::Line;
    const TorusFamily& fam = system.family;
    for (std::size_t i = 0; i < fam.u_pinned.size(); ++i) {
        if (fam.u_pinned[i]) out.push_back({coord("u", static_cast<int>(i) + 1), kind});
    }
    for (std::size_t v = 0; v < fam.p_pinned.size(); ++v) {
        if (fam.p_pinned[v]) out.push_back({coord("p", static_cast<int>(v) + 1), kind});
    }
    for (std::size_t v = 0; v < fam.q_pinned.size(); ++v) {
        if (fam.q_pinned[v]) out.push_back({coord("q", static_cast<int>(v) + 1), kind});
    }
    return out;
}

// Frequency expressions: what phidot must reduce to on the family.
std::vector<PolyExpr> frequency_exprs(const SystemModel& system) {
    std::vector<PolyExpr> out;
    if (kind_is_hamiltonian(system.kind)) {
        const HamParams& p = *system.ham;
        const int s = p.spec.dims.s;
        std::vector<PolyExpr> dh(s);
        for (int i = 1; i <= s; ++i) dh[i - 1] = p.h.derivative(coord("u", i));
        for (int a = 0; a < p.spec.dims.torus_dim(); ++a) {
            PolyExpr w;
            for (int i = 0; i < s; ++i) {
                if (p.spec.Z.at(a, i) == 0 || dh[i].is_zero()) continue;
                w = w + dh[i].scaled(p.spec.Z.at(a, i));
            }
            out.push_back(w);
        }
    } else {
        out = system.rev->h;
    }
    return out;
}

}  // namespace

DomainSpec default_isolation_domain(const SystemModel& system) {
    DomainSpec d;
    d.q_star.assign(system.count_q(), M_PI);
    if (kind_is_hamiltonian(system.kind)) d.eps.assign(system.count_p(), 1);
    return d;
}

bool domain_contains(const DomainSpec& domain, const SystemModel& system,
                     const std::vector<double>& state) {
    if (static_cast<int>(domain.q_star.size()) != system.count_q()) {
        throw Error(ErrorCode::BadDocument, "domain does not match the system's q block");
    }
    for (int v = 0; v < system.count_p(); ++v) {
        double p = wrap_angle(state[system.p_offset() + v]);
        int eps = domain.eps.empty() ? 1 : domain.eps[v];
        bool in_plus = p < M_PI / 2 || p > 3 * M_PI / 2;
        if ((eps == 1) != in_plus) return false;
        if (p == M_PI / 2 || p == 3 * M_PI / 2) return false;
    }
    for (int v = 0; v < system.count_q(); ++v) {
        double dq = std::abs(std::remainder(state[system.q_offset() + v] - domain.q_star[v],
                                            2 * M_PI));
        if (dq < 1e-12) return false;
    }
    return true;
}

ClaimReport verify_family_invariance(const SystemModel& system) {
    return verify_family_invariance(system, system.vector_field);
}

ClaimReport verify_family_invariance(const SystemModel& system,
                                     const std::vector<PolyExpr>& field) {
    if (field.size() != system.dim()) {
        throw Error(ErrorCode::ContextMismatch, "field does not match the chart");
    }
    const bool compact = kind_is_compact(system.kind);
    const std::vector<PinnedVar> pinned = pinned_vars(system);
    const std::vector<PolyExpr> freq = frequency_exprs(system);

    ClaimReport report;
    report.id = "family-invariance";
    report.details["pinned"] = nlohmann::json::array();
    for (const auto& p : pinned) report.details["pinned"].push_back(p.name);

    const std::size_t combos = compact ? (1u << pinned.size()) : 1u;
    report.details["substitution_branches"] = combos;

    for (std::size_t mask = 0; mask < combos; ++mask) {
        auto substitute = [&](PolyExpr e) {
            for (std::size_t j = 0; j < pinned.size(); ++j) {
                if (compact) {
                    // branch: 0 or pi (quarter turns 0 or 2)
                    e = e.substitute_angle(pinned[j].name, (mask >> j) & 1 ? 2 : 0);
                } else {
                    e = e.substitute_line(pinned[j].name, Rat(0));
                }
            }
            return e;
        };
        for (std::size_t a = 0; a < system.dim(); ++a) {
            PolyExpr residual = substitute(field[a]);
            bool is_phi = a >= system.phi_offset() && a < system.p_offset();
            if (!kind_is_hamiltonian(system.kind)) {
                is_phi = a >= system.phi_offset() && a < system.q_offset();
            }
            if (is_phi) {
                residual = residual - substitute(freq[a - system.phi_offset()]);
            }
            if (!residual.is_zero()) {
                report.verdict = Verdict::Failed;
                report.details["witness"] = {
                    {"coordinate", system.chart[a].name},
                    {"branch", mask},
                    {"residual", print_expr(residual)},
                };
                return report;
            }
        }
    }
    report.verdict = Verdict::VerifiedExact;
    return report;
}

ClaimReport verify_monotonicity(const SystemModel& system,
                                const std::optional<DomainSpec>& domain, int grid_points) {
    const int l = system.count_q();
    if (l < 1) {
        throw Error(ErrorCode::BadDocument, "monotonicity needs l >= 1");
    }
    ClaimReport report;
    report.id = "monotonicity";

    const bool needs_domain = system.kind == SystemKind::HamCompact;
    if (!needs_domain) {
        // qdot_v is literally a non-negative weighted sum of squares.
        nlohmann::json decomps = nlohmann::json::array();
        for (int v = 0; v < l; ++v) {
            const PolyExpr& qdot = system.vector_field[system.q_offset() + v];
            auto sos = weighted_sos_form(qdot);
            if (!sos) {
                report.verdict = Verdict::Failed;
                report.details["witness"] = {{"coordinate", coord("q", v + 1)},
                                             {"expression", print_expr(qdot)}};
                return report;
            }
            nlohmann::json terms = nlohmann::json::array();
            for (const auto& t : *sos) {
                terms.push_back({{"weight", rat_to_string(t.weight)},
                                 {"base", print_expr(t.base)}});
            }
            decomps.push_back({{"coordinate", coord("q", v + 1)}, {"squares", terms}});
        }
        report.details["decompositions"] = decomps;
        report.verdict = Verdict::VerifiedExact;
        return report;
    }

    if (!domain) {
        throw Error(ErrorCode::MissingDomain,
                    "compact Hamiltonian monotonicity holds only inside a domain; "
                    "cos p_v changes sign globally");
    }
    const HamParams& p = *system.ham;
    const Rat lr(p.spec.dims.l);

    // Symbolic part: qdot_v = cos(p_v) g_v with g_v a weighted sum of squares.
    nlohmann::json factors = nlohmann::json::array();
    for (int v = 1; v <= l; ++v) {
        PolyExpr g = PolyExpr::sin_of({{coord("q", v), 1}}).pow(2).scaled(p.xi[v - 1]) +
                     PolyExpr::sin_of({{coord("p", v), 1}}).pow(2).scaled(p.eta[v - 1]);
        if (v == 1) {
            for (int i = 1; i <= p.spec.dims.s; ++i) {
                g = g + PolyExpr::sin_of({{coord("u", i), 1}})
                             .pow(2)
                             .scaled(lr * p.zeta[i - 1]);
            }
        }
        PolyExpr product = PolyExpr::cos_of({{coord("p", v), 1}}) * g;
        const PolyExpr& qdot = system.vector_field[system.q_offset() + (v - 1)];
        auto sos = weighted_sos_form(g);
        if (!(product == qdot) || !sos) {
            report.verdict = Verdict::Failed;
            report.details["witness"] = {{"coordinate", coord("q", v)},
                                         {"expression", print_expr(qdot)}};
            return report;
        }
        factors.push_back({{"coordinate", coord("q", v)},
                           {"cos_factor", coord("p", v)},
                           {"nonnegative_part", print_expr(g)}});
    }
    report.details["factors"] = factors;

    // Numeric part: sign of eps_v qdot_v on a grid inside the domain.
    const DomainSpec& dom = *domain;
    if (static_cast<int>(dom.q_star.size()) != l ||
        static_cast<int>(dom.eps.size()) != system.count_p()) {
        throw Error(ErrorCode::BadDocument, "domain blocks do not match the system");
    }
    std::vector<CompiledPoly> qdots;
    for (int v = 0; v < l; ++v) {
        qdots.emplace_back(system.vector_field[system.q_offset() + v], system.chart);
    }
    HaltonSampler sampler(system.dim(), 7);
    long violations = 0;
    std::vector<double> x(system.dim());
    for (int g = 0; g < grid_points; ++g) {
        std::vector<double> h = sampler.next();
        for (int i = 0; i < system.count_u(); ++i) x[i] = 2 * M_PI * h[i];
        for (int a = 0; a < system.count_phi(); ++a) {
            x[system.phi_offset() + a] = 2 * M_PI * h[system.phi_offset() + a];
        }
        for (int v = 0; v < l; ++v) {
            double base = dom.eps[v] == 1 ? 0.0 : M_PI;
            x[system.p_offset() + v] =
                base - M_PI / 2 + M_PI * h[system.p_offset() + v];
            x[system.q_offset() + v] =
                dom.q_star[v] + 2 * M_PI * h[system.q_offset() + v];
        }
        for (int v = 0; v < l; ++v) {
            double s = dom.eps[v] * qdots[v].eval(x.data());
            if (s < -1e-12) ++violations;
        }
    }
    report.details["grid_points"] = grid_points;
    report.details["sign_violations"] = violations;
    report.verdict = violations == 0 ? Verdict::VerifiedNumeric : Verdict::Failed;
    return report;
}

ClaimReport verify_poisson_matrix(const SystemModel& system) {
    ClaimReport report;
    report.id = "poisson-matrix";
    IntegralSet set = first_integrals(system);  // throws for non-Hamiltonian kinds

    const auto chart = phase_chart(system.ham->spec.dims, kind_is_compact(system.kind));
    for (std::size_t a = 0; a < set.integrals.size(); ++a) {
        for (std::size_t b = a + 1; b < set.integrals.size(); ++b) {
            PolyExpr br =
                poisson_bracket(set.integrals[a], set.integrals[b], *system.structure, chart);
            if (!br.is_zero()) {
                report.verdict = Verdict::Failed;
                report.details["witness"] = {{"pair", {set.names[a], set.names[b]}},
                                             {"bracket", print_expr(br)}};
                return report;
            }
        }
    }
    report.details["in_involution"] = set.names;

    if (set.coordinate_bracket_matrix) {
        const RatMatrix& P = *set.coordinate_bracket_matrix;
        const int s = system.ham->spec.dims.s;
        const int k = system.ham->spec.dims.k;
        const int l = system.ham->spec.dims.l;
        const int N = system.ham->spec.dims.dof();
        RatMatrix expected = RatMatrix::zero(s + 2 * l, s + 2 * l);
        for (int v = 0; v < l; ++v) {
            expected.at(s + v, s + l + v) = -1;
            expected.at(s + l + v, s + v) = 1;
        }
        bool entries_ok = P == expected;
        bool rank_ok = P.rank() == static_cast<std::size_t>(2 * l);
        report.details["coordinate_matrix_rank"] = 2 * l;
        if (l >= 1) {
            // s+2l coordinate integrals, but only s+l of them (u, p) are in
            // involution, and for l > k >= 1 the bracket rank 2l exceeds
            // 2(s+2l-N) = 2(l-k): the family filling phase space does not
            // make the system superintegrable.
            report.details["involutive_sublist_size"] = s + l;
            report.details["degrees_of_freedom"] = N;
            if (l > k && k >= 1) {
                report.details["superintegrability_rank_gap"] = 2 * l - 2 * (l - k);
                rank_ok = rank_ok && 2 * l != 2 * (l - k);
            }
        }
        if (!entries_ok || !rank_ok) {
            report.verdict = Verdict::Failed;
            report.details["witness"] = "coordinate bracket matrix deviates from the block form";
            return report;
        }
    }
    report.verdict = Verdict::VerifiedExact;
    return report;
}

namespace {

struct SampleBands {
    // Maps a Halton row to a start state.
    const SystemModel* system;
    const DomainSpec* domain;  // compact kinds only
    double margin;
    bool on_family;  // family members instead of off-family points

    std::vector<double> make(const std::vector<double>& h) const {
        const SystemModel& sys = *system;
        const bool compact = kind_is_compact(sys.kind);
        std::vector<double> x(sys.dim(), 0.0);
        const TorusFamily& fam = sys.family;

        auto signed_band = [&](double t, double lo, double hi) {
            // t in (0,1) -> +-[lo, hi]
            double side = t < 0.5 ? 1.0 : -1.0;
            double u = t < 0.5 ? 2 * t : 2 * t - 1;
            return side * (lo + (hi - lo) * u);
        };

        for (int i = 0; i < sys.count_u(); ++i) {
            double t = h[i];
            bool pin = fam.u_pinned[i];
            if (on_family) {
                if (pin) {
                    x[i] = compact ? (t < 0.5 ? 0.0 : M_PI) : 0.0;
                } else {
                    x[i] = compact ? signed_band(t, 0, M_PI - margin) : signed_band(t, 0, 1);
                }
            } else if (compact) {
                // off the family zeros {0, pi} and away from the wall at pi
                x[i] = signed_band(t, margin, M_PI - margin);
            } else {
                x[i] = pin ? signed_band(t, margin, 1.0) : signed_band(t, 0, 1);
            }
        }
        for (int a = 0; a < sys.count_phi(); ++a) {
            x[sys.phi_offset() + a] = 2 * M_PI * h[sys.phi_offset() + a];
        }
        for (int v = 0; v < sys.count_p(); ++v) {
            double t = h[sys.p_offset() + v];
            bool pin = fam.p_pinned[v];
            double base = (domain && !domain->eps.empty() && domain->eps[v] == -1) ? M_PI : 0.0;
            if (on_family) {
                if (pin) {
                    x[sys.p_offset() + v] = compact ? (t < 0.5 ? 0.0 : M_PI) : 0.0;
                } else {
                    x[sys.p_offset() + v] =
                        compact ? signed_band(t, 0, M_PI / 2 - margin) : signed_band(t, 0, 1);
                }
            } else if (compact) {
                x[sys.p_offset() + v] = base + signed_band(t, margin, M_PI / 2 - margin);
            } else {
                x[sys.p_offset() + v] = pin ? signed_band(t, margin, 1.0) : signed_band(t, 0, 1);
            }
        }
        for (int v = 0; v < sys.count_q(); ++v) {
            double t = h[sys.q_offset() + v];
            bool pin = fam.q_pinned[v];
            if (on_family) {
                if (pin) {
                    x[sys.q_offset() + v] = compact ? (t < 0.5 ? 0.0 : M_PI) : 0.0;
                } else {
                    x[sys.q_offset() + v] =
                        compact ? signed_band(t, 0, M_PI - margin) : signed_band(t, 0, 1);
                }
            } else if (compact) {
                // inside the cut circle at q*, away from the walls and from
                // the family zeros {0, pi}; the flow drifts upward, so keep
                // extra room below the upper wall.
                double qstar = domain ? domain->q_star[v] : M_PI;
                double lo = qstar + margin, hi = qstar + 2 * M_PI - 2 * margin;
                double c = lo + (hi - lo) * t;
                for (double zero = std::ceil(lo / M_PI) * M_PI; zero < hi; zero += M_PI) {
                    if (std::abs(c - zero) < margin) {
                        c = c < zero ? zero - margin : zero + margin;
                    }
                }
                x[sys.q_offset() + v] = c;
            } else {
                x[sys.q_offset() + v] = pin ? signed_band(t, margin, 1.0) : signed_band(t, 0, 1);
            }
        }
        return x;
    }
};

double field_speed_bound(const SystemModel& sys) {
    double zeta_sum = 0;
    if (kind_is_hamiltonian(sys.kind)) {
        const HamParams& p = *sys.ham;
        for (const Rat& z : p.zeta) zeta_sum += rat_to_double(z);
        double b = 0.1;
        for (int v = 0; v < p.spec.dims.l; ++v) {
            double s = rat_to_double(p.xi[v]) + rat_to_double(p.eta[v]);
            if (v == 0) s += p.spec.dims.l * zeta_sum;
            b = std::max(b, s);
        }
        return b;
    }
    const RevParams& p = *sys.rev;
    for (const Rat& z : p.zeta) zeta_sum += rat_to_double(z);
    double b = 0.1;
    for (int v = 0; v < p.l; ++v) {
        double s = rat_to_double(p.xi[v]);
        if (v == 0) s += p.l * zeta_sum;
        b = std::max(b, s);
    }
    return b;
}

}  // namespace

HaltonSampler::HaltonSampler(std::size_t dim, unsigned seed)
    : dim_(dim), index_(7919UL * seed + 1UL) {
    if (dim_ > kPrimes.size()) {
        throw Error(ErrorCode::BadDocument, "sampler supports at most 16 dimensions");
    }
}

std::vector<double> HaltonSampler::next() {
    std::vector<double> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = radical_inverse(kPrimes[i], index_);
    ++index_;
    return out;
}

ClaimReport uniqueness_scan(const SystemModel& system, const ScanConfig& config,
                            const std::optional<DomainSpec>& domain) {
    if (system.count_q() < 1 || system.family.d != 0) {
        throw Error(ErrorCode::BadDocument,
                    "uniqueness scan needs a d = 0 configuration with l >= 1");
    }
    const bool compact = kind_is_compact(system.kind);
    DomainSpec dom = domain ? *domain : default_isolation_domain(system);

    ClaimReport report;
    report.id = "uniqueness-evidence";

    IntegratorConfig icfg;
    icfg.dt = config.dt;
    icfg.horizon = config.horizon;
    if (compact) {
        // Keep every sample inside its domain bands for the whole run.
        double bound = field_speed_bound(system);
        icfg.horizon = std::min(config.horizon, 0.3 * config.margin / bound);
        icfg.dt = std::min(config.dt, icfg.horizon / 20);
    }

    SampleBands bands{&system, compact ? &dom : nullptr, config.margin, false};
    HaltonSampler sampler(system.dim(), config.seed);

    std::vector<std::size_t> qidx;
    for (int v = 0; v < system.count_q(); ++v) qidx.push_back(system.q_offset() + v);

    long escapes = 0, blowups = 0, inconclusive = 0;
    for (int s = 0; s < config.samples; ++s) {
        std::vector<double> start = bands.make(sampler.next());
        Trajectory traj = integrate(system, start, icfg);
        if (traj.stop == StopReason::BlowUp) ++blowups;

        std::vector<std::vector<double>> series(qidx.size());
        for (std::size_t j = 0; j < qidx.size(); ++j) {
            series[j].reserve(traj.states.size());
            for (const auto& st : traj.states) {
                double v = st[qidx[j]];
                if (compact) {
                    // view on the circle cut at q*: a crossing breaks
                    // monotonicity, exactly as the isolation argument needs
                    v = dom.q_star[j] + wrap_angle(v - dom.q_star[j]);
                }
                series[j].push_back(v);
            }
        }
        EscapeVerdict verdict = escape_verdict(series, config.delta, config.stationary_tol);
        if (verdict == EscapeVerdict::Escapes) {
            ++escapes;
        } else {
            ++inconclusive;
        }
    }

    report.details["samples"] = config.samples;
    report.details["escapes"] = escapes;
    report.details["blowups"] = blowups;
    report.details["not_certified"] = inconclusive;
    report.details["horizon"] = icfg.horizon;
    report.details["dt"] = icfg.dt;
    report.details["delta"] = config.delta;
    report.details["margin"] = config.margin;
    report.details["seed"] = config.seed;
    report.details["fraction"] = static_cast<double>(escapes) / config.samples;
    // A clean sweep is evidence for the global negative, never a proof.
    report.verdict = escapes == config.samples ? Verdict::EvidenceOnly : Verdict::Failed;
    return report;
}

ClaimReport family_stationarity_scan(const SystemModel& system, const ScanConfig& config) {
    ClaimReport report;
    report.id = "family-stationarity";

    IntegratorConfig icfg;
    icfg.dt = config.dt;
    icfg.horizon = std::min(config.horizon, 0.5);

    SampleBands bands{&system, nullptr, config.margin, true};
    HaltonSampler sampler(system.dim(), config.seed + 1);

    std::vector<std::size_t> qidx;
    for (int v = 0; v < system.count_q(); ++v) qidx.push_back(system.q_offset() + v);
    for (int v = 0; v < system.count_p(); ++v) qidx.push_back(system.p_offset() + v);
    for (int i = 0; i < system.count_u(); ++i) qidx.push_back(i);

    long flagged = 0;
    for (int s = 0; s < config.samples; ++s) {
        std::vector<double> start = bands.make(sampler.next());
        Trajectory traj = integrate(system, start, icfg);
        if (monotone_escape_detector(traj, qidx, config.delta, config.stationary_tol) ==
            EscapeVerdict::Escapes) {
            ++flagged;
        }
    }
    report.details["samples"] = config.samples;
    report.details["false_positives"] = flagged;
    report.details["seed"] = config.seed + 1;
    report.verdict = flagged == 0 ? Verdict::VerifiedNumeric : Verdict::Failed;
    return report;
}

DiophantineReport diophantine_scan(const std::vector<double>& omega, double tau, int j_max,
                                   const std::optional<std::vector<Rat>>& omega_exact) {
    if (j_max < 1) {
        throw Error(ErrorCode::BadDocument, "j_max must be at least 1");
    }
    if (omega_exact && omega_exact->size() != omega.size()) {
        throw Error(ErrorCode::BadDocument, "exact omega must match omega");
    }
    DiophantineReport rep;
    rep.omega = omega;
    rep.tau = tau;
    rep.tau_admissible = tau >= static_cast<double>(omega.size()) - 1.0;
    rep.j_max = j_max;
    rep.gamma_hat = std::numeric_limits<double>::infinity();

    const std::size_t n = omega.size();
    std::vector<long> j(n, 0);

    // Depth-first enumeration of 0 < |j|_1 <= j_max, canonical sign (first
    // nonzero component positive).
    auto visit = [&](const std::vector<long>& jv) {
        long norm = 0;
        double inner = 0;
        for (std::size_t i = 0; i < n; ++i) {
            norm += std::abs(jv[i]);
            inner += static_cast<double>(jv[i]) * omega[i];
        }
        double small = std::abs(inner);
        if (small < rep.float_tolerance) {
            bool exact_zero = false;
            if (omega_exact) {
                Rat acc(0);
                for (std::size_t i = 0; i < n; ++i) acc += Rat(jv[i]) * (*omega_exact)[i];
                exact_zero = acc == 0;
                rep.witness_exact = exact_zero;
            }
            if (!omega_exact || exact_zero) {
                if (!rep.resonant) {
                    rep.resonant = true;
                    rep.witness_j = jv;
                }
                return;
            }
        }
        double value = small * std::pow(static_cast<double>(norm), tau);
        if (value < rep.gamma_hat) {
            rep.gamma_hat = value;
            rep.worst_j = jv;
        }
    };

    std::function<void(std::size_t, long, bool)> rec = [&](std::size_t pos, long budget,
                                                           bool leading_zero) {
        if (pos == n) {
            if (budget < j_max) visit(j);  // some |j_i| > 0 was placed
            return;
        }
        long lo = leading_zero ? 0 : -budget;
        for (long v = lo; v <= budget; ++v) {
            j[pos] = v;
            rec(pos + 1, budget - std::abs(v), leading_zero && v == 0);
        }
        j[pos] = 0;
    };
    rec(0, j_max, true);

    if (rep.resonant) rep.gamma_hat = 0.0;
    return rep;
}

namespace {

ClaimReport simple_report(const std::string& id, bool ok, Verdict pass_verdict,
                          nlohmann::json details = {}) {
    ClaimReport r;
    r.id = id;
    r.verdict = ok ? pass_verdict : Verdict::Failed;
    r.details = std::move(details);
    return r;
}

}  // namespace

std::vector<ClaimReport> verify_regime_suite(const HamRegime& regime,
                                              const ScanConfig& scan) {
    std::vector<ClaimReport> out;

    PlanResult plan = plan_parameters(regime.N, regime.n, regime.target_class, regime.d);
    HamParams params = planned_ham_params(plan, regime.compact, regime.omega);
    SystemModel system = make_system(params);  // J grad H cross-check inside
    const Dims& dims = plan.dims;

    out.push_back(simple_report(
        "plan", dims.dof() == regime.N && dims.torus_dim() == regime.n, Verdict::VerifiedExact,
        {{"s", dims.s}, {"k", dims.k}, {"l", dims.l}}));

    out.push_back(simple_report("family-dimension", system.family.d == regime.d,
                                Verdict::VerifiedExact,
                                {{"d", system.family.d}, {"expected", regime.d}}));

    TorusClass tc = classify_torus(*system.structure);
    RatMatrix comp = torus_tangent_complement(*system.structure);
    bool class_ok = tc.kind == regime.target_class && tc.intersection_dim == dims.s &&
                    comp.cols() == static_cast<std::size_t>(dims.s + 2 * dims.l);
    out.push_back(simple_report("classification", class_ok, Verdict::VerifiedExact,
                                {{"class", torus_kind_name(tc.kind)},
                                 {"intersection_dim", tc.intersection_dim},
                                 {"complement_dim", comp.cols()}}));

    bool isotropic_class =
        tc.kind == TorusKind::Lagrangian || tc.kind == TorusKind::StrictlyIsotropic;
    out.push_back(simple_report(
        "exactness-coherence", isotropic_class == system.structure->form_is_exact(),
        Verdict::VerifiedExact,
        {{"phi_phi_block_of_W_zero", system.structure->form_is_exact()}}));

    if (!regime.omega.empty()) {
        std::vector<Rat> u0(dims.s, Rat(0)), p0(dims.l, Rat(0)), q0(dims.l, Rat(0));
        TorusSpec origin = family_member(system, u0, p0, q0);
        double worst = 0;
        for (std::size_t a = 0; a < regime.omega.size(); ++a) {
            worst = std::max(worst, std::abs(origin.frequency[a] - regime.omega[a]));
        }
        out.push_back(simple_report("frequency-realization", worst <= 1e-6,
                                    Verdict::VerifiedNumeric,
                                    {{"max_error", worst}, {"tolerance", 1e-6}}));
    }

    out.push_back(verify_family_invariance(system));
    if (dims.l >= 1) {
        std::optional<DomainSpec> dom;
        if (regime.compact) dom = default_isolation_domain(system);
        out.push_back(verify_monotonicity(system, dom, 20000));
    }
    out.push_back(verify_poisson_matrix(system));

    ReversibilityReport rev = reversibility_check(system);
    bool rev_ok = rev.reversible &&
                  rev.involution_type ==
                      std::pair<int, int>{dims.torus_dim() + dims.l, dims.s + dims.l};
    out.push_back(simple_report("reversibility", rev_ok, Verdict::VerifiedExact,
                                {{"type", {rev.involution_type.first, rev.involution_type.second}},
                                 {"fixed_components", rev.fixed_components}}));

    if (regime.d == 0 && dims.l >= 1) {
        out.push_back(uniqueness_scan(system, scan));
        out.push_back(family_stationarity_scan(system, scan));
    }
    return out;
}

std::vector<ClaimReport> verify_regime_suite(const RevRegime& regime,
                                              const ScanConfig& scan) {
    std::vector<ClaimReport> out;

    RevPlanResult plan = plan_rev_parameters(regime.n, regime.m, regime.l, regime.d_star,
                                             regime.d);
    RevParams params = planned_rev_params(plan, regime.compact, regime.omega);
    SystemModel system = make_system(params);

    out.push_back(simple_report("plan", true, Verdict::VerifiedExact,
                                {{"n", regime.n}, {"m", regime.m}, {"l", regime.l}}));

    bool dims_ok = system.family.d == regime.d && system.family.d_star.has_value() &&
                   *system.family.d_star == regime.d_star;
    out.push_back(simple_report("family-dimension", dims_ok, Verdict::VerifiedExact,
                                {{"d", system.family.d},
                                 {"d_star", system.family.d_star ? *system.family.d_star : -1}}));

    // Symmetric members are exactly the q0 = 0 (mod pi on tori) slices.
    {
        std::vector<Rat> u0(regime.m, Rat(0)), q0(regime.l, Rat(0));
        TorusSpec sym = family_member(system, u0, {}, q0);
        bool sym_ok = sym.in_family && sym.symmetric;
        if (regime.l >= 1) {
            std::vector<Rat> q1 = q0;
            q1[0] = regime.compact ? rat(1, 3) : rat(1, 2);
            TorusSpec asym = family_member(system, u0, {}, q1);
            sym_ok = sym_ok && !asym.symmetric;
        }
        out.push_back(simple_report("symmetric-subfamily", sym_ok, Verdict::VerifiedExact,
                                    {{"d_star", regime.d_star}}));
    }

    if (!regime.omega.empty()) {
        std::vector<Rat> u0(regime.m, Rat(0)), q0(regime.l, Rat(0));
        TorusSpec origin = family_member(system, u0, {}, q0);
        double worst = 0;
        for (std::size_t a = 0; a < regime.omega.size(); ++a) {
            worst = std::max(worst, std::abs(origin.frequency[a] - regime.omega[a]));
        }
        out.push_back(simple_report("frequency-realization", worst <= 1e-6,
                                    Verdict::VerifiedNumeric,
                                    {{"max_error", worst}, {"tolerance", 1e-6}}));
    }

    out.push_back(verify_family_invariance(system));
    if (regime.l >= 1) out.push_back(verify_monotonicity(system));

    ReversibilityReport rev = reversibility_check(system);
    bool rev_ok = rev.reversible &&
                  rev.involution_type == std::pair<int, int>{regime.n + regime.l, regime.m};
    out.push_back(simple_report("reversibility", rev_ok, Verdict::VerifiedExact,
                                {{"type", {rev.involution_type.first, rev.involution_type.second}},
                                 {"fix_dim", rev.fix_dim}}));

    if (regime.d == 0 && regime.d_star == 0 && regime.l >= 1) {
        out.push_back(uniqueness_scan(system, scan));
        out.push_back(family_stationarity_scan(system, scan));
    }
    return out;
}

}  // namespace kron
