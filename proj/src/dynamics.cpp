#include "kron/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "kron/errors.hpp"

namespace kron {

const char* method_name(Method m) {
    switch (m) {
        case Method::RK4: return "rk4";
        case Method::ImplicitMidpoint: return "midpoint";
        case Method::ExactSplit: return "exact-split";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "rk4") return Method::RK4;
    if (name == "midpoint") return Method::ImplicitMidpoint;
    if (name == "exact-split") return Method::ExactSplit;
    throw Error(ErrorCode::BadDocument, "unknown integrator method '" + name + "'");
}

double wrap_angle(double x) {
    double w = std::fmod(x, 2 * M_PI);
    if (w < 0) w += 2 * M_PI;
    return w;
}

CompiledPoly::CompiledPoly(const PolyExpr& f, const std::vector<Var>& chart) {
    if (!f.is_real()) {
        throw Error(ErrorCode::ContextMismatch, "cannot compile a non-real expression");
    }
    const auto& ctx = f.context();
    std::vector<int> slot(ctx.size(), -1);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        for (std::size_t a = 0; a < chart.size(); ++a) {
            if (chart[a].name == ctx[i].name) {
                slot[i] = static_cast<int>(a);
                break;
            }
        }
        if (slot[i] < 0) {
            throw Error(ErrorCode::ContextMismatch,
                        "variable '" + ctx[i].name + "' is not a chart coordinate");
        }
    }
    for (const auto& [mono, c] : f.terms()) {
        int angle_sign = 0;
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            if (ctx[i].kind == VarKind::Angle && mono[i] != 0) {
                angle_sign = mono[i] > 0 ? 1 : -1;
                break;
            }
        }
        if (angle_sign < 0) continue;  // folded into the conjugate term

        Term term;
        if (angle_sign == 0) {
            term.c_cos = rat_to_double(c.re);
            term.c_sin = 0.0;
        } else {
            term.c_cos = 2.0 * rat_to_double(c.re);
            term.c_sin = -2.0 * rat_to_double(c.im);
        }
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            if (mono[i] == 0) continue;
            if (ctx[i].kind == VarKind::Line) {
                term.powers.emplace_back(slot[i], mono[i]);
            } else {
                term.waves.emplace_back(slot[i], mono[i]);
            }
        }
        terms_.push_back(std::move(term));
    }
}

double CompiledPoly::eval(const double* x) const {
    double total = 0.0;
    for (const Term& t : terms_) {
        double mag = 1.0;
        for (const auto& [slot, e] : t.powers) {
            double v = x[slot];
            for (int j = 0; j < e; ++j) mag *= v;
        }
        if (t.waves.empty()) {
            total += mag * t.c_cos;
            continue;
        }
        double a = 0.0;
        for (const auto& [slot, idx] : t.waves) a += idx * x[slot];
        total += mag * (t.c_cos * std::cos(a) + t.c_sin * std::sin(a));
    }
    return total;
}

namespace {

struct CompiledField {
    std::vector<CompiledPoly> components;
    std::size_t dim;

    void eval(const double* x, double* dx) const {
        for (std::size_t a = 0; a < dim; ++a) dx[a] = components[a].eval(x);
    }
};

CompiledField compile_field(const SystemModel& system) {
    CompiledField f;
    f.dim = system.dim();
    f.components.reserve(f.dim);
    for (const PolyExpr& c : system.vector_field) {
        f.components.emplace_back(c, system.chart);
    }
    return f;
}

using Vec = std::vector<double>;

void rk4_step(const CompiledField& f, const Vec& x, double dt, Vec& out, Vec& k1, Vec& k2,
              Vec& k3, Vec& k4, Vec& tmp) {
    const std::size_t n = x.size();
    f.eval(x.data(), k1.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    f.eval(tmp.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    f.eval(tmp.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    f.eval(tmp.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
}

// RK4 on a subset of coordinates; the rest of the state is frozen.
void rk4_step_subset(const CompiledField& f, Vec& x, const std::vector<std::size_t>& idx,
                     double dt, Vec& k1, Vec& k2, Vec& k3, Vec& k4, Vec& save) {
    for (std::size_t j = 0; j < idx.size(); ++j) save[j] = x[idx[j]];
    auto partial = [&](double* kout) {
        for (std::size_t j = 0; j < idx.size(); ++j) kout[j] = f.components[idx[j]].eval(x.data());
    };
    partial(k1.data());
    for (std::size_t j = 0; j < idx.size(); ++j) x[idx[j]] = save[j] + 0.5 * dt * k1[j];
    partial(k2.data());
    for (std::size_t j = 0; j < idx.size(); ++j) x[idx[j]] = save[j] + 0.5 * dt * k2[j];
    partial(k3.data());
    for (std::size_t j = 0; j < idx.size(); ++j) x[idx[j]] = save[j] + dt * k3[j];
    partial(k4.data());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        x[idx[j]] = save[j] + dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
}

bool norm_exceeded(const Vec& x, double bound) {
    for (double v : x) {
        if (!std::isfinite(v) || std::abs(v) > bound) return true;
    }
    return false;
}

}  // namespace

Trajectory integrate(const SystemModel& system, const std::vector<double>& start,
                     const IntegratorConfig& config) {
    if (start.size() != system.dim()) {
        throw Error(ErrorCode::BadDocument, "start state does not match the phase space");
    }
    if (config.dt <= 0 || config.horizon < 0) {
        throw Error(ErrorCode::BadDocument, "dt must be positive and the horizon non-negative");
    }
    if (config.fp_tol <= 0 || config.fp_max_iters < 1) {
        throw Error(ErrorCode::BadDocument, "fixed-point tolerance/iterations out of range");
    }
    const CompiledField field = compile_field(system);
    const std::size_t n = system.dim();
    const long nsteps = std::lround(config.horizon / config.dt);

    std::vector<bool> is_angle(n);
    for (std::size_t i = 0; i < n; ++i) is_angle[i] = system.chart[i].kind == VarKind::Angle;

    // ExactSplit blocks: u frozen, planar (p_v, q_v) or scalar q_v subsystems
    // substepped, phi by quadrature of the sampled drift.
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> phi_idx;
    if (config.method == Method::ExactSplit) {
        for (int a = 0; a < system.count_phi(); ++a) phi_idx.push_back(system.phi_offset() + a);
        for (int v = 0; v < system.count_q(); ++v) {
            std::vector<std::size_t> block;
            if (system.count_p() > 0) block.push_back(system.p_offset() + v);
            block.push_back(system.q_offset() + v);
            blocks.push_back(std::move(block));
        }
    }
    int substeps = std::max(2, config.split_substeps - config.split_substeps % 2);

    Trajectory traj;
    for (const Var& v : system.chart) traj.coordinates.push_back(v.name);
    traj.method = config.method;
    traj.dt = config.dt;

    Vec x = start;
    Vec xnext(n), k1(n), k2(n), k3(n), k4(n), tmp(n), save(n);
    Vec phidot_samples;

    auto store = [&](long step, const Vec& state) {
        traj.times.push_back(step * config.dt);
        traj.states.push_back(state);
    };

    if (norm_exceeded(x, config.blowup_bound)) {
        throw Error(ErrorCode::BadDocument, "start state exceeds the blow-up bound");
    }
    store(0, x);

    for (long step = 0; step < nsteps; ++step) {
        switch (config.method) {
            case Method::RK4:
                rk4_step(field, x, config.dt, xnext, k1, k2, k3, k4, tmp);
                break;
            case Method::ImplicitMidpoint: {
                // y = x + dt f((x + y)/2), solved by fixed point iteration.
                field.eval(x.data(), k1.data());
                for (std::size_t i = 0; i < n; ++i) xnext[i] = x[i] + config.dt * k1[i];
                bool converged = false;
                for (int it = 0; it < config.fp_max_iters; ++it) {
                    for (std::size_t i = 0; i < n; ++i) tmp[i] = 0.5 * (x[i] + xnext[i]);
                    field.eval(tmp.data(), k2.data());
                    double delta = 0.0;
                    bool finite = true;
                    for (std::size_t i = 0; i < n; ++i) {
                        double y = x[i] + config.dt * k2[i];
                        if (!std::isfinite(y)) finite = false;
                        delta = std::max(delta, std::abs(y - xnext[i]));
                        xnext[i] = y;
                    }
                    ++traj.total_fp_iterations;
                    traj.max_fp_iterations = std::max(traj.max_fp_iterations, it + 1);
                    if (!finite) break;
                    if (delta < config.fp_tol) {
                        converged = true;
                        break;
                    }
                }
                if (!converged) {
                    throw Error(ErrorCode::NoConvergence,
                                "implicit midpoint fixed point did not converge; reduce dt");
                }
                break;
            }
            case Method::ExactSplit: {
                xnext = x;
                const double h = config.dt / substeps;
                // phidot is independent of phi and couples to the planar
                // blocks only through the sampled state, so composite
                // Simpson over the substep nodes integrates it.
                phidot_samples.assign(phi_idx.size() * (substeps + 1), 0.0);
                auto sample_phidot = [&](int node) {
                    for (std::size_t a = 0; a < phi_idx.size(); ++a) {
                        phidot_samples[node * phi_idx.size() + a] =
                            field.components[phi_idx[a]].eval(xnext.data());
                    }
                };
                sample_phidot(0);
                for (int sub = 0; sub < substeps; ++sub) {
                    for (const auto& block : blocks) {
                        rk4_step_subset(field, xnext, block, h, k1, k2, k3, k4, save);
                    }
                    sample_phidot(sub + 1);
                }
                for (std::size_t a = 0; a < phi_idx.size(); ++a) {
                    double integral = 0.0;
                    for (int node = 0; node <= substeps; ++node) {
                        double w = (node == 0 || node == substeps) ? 1.0
                                   : (node % 2 == 1) ? 4.0
                                                     : 2.0;
                        integral += w * phidot_samples[node * phi_idx.size() + a];
                    }
                    xnext[phi_idx[a]] = x[phi_idx[a]] + integral * h / 3.0;
                }
                break;
            }
        }

        if (norm_exceeded(xnext, config.blowup_bound)) {
            traj.stop = StopReason::BlowUp;
            traj.stop_time = traj.times.back();
            return traj;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (is_angle[i] && std::abs(xnext[i] - x[i]) >= M_PI) {
                throw Error(ErrorCode::StepTooLarge,
                            "angle advance per step reached pi; reduce dt");
            }
        }
        x = xnext;
        if ((step + 1) % config.store_every == 0 || step + 1 == nsteps) store(step + 1, x);
    }
    traj.stop_time = traj.times.back();
    return traj;
}

FrequencyEstimate estimate_frequencies(const Trajectory& traj,
                                       const std::vector<std::size_t>& angle_indices,
                                       double residual_threshold) {
    const std::size_t nsamples = traj.times.size();
    if (nsamples < 3) {
        throw Error(ErrorCode::BadDocument, "too few samples to estimate frequencies");
    }
    double tbar = 0.0;
    for (double t : traj.times) tbar += t;
    tbar /= static_cast<double>(nsamples);
    double stt = 0.0;
    for (double t : traj.times) stt += (t - tbar) * (t - tbar);

    FrequencyEstimate est;
    for (std::size_t idx : angle_indices) {
        double ybar = 0.0;
        for (const auto& s : traj.states) ybar += s[idx];
        ybar /= static_cast<double>(nsamples);
        double sty = 0.0;
        for (std::size_t i = 0; i < nsamples; ++i) {
            sty += (traj.times[i] - tbar) * (traj.states[i][idx] - ybar);
        }
        double slope = stt > 0 ? sty / stt : 0.0;
        double ss = 0.0;
        for (std::size_t i = 0; i < nsamples; ++i) {
            double r = traj.states[i][idx] - ybar - slope * (traj.times[i] - tbar);
            ss += r * r;
        }
        est.omega.push_back(slope);
        est.rms_residual.push_back(std::sqrt(ss / static_cast<double>(nsamples)));
    }
    for (std::size_t j = 0; j < est.omega.size(); ++j) {
        if (est.rms_residual[j] > residual_threshold) {
            throw Error(ErrorCode::NotLinear,
                        "angle " + std::to_string(angle_indices[j]) +
                            " is not linear in time (rms residual " +
                            std::to_string(est.rms_residual[j]) + ")");
        }
    }
    return est;
}

PeriodMeasurement measure_exceptional_period(int l, double chi, double xi1) {
    if (l < 1 || chi <= 0 || xi1 < 0) {
        throw Error(ErrorCode::BadDocument, "need l >= 1, chi > 0, xi1 >= 0");
    }
    PeriodMeasurement out;
    out.l = l;
    out.chi = chi;
    out.xi1 = xi1;
    const double lchi = l * chi;
    out.varpi_closed_form = std::sqrt(lchi * (lchi + xi1));

    auto f = [&](double q) { return xi1 * std::sin(q) * std::sin(q) + lchi; };

    const int target_wraps = 32;
    const double period_est = 2 * M_PI / out.varpi_closed_form;
    const double dt = period_est / 4096.0;

    double t = 0.0, q = 0.0;
    double next_wrap = 2 * M_PI;
    std::vector<double> crossings;
    const long max_steps = 200L * 4096L;
    for (long step = 0; step < max_steps && static_cast<int>(crossings.size()) < target_wraps;
         ++step) {
        double k1 = f(q);
        double k2 = f(q + 0.5 * dt * k1);
        double k3 = f(q + 0.5 * dt * k2);
        double k4 = f(q + dt * k3);
        double qn = q + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        double tn = t + dt;
        while (qn >= next_wrap && static_cast<int>(crossings.size()) < target_wraps) {
            // Cubic Hermite refinement of the crossing inside [t, tn].
            double d0 = f(q), d1 = f(qn);
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                double s = 0.5 * (lo + hi);
                double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
                double h10 = s * (1 - s) * (1 - s);
                double h01 = s * s * (3 - 2 * s);
                double h11 = s * s * (s - 1);
                double qs = h00 * q + h10 * dt * d0 + h01 * qn + h11 * dt * d1;
                if (qs < next_wrap) {
                    lo = s;
                } else {
                    hi = s;
                }
            }
            crossings.push_back(t + 0.5 * (lo + hi) * dt);
            next_wrap += 2 * M_PI;
        }
        q = qn;
        t = tn;
    }
    if (crossings.size() < 2) {
        throw Error(ErrorCode::BudgetExceeded, "failed to collect enough wraps");
    }
    out.periods = static_cast<int>(crossings.size()) - 1;
    double mean_period = (crossings.back() - crossings.front()) / out.periods;
    out.varpi_measured = 2 * M_PI / mean_period;
    out.relative_error =
        std::abs(out.varpi_measured - out.varpi_closed_form) / out.varpi_closed_form;
    return out;
}

RecurrenceResult find_recurrence_time(const RecurrenceQuery& query) {
    if (query.T <= 0 || query.eps <= 0) {
        throw Error(ErrorCode::BadDocument, "need T > 0 and eps > 0");
    }
    for (long m = 1; m <= query.max_multiples; ++m) {
        double theta = m * query.T;
        double dist = 0.0;
        for (double w : query.omega) {
            dist += std::abs(std::remainder(theta * w, 2 * M_PI));
        }
        if (dist < query.eps) {
            RecurrenceResult res{theta, m, dist};
            // Contract check, same metric as the scan.
            if (!(res.dist < query.eps)) {
                throw std::logic_error("recurrence scan returned a non-recurrent time");
            }
            return res;
        }
    }
    throw Error(ErrorCode::BudgetExceeded,
                "recurrence scan cap of " + std::to_string(query.max_multiples) +
                    " multiples hit before a return closer than eps");
}

const char* escape_verdict_name(EscapeVerdict v) {
    switch (v) {
        case EscapeVerdict::Escapes: return "escapes";
        case EscapeVerdict::Stationary: return "stationary";
        case EscapeVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

EscapeVerdict escape_verdict(const std::vector<std::vector<double>>& series, double delta,
                             double stationary_tol, double slack) {
    bool all_stationary = true;
    bool any_escape = false;
    for (const auto& s : series) {
        if (s.size() < 2) continue;
        bool monotone = true;
        double lo = s.front(), hi = s.front();
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] < s[i - 1] - slack) monotone = false;
            lo = std::min(lo, s[i]);
            hi = std::max(hi, s[i]);
        }
        if (hi - s.front() > stationary_tol || s.front() - lo > stationary_tol) {
            all_stationary = false;
        }
        if (monotone && s.back() - s.front() > delta) any_escape = true;
    }
    if (any_escape) return EscapeVerdict::Escapes;
    if (all_stationary) return EscapeVerdict::Stationary;
    return EscapeVerdict::Inconclusive;
}

EscapeVerdict monotone_escape_detector(const Trajectory& traj,
                                       const std::vector<std::size_t>& coord_indices,
                                       double delta, double stationary_tol) {
    std::vector<std::vector<double>> series(coord_indices.size());
    for (std::size_t j = 0; j < coord_indices.size(); ++j) {
        series[j].reserve(traj.states.size());
        for (const auto& s : traj.states) series[j].push_back(s[coord_indices[j]]);
    }
    return escape_verdict(series, delta, stationary_tol);
}

}  // namespace kron
