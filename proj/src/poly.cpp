#include "kron/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "kron/errors.hpp"

namespace kron {

bool var_name_less(const std::string& a, const std::string& b) {
    auto split = [](const std::string& s) {
        std::size_t i = s.size();
        while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
        long num = -1;
        if (i < s.size() && s.size() - i <= 9) num = std::atol(s.c_str() + i);
        return std::pair<std::string, long>(s.substr(0, i), num);
    };
    auto [pa, na] = split(a);
    auto [pb, nb] = split(b);
    if (pa != pb) return pa < pb;
    return na < nb;
}

CRat times_i_power(const CRat& c, long power) {
    switch (((power % 4) + 4) % 4) {
        case 0: return c;
        case 1: return {-c.im, c.re};
        case 2: return -c;
        default: return {c.im, -c.re};
    }
}

namespace {

bool var_less(const Var& a, const Var& b) { return var_name_less(a.name, b.name); }

// Indices of ctx entries inside the merged context.
std::vector<std::size_t> remap_table(const std::vector<Var>& ctx,
                                     const std::vector<Var>& merged) {
    std::vector<std::size_t> table(ctx.size());
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        auto it = std::lower_bound(merged.begin(), merged.end(), ctx[i], var_less);
        table[i] = static_cast<std::size_t>(it - merged.begin());
    }
    return table;
}

std::vector<Var> merge_contexts(const std::vector<Var>& a, const std::vector<Var>& b) {
    std::vector<Var> merged;
    merged.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && var_less(a[i], b[j]))) {
            merged.push_back(a[i++]);
        } else if (i == a.size() || var_less(b[j], a[i])) {
            merged.push_back(b[j++]);
        } else {
            if (a[i].kind != b[j].kind) {
                throw Error(ErrorCode::VariableKindClash,
                            "variable '" + a[i].name + "' is both line and angle");
            }
            merged.push_back(a[i++]);
            ++j;
        }
    }
    return merged;
}

}  // namespace

void PolyExpr::canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero()) {
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
    if (ctx_.empty()) return;

    std::vector<bool> used(ctx_.size(), false);
    for (const auto& [mono, c] : terms_) {
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] != 0) used[i] = true;
        }
    }
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return;

    std::vector<Var> ctx;
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
        if (used[i]) ctx.push_back(ctx_[i]);
    }
    std::map<std::vector<int>, CRat> terms;
    for (const auto& [mono, c] : terms_) {
        std::vector<int> key;
        key.reserve(ctx.size());
        for (std::size_t i = 0; i < ctx_.size(); ++i) {
            if (used[i]) key.push_back(mono[i]);
        }
        terms.emplace(std::move(key), c);
    }
    ctx_ = std::move(ctx);
    terms_ = std::move(terms);
}

PolyExpr PolyExpr::constant(Rat c) {
    PolyExpr e;
    if (c != 0) e.terms_.emplace(std::vector<int>{}, CRat(std::move(c)));
    return e;
}

PolyExpr PolyExpr::variable(const std::string& name) {
    PolyExpr e;
    e.ctx_ = {Var{name, VarKind::Line}};
    e.terms_.emplace(std::vector<int>{1}, CRat(Rat(1)));
    return e;
}

PolyExpr PolyExpr::angle_exponential(const std::vector<std::pair<std::string, int>>& arg,
                                     const CRat& plus_coeff, const CRat& minus_coeff) {
    // plus_coeff * e^{i<m,theta>} + minus_coeff * e^{-i<m,theta>}
    std::vector<Var> ctx;
    for (const auto& [name, c] : arg) ctx.push_back(Var{name, VarKind::Angle});
    std::sort(ctx.begin(), ctx.end(), var_less);
    ctx.erase(std::unique(ctx.begin(), ctx.end()), ctx.end());

    std::vector<int> plus(ctx.size(), 0);
    for (const auto& [name, c] : arg) {
        auto it = std::lower_bound(ctx.begin(), ctx.end(), Var{name, VarKind::Angle}, var_less);
        plus[static_cast<std::size_t>(it - ctx.begin())] += c;
    }
    std::vector<int> minus(plus.size());
    for (std::size_t i = 0; i < plus.size(); ++i) minus[i] = -plus[i];

    PolyExpr e;
    e.ctx_ = std::move(ctx);
    e.terms_[plus] = e.terms_[plus] + plus_coeff;
    e.terms_[minus] = e.terms_[minus] + minus_coeff;
    e.canonicalize();
    return e;
}

PolyExpr PolyExpr::sin_of(const std::vector<std::pair<std::string, int>>& arg) {
    // sin x = (e^{ix} - e^{-ix}) / 2i
    return angle_exponential(arg, CRat(Rat(0), Rat(-1, 2)), CRat(Rat(0), Rat(1, 2)));
}

PolyExpr PolyExpr::cos_of(const std::vector<std::pair<std::string, int>>& arg) {
    return angle_exponential(arg, CRat(Rat(1, 2)), CRat(Rat(1, 2)));
}

bool PolyExpr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rat PolyExpr::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant() || terms_.begin()->second.im != 0) {
        throw Error(ErrorCode::ContextMismatch, "expression is not a rational constant");
    }
    return terms_.begin()->second.re;
}

bool PolyExpr::is_real() const {
    for (const auto& [mono, c] : terms_) {
        std::vector<int> conj_key = mono;
        bool has_angle = false;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (ctx_[i].kind == VarKind::Angle) {
                conj_key[i] = -mono[i];
                if (mono[i] != 0) has_angle = true;
            }
        }
        if (!has_angle) {
            if (c.im != 0) return false;
            continue;
        }
        auto it = terms_.find(conj_key);
        if (it == terms_.end() || !(it->second == c.conj())) return false;
    }
    return true;
}

PolyExpr merge_and_combine(const PolyExpr& a, const PolyExpr& b, bool multiply) {
    PolyExpr out;
    out.ctx_ = merge_contexts(a.ctx_, b.ctx_);
    auto ta = remap_table(a.ctx_, out.ctx_);
    auto tb = remap_table(b.ctx_, out.ctx_);
    const std::size_t n = out.ctx_.size();

    if (!multiply) {
        for (const auto& [mono, c] : a.terms_) {
            std::vector<int> key(n, 0);
            for (std::size_t i = 0; i < mono.size(); ++i) key[ta[i]] = mono[i];
            out.terms_[key] = out.terms_[key] + c;
        }
        for (const auto& [mono, c] : b.terms_) {
            std::vector<int> key(n, 0);
            for (std::size_t i = 0; i < mono.size(); ++i) key[tb[i]] = mono[i];
            out.terms_[key] = out.terms_[key] + c;
        }
    } else {
        for (const auto& [ma, ca] : a.terms_) {
            std::vector<int> base(n, 0);
            for (std::size_t i = 0; i < ma.size(); ++i) base[ta[i]] = ma[i];
            for (const auto& [mb, cb] : b.terms_) {
                std::vector<int> key = base;
                for (std::size_t i = 0; i < mb.size(); ++i) key[tb[i]] += mb[i];
                out.terms_[key] = out.terms_[key] + ca * cb;
            }
        }
    }
    out.canonicalize();
    return out;
}

PolyExpr PolyExpr::operator+(const PolyExpr& o) const { return merge_and_combine(*this, o, false); }

PolyExpr PolyExpr::operator-(const PolyExpr& o) const { return *this + (-o); }

PolyExpr PolyExpr::operator*(const PolyExpr& o) const { return merge_and_combine(*this, o, true); }

PolyExpr PolyExpr::operator-() const {
    PolyExpr out = *this;
    for (auto& [mono, c] : out.terms_) c = -c;
    return out;
}

PolyExpr PolyExpr::scaled(const Rat& c) const {
    if (c == 0) return PolyExpr();
    PolyExpr out = *this;
    CRat f{c};
    for (auto& [mono, v] : out.terms_) v = v * f;
    return out;
}

PolyExpr PolyExpr::pow(int e) const {
    if (e < 0) throw Error(ErrorCode::ParseError, "negative exponent");
    PolyExpr out = constant(Rat(1));
    for (int i = 0; i < e; ++i) out = out * (*this);
    return out;
}

PolyExpr PolyExpr::derivative(const std::string& var) const {
    std::size_t idx = ctx_.size();
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
        if (ctx_[i].name == var) {
            idx = i;
            break;
        }
    }
    if (idx == ctx_.size()) {
        // Unused variables are pruned from the context, so a derivative in
        // any foreign name is zero; only report genuinely empty names.
        if (var.empty()) throw Error(ErrorCode::UnknownVariable, "empty variable name");
        return PolyExpr();
    }

    PolyExpr out;
    out.ctx_ = ctx_;
    if (ctx_[idx].kind == VarKind::Line) {
        for (const auto& [mono, c] : terms_) {
            if (mono[idx] == 0) continue;
            std::vector<int> key = mono;
            key[idx] -= 1;
            CRat v = c;
            v = v * CRat(Rat(mono[idx]));
            out.terms_[key] = out.terms_[key] + v;
        }
    } else {
        for (const auto& [mono, c] : terms_) {
            if (mono[idx] == 0) continue;
            // d/dtheta e^{im theta} = i m e^{im theta}
            CRat v = times_i_power(c, 1);
            v = v * CRat(Rat(mono[idx]));
            out.terms_[mono] = out.terms_[mono] + v;
        }
    }
    out.canonicalize();
    return out;
}

Rat PolyExpr::evaluate_exact(const ExactPoint& point) const {
    CRat total;
    for (const auto& [mono, c] : terms_) {
        CRat v = c;
        long phase = 0;
        for (std::size_t i = 0; i < ctx_.size(); ++i) {
            if (mono[i] == 0) continue;
            if (ctx_[i].kind == VarKind::Line) {
                auto it = point.line.find(ctx_[i].name);
                if (it == point.line.end()) {
                    throw Error(ErrorCode::MissingAssignment,
                                "no value for line variable '" + ctx_[i].name + "'");
                }
                Rat p(1);
                for (int e = 0; e < mono[i]; ++e) p *= it->second;
                v = v * CRat(p);
            } else {
                auto it = point.angle_quarter_turns.find(ctx_[i].name);
                if (it == point.angle_quarter_turns.end()) {
                    throw Error(ErrorCode::MissingAssignment,
                                "no value for angle variable '" + ctx_[i].name + "'");
                }
                phase += static_cast<long>(mono[i]) * it->second;
            }
        }
        total = total + times_i_power(v, phase);
    }
    if (total.im != 0) {
        throw Error(ErrorCode::ContextMismatch, "exact evaluation gave a non-real value");
    }
    return total.re;
}

double PolyExpr::evaluate(const std::map<std::string, double>& point) const {
    std::vector<double> vals(ctx_.size());
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
        auto it = point.find(ctx_[i].name);
        if (it == point.end()) {
            throw Error(ErrorCode::MissingAssignment,
                        "no value for variable '" + ctx_[i].name + "'");
        }
        vals[i] = it->second;
    }
    double total = 0.0;
    for (const auto& [mono, c] : terms_) {
        double mag = 1.0;
        double phase = 0.0;
        for (std::size_t i = 0; i < ctx_.size(); ++i) {
            if (mono[i] == 0) continue;
            if (ctx_[i].kind == VarKind::Line) {
                mag *= std::pow(vals[i], mono[i]);
            } else {
                phase += mono[i] * vals[i];
            }
        }
        // Real part of c * e^{i phase}; conjugate pairs make the sum real.
        total += mag * (rat_to_double(c.re) * std::cos(phase) -
                        rat_to_double(c.im) * std::sin(phase));
    }
    return total;
}

PolyExpr PolyExpr::substitute_line(const std::string& var, const Rat& value) const {
    std::size_t idx = ctx_.size();
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
        if (ctx_[i].name == var) idx = i;
    }
    if (idx == ctx_.size()) return *this;
    if (ctx_[idx].kind != VarKind::Line) {
        throw Error(ErrorCode::ContextMismatch, "'" + var + "' is not a line variable");
    }
    PolyExpr out;
    out.ctx_ = ctx_;
    for (const auto& [mono, c] : terms_) {
        Rat p(1);
        for (int e = 0; e < mono[idx]; ++e) p *= value;
        std::vector<int> key = mono;
        key[idx] = 0;
        CRat v = c * CRat(p);
        out.terms_[key] = out.terms_[key] + v;
    }
    out.canonicalize();
    return out;
}

PolyExpr PolyExpr::substitute_angle(const std::string& var, long quarter_turns) const {
    std::size_t idx = ctx_.size();
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
        if (ctx_[i].name == var) idx = i;
    }
    if (idx == ctx_.size()) return *this;
    if (ctx_[idx].kind != VarKind::Angle) {
        throw Error(ErrorCode::ContextMismatch, "'" + var + "' is not an angle variable");
    }
    PolyExpr out;
    out.ctx_ = ctx_;
    for (const auto& [mono, c] : terms_) {
        CRat v = times_i_power(c, static_cast<long>(mono[idx]) * quarter_turns);
        std::vector<int> key = mono;
        key[idx] = 0;
        out.terms_[key] = out.terms_[key] + v;
    }
    out.canonicalize();
    return out;
}

PolyExpr PolyExpr::apply_signs(const std::map<std::string, int>& signs) const {
    PolyExpr out;
    out.ctx_ = ctx_;
    for (const auto& [mono, c] : terms_) {
        std::vector<int> key = mono;
        CRat v = c;
        for (std::size_t i = 0; i < ctx_.size(); ++i) {
            auto it = signs.find(ctx_[i].name);
            if (it == signs.end() || it->second == 1) continue;
            if (it->second != -1) {
                throw Error(ErrorCode::ContextMismatch, "signs must be +1 or -1");
            }
            if (ctx_[i].kind == VarKind::Line) {
                if (mono[i] % 2 != 0) v = -v;
            } else {
                key[i] = -mono[i];
            }
        }
        out.terms_[key] = out.terms_[key] + v;
    }
    out.canonicalize();
    return out;
}

int PolyExpr::line_degree() const {
    int deg = 0;
    for (const auto& [mono, c] : terms_) {
        int d = 0;
        for (std::size_t i = 0; i < ctx_.size(); ++i) {
            if (ctx_[i].kind == VarKind::Line) d += mono[i];
        }
        deg = std::max(deg, d);
    }
    return deg;
}

std::optional<std::vector<SosTerm>> weighted_sos_form(const PolyExpr& f) {
    if (!f.is_real()) return std::nullopt;

    PolyExpr residual = f;
    std::vector<SosTerm> result;

    // A candidate square base: optional sin(z) factor times a line monomial,
    // recorded by variable name because the residual's canonical context
    // shrinks as squares are peeled off.
    struct Candidate {
        std::string sine_var;  // empty for pure line squares
        std::vector<std::pair<std::string, int>> half;
    };

    auto make_base = [](const Candidate& cand) {
        PolyExpr base = PolyExpr::constant(Rat(1));
        for (const auto& [name, e] : cand.half) {
            base = base * PolyExpr::variable(name).pow(e);
        }
        if (!cand.sine_var.empty()) {
            base = base * PolyExpr::sin_of({{cand.sine_var, 1}});
        }
        return base;
    };

    auto peel = [&](const Candidate& cand, const Rat& weight) {
        PolyExpr base = make_base(cand);
        residual = residual - (base * base).scaled(weight);
        result.push_back(SosTerm{weight, base});
    };

    // Pass 1: sine-squared candidates. sin^2 z = 1/2 - (e^{2iz}+e^{-2iz})/4,
    // so a term with a lone angle index +-2 and even line exponents flags a
    // sine square of weight -4 times its coefficient. These go first because
    // their index-0 half overlaps with the pure line squares.
    {
        const auto& ctx = residual.context();
        std::vector<std::pair<Candidate, Rat>> moves;
        for (const auto& [mono, c] : residual.terms()) {
            Candidate cand;
            bool ok = true;
            for (std::size_t i = 0; i < ctx.size() && ok; ++i) {
                if (mono[i] == 0) continue;
                if (ctx[i].kind == VarKind::Angle) {
                    if (mono[i] == 2 && cand.sine_var.empty()) {
                        cand.sine_var = ctx[i].name;  // canonical side: +2
                    } else {
                        ok = false;
                    }
                } else if (mono[i] % 2 != 0 || mono[i] < 0) {
                    ok = false;
                } else {
                    cand.half.emplace_back(ctx[i].name, mono[i] / 2);
                }
            }
            if (!ok || cand.sine_var.empty()) continue;
            if (c.im != 0) return std::nullopt;
            Rat weight = -4 * c.re;
            if (weight <= 0) return std::nullopt;
            moves.emplace_back(std::move(cand), std::move(weight));
        }
        for (const auto& [cand, w] : moves) peel(cand, w);
    }

    // Pass 2: pure line squares (the constant term is the empty monomial).
    {
        const auto& ctx = residual.context();
        std::vector<std::pair<Candidate, Rat>> moves;
        for (const auto& [mono, c] : residual.terms()) {
            Candidate cand;
            bool ok = true;
            for (std::size_t i = 0; i < ctx.size() && ok; ++i) {
                if (mono[i] == 0) continue;
                if (ctx[i].kind == VarKind::Angle || mono[i] % 2 != 0 || mono[i] < 0) {
                    ok = false;
                } else {
                    cand.half.emplace_back(ctx[i].name, mono[i] / 2);
                }
            }
            if (!ok) return std::nullopt;
            if (c.im != 0 || c.re <= 0) return std::nullopt;
            moves.emplace_back(std::move(cand), c.re);
        }
        for (const auto& [cand, w] : moves) peel(cand, w);
    }

    if (!residual.is_zero()) return std::nullopt;
    return result;
}

std::vector<Var> phase_chart(const Dims& dims, bool compact) {
    std::vector<Var> chart;
    VarKind real_kind = compact ? VarKind::Angle : VarKind::Line;
    for (int i = 1; i <= dims.s; ++i) chart.push_back({"u" + std::to_string(i), real_kind});
    for (int a = 1; a <= dims.torus_dim(); ++a)
        chart.push_back({"phi" + std::to_string(a), VarKind::Angle});
    for (int v = 1; v <= dims.l; ++v) chart.push_back({"p" + std::to_string(v), real_kind});
    for (int v = 1; v <= dims.l; ++v) chart.push_back({"q" + std::to_string(v), real_kind});
    return chart;
}

PolyExpr poisson_bracket(const PolyExpr& f, const PolyExpr& g,
                         const StructureMatrix& structure,
                         const std::vector<Var>& chart) {
    const std::size_t dim = chart.size();
    if (structure.J.rows() != dim) {
        throw Error(ErrorCode::ContextMismatch, "chart size does not match structure matrix");
    }
    auto check_vars = [&](const PolyExpr& e) {
        for (const Var& v : e.context()) {
            bool found = false;
            for (const Var& c : chart) {
                if (c.name == v.name) {
                    if (c.kind != v.kind) {
                        throw Error(ErrorCode::VariableKindClash,
                                    "variable '" + v.name + "' kind differs from chart");
                    }
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw Error(ErrorCode::ContextMismatch,
                            "variable '" + v.name + "' is not a chart coordinate");
            }
        }
    };
    check_vars(f);
    check_vars(g);

    std::vector<PolyExpr> df(dim), dg(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        df[a] = f.derivative(chart[a].name);
        dg[a] = g.derivative(chart[a].name);
    }
    PolyExpr out;
    for (std::size_t a = 0; a < dim; ++a) {
        if (df[a].is_zero()) continue;
        for (std::size_t b = 0; b < dim; ++b) {
            const Rat& j = structure.J.at(a, b);
            if (j == 0 || dg[b].is_zero()) continue;
            out = out + (df[a] * dg[b]).scaled(j);
        }
    }
    return out;
}

}  // namespace kron
