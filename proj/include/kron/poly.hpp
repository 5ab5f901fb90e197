#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kron/rational.hpp"
#include "kron/structure.hpp"

namespace kron {

enum class VarKind { Line, Angle };

struct Var {
    std::string name;
    VarKind kind;

    bool operator==(const Var&) const = default;
};

/// Orders "u2" before "u10": common prefix, then numeric suffix.
bool var_name_less(const std::string& a, const std::string& b);

/// Complex rational, used as the Fourier coefficient field. Real-valued
/// expressions keep these in conjugate pairs.
struct CRat {
    Rat re;
    Rat im;

    CRat() = default;
    CRat(Rat r) : re(std::move(r)) {}
    CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    CRat conj() const { return {re, -im}; }

    CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
    CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
    CRat operator-() const { return {-re, -im}; }
    CRat operator*(const CRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    bool operator==(const CRat&) const = default;
};

/// Multiplies by i^power (power taken mod 4).
CRat times_i_power(const CRat& c, long power);

/// Point for exact evaluation: rationals for line variables, quarter turns
/// (value = t * pi/2) for angle variables.
struct ExactPoint {
    std::map<std::string, Rat> line;
    std::map<std::string, long> angle_quarter_turns;
};

/// Exact expression: polynomial in the line variables, finite Fourier series
/// in the angle variables. A term maps an exponent/index vector (aligned with
/// context()) to a complex rational coefficient; e^{i m theta} is the angle
/// basis, so sin and cos live at indices +-1. The representation is
/// canonical: no zero coefficients, no unused variables, context sorted by
/// name. Real-valued expressions keep conjugate index pairs with conjugate
/// coefficients, and every operation here preserves that.
class PolyExpr {
public:
    PolyExpr() = default;

    static PolyExpr constant(Rat c);
    static PolyExpr variable(const std::string& name);  // line variable
    /// sin/cos of an integer combination of angle variables.
    static PolyExpr sin_of(const std::vector<std::pair<std::string, int>>& arg);
    static PolyExpr cos_of(const std::vector<std::pair<std::string, int>>& arg);

    const std::vector<Var>& context() const { return ctx_; }
    const std::map<std::vector<int>, CRat>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Value of a constant expression (zero when empty).
    Rat constant_value() const;
    bool is_real() const;

    bool operator==(const PolyExpr& o) const {
        return ctx_ == o.ctx_ && terms_ == o.terms_;
    }

    PolyExpr operator+(const PolyExpr& o) const;
    PolyExpr operator-(const PolyExpr& o) const;
    PolyExpr operator*(const PolyExpr& o) const;
    PolyExpr operator-() const;
    PolyExpr scaled(const Rat& c) const;
    PolyExpr pow(int e) const;  // e >= 0

    PolyExpr derivative(const std::string& var) const;

    Rat evaluate_exact(const ExactPoint& point) const;
    double evaluate(const std::map<std::string, double>& point) const;

    /// Substitutes an exact rational for a line variable.
    PolyExpr substitute_line(const std::string& var, const Rat& value) const;
    /// Substitutes t * pi/2 for an angle variable.
    PolyExpr substitute_angle(const std::string& var, long quarter_turns) const;
    /// Pullback under a coordinate sign flip: x -> sign * x per variable.
    /// Variables absent from the map keep sign +1.
    PolyExpr apply_signs(const std::map<std::string, int>& signs) const;

    /// Total degree in the line variables (0 for constants).
    int line_degree() const;

private:
    friend PolyExpr merge_and_combine(const PolyExpr&, const PolyExpr&, bool multiply);
    static PolyExpr angle_exponential(const std::vector<std::pair<std::string, int>>& arg,
                                      const CRat& plus_coeff, const CRat& minus_coeff);
    void canonicalize();

    std::vector<Var> ctx_;
    std::map<std::vector<int>, CRat> terms_;
};

/// One weighted square: weight * base^2 with weight >= 0.
struct SosTerm {
    Rat weight;
    PolyExpr base;
};

/// Structural decomposition f = sum w_r * m_r^2 where each m_r is a line
/// monomial, sin of an angle variable times a line monomial, or the constant
/// 1. Returns nothing when f is not literally of that shape; this is a
/// pattern check, not an SOS solver.
std::optional<std::vector<SosTerm>> weighted_sos_form(const PolyExpr& f);

/// The coordinate chart the structure matrix acts on, ordered (u, phi, p, q).
/// Compact charts put u, p, q on tori.
std::vector<Var> phase_chart(const Dims& dims, bool compact);

/// (grad f)^T J (grad g) over the given chart; chart size must match J.
/// Both arguments must only use chart variables.
PolyExpr poisson_bracket(const PolyExpr& f, const PolyExpr& g,
                         const StructureMatrix& structure,
                         const std::vector<Var>& chart);

}  // namespace kron
