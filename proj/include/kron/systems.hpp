#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kron/poly.hpp"
#include "kron/structure.hpp"

namespace kron {

enum class SystemKind { HamNoncompact, HamCompact, RevNoncompact, RevCompact };

const char* system_kind_name(SystemKind k);
bool kind_is_hamiltonian(SystemKind k);
bool kind_is_compact(SystemKind k);

/// Hamiltonian family data: H = h(u) + l p1 sum zeta_i u_i^2
///                              + sum (xi_v p_v q_v^2 + eta_v p_v^3 / 3),
/// with sin z replacing each of u, p, q inside the non-h terms on the
/// compact phase space. All constants must be >= 0.
struct HamParams {
    StructureSpec spec;
    std::vector<Rat> zeta;  // s entries
    std::vector<Rat> xi;    // l entries
    std::vector<Rat> eta;   // l entries
    PolyExpr h;             // function of u1..us only
    bool compact = false;
};

/// Reversible family data: udot = 0, phidot = h(u),
/// qdot_v = xi_v q_v^2 + delta_{1v} l sum zeta_i u_i^2 (sin z on tori).
struct RevParams {
    int n = 0;  // torus dimension
    int m = 0;  // u count
    int l = 0;  // q count
    std::vector<Rat> zeta;    // m entries
    std::vector<Rat> xi;      // l entries
    std::vector<PolyExpr> h;  // n components, functions of u1..um
    bool compact = false;
};

/// A coordinate sign pattern G(x)_a = sign_a * x_a with G^2 = id.
struct Involution {
    std::vector<int> signs;   // +1 / -1 per chart coordinate
    int fix_dim = 0;
    int codim = 0;
    long fixed_components = 1;  // 2^(# negated angle coordinates)

    std::pair<int, int> type() const { return {codim, fix_dim}; }
};

/// Which coordinates the family manifold pins (to 0, or to {0, pi} on tori).
struct TorusFamily {
    SystemKind kind;
    std::vector<bool> u_pinned;
    std::vector<bool> p_pinned;  // empty for reversible kinds
    std::vector<bool> q_pinned;
    int d = 0;                    // family dimension
    std::optional<int> d_star;    // symmetric subfamily dimension (reversible)
};

/// A candidate torus: base point plus derived membership/symmetry data.
/// Base-point entries are exact rationals; on compact phase spaces they are
/// measured in units of pi (value = entry * pi).
struct TorusSpec {
    std::vector<Rat> u0;
    std::vector<Rat> p0;  // empty for reversible kinds
    std::vector<Rat> q0;
    bool in_family = false;
    bool symmetric = false;
    std::vector<double> frequency;
    std::optional<std::vector<Rat>> frequency_exact;
};

struct SystemModel {
    SystemKind kind;
    std::vector<Var> chart;               // (u, phi, p, q) / (u, phi, q)
    std::vector<PolyExpr> vector_field;   // one component per chart entry
    Involution involution;
    TorusFamily family;

    // Hamiltonian kinds only:
    std::optional<HamParams> ham;
    std::optional<StructureMatrix> structure;
    std::optional<PolyExpr> hamiltonian;
    // Reversible kinds only:
    std::optional<RevParams> rev;

    int count_u() const;
    int count_phi() const;
    int count_p() const;
    int count_q() const;
    std::size_t dim() const { return chart.size(); }
    std::size_t phi_offset() const { return static_cast<std::size_t>(count_u()); }
    std::size_t p_offset() const { return phi_offset() + count_phi(); }
    std::size_t q_offset() const { return p_offset() + count_p(); }
};

/// Builds the model: the vector field of a Hamiltonian kind is derived twice
/// (J grad H, and the displayed closed form) and the two must agree exactly.
SystemModel make_system(const HamParams& params);
SystemModel make_system(const RevParams& params);

TorusFamily torus_family(const SystemModel& system);

/// Member constructor for the family: validates the base point, decides
/// membership and symmetry, computes the frequency vector.
TorusSpec family_member(const SystemModel& system, std::vector<Rat> u0,
                        std::vector<Rat> p0, std::vector<Rat> q0);

/// Z dh(u0)/du for Hamiltonian kinds, h(u0) for reversible kinds.
/// Throws Error(NotInFamily) unless torus.in_family.
std::vector<double> torus_frequency(const SystemModel& system, const TorusSpec& torus);

bool is_symmetric_torus(const SystemModel& system, const TorusSpec& torus);

struct ReversibilityReport {
    bool reversible = false;
    std::pair<int, int> involution_type;  // (codim Fix, dim Fix)
    int fix_dim = 0;
    long fixed_components = 1;
    std::optional<std::size_t> failing_coordinate;
    std::string residual;  // printed residual at the failing coordinate
};

/// Checks DG X + X o G = 0 coordinatewise for the system's own involution.
ReversibilityReport reversibility_check(const SystemModel& system);
/// Same identity for an arbitrary sign pattern over the chart.
ReversibilityReport reversibility_check(const SystemModel& system,
                                        const std::vector<int>& signs);

/// First integrals and their pairwise Poisson brackets.
struct IntegralSet {
    std::vector<std::string> names;
    std::vector<PolyExpr> integrals;
    /// Bracket matrix of the s+2l coordinate integrals u, p, q, present for
    /// non-compact Hamiltonian kinds with d = s+2l.
    std::optional<RatMatrix> coordinate_bracket_matrix;
};

IntegralSet first_integrals(const SystemModel& system);

/// Planner skeleton: block sizes plus the zero pattern over the constants.
struct PlanResult {
    Dims dims;
    std::vector<Rat> zeta;  // entries 0 or 1
    std::vector<Rat> xi;
    std::vector<Rat> eta;
};

/// Resolves (N, n, class, d) to (s, k, l) by the closed-form recipes and
/// distributes exactly d zeros over the constants. Infeasible regimes fail
/// with Error(InfeasibleRegime) naming the violated inequality.
PlanResult plan_parameters(int N, int n, TorusKind target_class, int d);

struct RevPlanResult {
    int n, m, l;
    std::vector<Rat> zeta;
    std::vector<Rat> xi;
};

RevPlanResult plan_rev_parameters(int n, int m, int l, int d_star, int d);

/// Completes a plan into a full system. When omega is given, Z is chosen so
/// that the torus through the origin has frequency vector omega to within
/// the rational rounding of its entries (h stays linear / a single sine),
/// retrying completions until the structure matrix is non-singular.
HamParams planned_ham_params(const PlanResult& plan, bool compact,
                             const std::vector<double>& omega = {});
RevParams planned_rev_params(const RevPlanResult& plan, bool compact,
                             const std::vector<double>& omega = {});

/// Rational approximation used when realizing float frequencies exactly.
Rat approx_rat(double x, long denominator = 1000000000000L);

}  // namespace kron
