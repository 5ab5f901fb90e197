#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kron/dynamics.hpp"
#include "kron/systems.hpp"

namespace kron {

enum class Verdict { VerifiedExact, VerifiedNumeric, EvidenceOnly, Failed };

const char* verdict_name(Verdict v);

/// One checked claim. The id is a stable anchor; details hold witnesses,
/// tolerances and sample counts. verified-exact is reserved for pure
/// rational-arithmetic identities, and global negatives never exceed
/// evidence-only.
struct ClaimReport {
    std::string id;
    Verdict verdict = Verdict::Failed;
    nlohmann::json details;

    bool ok() const { return verdict != Verdict::Failed; }
};

/// Isolation domain of the compact systems: p_v confined to I_{eps_v}
/// (I_{+1} = (-pi/2, pi/2), I_{-1} = (pi/2, 3pi/2) mod 2pi) and q_v != q*_v.
/// Reversible kinds carry no p block and use only the q constraints.
struct DomainSpec {
    std::vector<double> q_star;
    std::vector<int> eps;
};

/// The strong-isolation domain: every q*_v = pi, every eps_v = +1 (plus
/// u_i != pi, which the scans enforce on their samples).
DomainSpec default_isolation_domain(const SystemModel& system);

bool domain_contains(const DomainSpec& domain, const SystemModel& system,
                     const std::vector<double>& state);

/// Substitutes the family constraints into the vector field and checks that
/// u, p, q freeze and phi reduces to the frequency expression, enumerating
/// the {0, pi} branches on compact phase spaces.
ClaimReport verify_family_invariance(const SystemModel& system);
/// Same check against an explicit field (for negative controls).
ClaimReport verify_family_invariance(const SystemModel& system,
                                     const std::vector<PolyExpr>& field);

/// qdot_v >= 0: exact weighted-sum-of-squares on the non-compact kinds and
/// on compact reversible systems; on compact Hamiltonian systems the cos p_v
/// factor is verified symbolically and the sign sampled on a quasi-random
/// grid inside the domain (Error(MissingDomain) without one).
ClaimReport verify_monotonicity(const SystemModel& system,
                                const std::optional<DomainSpec>& domain = {},
                                int grid_points = 100000);

/// Pairwise involution of the first integrals; for non-compact d = s+2l the
/// coordinate bracket matrix is compared entrywise against the displayed
/// block form and its rank against 2l.
ClaimReport verify_poisson_matrix(const SystemModel& system);

struct ScanConfig {
    int samples = 1000;
    unsigned seed = 1;
    double margin = 0.25;        // distance from family values and domain walls
    double delta = 1e-6;         // escape certification gain
    double stationary_tol = 1e-10;
    double horizon = 0.5;        // shrunk automatically on compact kinds
    double dt = 1e-3;
};

/// Samples off-family starts (inside the isolation domain on compact phase
/// spaces), integrates, and requires the monotone-escape certificate for
/// every sample. A clean sweep is still only evidence-only: the underlying
/// claim is a global negative.
ClaimReport uniqueness_scan(const SystemModel& system, const ScanConfig& config,
                            const std::optional<DomainSpec>& domain = {});

/// Control scan over family members; flags any member the escape detector
/// would certify (there must be none).
ClaimReport family_stationarity_scan(const SystemModel& system, const ScanConfig& config);

struct DiophantineReport {
    std::vector<double> omega;
    double tau = 1.0;
    bool tau_admissible = true;       // Diophantine exponents satisfy tau >= n-1
    int j_max = 1;
    double gamma_hat = 0.0;           // min |<j, omega>| |j|^tau, 0 when resonant
    std::vector<long> worst_j;
    bool resonant = false;
    std::vector<long> witness_j;      // the resonance relation when found
    bool witness_exact = false;       // re-verified in rational arithmetic
    double float_tolerance = 1e-12;   // |<j, omega>| below this flags a resonance
};

/// Brute-force scan of all integer vectors with 0 < |j|_1 <= j_max. Floating
/// |<j, omega>| below 1e-12 flags a resonance, re-checked exactly when the
/// rational values of omega are supplied.
DiophantineReport diophantine_scan(const std::vector<double>& omega, double tau, int j_max,
                                   const std::optional<std::vector<Rat>>& omega_exact = {});

struct HamRegime {
    int N = 2;
    int n = 1;
    TorusKind target_class = TorusKind::StrictlyIsotropic;
    int d = 0;
    std::vector<double> omega;
    bool compact = false;
};

struct RevRegime {
    int n = 0;
    int m = 0;
    int l = 1;
    int d_star = 0;
    int d = 0;
    std::vector<double> omega;
    bool compact = false;
};

/// Bundles every checkable claim about one parameter regime: dimensions,
/// classification, frequencies, invariance, monotonicity, reversibility and
/// isolation evidence; one report per clause.
std::vector<ClaimReport> verify_regime_suite(const HamRegime& regime,
                                              const ScanConfig& scan);
std::vector<ClaimReport> verify_regime_suite(const RevRegime& regime,
                                              const ScanConfig& scan);

/// Low-discrepancy point set used by the scans (Halton, seeded by offset).
class HaltonSampler {
public:
    HaltonSampler(std::size_t dim, unsigned seed);
    std::vector<double> next();  // components in (0, 1)

private:
    std::size_t dim_;
    unsigned long index_;
};

}  // namespace kron
