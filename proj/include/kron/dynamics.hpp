#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kron/systems.hpp"

namespace kron {

enum class Method { RK4, ImplicitMidpoint, ExactSplit };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct IntegratorConfig {
    Method method = Method::RK4;
    double dt = 1e-3;
    double horizon = 10.0;
    double fp_tol = 1e-13;      // implicit midpoint fixed point
    int fp_max_iters = 50;
    double blowup_bound = 1e8;  // infinity-norm guard
    int split_substeps = 16;    // per step, even
    int store_every = 1;
};

enum class StopReason { Completed, BlowUp };

/// Sampled solution. Angle coordinates are unwrapped lifts; wrap_angle gives
/// the [0, 2pi) view.
struct Trajectory {
    std::vector<std::string> coordinates;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    Method method = Method::RK4;
    double dt = 0;
    StopReason stop = StopReason::Completed;
    double stop_time = 0;
    long total_fp_iterations = 0;
    int max_fp_iterations = 0;
};

double wrap_angle(double x);

/// Fast numeric view of a PolyExpr over a chart (conjugate Fourier pairs
/// folded into cos/sin terms).
class CompiledPoly {
public:
    CompiledPoly() = default;
    CompiledPoly(const PolyExpr& f, const std::vector<Var>& chart);
    double eval(const double* x) const;

private:
    struct Term {
        double c_cos, c_sin;
        std::vector<std::pair<int, int>> powers;  // (slot, exponent)
        std::vector<std::pair<int, int>> waves;   // (slot, index)
    };
    std::vector<Term> terms_;
};

/// Fixed-step integration of the system's vector field. Exceeding the
/// blow-up bound stops the run with StopReason::BlowUp and a truncated
/// trajectory; that outcome is expected for off-family starts of the
/// non-compact systems. The implicit midpoint rule fails with
/// Error(NoConvergence) if its fixed point stalls, and any integrator fails
/// with Error(StepTooLarge) when one step advances an angle by pi or more.
Trajectory integrate(const SystemModel& system, const std::vector<double>& start,
                     const IntegratorConfig& config);

struct FrequencyEstimate {
    std::vector<double> omega;
    std::vector<double> rms_residual;
};

/// Least-squares slopes of unwrapped angles against time. Residuals above
/// the threshold mean the trajectory is not a Kronecker-torus orbit; that
/// raises Error(NotLinear).
FrequencyEstimate estimate_frequencies(const Trajectory& traj,
                                       const std::vector<std::size_t>& angle_indices,
                                       double residual_threshold = 1e-4);

struct PeriodMeasurement {
    int l = 0;
    double chi = 0;
    double xi1 = 0;
    double varpi_measured = 0;
    double varpi_closed_form = 0;  // sqrt(l chi (l chi + xi1))
    double relative_error = 0;
    int periods = 0;
};

/// Integrates qdot = xi1 sin^2 q + l chi, times the 2pi wraps and compares
/// the measured frequency against the closed form.
PeriodMeasurement measure_exceptional_period(int l, double chi, double xi1);

struct RecurrenceQuery {
    std::vector<double> omega;
    double T = 1.0;
    double eps = 1e-3;          // l1 ball radius (the delta of the scan)
    long max_multiples = 10000000;
};

struct RecurrenceResult {
    double Theta = 0;
    long multiple = 0;
    double dist = 0;  // l1 distance of Theta*omega to the 2pi lattice
};

/// Scans Theta = m T until dist(Theta omega mod 2pi, 0) < eps in the l1
/// metric; the contract is asserted on return. A scan-cap hit raises
/// Error(BudgetExceeded) naming the cap.
RecurrenceResult find_recurrence_time(const RecurrenceQuery& query);

enum class EscapeVerdict { Escapes, Stationary, Inconclusive };

const char* escape_verdict_name(EscapeVerdict v);

/// Monotone-coordinate certificate on raw sample series: "escapes" when some
/// series is non-decreasing throughout and gains more than delta,
/// "stationary" when every series stays within stationary_tol of its start.
EscapeVerdict escape_verdict(const std::vector<std::vector<double>>& series,
                             double delta = 1e-6, double stationary_tol = 1e-10,
                             double slack = 1e-12);

EscapeVerdict monotone_escape_detector(const Trajectory& traj,
                                       const std::vector<std::size_t>& coord_indices,
                                       double delta = 1e-6,
                                       double stationary_tol = 1e-10);

}  // namespace kron
