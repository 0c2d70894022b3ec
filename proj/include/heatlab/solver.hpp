#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/envelopes.hpp"
#include "heatlab/nonlinearity.hpp"
#include "heatlab/propagator.hpp"

namespace heatlab {

/// Graded time grid on [0, t_end]: t_j = t_end (j/M)^2. The quadratic
/// grading resolves the integrable singularity of the Duhamel integrand
/// near s = 0.
struct TimeGrid {
    double t_end = 0.0;
    int steps = 0;
    std::vector<double> nodes;  // size steps + 1, strictly increasing from 0

    static TimeGrid graded(double t_end, int steps);
};

enum class SolveStatus { Converged, HorizonReached, BlowUpDetected, MaxIterations };
std::string to_string(SolveStatus s);

/// Time-stamped solution fields plus norm series.
struct SolutionTrajectory {
    std::vector<double> times;
    std::vector<GridField> fields;
    SolveStatus status = SolveStatus::HorizonReached;
    double t_max_reached = 0.0;
    double detect_time = -1.0;  // valid when status == BlowUpDetected

    const GridField& at(std::size_t j) const { return fields[j]; }
    std::size_t size() const { return times.size(); }

    /// CSV columns: t,l1,linf,t_half_n_linf,status.
    void write_norm_csv(const std::string& path) const;
};

/// Signals that evaluating f on a trajectory overflowed, i.e. incipient
/// blow-up at the given time.
struct BlowUpSignal : std::runtime_error {
    double time;
    explicit BlowUpSignal(double t)
        : std::runtime_error("nonlinearity overflow at t = " + std::to_string(t)), time(t) {}
};

/// Ordering violation beyond slack during the monotone iteration; a
/// discretization failure that is reported, never clipped.
struct OrderingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The variation-of-constants operator evaluated on the nodes of u's time
/// grid: S(t)phi plus the time integral of S(t-s) f(u(s)), trapezoidal in
/// s with the semigroup applied exactly at the interval endpoints.
SolutionTrajectory duhamel(const HeatPropagator& prop, const Nonlinearity& nl,
                           const GridField& phi, const SolutionTrajectory& u);

/// Existence horizon for a mass bound K: largest t with g(t) <= 1/2 where
/// g integrates ell(2 K s^{-n/2}). unbounded marks g staying below 1/2
/// for all sampled times.
struct HorizonEstimate {
    double mass_bound = 0.0;
    double t_b = 0.0;
    bool unbounded = false;
    std::vector<std::pair<double, double>> g_values;
};

HorizonEstimate horizon(const EnvelopeFunctions& env, double mass_bound, int dim,
                        bool positive_cone = false);

/// The value g(t) itself, exposed for oracle comparisons.
double horizon_gate(const EnvelopeFunctions& env, double mass_bound, int dim, double t,
                    bool positive_cone = false);

struct IterationState {
    SolutionTrajectory lower;  // limit of the increasing iterates
    SolutionTrajectory upper;  // limit of the decreasing iterates
    int iteration_count = 0;
    double sup_gap = 0.0;      // max over nodes of ||upper - lower||_inf
    double blended_gap = 0.0;  // max over nodes of l1 + t^{n/2} linf of the gap
    std::vector<double> gap_history;
    bool converged = false;
    /// Sub/supersolution envelopes 2 S(t) phi-+ recorded per node.
    std::vector<GridField> sub_envelope;
    std::vector<GridField> super_envelope;
};

/// Monotone iteration started from the envelopes 2 S(t) phi+- on the given
/// grid. Iterates until the blended-norm gap drops below
/// tol * (1 + ||phi||_1) or max_iter. Ordering of the iterates is asserted
/// every sweep with slack 1e-6 * scale.
IterationState monotone_solve(const HeatPropagator& prop, const Nonlinearity& nl,
                              const GridField& phi, const TimeGrid& grid, double tol,
                              int max_iter);

struct BlowUpLimits {
    double linf = 1e8;
    double l1_factor = 1e6;
    double ode_escape = 1e10;
};

/// Strang-splitting reference integrator: half nonlinear ODE step per
/// lattice point (adaptive scalar integration of u' = f(u)), full spectral
/// diffusion step, half nonlinear step; `substeps` splitting steps per
/// grid interval.
SolutionTrajectory reference_integrate(const HeatPropagator& prop, const Nonlinearity& nl,
                                       const GridField& phi, const TimeGrid& grid, int substeps,
                                       const BlowUpLimits& limits = {});

struct ContinuationOptions {
    int nodes_per_segment = 48;
    int max_iter = 60;
    double min_horizon_fraction = 1e-6;  // of t_limit; below this the horizon collapsed
    int max_segments = 40000;
    BlowUpLimits limits;
};

/// Glues monotone solves over successive horizons, recomputing the mass
/// bound K = 2 ||u||_1 at each restart, until t_limit, blow-up, or horizon
/// collapse. Requires the uniqueness-grade condition (I2, or I2+ for
/// cone-only sources) to be convergent.
SolutionTrajectory continue_maximally(const HeatPropagator& prop, const Nonlinearity& nl,
                                      const GridField& phi, double t_limit, double tol,
                                      const ContinuationOptions& opts = {});

}  // namespace heatlab
