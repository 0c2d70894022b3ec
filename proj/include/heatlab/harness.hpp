#pragma once

#include <string>
#include <utility>
#include <vector>

#include "heatlab/classify.hpp"
#include "heatlab/solver.hpp"

#include <json.hpp>

namespace heatlab {

/// One failed (or recorded) inequality with its location and both sides.
struct Witness {
    std::string what;
    double t = 0.0;
    double x = 0.0;  // first offending coordinate, when spatial
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Pass/fail record for one experiment procedure. Assertions list what was
/// checked; witnesses carry the first violations; metrics hold headline
/// numbers for the report document.
struct Report {
    std::string experiment;
    bool pass = true;
    std::vector<std::string> assertions;
    std::vector<Witness> witnesses;
    std::vector<std::string> notes;
    nlohmann::json metrics = nlohmann::json::object();

    void assert_leq(const std::string& what, double t, double x, double lhs, double rhs);
    nlohmann::json to_json() const;
};

/// Trajectories for ordered data must stay ordered: u(t;phi) <= u(t;psi)
/// pointwise with slack 1e-6 * scale. Nonnegative phi additionally forces
/// u(t;phi) >= -slack.
Report verify_comparison(const SolutionTrajectory& u_lo, const SolutionTrajectory& u_hi,
                         const GridField& phi, const GridField& psi);

struct ContinuousDependenceBound {
    double k_n = 0.0;  // 1 + 2^{n/2}
    std::vector<std::pair<double, double>> q_curve;  // (t, q(t)) per node
    double tau = 0.0;  // largest node with t^{n/2} ||u||_inf <= 1 on both
    std::vector<std::pair<double, double>> ratio_series;  // (t, observed/bound)
};

/// Blended-norm distance of two trajectories against 2 ||phi-psi||_1
/// e^{q(t)} with q(t) = k_n int_0^t L(s^{-n/2}) ds, on the a-posteriori
/// validity window (0, tau]. An empty window is reported, not fatal.
Report verify_continuous_dependence(const SolutionTrajectory& u, const SolutionTrajectory& v,
                                    const GridField& phi, const GridField& psi,
                                    const EnvelopeFunctions& env, int dim,
                                    ContinuousDependenceBound& bound, double tol = 1e-2);

struct GlobalEnvelopeConfig {
    double amplification = 2.0;  // A > 1
    double smallness = 1e-2;     // delta > 0, required bound on ||phi||_1
    double horizon = 10.0;       // simulation end time
};

/// Small-data global run: continues to the horizon and asserts the
/// envelope A S(t)phi- <= u <= A S(t)phi+ at every node, then fits the
/// sup-norm decay exponent by least squares on (ln t, ln ||u||_inf) over
/// the final decade inside the torus validity window.
Report verify_global_envelope(const HeatPropagator& prop, const Nonlinearity& nl,
                              const GridField& phi, const GlobalEnvelopeConfig& config,
                              double tol = 1e-6);

/// Under a convergent uniqueness-grade condition the two iteration limits
/// must coincide within tol * (1 + ||phi||_1); otherwise the gap is
/// recorded without asserting.
Report verify_uniqueness_gap(const IterationState& state, const ConditionVerdict& uniqueness,
                             double phi_l1, double tol);

}  // namespace heatlab
