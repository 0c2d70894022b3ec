#include "heatlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heatlab {

namespace {

double first_coord(const GridField& f, std::size_t flat) {
    return f.spec.axis_coord(f.spec.unflatten(flat)[0]);
}

/// int_0^t env_fn(s^{-n/2}) ds by dyadic bands downward from t, Simpson on
/// the log abscissa. Same scheme as the horizon gate.
double envelope_time_integral(const ScalarFn& env_fn, int dim, double t) {
    if (!(t > 0)) return 0.0;
    auto integrand = [&](double s) { return env_fn(std::pow(s, -0.5 * dim)); };
    constexpr int kPts = 33;
    double total = 0.0;
    double hi = t;
    for (int k = 0; k < 200; ++k) {
        const double lo = hi * 0.5;
        const double xa = std::log(lo), xb = std::log(hi);
        const double h = (xb - xa) / (kPts - 1);
        double acc = 0.0;
        for (int i = 0; i < kPts; ++i) {
            const double s = std::exp(xa + i * h);
            const double w = (i == 0 || i == kPts - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * integrand(s) * s;
        }
        acc *= h / 3.0;
        total += acc;
        hi = lo;
        if (k > 20 && acc < 1e-14 * std::max(total, 1e-300)) break;
    }
    return total;
}

}  // namespace

void Report::assert_leq(const std::string& what, double t, double x, double lhs, double rhs) {
    if (lhs <= rhs) return;
    pass = false;
    if (witnesses.size() < 32) witnesses.push_back({what, t, x, lhs, rhs});
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["pass"] = pass;
    j["assertions"] = assertions;
    j["notes"] = notes;
    j["metrics"] = metrics;
    j["witnesses"] = nlohmann::json::array();
    for (const auto& w : witnesses)
        j["witnesses"].push_back(
            {{"what", w.what}, {"t", w.t}, {"x", w.x}, {"lhs", w.lhs}, {"rhs", w.rhs}});
    return j;
}

Report verify_comparison(const SolutionTrajectory& u_lo, const SolutionTrajectory& u_hi,
                         const GridField& phi, const GridField& psi) {
    if (!pointwise_leq(phi, psi, 0.0))
        throw std::invalid_argument("verify_comparison: data not ordered");
    if (u_lo.times != u_hi.times)
        throw std::invalid_argument("verify_comparison: trajectories on different grids");

    Report rep;
    rep.experiment = "comparison";
    rep.assertions.push_back("u(t; lower datum) <= u(t; upper datum) at all nodes");

    double scale = 1.0;
    for (const auto& f : u_lo.fields) scale = std::max(scale, norm_linf(f));
    for (const auto& f : u_hi.fields) scale = std::max(scale, norm_linf(f));
    const double slack = 1e-6 * scale;

    double worst = 0.0;
    for (std::size_t j = 0; j < u_lo.times.size(); ++j) {
        const auto& a = u_lo.fields[j];
        const auto& b = u_hi.fields[j];
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, a.values[i] - b.values[i]);
            rep.assert_leq("ordering", u_lo.times[j], first_coord(a, i), a.values[i],
                           b.values[i] + slack);
        }
    }
    rep.metrics["max_ordering_excess"] = worst;
    rep.metrics["slack"] = slack;

    bool lo_nonneg = true;
    for (double v : phi.values) lo_nonneg = lo_nonneg && v >= 0.0;
    if (lo_nonneg) {
        rep.assertions.push_back("nonnegative datum keeps the solution above -slack");
        for (std::size_t j = 0; j < u_lo.times.size(); ++j) {
            const auto& a = u_lo.fields[j];
            for (std::size_t i = 0; i < a.size(); ++i)
                rep.assert_leq("positivity", u_lo.times[j], first_coord(a, i), -a.values[i],
                               slack);
        }
    }
    return rep;
}

Report verify_continuous_dependence(const SolutionTrajectory& u, const SolutionTrajectory& v,
                                    const GridField& phi, const GridField& psi,
                                    const EnvelopeFunctions& env, int dim,
                                    ContinuousDependenceBound& bound, double tol) {
    if (u.times != v.times)
        throw std::invalid_argument("verify_continuous_dependence: grid mismatch");

    Report rep;
    rep.experiment = "continuous_dependence";
    bound = ContinuousDependenceBound{};
    bound.k_n = 1.0 + std::pow(2.0, 0.5 * dim);

    // validity window: largest node t with t^{n/2} ||.||_inf <= 1 on both
    // trajectories, detected a posteriori
    const double half_n = 0.5 * dim;
    std::size_t tau_idx = 0;
    for (std::size_t j = 1; j < u.times.size(); ++j) {
        const double t = u.times[j];
        const double cap = std::pow(t, -half_n);
        if (norm_linf(u.fields[j]) <= cap && norm_linf(v.fields[j]) <= cap)
            tau_idx = j;
        else
            break;
    }
    if (tau_idx == 0) {
        rep.pass = false;
        rep.notes.push_back("empty validity window: t^{n/2} ||u||_inf exceeds 1 at the "
                            "first positive node");
        return rep;
    }
    bound.tau = u.times[tau_idx];

    const double dist0 = norm_l1(phi - psi);
    rep.assertions.push_back(
        "l1 + t^{n/2} sup distance stays below 2 ||phi-psi||_1 e^{q(t)} (1 + tol)");
    rep.metrics["initial_l1_distance"] = dist0;
    rep.metrics["k_n"] = bound.k_n;
    rep.metrics["tau"] = bound.tau;

    for (std::size_t j = 1; j <= tau_idx; ++j) {
        const double t = u.times[j];
        const double q = bound.k_n * envelope_time_integral(env.big_l, dim, t);
        bound.q_curve.emplace_back(t, q);
        const GridField d = u.fields[j] - v.fields[j];
        const double blended = norm_l1(d) + std::pow(t, half_n) * norm_linf(d);
        const double rhs = 2.0 * dist0 * std::exp(q);
        bound.ratio_series.emplace_back(t, rhs > 0 ? blended / rhs : 0.0);
        rep.assert_leq("blended distance vs bound", t, 0.0, blended, rhs * (1.0 + tol));
    }
    double max_ratio = 0.0;
    for (const auto& [t, r] : bound.ratio_series) max_ratio = std::max(max_ratio, r);
    rep.metrics["max_ratio"] = max_ratio;
    rep.metrics["q_at_tau"] = bound.q_curve.empty() ? 0.0 : bound.q_curve.back().second;
    return rep;
}

Report verify_global_envelope(const HeatPropagator& prop, const Nonlinearity& nl,
                              const GridField& phi, const GlobalEnvelopeConfig& config,
                              double tol) {
    if (!(config.amplification > 1.0))
        throw std::invalid_argument("verify_global_envelope: amplification must exceed 1");
    if (!(config.smallness > 0.0))
        throw std::invalid_argument("verify_global_envelope: smallness must be positive");

    Report rep;
    rep.experiment = "global_envelope";
    const double phi_l1 = norm_l1(phi);
    rep.metrics["phi_l1"] = phi_l1;
    if (phi_l1 > config.smallness) {
        rep.pass = false;
        rep.notes.push_back("||phi||_1 exceeds the smallness parameter; envelope not asserted");
        return rep;
    }

    const SolutionTrajectory traj = continue_maximally(prop, nl, phi, config.horizon, tol);
    rep.metrics["status"] = to_string(traj.status);
    rep.metrics["t_max_reached"] = traj.t_max_reached;
    if (traj.status != SolveStatus::HorizonReached) {
        rep.pass = false;
        rep.notes.push_back("run ended before the horizon: " + to_string(traj.status));
        return rep;
    }

    rep.assertions.push_back("A S(t) phi- <= u(t) <= A S(t) phi+ at every node");
    const GridField phi_pos = positive_part(phi);
    const GridField phi_neg = negative_part(phi);
    const double A = config.amplification;
    double scale = 1.0;
    for (const auto& f : traj.fields) scale = std::max(scale, norm_linf(f));
    const double slack = 1e-6 * scale;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        const GridField upper = A * prop.apply(phi_pos, t);
        const GridField lower = A * prop.apply(phi_neg, t);
        const auto& uf = traj.fields[j];
        for (std::size_t i = 0; i < uf.size(); ++i) {
            rep.assert_leq("envelope upper", t, first_coord(uf, i), uf.values[i],
                           upper.values[i] + slack);
            rep.assert_leq("envelope lower", t, first_coord(uf, i), lower.values[i],
                           uf.values[i] + slack);
        }
        if (!rep.pass) break;  // first offending node is enough
    }

    // decay exponent of ||u||_inf: least squares on (ln t, ln sup) over the
    // final decade within the torus validity window
    const double t_hi = std::min(traj.t_max_reached, prop.validity_window());
    const double t_lo = t_hi / 10.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        if (t < t_lo || t > t_hi) continue;
        const double sup = norm_linf(traj.fields[j]);
        if (sup <= 0) continue;
        const double x = std::log(t), y = std::log(sup);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        rep.metrics["decay_exponent"] = slope;
        rep.metrics["decay_fit_nodes"] = count;
        rep.metrics["decay_fit_window"] = {t_lo, t_hi};
    } else {
        rep.notes.push_back("too few nodes inside the decay-fit window");
    }
    return rep;
}

Report verify_uniqueness_gap(const IterationState& state, const ConditionVerdict& uniqueness,
                             double phi_l1, double tol) {
    Report rep;
    rep.experiment = "uniqueness_gap";
    rep.metrics["sup_gap"] = state.sup_gap;
    rep.metrics["blended_gap"] = state.blended_gap;
    rep.metrics["iterations"] = state.iteration_count;
    rep.metrics["condition_verdict"] = to_string(uniqueness.verdict);
    if (uniqueness.verdict == Verdict::Convergent) {
        rep.assertions.push_back("iteration limits coincide within tol (1 + ||phi||_1)");
        rep.assert_leq("limit gap", state.upper.t_max_reached, 0.0, state.sup_gap,
                       tol * (1.0 + phi_l1));
    } else {
        rep.notes.push_back("uniqueness-grade condition not convergent; gap recorded only");
    }
    return rep;
}

}  // namespace heatlab
