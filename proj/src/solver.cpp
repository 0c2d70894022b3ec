#include "heatlab/solver.hpp"

#include <algorithm>
#include <cmath>

#include "heatlab/conditions.hpp"

namespace heatlab {

namespace {

constexpr double kValueOverflow = 1e200;

/// f applied pointwise; non-finite or astronomically large values signal
/// incipient blow-up.
GridField apply_nonlinearity(const Nonlinearity& nl, const GridField& u, double t) {
    GridField out(u.spec);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = nl.f(u.values[i]);
        if (!std::isfinite(v) || std::fabs(v) > kValueOverflow) throw BlowUpSignal(t);
        out.values[i] = v;
    }
    return out;
}

double blended_norm(const GridField& f, double t) {
    return norm_l1(f) + std::pow(t, 0.5 * f.spec.dim) * norm_linf(f);
}

/// 33-point composite Simpson on a log abscissa.
double log_simpson(const std::function<double(double)>& g, double a, double b) {
    constexpr int kPts = 33;
    const double xa = std::log(a), xb = std::log(b);
    const double h = (xb - xa) / (kPts - 1);
    double acc = 0.0;
    for (int i = 0; i < kPts; ++i) {
        const double s = std::exp(xa + i * h);
        const double w = (i == 0 || i == kPts - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * g(s) * s;
    }
    return acc * h / 3.0;
}

}  // namespace

SolutionTrajectory duhamel(const HeatPropagator& prop, const Nonlinearity& nl,
                           const GridField& phi, const SolutionTrajectory& u) {
    if (u.times.empty() || u.times.front() != 0.0)
        throw std::invalid_argument("duhamel: trajectory must start at t = 0");
    SolutionTrajectory out;
    out.times = u.times;
    out.fields.reserve(u.times.size());
    out.fields.push_back(phi);
    out.status = u.status;
    out.t_max_reached = u.t_max_reached;

    GridField running = phi;
    GridField g_prev = apply_nonlinearity(nl, u.fields[0], 0.0);
    for (std::size_t j = 1; j < u.times.size(); ++j) {
        const double dt = u.times[j] - u.times[j - 1];
        GridField g_cur = apply_nonlinearity(nl, u.fields[j], u.times[j]);
        running = prop.apply(running + (0.5 * dt) * g_prev, dt) + (0.5 * dt) * g_cur;
        out.fields.push_back(running);
        g_prev = std::move(g_cur);
    }
    return out;
}

double horizon_gate(const EnvelopeFunctions& env, double mass_bound, int dim, double t,
                    bool positive_cone) {
    if (!(t > 0)) return 0.0;
    const ScalarFn& ell = positive_cone ? env.ell_plus : env.ell;
    const double two_k = 2.0 * mass_bound;
    auto integrand = [&](double s) { return ell(two_k * std::pow(s, -0.5 * dim)); };
    double total = 0.0;
    double hi = t;
    for (int k = 0; k < 200; ++k) {
        const double lo = hi * 0.5;
        const double inc = log_simpson(integrand, lo, hi);
        total += inc;
        hi = lo;
        if (k > 20 && inc < 1e-14 * std::max(total, 1e-300)) break;
    }
    return total;
}

HorizonEstimate horizon(const EnvelopeFunctions& env, double mass_bound, int dim,
                        bool positive_cone) {
    if (!(mass_bound > 0)) throw std::invalid_argument("horizon: mass bound must be positive");
    const auto tail = check_condition(positive_cone ? ConditionKind::I1Plus : ConditionKind::I1,
                                      env, dim);
    if (tail.verdict == Verdict::Divergent)
        throw std::invalid_argument("horizon: tail integral condition divergent, no horizon");

    HorizonEstimate out;
    out.mass_bound = mass_bound;
    auto g = [&](double t) { return horizon_gate(env, mass_bound, dim, t, positive_cone); };

    double lo = 1.0;
    if (g(lo) <= 0.5) {
        double hi = lo;
        while (g(hi * 2.0) <= 0.5) {
            hi *= 2.0;
            if (hi > 1e18) {
                out.unbounded = true;
                out.t_b = hi;
                out.g_values.emplace_back(hi, g(hi));
                return out;
            }
        }
        lo = hi;
    } else {
        while (g(lo) > 0.5) {
            lo *= 0.5;
            if (lo < 1e-300) throw std::runtime_error("horizon: gate never drops below 1/2");
        }
    }
    double hi = lo * 2.0;
    // invariant: g(lo) <= 1/2 < g(hi)
    while (hi - lo > 1e-6 * lo) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) <= 0.5 ? lo : hi) = mid;
    }
    out.t_b = lo;
    for (int i = 0; i <= 32; ++i) {
        const double t = out.t_b * std::pow(1e-6, 1.0 - i / 32.0);
        out.g_values.emplace_back(t, g(t));
    }
    return out;
}

IterationState monotone_solve(const HeatPropagator& prop, const Nonlinearity& nl,
                              const GridField& phi, const TimeGrid& grid, double tol,
                              int max_iter) {
    if (max_iter < 1) throw std::invalid_argument("monotone_solve: max_iter >= 1");
    if (nl.positive_only) {
        for (double v : phi.values)
            if (v < -1e-12)
                throw std::invalid_argument(
                    "monotone_solve: cone-only source term with sign-changing data");
    }

    const GridField phi_pos = positive_part(phi);
    const GridField phi_neg = negative_part(phi);
    const double phi_l1 = norm_l1(phi);
    const double gap_target = tol * (1.0 + phi_l1);

    SolutionTrajectory upper, lower;
    upper.times = grid.nodes;
    lower.times = grid.nodes;
    for (double t : grid.nodes) {
        upper.fields.push_back(2.0 * prop.apply(phi_pos, t));
        lower.fields.push_back(2.0 * prop.apply(phi_neg, t));
    }

    IterationState state;
    state.super_envelope = upper.fields;
    state.sub_envelope = lower.fields;

    double scale = 1.0;
    for (const auto& f : upper.fields) scale = std::max(scale, norm_linf(f));
    for (const auto& f : lower.fields) scale = std::max(scale, norm_linf(f));
    // spectral ringing of the propagator on kinked sign parts sits near
    // 1e-7 absolute; genuine ordering breakdowns are orders larger
    const double slack = 1e-6 * scale;

    auto gap_of = [&](const SolutionTrajectory& w, const SolutionTrajectory& v) {
        double sup = 0.0, blended = 0.0;
        for (std::size_t j = 0; j < w.times.size(); ++j) {
            const GridField d = w.fields[j] - v.fields[j];
            sup = std::max(sup, norm_linf(d));
            blended = std::max(blended, blended_norm(d, w.times[j]));
        }
        return std::make_pair(sup, blended);
    };

    for (int k = 0; k < max_iter; ++k) {
        SolutionTrajectory next_upper = duhamel(prop, nl, phi, upper);
        SolutionTrajectory next_lower = duhamel(prop, nl, phi, lower);

        for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
            if (!pointwise_leq(next_upper.fields[j], upper.fields[j], slack))
                throw OrderingError("monotone_solve: upper iterate increased at t = " +
                                    std::to_string(grid.nodes[j]));
            if (!pointwise_leq(lower.fields[j], next_lower.fields[j], slack))
                throw OrderingError("monotone_solve: lower iterate decreased at t = " +
                                    std::to_string(grid.nodes[j]));
            if (!pointwise_leq(next_lower.fields[j], next_upper.fields[j], slack))
                throw OrderingError("monotone_solve: iterate ordering crossed at t = " +
                                    std::to_string(grid.nodes[j]));
        }
        upper = std::move(next_upper);
        lower = std::move(next_lower);
        ++state.iteration_count;

        auto [sup, blended] = gap_of(upper, lower);
        state.sup_gap = sup;
        state.blended_gap = blended;
        state.gap_history.push_back(blended);
        if (blended <= gap_target) {
            state.converged = true;
            break;
        }
    }

    upper.status = state.converged ? SolveStatus::Converged : SolveStatus::MaxIterations;
    lower.status = upper.status;
    upper.t_max_reached = grid.t_end;
    lower.t_max_reached = grid.t_end;
    state.upper = std::move(upper);
    state.lower = std::move(lower);
    return state;
}

namespace {

/// Adaptive scalar integration of u' = f(u) over [0, h] by RK4 with step
/// doubling. Returns false when the solution escapes (blow-up in-step).
bool ode_integrate(const ScalarFn& f, double& u, double h, double escape) {
    auto rk4 = [&f](double y, double dt) {
        const double k1 = f(y);
        const double k2 = f(y + 0.5 * dt * k1);
        const double k3 = f(y + 0.5 * dt * k2);
        const double k4 = f(y + dt * k3);
        return y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    };
    double remaining = h;
    double step = h;
    int guard = 0;
    while (remaining > 0) {
        if (++guard > 100000) return false;
        step = std::min(step, remaining);
        const double full = rk4(u, step);
        const double half = rk4(rk4(u, 0.5 * step), 0.5 * step);
        if (!std::isfinite(half) || std::fabs(half) > escape) {
            if (step < 1e-14 * h) return false;
            step *= 0.5;
            continue;
        }
        const double err = std::fabs(full - half);
        if (err <= 1e-12 * (1.0 + std::fabs(half)) || step < 1e-14 * h) {
            u = half + (half - full) / 15.0;
            remaining -= step;
            step *= 2.0;
        } else {
            step *= 0.5;
        }
    }
    return std::isfinite(u) && std::fabs(u) <= escape;
}

}  // namespace

SolutionTrajectory reference_integrate(const HeatPropagator& prop, const Nonlinearity& nl,
                                       const GridField& phi, const TimeGrid& grid, int substeps,
                                       const BlowUpLimits& limits) {
    if (substeps < 1) throw std::invalid_argument("reference_integrate: substeps >= 1");
    SolutionTrajectory out;
    out.times = {0.0};
    out.fields = {phi};
    const double l1_0 = norm_l1(phi);

    GridField cur = phi;
    for (std::size_t j = 1; j < grid.nodes.size(); ++j) {
        const double h = (grid.nodes[j] - grid.nodes[j - 1]) / substeps;
        bool escaped = false;
        for (int s = 0; s < substeps && !escaped; ++s) {
            for (double& v : cur.values)
                if (!ode_integrate(nl.f, v, 0.5 * h, limits.ode_escape)) escaped = true;
            if (escaped) break;
            cur = prop.apply(cur, h);
            for (double& v : cur.values)
                if (!ode_integrate(nl.f, v, 0.5 * h, limits.ode_escape)) escaped = true;
        }
        if (escaped || norm_linf(cur) > limits.linf ||
            norm_l1(cur) > limits.l1_factor * (1.0 + l1_0)) {
            out.status = SolveStatus::BlowUpDetected;
            out.detect_time = grid.nodes[j];
            out.t_max_reached = grid.nodes[j - 1];
            return out;
        }
        out.times.push_back(grid.nodes[j]);
        out.fields.push_back(cur);
    }
    out.status = SolveStatus::HorizonReached;
    out.t_max_reached = grid.t_end;
    return out;
}

SolutionTrajectory continue_maximally(const HeatPropagator& prop, const Nonlinearity& nl,
                                      const GridField& phi, double t_limit, double tol,
                                      const ContinuationOptions& opts) {
    if (!(t_limit > 0)) throw std::invalid_argument("continue_maximally: t_limit > 0");
    const auto env = compute_envelopes(nl, 2.2e12);
    const auto uniq = check_condition(nl.positive_only ? ConditionKind::I2Plus : ConditionKind::I2,
                                      env, prop.spec().dim);
    if (uniq.verdict != Verdict::Convergent)
        throw std::invalid_argument(
            "continue_maximally: uniqueness-grade integral condition is not convergent");

    SolutionTrajectory out;
    out.times = {0.0};
    out.fields = {phi};
    const double l1_0 = norm_l1(phi);
    if (l1_0 == 0.0) {
        // f(0) = 0: the zero datum stays zero
        const TimeGrid grid = TimeGrid::graded(t_limit, opts.nodes_per_segment);
        for (std::size_t j = 1; j < grid.nodes.size(); ++j) {
            out.times.push_back(grid.nodes[j]);
            out.fields.push_back(GridField(phi.spec));
        }
        out.status = SolveStatus::HorizonReached;
        out.t_max_reached = t_limit;
        return out;
    }

    GridField cur = phi;
    double t_cur = 0.0;
    const bool cone = nl.positive_only;
    for (int segment = 0; segment < opts.max_segments; ++segment) {
        const double mass_bound = 2.0 * norm_l1(cur);
        const auto hor = horizon(env, mass_bound, prop.spec().dim, cone);
        if (!hor.unbounded && hor.t_b < opts.min_horizon_fraction * t_limit) {
            out.status = SolveStatus::BlowUpDetected;
            out.detect_time = t_cur;
            out.t_max_reached = t_cur;
            return out;
        }
        const double seg_len = std::min(hor.unbounded ? t_limit - t_cur : hor.t_b,
                                        t_limit - t_cur);
        const TimeGrid grid = TimeGrid::graded(seg_len, opts.nodes_per_segment);
        IterationState st;
        try {
            st = monotone_solve(prop, nl, cur, grid, tol, opts.max_iter);
        } catch (const BlowUpSignal& b) {
            out.status = SolveStatus::BlowUpDetected;
            out.detect_time = t_cur + b.time;
            out.t_max_reached = t_cur;
            return out;
        }
        for (std::size_t j = 1; j < grid.nodes.size(); ++j) {
            out.times.push_back(t_cur + grid.nodes[j]);
            out.fields.push_back(st.upper.fields[j]);
        }
        cur = out.fields.back();
        t_cur += seg_len;
        if (norm_linf(cur) > opts.limits.linf ||
            norm_l1(cur) > opts.limits.l1_factor * (1.0 + l1_0)) {
            out.status = SolveStatus::BlowUpDetected;
            out.detect_time = t_cur;
            out.t_max_reached = t_cur;
            return out;
        }
        if (t_cur >= t_limit * (1.0 - 1e-12)) {
            out.status = SolveStatus::HorizonReached;
            out.t_max_reached = t_cur;
            return out;
        }
    }
    out.status = SolveStatus::MaxIterations;
    out.t_max_reached = t_cur;
    return out;
}

}  // namespace heatlab
