#include "heatlab/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace heatlab {

namespace {

constexpr double kProbeFloor = 1e-12;

/// Monotone table (ts increasing, vals non-decreasing) with log-log
/// interpolation and power-law extrapolation at both ends.
struct EnvelopeTable {
    std::vector<double> ts;
    std::vector<double> vals;

    double local_exponent(std::size_t i, std::size_t j) const {
        if (vals[i] <= 0 || vals[j] <= 0) return 0.0;
        return std::log(vals[j] / vals[i]) / std::log(ts[j] / ts[i]);
    }

    double eval(double s) const {
        if (!(s > 0)) return 0.0;
        if (ts.empty()) return 0.0;
        if (s <= ts.front()) {
            if (vals.front() <= 0) return 0.0;
            // find the first pair of distinct samples for the end exponent
            std::size_t j = 1;
            while (j < ts.size() && vals[j] == vals.front()) ++j;
            const double e = (j < ts.size()) ? local_exponent(0, j) : 0.0;
            return vals.front() * std::pow(s / ts.front(), std::max(e, 0.0));
        }
        if (s >= ts.back()) {
            if (vals.back() <= 0) return 0.0;
            std::size_t i = ts.size() - 2;
            while (i > 0 && vals[i] == vals.back()) --i;
            const double e = local_exponent(i, ts.size() - 1);
            return vals.back() * std::pow(s / ts.back(), std::max(e, 0.0));
        }
        const auto it = std::upper_bound(ts.begin(), ts.end(), s);
        const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
        const std::size_t lo = hi - 1;
        if (vals[lo] <= 0.0 || vals[hi] <= 0.0) {
            const double w = (s - ts[lo]) / (ts[hi] - ts[lo]);
            return vals[lo] + w * (vals[hi] - vals[lo]);
        }
        const double w = std::log(s / ts[lo]) / std::log(ts[hi] / ts[lo]);
        return std::exp((1.0 - w) * std::log(vals[lo]) + w * std::log(vals[hi]));
    }
};

ScalarFn as_fn(EnvelopeTable table) {
    auto shared = std::make_shared<EnvelopeTable>(std::move(table));
    return [shared](double s) { return shared->eval(s); };
}

double checked(double v, double t, const char* what) {
    if (!std::isfinite(v))
        throw std::runtime_error(std::string("envelope: ") + what + " overflow at t = " +
                                 std::to_string(t));
    return v;
}

double slope_ratio(const ScalarFn& f, double t) {
    return checked(f(t), t, "f") / t;
}

double diff_quotient(const ScalarFn& f, double t) {
    const double delta = std::max(1e-8, 1e-8 * std::fabs(t));
    return (checked(f(t + delta), t, "f") - checked(f(t - delta), t, "f")) / (2.0 * delta);
}

std::vector<double> probe_grid(double s_max, int spd) {
    const double lo = kProbeFloor;
    const int decades_steps =
        std::max(2, static_cast<int>(std::ceil(spd * std::log10(s_max / lo))));
    std::vector<double> g(decades_steps + 1);
    for (int i = 0; i <= decades_steps; ++i)
        g[i] = lo * std::pow(s_max / lo, i / static_cast<double>(decades_steps));
    g.back() = s_max;
    return g;
}

/// Inserts extra probes (x10 density) where raw values jump by more than 2%
/// between neighbours, or where the local log-log slope changes by more than
/// 0.25 across an interval. The slope criterion localizes kinks of the raw
/// quotient, where interpolation error decays only linearly in the spacing,
/// so it is iterated over a few passes.
void refine_kinks(std::vector<double>& ts, std::vector<double>& raw,
                  const std::function<double(double)>& probe) {
    for (int pass = 0; pass < 3; ++pass) {
        const std::size_t n = ts.size();
        std::vector<double> slope(n > 1 ? n - 1 : 0, 0.0);
        std::vector<bool> has_slope(slope.size(), false);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (raw[i] > 0 && raw[i + 1] > 0) {
                slope[i] = std::log(raw[i + 1] / raw[i]) / std::log(ts[i + 1] / ts[i]);
                has_slope[i] = true;
            }
        }
        std::vector<double> extra_t;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = raw[i], b = raw[i + 1];
            const double top = std::max(std::fabs(a), std::fabs(b));
            bool mark = pass == 0 && top > 0 && std::fabs(b - a) > 0.02 * top;
            if (!mark && has_slope[i]) {
                if (i > 0 && has_slope[i - 1] && std::fabs(slope[i] - slope[i - 1]) > 0.25)
                    mark = true;
                if (i + 1 < slope.size() && has_slope[i + 1] &&
                    std::fabs(slope[i + 1] - slope[i]) > 0.25)
                    mark = true;
            }
            if (mark)
                for (int k = 1; k < 10; ++k)
                    extra_t.push_back(ts[i] * std::pow(ts[i + 1] / ts[i], k / 10.0));
        }
        if (extra_t.empty() || ts.size() + extra_t.size() > 200000) break;
        for (double t : extra_t) {
            ts.push_back(t);
            raw.push_back(probe(t));
        }
        std::vector<std::size_t> order(ts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
        std::vector<double> ts2(ts.size()), raw2(ts.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            ts2[i] = ts[order[i]];
            raw2[i] = raw[order[i]];
        }
        ts.swap(ts2);
        raw.swap(raw2);
    }
}

EnvelopeTable cumulative_max(std::vector<double> ts, std::vector<double> raw) {
    double run = 0.0;
    for (auto& v : raw) {
        run = std::max(run, v);
        v = run;
    }
    return {std::move(ts), std::move(raw)};
}

}  // namespace

EnvelopeFunctions compute_envelopes_numeric(const Nonlinearity& nl, double s_max,
                                            int samples_per_decade) {
    if (!(s_max > 0)) throw std::invalid_argument("compute_envelopes: s_max > 0");
    const ScalarFn& f = nl.f;

    auto build = [&](const std::function<double(double)>& probe) {
        std::vector<double> ts = probe_grid(s_max, samples_per_decade);
        std::vector<double> raw(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) raw[i] = probe(ts[i]);
        refine_kinks(ts, raw, probe);
        return cumulative_max(std::move(ts), std::move(raw));
    };

    auto ratio_plus = [&f](double t) { return slope_ratio(f, t); };
    auto ratio_both = [&f](double t) {
        return std::max(slope_ratio(f, t), checked(f(-t), t, "f") / (-t));
    };
    auto quot_plus = [&f](double t) { return diff_quotient(f, t); };
    auto quot_both = [&f, &quot_plus](double t) {
        const double delta = std::max(1e-8, 1e-8 * t);
        const double neg = (checked(f(-t + delta), t, "f") - checked(f(-t - delta), t, "f")) /
                           (2.0 * delta);
        return std::max(quot_plus(t), neg);
    };

    EnvelopeFunctions env;
    env.ell_plus = as_fn(build(ratio_plus));
    env.ell = as_fn(build(ratio_both));
    env.big_l_plus = as_fn(build(quot_plus));
    env.big_l = as_fn(build(quot_both));
    env.provenance = "numeric";
    return env;
}

EnvelopeFunctions compute_envelopes(const Nonlinearity& nl, double s_max, int samples_per_decade) {
    if (nl.closed_form) {
        EnvelopeFunctions env;
        env.ell = nl.closed_form->ell;
        env.big_l = nl.closed_form->big_l;
        env.ell_plus = nl.closed_form->ell_plus;
        env.big_l_plus = nl.closed_form->big_l_plus;
        env.provenance = "closed-form";
        return env;
    }
    return compute_envelopes_numeric(nl, s_max, samples_per_decade);
}

}  // namespace heatlab
