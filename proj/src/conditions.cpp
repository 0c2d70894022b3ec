#include "heatlab/conditions.hpp"

#include <cmath>
#include <stdexcept>

namespace heatlab {

namespace {

constexpr int kMaxDoublings = 40;
constexpr int kSimpsonPoints = 129;  // per dyadic band, log abscissa
constexpr double kDivergenceGuard = 1e15;

/// Simpson on x = ln s over [a, b] of g(s) ds = g(e^x) e^x dx.
double band_integral(const ScalarFn& g, double a, double b) {
    const double xa = std::log(a), xb = std::log(b);
    const double h = (xb - xa) / (kSimpsonPoints - 1);
    double acc = 0.0;
    for (int i = 0; i < kSimpsonPoints; ++i) {
        const double x = xa + i * h;
        const double s = std::exp(x);
        const double w = (i == 0 || i == kSimpsonPoints - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * g(s) * s;
    }
    return acc * h / 3.0;
}

const ScalarFn& pick_envelope(ConditionKind kind, const EnvelopeFunctions& env) {
    switch (kind) {
        case ConditionKind::I1:
        case ConditionKind::I3: return env.ell;
        case ConditionKind::I2: return env.big_l;
        case ConditionKind::I1Plus:
        case ConditionKind::I3Plus: return env.ell_plus;
        case ConditionKind::I2Plus: return env.big_l_plus;
    }
    throw std::logic_error("pick_envelope: bad kind");
}

bool is_origin_condition(ConditionKind kind) {
    return kind == ConditionKind::I3 || kind == ConditionKind::I3Plus;
}

}  // namespace

std::string to_string(ConditionKind kind) {
    switch (kind) {
        case ConditionKind::I1: return "I1";
        case ConditionKind::I2: return "I2";
        case ConditionKind::I3: return "I3";
        case ConditionKind::I1Plus: return "I1+";
        case ConditionKind::I2Plus: return "I2+";
        case ConditionKind::I3Plus: return "I3+";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Convergent: return "convergent";
        case Verdict::Divergent: return "divergent";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

ConditionVerdict check_condition(ConditionKind kind, const EnvelopeFunctions& env, int dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("check_condition: dim must be 1..3");
    const double pf = 1.0 + 2.0 / dim;
    const ScalarFn& e = pick_envelope(kind, env);
    ScalarFn integrand = [&e, pf](double s) { return std::pow(s, -pf) * e(s); };
    const bool downward = is_origin_condition(kind);

    ConditionVerdict out;
    out.kind = kind;

    double total = 0.0;
    for (int k = 0; k < kMaxDoublings; ++k) {
        const double lo = downward ? std::ldexp(1.0, -(k + 1)) : std::ldexp(1.0, k);
        const double hi = downward ? std::ldexp(1.0, -k) : std::ldexp(1.0, k + 1);
        const double inc = band_integral(integrand, lo, hi);
        if (!std::isfinite(inc)) {
            out.verdict = Verdict::Divergent;
            out.rule = "band overflow";
            out.total = total;
            return out;
        }
        total += inc;
        out.increments.push_back(inc);
        out.partial_values.emplace_back(downward ? lo : hi, total);
        if (total > kDivergenceGuard) {
            out.verdict = Verdict::Divergent;
            out.rule = "partial sum exceeds guard";
            out.total = total;
            return out;
        }
    }
    out.total = total;

    {
        const double s_last = downward ? std::ldexp(1.0, -kMaxDoublings) : std::ldexp(1.0, kMaxDoublings);
        const double s_in = downward ? s_last * 2.0 : s_last / 2.0;
        const double g_last = integrand(s_last), g_in = integrand(s_in);
        if (g_last > 0 && g_in > 0)
            out.tail_exponent_estimate = std::log(g_last / g_in) / std::log(s_last / s_in);
    }

    if (total == 0.0) {
        out.verdict = Verdict::Convergent;
        out.rule = "identically zero";
        return out;
    }

    // Decision from the last bands' increments. Pure geometric shrink is
    // certified directly; ratios creeping toward 1 are resolved through the
    // polynomial decay exponent of the increments (sum_k k^-sigma converges
    // iff sigma > 1), which also covers logarithmically corrected tails.
    const auto& inc = out.increments;
    const int n = static_cast<int>(inc.size());
    auto ratio = [&](int k) { return inc[k] > 0 ? inc[k + 1] / inc[k] : 0.0; };

    bool nondecreasing = true, all_shrinking = true;
    for (int k = n - 4; k < n - 1; ++k) {
        const double r = ratio(k);
        if (r < 1.0 - 1e-9) nondecreasing = false;
        if (r >= 1.0 - 1e-9) all_shrinking = false;
    }
    if (nondecreasing) {
        out.verdict = Verdict::Divergent;
        out.rule = "increments non-decreasing over last three doublings";
        return out;
    }
    if (!all_shrinking) {
        out.verdict = Verdict::Inconclusive;
        out.rule = "mixed increment behaviour at cap";
        return out;
    }

    double rmax = 0.0;
    for (int k = n - 4; k < n - 1; ++k) rmax = std::max(rmax, ratio(k));
    if (rmax <= 0.75) {
        const double tail = inc.back() * rmax / (1.0 - rmax);
        if (tail < 1e-6 * total) {
            out.verdict = Verdict::Convergent;
            out.rule = "geometric shrink with negligible extrapolated tail";
            return out;
        }
    }

    // polynomial model: inc_k ~ C k^-sigma
    double sig_lo = 1e300, sig_hi = -1e300;
    for (int k = n - 4; k < n - 1; ++k) {
        if (inc[k] <= 0 || inc[k + 1] <= 0) {
            sig_lo = sig_hi = 0;
            break;
        }
        const double sig = std::log(inc[k] / inc[k + 1]) / std::log((k + 2.0) / (k + 1.0));
        sig_lo = std::min(sig_lo, sig);
        sig_hi = std::max(sig_hi, sig);
    }
    if (sig_lo > 1.1) {
        out.verdict = Verdict::Convergent;
        out.rule = "summable polynomial increment decay (sigma > 1)";
        return out;
    }
    if (sig_hi < 0.9) {
        out.verdict = Verdict::Divergent;
        out.rule = "non-summable polynomial increment decay (sigma < 1)";
        return out;
    }
    out.verdict = Verdict::Inconclusive;
    out.rule = "increment decay too close to the harmonic boundary";
    return out;
}

double partial_condition_integral(const ScalarFn& envelope, int dim, double cutoff) {
    if (!(cutoff > 0)) throw std::invalid_argument("partial_condition_integral: cutoff > 0");
    const double pf = 1.0 + 2.0 / dim;
    ScalarFn integrand = [&envelope, pf](double s) { return std::pow(s, -pf) * envelope(s); };
    const bool downward = cutoff < 1.0;
    double total = 0.0;
    double hi = downward ? 1.0 : cutoff;
    double lo = downward ? cutoff : 1.0;
    // split [lo, hi] into dyadic bands anchored at 1
    double a = lo;
    while (a < hi) {
        const double b = std::min(hi, a * 2.0);
        total += band_integral(integrand, a, b);
        a = b;
    }
    return total;
}

double substituted_condition_integral(const ScalarFn& envelope, int dim, double tau_lo,
                                      double tau_hi) {
    if (!(0 < tau_lo && tau_lo < tau_hi))
        throw std::invalid_argument("substituted_condition_integral: need 0 < lo < hi");
    const double half_n = 0.5 * dim;
    ScalarFn integrand = [&envelope, half_n](double tau) {
        return envelope(std::pow(tau, -half_n));
    };
    double total = 0.0;
    double a = tau_lo;
    while (a < tau_hi) {
        const double b = std::min(tau_hi, a * 2.0);
        total += band_integral(integrand, a, b);
        a = b;
    }
    return total;
}

}  // namespace heatlab
