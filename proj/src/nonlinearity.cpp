#include "heatlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "heatlab/expression.hpp"

namespace heatlab {

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[i] = std::exp(llo + (lhi - llo) * i / static_cast<double>(count - 1));
    return g;
}

void check_basic(const Nonlinearity& nl) {
    const double f0 = nl.f(0.0);
    if (!(std::fabs(f0) <= 1e-12))
        throw std::invalid_argument("nonlinearity: f(0) = " + std::to_string(f0) + " != 0");
    for (double t : log_grid(1e-6, 1e3, 28)) {
        if (!std::isfinite(nl.f(t)) || !std::isfinite(nl.f(-t)))
            throw std::invalid_argument("nonlinearity: non-finite value near u = " +
                                        std::to_string(t));
    }
}

/// Monotone cubic Hermite segment on [a,b] with Fritsch-Carlson clamped
/// end slopes.
struct MonotoneCubic {
    double a, b, ya, yb, da, db;

    static MonotoneCubic fit(double a, double b, double ya, double yb, double da, double db) {
        const double m = (yb - ya) / (b - a);
        auto clamp_slope = [m](double d) {
            if (m == 0.0) return 0.0;
            if (d * m < 0) return 0.0;
            return (std::fabs(d) > 3.0 * std::fabs(m)) ? 3.0 * m : d;
        };
        return {a, b, ya, yb, clamp_slope(da), clamp_slope(db)};
    }

    double operator()(double x) const {
        const double h = b - a, t = (x - a) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * ya + (t3 - 2 * t2 + t) * h * da +
               (-2 * t3 + 3 * t2) * yb + (t3 - t2) * h * db;
    }
};

Nonlinearity make_power(double p) {
    if (p < 1.0) throw std::invalid_argument("power(p): need p >= 1 for local Lipschitz at 0");
    Nonlinearity nl;
    nl.name = "power(" + std::to_string(p) + ")";
    nl.f = [p](double u) { return u == 0.0 ? 0.0 : std::pow(std::fabs(u), p - 1.0) * u; };
    nl.claims_monotone = true;
    nl.claims_odd = true;
    nl.claims_convex_on_positives = true;
    auto ell = [p](double s) { return s <= 0 ? 0.0 : std::pow(s, p - 1.0); };
    auto big = [p](double s) { return s <= 0 ? 0.0 : p * std::pow(s, p - 1.0); };
    nl.closed_form = ClosedFormEnvelopes{ell, big, ell, big};
    return nl;
}

Nonlinearity make_linear(double c) {
    if (c < 0) throw std::invalid_argument("linear(c): need c >= 0");
    Nonlinearity nl;
    nl.name = "linear(" + std::to_string(c) + ")";
    nl.f = [c](double u) { return c * u; };
    nl.claims_monotone = true;
    nl.claims_odd = true;
    nl.claims_convex_on_positives = true;
    auto env = [c](double s) { return s <= 0 ? 0.0 : c; };
    nl.closed_form = ClosedFormEnvelopes{env, env, env, env};
    return nl;
}

Nonlinearity make_minpower(double p, double q) {
    if (!(1.0 <= p && p < q))
        throw std::invalid_argument("minpower(p,q): need 1 <= p < q");
    Nonlinearity nl;
    nl.name = "minpower(" + std::to_string(p) + "," + std::to_string(q) + ")";
    nl.f = [p, q](double u) {
        if (u == 0.0) return 0.0;
        const double a = std::fabs(u);
        const double v = std::min(std::pow(a, p), std::pow(a, q));
        return u > 0 ? v : -v;
    };
    nl.claims_monotone = true;
    nl.claims_odd = true;
    nl.claims_convex_on_positives = false;  // concave corner at u = 1
    auto ell = [p, q](double s) {
        if (s <= 0) return 0.0;
        return s <= 1.0 ? std::pow(s, q - 1.0) : std::pow(s, p - 1.0);
    };
    auto big = [p, q](double s) {
        if (s <= 0) return 0.0;
        return s <= 1.0 ? q * std::pow(s, q - 1.0) : std::max(q, p * std::pow(s, p - 1.0));
    };
    nl.closed_form = ClosedFormEnvelopes{ell, big, ell, big};
    return nl;
}

Nonlinearity make_logcorrected(double gamma, double beta, double a, double b, int dim) {
    if (!(gamma > 0 && beta > 0)) throw std::invalid_argument("logcorrected: need gamma, beta > 0");
    if (!(0 < a && a < 1 && a < b)) throw std::invalid_argument("logcorrected: need 0 < a < 1, a < b");
    const double pf = 1.0 + 2.0 / dim;

    const double ga = std::pow(std::log(1.0 / a), -gamma);
    const double gb = std::pow(std::log(std::exp(1.0) + b), -beta);
    const double da = gamma * std::pow(std::log(1.0 / a), -gamma - 1.0) / a;
    const double db = -beta * std::pow(std::log(std::exp(1.0) + b), -beta - 1.0) /
                      (std::exp(1.0) + b);
    const MonotoneCubic mid = MonotoneCubic::fit(a, b, ga, gb, da, db);

    Nonlinearity nl;
    std::ostringstream name;
    name << "logcorrected(" << gamma << "," << beta << "," << a << "," << b << ")";
    nl.name = name.str();
    nl.f = [gamma, beta, a, b, pf, mid](double u) {
        if (u <= 0.0) return 0.0;
        double g;
        if (u < a)
            g = std::pow(std::log(1.0 / u), -gamma);
        else if (u <= b)
            g = mid(u);
        else
            g = std::pow(std::log(std::exp(1.0) + u), -beta);
        return std::pow(u, pf) * g;
    };
    nl.claims_monotone = true;
    nl.positive_only = true;
    return nl;
}

std::vector<double> parse_args(const std::string& text, std::size_t open) {
    const std::size_t close = text.rfind(')');
    if (close == std::string::npos || close < open)
        throw std::invalid_argument("builtin: missing ')' in '" + text + "'");
    std::vector<double> args;
    std::string body = text.substr(open + 1, close - open - 1);
    std::stringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) continue;
        args.push_back(std::stod(piece));
    }
    return args;
}

}  // namespace

Nonlinearity parse_nonlinearity(const std::string& text) {
    Nonlinearity nl;
    nl.f = parse_expression(text);
    nl.name = text;
    check_basic(nl);
    return nl;
}

Nonlinearity make_builtin(const std::string& text, int dim) {
    const std::size_t open = text.find('(');
    if (open == std::string::npos)
        throw std::invalid_argument("builtin: expected name(args), got '" + text + "'");
    const std::string name = text.substr(0, open);
    const std::vector<double> args = parse_args(text, open);

    Nonlinearity nl;
    if (name == "power" && args.size() == 1)
        nl = make_power(args[0]);
    else if (name == "linear" && args.size() == 1)
        nl = make_linear(args[0]);
    else if (name == "minpower" && args.size() == 2)
        nl = make_minpower(args[0], args[1]);
    else if (name == "logcorrected" && (args.size() == 2 || args.size() == 4))
        nl = make_logcorrected(args[0], args[1], args.size() == 4 ? args[2] : 0.01,
                               args.size() == 4 ? args[3] : 10.0, dim);
    else if (name == "zero" && args.empty()) {
        nl.name = "zero()";
        nl.f = [](double) { return 0.0; };
        nl.claims_monotone = true;
        nl.claims_odd = true;
        nl.claims_convex_on_positives = true;
        auto z = [](double) { return 0.0; };
        nl.closed_form = ClosedFormEnvelopes{z, z, z, z};
    } else {
        throw std::invalid_argument("builtin: unknown '" + text + "'");
    }
    check_basic(nl);
    return nl;
}

Nonlinearity make_nonlinearity(const std::string& text, int dim) {
    if (text == "zero") return make_builtin("zero()", dim);
    const std::size_t open = text.find('(');
    if (open != std::string::npos) {
        const std::string head = text.substr(0, open);
        if (head == "power" || head == "linear" || head == "minpower" ||
            head == "logcorrected" || head == "zero")
            return make_builtin(text, dim);
    }
    return parse_nonlinearity(text);
}

HypothesisVerdict check_hypothesis_m(const Nonlinearity& nl, int probe_count, double range) {
    if (probe_count < 2) throw std::invalid_argument("check_hypothesis_m: probe_count >= 2");
    if (!(range > 0)) throw std::invalid_argument("check_hypothesis_m: range > 0");

    std::vector<double> probes;
    for (double t : log_grid(range * 1e-9, range, probe_count)) {
        probes.push_back(-t);
        probes.push_back(t);
    }
    probes.push_back(0.0);
    std::sort(probes.begin(), probes.end());

    HypothesisVerdict v;
    double scale = 1.0;
    for (double t : probes) scale = std::max(scale, std::fabs(nl.f(t)));

    for (std::size_t i = 1; i < probes.size(); ++i) {
        const double a = probes[i - 1], b = probes[i];
        if (nl.f(a) > nl.f(b) + 1e-12 * scale) {
            std::ostringstream os;
            os << "monotonicity violated: f(" << a << ") = " << nl.f(a) << " > f(" << b
               << ") = " << nl.f(b);
            return {false, os.str()};
        }
    }

    // local Lipschitz probe: difference quotients must not diverge under refinement
    for (double t : log_grid(range * 1e-6, range, probe_count)) {
        const double q_coarse = (nl.f(t * (1 + 1e-4)) - nl.f(t * (1 - 1e-4))) / (2e-4 * t);
        const double q_fine = (nl.f(t * (1 + 1e-7)) - nl.f(t * (1 - 1e-7))) / (2e-7 * t);
        if (!std::isfinite(q_fine) || std::fabs(q_fine) > 1e3 * (std::fabs(q_coarse) + 1.0)) {
            std::ostringstream os;
            os << "difference quotient diverges near u = " << t;
            return {false, os.str()};
        }
    }
    return v;
}

StructureFlags check_structure(const Nonlinearity& nl, double range) {
    if (!(range > 0)) throw std::invalid_argument("check_structure: range > 0");
    StructureFlags flags;
    flags.odd = true;
    flags.convex_on_positives = true;

    const auto probes = log_grid(std::min(1e-6, range * 1e-6), range, 160);
    for (double t : probes) {
        const double r = nl.f(-t) + nl.f(t);
        if (std::fabs(r) > 1e-9 * (std::fabs(nl.f(t)) + 1e-12) + 1e-14) {
            flags.odd = false;
            std::ostringstream os;
            os << "f(-u)+f(u) = " << r << " at u = " << t;
            flags.odd_witness = os.str();
            break;
        }
    }

    auto midpoint_ok = [&](double a, double b) {
        const double lhs = nl.f(0.5 * (a + b));
        const double rhs = 0.5 * (nl.f(a) + nl.f(b));
        return lhs <= rhs + 1e-9 * (std::fabs(nl.f(a)) + std::fabs(nl.f(b)) + 1.0);
    };
    for (std::size_t i = 0; i < probes.size() && flags.convex_on_positives; ++i) {
        const double t = probes[i];
        // tight pair straddling t catches concave kinks; wide pairs catch
        // global convexity failures
        const std::pair<double, double> pairs[] = {
            {t / 1.3, t * 1.3},
            {t / 4.0, t * 4.0},
            {probes.front(), t},
            {t, probes.back()}};
        for (auto [a, b] : pairs) {
            if (a >= b) continue;
            if (!midpoint_ok(a, b)) {
                flags.convex_on_positives = false;
                std::ostringstream os;
                os << "midpoint convexity fails on (" << a << ", " << b << ")";
                flags.convexity_witness = os.str();
                break;
            }
        }
    }
    return flags;
}

}  // namespace heatlab
