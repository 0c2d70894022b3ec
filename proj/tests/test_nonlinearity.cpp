#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/envelopes.hpp"
#include "heatlab/nonlinearity.hpp"

using namespace heatlab;

namespace {

std::vector<double> log_probes(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo * std::pow(hi / lo, i / static_cast<double>(count - 1));
    return g;
}

}  // namespace

TEST_CASE("builtin registry") {
    const Nonlinearity p = make_builtin("power(1.5)", 1);
    CHECK(p.f(4.0) == doctest::Approx(8.0));
    CHECK(p.f(-4.0) == doctest::Approx(-8.0));
    CHECK(p.f(0.0) == 0.0);
    CHECK(p.claims_odd);
    CHECK(p.claims_convex_on_positives);
    REQUIRE(p.closed_form.has_value());

    const Nonlinearity lin = make_builtin("linear(2.5)", 1);
    CHECK(lin.f(3.0) == doctest::Approx(7.5));

    const Nonlinearity mp = make_builtin("minpower(2,4)", 1);
    CHECK(mp.f(0.5) == doctest::Approx(0.0625));
    CHECK(mp.f(-0.5) == doctest::Approx(-0.0625));
    CHECK(mp.f(2.0) == doctest::Approx(4.0));
    CHECK_FALSE(mp.claims_convex_on_positives);

    const Nonlinearity z = make_builtin("zero()", 1);
    CHECK(z.f(7.0) == 0.0);

    CHECK_THROWS_AS(make_builtin("cubic(3)", 1), std::invalid_argument);
    CHECK_THROWS_AS(make_builtin("power(0.5)", 1), std::invalid_argument);
    CHECK_THROWS_AS(make_builtin("minpower(4,2)", 1), std::invalid_argument);
}

TEST_CASE("expression-backed nonlinearities enforce f(0) = 0") {
    const Nonlinearity nl = parse_nonlinearity("pow(abs(u),1.5)*sign(u)");
    CHECK(nl.f(9.0) == doctest::Approx(27.0));
    CHECK_THROWS_AS(parse_nonlinearity("u+1"), std::invalid_argument);
    // dispatcher accepts both builtins and raw expressions
    CHECK(make_nonlinearity("power(2)", 1).f(3.0) == doctest::Approx(9.0));
    CHECK(make_nonlinearity("u*u*u", 1).f(2.0) == doctest::Approx(8.0));
}

TEST_CASE("log-corrected source term") {
    const Nonlinearity lc = make_builtin("logcorrected(1.5,1.5)", 1);
    CHECK(lc.positive_only);
    CHECK(lc.f(0.0) == 0.0);
    CHECK(lc.f(-2.0) == 0.0);
    // below the interpolation window: u^{1+2/n} [ln(1/u)]^{-3/2}, n = 1
    const double u = 1e-3;
    CHECK(lc.f(u) ==
          doctest::Approx(std::pow(u, 3.0) * std::pow(std::log(1.0 / u), -1.5)).epsilon(1e-12));
    // far above: u^3 [ln(e+u)]^{-3/2}
    const double v = 1e4;
    CHECK(lc.f(v) ==
          doctest::Approx(std::pow(v, 3.0) * std::pow(std::log(std::exp(1.0) + v), -1.5))
              .epsilon(1e-12));
    // monotone through the interpolated middle
    double prev = 0.0;
    for (double t : log_probes(1e-4, 1e2, 200)) {
        CHECK(lc.f(t) >= prev - 1e-15);
        prev = lc.f(t);
    }
}

TEST_CASE("hypothesis probes") {
    CHECK(check_hypothesis_m(make_nonlinearity("u*u*u", 1), 48, 1e3).pass);
    CHECK(check_hypothesis_m(make_builtin("minpower(2,4)", 1), 48, 1e3).pass);
    const auto bad = check_hypothesis_m(parse_nonlinearity("-u"), 48, 1e3);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("structure probes") {
    const auto pw = check_structure(make_builtin("power(2)", 1), 1e3);
    CHECK(pw.odd);
    CHECK(pw.convex_on_positives);

    const auto mp = check_structure(make_builtin("minpower(2,4)", 1), 1e3);
    CHECK(mp.odd);
    CHECK_FALSE(mp.convex_on_positives);
    CHECK_FALSE(mp.convexity_witness.empty());

    const auto cubic = check_structure(parse_nonlinearity("u*u*u + u"), 1e3);
    CHECK(cubic.odd);
    CHECK(cubic.convex_on_positives);

    const auto even = check_structure(parse_nonlinearity("u*u"), 1e3);
    CHECK_FALSE(even.odd);
}

TEST_CASE("numeric envelopes match power-law closed forms") {
    const Nonlinearity p = make_builtin("power(1.5)", 1);
    const auto env = compute_envelopes_numeric(p, 2e3);
    for (double s : log_probes(1e-3, 1e3, 60)) {
        CHECK(env.ell(s) == doctest::Approx(std::pow(s, 0.5)).epsilon(1e-3));
        CHECK(env.big_l(s) == doctest::Approx(1.5 * std::pow(s, 0.5)).epsilon(1e-3));
    }
}

TEST_CASE("numeric envelopes capture the min-power crossover") {
    const Nonlinearity mp = make_builtin("minpower(2,4)", 1);
    const auto env = compute_envelopes_numeric(mp, 2e3);
    for (double s : log_probes(1e-3, 1.0, 30))
        CHECK(env.ell(s) == doctest::Approx(std::pow(s, 3.0)).epsilon(1e-3));
    for (double s : log_probes(10.0, 1e3, 20))
        CHECK(env.big_l(s) == doctest::Approx(2.0 * s).epsilon(1e-3));
}

TEST_CASE("zero source has zero envelopes") {
    const auto env = compute_envelopes(make_builtin("zero()", 1), 1e3);
    CHECK(env.ell(10.0) == 0.0);
    CHECK(env.big_l(10.0) == 0.0);
}

TEST_CASE("envelope invariants") {
    for (const char* text : {"power(1.5)", "minpower(2,4)", "logcorrected(1.5,1.5)"}) {
        CAPTURE(text);
        const Nonlinearity nl = make_builtin(text, 1);
        const auto env = compute_envelopes_numeric(nl, 1e4);
        double prev_ell = 0.0, prev_big = 0.0;
        for (double s : log_probes(1e-6, 1e4, 120)) {
            // ordering: ell <= L, cone variants below two-sided
            CHECK(env.ell(s) <= env.big_l(s) * (1 + 1e-9) + 1e-15);
            CHECK(env.ell_plus(s) <= env.ell(s) * (1 + 1e-9) + 1e-15);
            CHECK(env.big_l_plus(s) <= env.big_l(s) * (1 + 1e-9) + 1e-15);
            // non-decreasing
            CHECK(env.ell(s) >= prev_ell - 1e-15);
            CHECK(env.big_l(s) >= prev_big - 1e-15);
            prev_ell = env.ell(s);
            prev_big = env.big_l(s);
            // sandwich: f(s) <= s ell(s), f(-s) >= -s ell(s); the slack absorbs
            // log-log interpolation dips between probe nodes
            const double tol = 1e-4 * std::fabs(nl.f(s)) + 1e-12;
            CHECK(nl.f(s) <= s * env.ell(s) + tol);
            CHECK(nl.f(-s) >= -s * env.ell(s) - tol);
        }
    }
}

TEST_CASE("odd sources have matching cone envelopes") {
    const auto env = compute_envelopes_numeric(make_builtin("power(2)", 1), 1e3);
    for (double s : log_probes(1e-4, 1e3, 50)) {
        CHECK(env.ell(s) == doctest::Approx(env.ell_plus(s)).epsilon(1e-12));
        CHECK(env.big_l(s) == doctest::Approx(env.big_l_plus(s)).epsilon(1e-12));
    }
}
