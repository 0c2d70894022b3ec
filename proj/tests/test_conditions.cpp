#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "heatlab/classify.hpp"

using namespace heatlab;

namespace {

EnvelopeFunctions envelopes_for(const char* text, int dim) {
    return compute_envelopes(make_builtin(text, dim), 2.2e12);
}

Verdict verdict_of(const char* text, ConditionKind kind, int dim) {
    return check_condition(kind, envelopes_for(text, dim), dim).verdict;
}

}  // namespace

TEST_CASE("power-law tail condition flips exactly at the Fujita exponent") {
    for (int n : {1, 2, 3}) {
        CAPTURE(n);
        const double pf = 1.0 + 2.0 / n;
        for (double p : {pf - 0.5, pf - 0.1, pf, pf + 0.5}) {
            CAPTURE(p);
            char buf[64];
            std::snprintf(buf, sizeof buf, "power(%.10f)", p);
            const Verdict v = verdict_of(buf, ConditionKind::I1, n);
            if (p < pf)
                CHECK(v == Verdict::Convergent);
            else
                CHECK(v == Verdict::Divergent);
        }
    }
}

TEST_CASE("zero source: every condition convergent with value 0") {
    const auto env = envelopes_for("zero()", 1);
    for (auto kind : {ConditionKind::I1, ConditionKind::I2, ConditionKind::I3,
                      ConditionKind::I1Plus, ConditionKind::I2Plus, ConditionKind::I3Plus}) {
        const auto v = check_condition(kind, env, 1);
        CHECK(v.verdict == Verdict::Convergent);
        CHECK(v.total == 0.0);
    }
}

TEST_CASE("min-power sources satisfy all three conditions") {
    const auto env = envelopes_for("minpower(2,4)", 1);
    CHECK(check_condition(ConditionKind::I1, env, 1).verdict == Verdict::Convergent);
    CHECK(check_condition(ConditionKind::I2, env, 1).verdict == Verdict::Convergent);
    CHECK(check_condition(ConditionKind::I3, env, 1).verdict == Verdict::Convergent);
}

TEST_CASE("subcritical power: origin condition diverges") {
    // I3 integrand s^{p-1-p_F} is non-integrable at 0 for p < p_F
    CHECK(verdict_of("power(1.5)", ConditionKind::I3, 1) == Verdict::Divergent);
    CHECK(verdict_of("power(1.5)", ConditionKind::I3, 2) == Verdict::Divergent);
}

TEST_CASE("log-corrected source: cone conditions converge") {
    const auto env = envelopes_for("logcorrected(1.5,1.5)", 1);
    CHECK(check_condition(ConditionKind::I2Plus, env, 1).verdict == Verdict::Convergent);
    CHECK(check_condition(ConditionKind::I3Plus, env, 1).verdict == Verdict::Convergent);
}

TEST_CASE("verdicts carry monotone evidence") {
    const auto v = check_condition(ConditionKind::I1, envelopes_for("power(1.5)", 2), 2);
    REQUIRE(v.partial_values.size() > 3);
    for (std::size_t i = 1; i < v.partial_values.size(); ++i) {
        CHECK(v.partial_values[i].first > v.partial_values[i - 1].first);
        CHECK(v.partial_values[i].second >= v.partial_values[i - 1].second);
    }
    // convergent verdict comes with shrinking increments
    const auto& inc = v.increments;
    CHECK(inc.back() < inc.front());
    CHECK(v.total > 0.0);
    CHECK_FALSE(v.rule.empty());
    // integrand s^{-2} * s^{0.5}: local log-slope near -1.5
    CHECK(v.tail_exponent_estimate == doctest::Approx(-1.5).epsilon(1e-6));
}

TEST_CASE("substitution form carries the n/2 Jacobian") {
    // int_1^S s^{-p_F} ell(s) ds = (n/2) int_{S^{-2/n}}^1 ell(tau^{-n/2}) dtau
    for (int n : {1, 2, 3}) {
        CAPTURE(n);
        const auto env = envelopes_for("power(1.5)", n);
        const double S = std::ldexp(1.0, 10);
        const double direct = partial_condition_integral(env.ell, n, S);
        const double tau_lo = std::pow(S, -2.0 / n);
        const double substituted =
            0.5 * n * substituted_condition_integral(env.ell, n, tau_lo, 1.0);
        CHECK(direct == doctest::Approx(substituted).epsilon(1e-6));
    }
}

TEST_CASE("scaling covariance: c*f scales integrals, never verdicts") {
    const auto env = envelopes_for("power(1.5)", 2);
    const double c = 37.5;
    EnvelopeFunctions scaled = env;
    ScalarFn base = env.ell;
    scaled.ell = [base, c](double s) { return c * base(s); };
    ScalarFn base_l = env.big_l;
    scaled.big_l = [base_l, c](double s) { return c * base_l(s); };

    const auto v1 = check_condition(ConditionKind::I1, env, 2);
    const auto v2 = check_condition(ConditionKind::I1, scaled, 2);
    CHECK(v1.verdict == v2.verdict);
    REQUIRE(v1.partial_values.size() == v2.partial_values.size());
    for (std::size_t i = 0; i < v1.partial_values.size(); ++i)
        CHECK(v2.partial_values[i].second ==
              doctest::Approx(c * v1.partial_values[i].second).epsilon(1e-12));
}

TEST_CASE("uniqueness-grade convergence implies existence-grade convergence") {
    for (const char* text : {"power(1.2)", "power(1.5)", "minpower(2,4)", "linear(1)"}) {
        CAPTURE(text);
        const auto env = envelopes_for(text, 1);
        if (check_condition(ConditionKind::I2, env, 1).verdict == Verdict::Convergent)
            CHECK(check_condition(ConditionKind::I1, env, 1).verdict == Verdict::Convergent);
    }
}

TEST_CASE("classifier: subcritical power is well-posed but not global") {
    const auto wc = classify(make_builtin("power(1.5)", 2), 2);
    CHECK(wc.classification == WellPosedness::WellPosedL1);
    CHECK(wc.satisfies_i1);
    CHECK(wc.satisfies_i2);
    CHECK_FALSE(wc.satisfies_i3);
    CHECK_FALSE(wc.global_for_small_data);
    CHECK(wc.odd);
    CHECK(wc.convex_on_positives);
    CHECK_FALSE(wc.citations.empty());
}

TEST_CASE("classifier: min-power source is well-posed with small-data globality") {
    const auto wc = classify(make_builtin("minpower(2,4)", 1), 1);
    CHECK(wc.classification == WellPosedness::WellPosedL1);
    CHECK(wc.global_for_small_data);
    CHECK_FALSE(wc.convex_on_positives);
}

TEST_CASE("classifier: supercritical convex power fails on the cone") {
    const auto wc = classify(make_builtin("power(4)", 1), 1);
    CHECK(wc.classification == WellPosedness::NotWellPosedL1Plus);
}

TEST_CASE("classifier: log-corrected source is well-posed on the cone, globally for small data") {
    const auto wc = classify(make_builtin("logcorrected(1.5,1.5)", 1), 1);
    CHECK(wc.classification == WellPosedness::WellPosedL1PlusOnly);
    CHECK(wc.global_for_small_data);
}

TEST_CASE("classifier consistency: odd convex sources tie the two tail conditions") {
    for (const char* text : {"power(1.5)", "power(2.5)", "power(4)"}) {
        CAPTURE(text);
        const auto wc = classify(make_builtin(text, 1), 1);
        if (wc.odd && wc.convex_on_positives)
            CHECK(wc.satisfies_i1 == wc.satisfies_i2);
    }
}
