#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/expression.hpp"

using namespace heatlab;

TEST_CASE("arithmetic, precedence, and unary minus") {
    auto f = parse_expression("2*u - u/2");
    CHECK(f(4.0) == doctest::Approx(6.0));
    CHECK(parse_expression("-u*u")(3.0) == doctest::Approx(-9.0));
    CHECK(parse_expression("(u+1)*(u-1)")(5.0) == doctest::Approx(24.0));
    CHECK(parse_expression("1+2*3")(0.0) == doctest::Approx(7.0));
    CHECK(parse_expression("u/2/2")(8.0) == doctest::Approx(2.0));
}

TEST_CASE("function calls") {
    CHECK(parse_expression("pow(u,3)")(2.0) == doctest::Approx(8.0));
    CHECK(parse_expression("min(u, 2)")(5.0) == doctest::Approx(2.0));
    CHECK(parse_expression("max(u, 2)")(5.0) == doctest::Approx(5.0));
    CHECK(parse_expression("abs(u)")(-3.5) == doctest::Approx(3.5));
    CHECK(parse_expression("ln(u)")(std::exp(2.0)) == doctest::Approx(2.0));
    CHECK(parse_expression("exp(u)")(1.0) == doctest::Approx(std::exp(1.0)));
    CHECK(parse_expression("sign(u)")(-0.2) == -1.0);
    CHECK(parse_expression("sign(u)")(0.0) == 0.0);
}

TEST_CASE("odd power law via sign and abs") {
    auto f = parse_expression("pow(abs(u),1.5)*sign(u)");
    CHECK(f(4.0) == doctest::Approx(8.0));
    CHECK(f(-4.0) == doctest::Approx(-8.0));
    CHECK(f(0.0) == 0.0);
}

TEST_CASE("odd_extend evaluates at |u| and flips sign") {
    auto f = parse_expression("odd_extend(min(pow(u,2),pow(u,4)))");
    CHECK(f(0.5) == doctest::Approx(0.0625));   // u^4 branch below 1
    CHECK(f(-0.5) == doctest::Approx(-0.0625));
    CHECK(f(2.0) == doctest::Approx(4.0));      // u^2 branch above 1
    CHECK(f(-2.0) == doctest::Approx(-4.0));
    CHECK(f(0.0) == 0.0);

    // without the odd extension, even powers would make this even
    auto g = parse_expression("min(pow(u,2),pow(u,4))");
    CHECK(g(-0.5) == doctest::Approx(0.0625));
}

TEST_CASE("syntax errors carry position") {
    CHECK_THROWS_AS(parse_expression("u +"), ParseError);
    CHECK_THROWS_AS(parse_expression("pow(u)"), ParseError);
    CHECK_THROWS_AS(parse_expression("foo(u)"), ParseError);
    CHECK_THROWS_AS(parse_expression("u u"), ParseError);
    CHECK_THROWS_AS(parse_expression("u @ 2"), ParseError);
    try {
        parse_expression("u +\n  *2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column >= 1);
    }
}
