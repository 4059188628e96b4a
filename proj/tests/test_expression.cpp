#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "delayosc/errors.hpp"
#include "delayosc/expression.hpp"

using delayosc::EvalError;
using delayosc::Expression;
using delayosc::SyntaxError;
using delayosc::UnknownIdentifier;
using Catch::Approx;

TEST_CASE("golden parse and eval") {
    REQUIRE(Expression::parse("1 - t^2/2")(1.0) == Approx(0.5));
    REQUIRE(Expression::parse("sin(2*t)+1")(0.0) == Approx(1.0));
    REQUIRE(Expression::parse("7")(123.0) == Approx(7.0));
    REQUIRE(Expression::parse("t^3")(2.0) == Approx(8.0));
    REQUIRE(Expression::parse("exp(t)")(1.0) == Approx(std::exp(1.0)));
    REQUIRE(Expression::parse("cos(t)*cos(t) + sin(t)*sin(t)")(0.37) == Approx(1.0));
    REQUIRE(Expression::parse(" ( t + 1 ) * ( t - 1 ) ")(3.0) == Approx(8.0));
    REQUIRE(Expression::parse("2e-1 * t")(10.0) == Approx(2.0));
    REQUIRE(Expression::parse("0.5")(0.0) == Approx(0.5));
}

TEST_CASE("precedence golden cases") {
    REQUIRE(Expression::parse("2+3*4")(0.0) == Approx(14.0));
    REQUIRE(Expression::parse("2*3^2")(0.0) == Approx(18.0));
    REQUIRE(Expression::parse("-t^2")(3.0) == Approx(-9.0));
    REQUIRE(Expression::parse("(-t)^2")(3.0) == Approx(9.0));
    REQUIRE(Expression::parse("2-3-4")(0.0) == Approx(-5.0));
    REQUIRE(Expression::parse("12/3/2")(0.0) == Approx(2.0));
    REQUIRE(Expression::parse("-2^2")(0.0) == Approx(-4.0));
    REQUIRE(Expression::parse("2^2^3")(0.0) == Approx(64.0));  // left-to-right powers
}

TEST_CASE("syntax errors carry the byte offset") {
    try {
        Expression::parse("t +");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        REQUIRE(e.offset() == 3);
    }
    REQUIRE_THROWS_AS(Expression::parse("2t"), SyntaxError);            // no implicit product
    REQUIRE_THROWS_AS(Expression::parse("sin 2"), SyntaxError);         // missing paren
    REQUIRE_THROWS_AS(Expression::parse("(1+2"), SyntaxError);          // unbalanced
    REQUIRE_THROWS_AS(Expression::parse("t^(2)"), SyntaxError);         // exponent literal only
    REQUIRE_THROWS_AS(Expression::parse("t^-2"), SyntaxError);          // nonnegative only
    REQUIRE_THROWS_AS(Expression::parse(""), SyntaxError);
    REQUIRE_THROWS_AS(Expression::parse("x + 1"), UnknownIdentifier);
    REQUIRE_THROWS_AS(Expression::parse("tan(t)"), UnknownIdentifier);
    try {
        Expression::parse("1 + wobble");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        REQUIRE(e.offset() == 4);
    }
}

TEST_CASE("division by zero raises EvalError") {
    const Expression e = Expression::parse("1/t");
    REQUIRE_THROWS_AS(e(0.0), EvalError);
    REQUIRE(e(2.0) == Approx(0.5));
}

TEST_CASE("golden derivatives") {
    REQUIRE(Expression::parse("t^2").derivative()(3.0) == Approx(6.0));
    REQUIRE(Expression::parse("sin(2*t)").derivative()(0.0) == Approx(2.0));
    REQUIRE(Expression::parse("t + 3").derivative().derivative()(5.0) == Approx(0.0));
    REQUIRE(Expression::parse("exp(2*t)").derivative()(0.0) == Approx(2.0));
    REQUIRE(Expression::parse("cos(t)").derivative()(0.0) == Approx(0.0).margin(1e-15));
    REQUIRE(Expression::parse("cos(t)").derivative()(M_PI / 2) == Approx(-1.0));
    REQUIRE(Expression::parse("1/(1+t)").derivative()(1.0) == Approx(-0.25));
    REQUIRE(Expression::parse("t*sin(t)").derivative()(M_PI) == Approx(-M_PI));
}

namespace {

Expression random_expression(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
    std::uniform_real_distribution<double> constant(-2.0, 2.0);
    std::uniform_int_distribution<int> small_pow(0, 3);
    switch (pick(rng)) {
        case 0: return Expression::constant(constant(rng));
        case 1: return Expression::time_variable();
        case 2: return random_expression(rng, depth - 1) + random_expression(rng, depth - 1);
        case 3: return random_expression(rng, depth - 1) - random_expression(rng, depth - 1);
        case 4: return random_expression(rng, depth - 1) * random_expression(rng, depth - 1);
        case 5:
            // keep denominators away from casual zeros
            return random_expression(rng, depth - 1) /
                   (Expression::constant(2.5) + Expression::sin(random_expression(rng, depth - 1)));
        case 6: return Expression::sin(random_expression(rng, depth - 1));
        case 7: return Expression::cos(random_expression(rng, depth - 1));
        default: return Expression::pow(random_expression(rng, depth - 1), small_pow(rng));
    }
}

}  // namespace

TEST_CASE("derivative matches central differences on 1000 random expressions") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> ts(-1.5, 1.5);
    int checked = 0;
    while (checked < 1000) {
        const Expression e = random_expression(rng, 5);
        const Expression d = e.derivative();
        const double t = ts(rng);
        const double h = 1e-5;
        double fd, exact, magnitude;
        try {
            fd = (e(t + h) - e(t - h)) / (2.0 * h);
            exact = d(t);
            // crude magnitude bound from the third symbolic derivative
            const Expression d3 = d.derivative().derivative();
            magnitude = std::abs(e(t)) + std::abs(exact) + std::abs(d3(t));
        } catch (const EvalError&) {
            continue;  // derivative denominators can still vanish; resample
        }
        if (!std::isfinite(fd) || !std::isfinite(exact) || magnitude > 1e6) continue;
        const double tol = h * h * (1.0 + magnitude) + 1e-9 * (1.0 + std::abs(exact));
        REQUIRE(std::abs(fd - exact) < tol);
        ++checked;
    }
}

TEST_CASE("print round-trips through the parser") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ts(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const Expression e = random_expression(rng, 4);
        const Expression round = Expression::parse(e.str());
        for (int k = 0; k < 5; ++k) {
            const double t = ts(rng);
            double a, b;
            try {
                a = e(t);
                b = round(t);
            } catch (const EvalError&) {
                continue;
            }
            REQUIRE(b == Approx(a).margin(1e-14 * (1.0 + std::abs(a))));
        }
    }
    // spot checks of the printed form
    REQUIRE(Expression::parse(Expression::parse("-t^2").str())(3.0) == Approx(-9.0));
    REQUIRE(Expression::parse(Expression::parse("2-3-4").str())(0.0) == Approx(-5.0));
    REQUIRE(Expression::parse(Expression::parse("2*3^2").str())(0.0) == Approx(18.0));
}

TEST_CASE("programmatic construction for superposition") {
    const Expression phi1 = Expression::parse("sin(t)");
    const Expression phi2 = Expression::parse("1 - t^2/2");
    const Expression combo = 2.0 * phi1 + (-0.5) * phi2;
    REQUIRE(combo(0.3) == Approx(2.0 * std::sin(0.3) - 0.5 * (1.0 - 0.045)));
    REQUIRE(combo.derivative()(0.3) == Approx(2.0 * std::cos(0.3) - 0.5 * (-0.3)));
}
