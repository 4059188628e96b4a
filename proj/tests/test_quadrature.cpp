#include <catch_amalgamated.hpp>

#include <cmath>

#include "delayosc/errors.hpp"
#include "delayosc/quadrature.hpp"

using delayosc::GaussLegendre;
using delayosc::integrate_split;
using delayosc::InvalidParameter;
using Catch::Approx;

TEST_CASE("node counts are validated") {
    REQUIRE_THROWS_AS(GaussLegendre(1), InvalidParameter);
    REQUIRE_THROWS_AS(GaussLegendre(65), InvalidParameter);
    REQUIRE_NOTHROW(GaussLegendre(2));
    REQUIRE_NOTHROW(GaussLegendre(64));
}

TEST_CASE("weights sum to the interval length and nodes are symmetric") {
    for (int n : {2, 3, 8, 16, 33, 64}) {
        const GaussLegendre rule(n);
        double sum = 0.0;
        for (double w : rule.weights()) sum += w;
        REQUIRE(sum == Approx(2.0).margin(1e-13));
        for (int i = 0; i < n; ++i) {
            REQUIRE(rule.nodes()[i] == Approx(-rule.nodes()[n - 1 - i]).margin(1e-14));
        }
    }
}

TEST_CASE("an n-point rule is exact for degree 2n-1") {
    const GaussLegendre rule(5);
    // integral of t^9 over [0, 1] = 1/10
    REQUIRE(rule.integrate([](double t) { return std::pow(t, 9.0); }, 0.0, 1.0) ==
            Approx(0.1).margin(1e-14));
    // degree 10 must show a visible error with n=5 but not with n=6
    const double exact = 1.0 / 11.0;
    const double e5 = std::abs(
        rule.integrate([](double t) { return std::pow(t, 10.0); }, 0.0, 1.0) - exact);
    const GaussLegendre rule6(6);
    const double e6 = std::abs(
        rule6.integrate([](double t) { return std::pow(t, 10.0); }, 0.0, 1.0) - exact);
    REQUIRE(e5 > 1e-9);
    REQUIRE(e6 < 1e-15);
}

TEST_CASE("smooth reference integrals") {
    const GaussLegendre rule(16);
    REQUIRE(rule.integrate([](double t) { return std::sin(t); }, 0.0, M_PI) ==
            Approx(2.0).margin(1e-13));
    REQUIRE(rule.integrate([](double t) { return std::exp(-t); }, 0.0, 3.0) ==
            Approx(1.0 - std::exp(-3.0)).margin(1e-13));
}

TEST_CASE("split points recover accuracy on kinked integrands") {
    const GaussLegendre rule(16);
    auto kinked = [](double t) { return std::abs(t - 0.3); };
    const double exact = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
    const double unsplit = integrate_split(kinked, 0.0, 1.0, {}, rule);
    const double split = integrate_split(kinked, 0.0, 1.0, {0.3}, rule);
    REQUIRE(std::abs(split - exact) < 1e-14);
    REQUIRE(std::abs(unsplit - exact) > 1e-6);
}

TEST_CASE("integrals are invariant under extra split points") {
    const GaussLegendre rule(16);
    auto f = [](double t) { return std::sin(3.0 * t) * std::exp(-0.5 * t); };
    const double base = integrate_split(f, -1.0, 2.0, {0.5}, rule);
    const double extra = integrate_split(f, -1.0, 2.0, {0.5, -0.2, -0.2, 1.9, 5.0, -7.0}, rule);
    REQUIRE(extra == Approx(base).margin(1e-10));
}

TEST_CASE("degenerate ranges integrate to zero") {
    const GaussLegendre rule(8);
    auto f = [](double t) { return t; };
    REQUIRE(integrate_split(f, 1.0, 1.0, {}, rule) == 0.0);
    REQUIRE(integrate_split(f, 2.0, 1.0, {}, rule) == 0.0);
}
