#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "delayosc/errors.hpp"
#include "delayosc/trig_poly.hpp"

using delayosc::FrequencyMismatch;
using delayosc::Polynomial;
using delayosc::TrigPoly;
using Catch::Approx;

namespace {

TrigPoly random_trigpoly(std::mt19937& rng) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_real_distribution<double> freq(0.2, 3.0);
    auto poly = [&] {
        std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& v : c) v = coeff(rng);
        return Polynomial(std::move(c));
    };
    return TrigPoly(freq(rng), poly(), poly(), poly());
}

}  // namespace

TEST_CASE("eval examples") {
    TrigPoly c(2.0, {}, Polynomial{1.0}, {});
    REQUIRE(c(0.0) == Approx(1.0));  // cos 0

    TrigPoly p = TrigPoly::pure(Polynomial{1.0, 0.0, -0.5});
    REQUIRE(p(1.0) == Approx(0.5));

    TrigPoly ts(1.0, {}, {}, Polynomial{0.0, 1.0});  // t sin t
    REQUIRE(ts(M_PI / 2) == Approx(M_PI / 2));
}

TEST_CASE("add") {
    TrigPoly c(2.0, {}, Polynomial{1.0}, {});
    REQUIRE((c + (-1.0 * c)).is_zero());

    TrigPoly one = TrigPoly::pure(Polynomial{1.0});
    TrigPoly t = TrigPoly::pure(Polynomial{0.0, 1.0});
    REQUIRE((one + t).pure_part().coeffs() == std::vector<double>{1.0, 1.0});

    TrigPoly mixed = TrigPoly::pure(Polynomial{3.0}) + c;
    REQUIRE(mixed.omega() == 2.0);
    REQUIRE(mixed.pure_part().coeffs() == std::vector<double>{3.0});
    REQUIRE(mixed.cos_part().coeffs() == std::vector<double>{1.0});

    TrigPoly other(1.0, {}, Polynomial{1.0}, {});
    REQUIRE_THROWS_AS(c + other, FrequencyMismatch);
}

TEST_CASE("scale") {
    TrigPoly c(2.0, {}, Polynomial{1.0}, {});
    REQUIRE((0.0 * c).is_zero());
    REQUIRE((2.0 * TrigPoly(2.0, {}, {}, Polynomial{0.0, 1.0})).sin_part().coeffs() ==
            std::vector<double>{0.0, 2.0});
    TrigPoly p = TrigPoly::pure(Polynomial{1.0, 2.0});
    REQUIRE((-1.0 * p).pure_part().coeffs() == std::vector<double>{-1.0, -2.0});
}

TEST_CASE("derivative of cos is -omega sin") {
    TrigPoly c(2.0, {}, Polynomial{1.0}, {});
    TrigPoly d = c.derivative();
    REQUIRE(d.cos_part().is_zero());
    REQUIRE(d.sin_part().coeffs() == std::vector<double>{-2.0});

    // d/dt (t cos wt) = cos wt - w t sin wt
    TrigPoly tc(2.0, {}, Polynomial{0.0, 1.0}, {});
    TrigPoly dtc = tc.derivative();
    REQUIRE(dtc.cos_part().coeffs() == std::vector<double>{1.0});
    REQUIRE(dtc.sin_part().coeffs() == std::vector<double>{0.0, -2.0});

    TrigPoly p = TrigPoly::pure(Polynomial{1.0, 0.0, -0.5});
    REQUIRE(p.derivative().pure_part().coeffs() == std::vector<double>{0.0, -1.0});
}

TEST_CASE("derivative matches central differences on random values") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> ts(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const TrigPoly g = random_trigpoly(rng);
        const TrigPoly d = g.derivative();
        for (int i = 0; i < 25; ++i) {
            const double t = ts(rng);
            double prev_err = 0.0;
            int step = 0;
            for (double h : {1e-4, 1e-5}) {
                const double fd = (g(t + h) - g(t - h)) / (2.0 * h);
                const double err = std::abs(fd - d(t));
                const double scale = 1.0 + std::abs(d(t)) + std::abs(g(t));
                // O(h^2): absolute bound at h=1e-4, then two orders tighter
                REQUIRE(err < (step == 0 ? 1e-5 : 1e-6) * scale);
                if (step == 1) REQUIRE(err < std::max(prev_err, 1e-9 * scale));
                prev_err = err;
                ++step;
            }
        }
    }
}

TEST_CASE("shift identities") {
    TrigPoly t = TrigPoly::pure(Polynomial{0.0, 1.0});
    REQUIRE(t.shifted(2.5).pure_part().coeffs() == std::vector<double>{2.5, 1.0});

    TrigPoly c(1.3, {}, Polynomial{1.0}, {});
    const double shift = 0.7;
    REQUIRE(c.shifted(shift)(0.0) == Approx(std::cos(1.3 * shift)));

    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const TrigPoly g = random_trigpoly(rng);
        const double a = 1.9;
        const TrigPoly back = g.shifted(a).shifted(-a);
        std::uniform_real_distribution<double> ts(-2.0, 2.0);
        for (int i = 0; i < 20; ++i) {
            const double t = ts(rng);
            REQUIRE(back(t) == Approx(g(t)).epsilon(1e-12).margin(1e-12));
        }
    }

    // shift by zero is identity
    TrigPoly g(0.9, Polynomial{1.0}, Polynomial{0.0, 2.0}, Polynomial{3.0});
    const TrigPoly same = g.shifted(0.0);
    REQUIRE(same(1.234) == g(1.234));
}

TEST_CASE("solve_particular handles constant, resonant and pure-integration cases") {
    using delayosc::solve_particular;

    // constant rhs, omega1 > 0
    TrigPoly rhs = TrigPoly::pure(Polynomial{-4.0});  // -omega2^2 with omega2=2
    TrigPoly y = solve_particular(rhs, 3.0);
    REQUIRE(y.is_pure());
    REQUIRE(y.pure_part().coeffs() == std::vector<double>{-4.0 / 9.0});

    // resonant: rhs = cos t, omega1 = 1 -> (t/2) sin t
    TrigPoly cosrhs(1.0, {}, Polynomial{1.0}, {});
    TrigPoly part = solve_particular(cosrhs, 1.0);
    REQUIRE(part.pure_part().is_zero());
    REQUIRE(part.cos_part().is_zero());
    REQUIRE(part.sin_part().coeffs() == std::vector<double>{0.0, 0.5});

    // omega1 = 0: double antiderivative
    TrigPoly neg = TrigPoly::pure(Polynomial{-1.0});
    TrigPoly dbl = solve_particular(neg, 0.0);
    REQUIRE(dbl.pure_part().coeffs() == std::vector<double>{0.0, 0.0, -0.5});

    // frequency mismatch
    TrigPoly wrong(2.0, {}, Polynomial{1.0}, {});
    REQUIRE_THROWS_AS(solve_particular(wrong, 1.0), FrequencyMismatch);
    REQUIRE_THROWS_AS(solve_particular(wrong, 0.0), FrequencyMismatch);
}

TEST_CASE("solve_particular satisfies the equation on random rhs") {
    using delayosc::solve_particular;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ts(-2.0, 2.0);
    std::uniform_real_distribution<double> freq(0.3, 2.5);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(0, 3);
    auto poly = [&] {
        std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& v : c) v = coeff(rng);
        return Polynomial(std::move(c));
    };

    for (int trial = 0; trial < 50; ++trial) {
        const double w = freq(rng);
        const TrigPoly rhs(w, poly(), poly(), poly());
        const TrigPoly y = solve_particular(rhs, w);
        const TrigPoly ypp = y.derivative().derivative();
        for (int i = 0; i < 20; ++i) {
            const double t = ts(rng);
            const double lhs = ypp(t) + w * w * y(t);
            REQUIRE(std::abs(lhs - rhs(t)) < 1e-10 * (1.0 + std::abs(rhs(t))));
        }
    }
}

TEST_CASE("homogeneous_with_ic") {
    using delayosc::homogeneous_with_ic;

    TrigPoly c = homogeneous_with_ic(2.0, 1.0, 0.0, 0.0);
    REQUIRE(c.cos_part().coeffs() == std::vector<double>{1.0});
    REQUIRE(c.sin_part().is_zero());
    REQUIRE(c.pure_part().is_zero());

    TrigPoly lin = homogeneous_with_ic(0.0, 1.5, 1.0, 0.0);  // tau + t with tau=1.5
    REQUIRE(lin.pure_part().coeffs() == std::vector<double>{1.5, 1.0});

    // ICs hold by construction at arbitrary t0, also for the trig branch
    for (double t0 : {0.0, 0.8, -1.3}) {
        TrigPoly y = homogeneous_with_ic(1.7, 0.4, -0.9, t0);
        REQUIRE(y(t0) == Approx(0.4).margin(1e-14));
        REQUIRE(y.derivative()(t0) == Approx(-0.9).margin(1e-14));
        TrigPoly ypp = y.derivative().derivative();
        REQUIRE(ypp(t0 + 0.3) == Approx(-1.7 * 1.7 * y(t0 + 0.3)).margin(1e-12));
    }
}

TEST_CASE("add and scale are linear") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ts(-2.0, 2.0);
    std::uniform_real_distribution<double> scalars(-3.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        TrigPoly a = random_trigpoly(rng);
        TrigPoly b = random_trigpoly(rng);
        // same frequency so the sum is defined
        b = TrigPoly(a.omega(), b.pure_part(), b.cos_part(), b.sin_part());
        const double alpha = scalars(rng);
        const double beta = scalars(rng);
        const TrigPoly combo = (alpha * a) + (beta * b);
        for (int i = 0; i < 10; ++i) {
            const double t = ts(rng);
            const double expected = alpha * a(t) + beta * b(t);
            REQUIRE(combo(t) == Approx(expected).margin(1e-12 * (1.0 + std::abs(expected))));
        }
    }
}

TEST_CASE("operations preserve canonical form") {
    TrigPoly g(1.1, Polynomial{1.0, 0.0}, Polynomial{0.0, 2.0, 0.0}, Polynomial{});
    REQUIRE(g.pure_part().coeffs().size() == 1);
    REQUIRE(g.cos_part().coeffs().size() == 2);

    // derivative of t*cos: sin part picks up -w t; no trailing zeros anywhere
    const TrigPoly d = g.derivative();
    for (const auto* poly : {&d.pure_part(), &d.cos_part(), &d.sin_part()}) {
        REQUIRE((poly->is_zero() || poly->coeffs().back() != 0.0));
    }

    // cancellation collapses to the zero TrigPoly and omega resets
    TrigPoly z = g + (-1.0 * g);
    REQUIRE(z.is_zero());
    REQUIRE(z.omega() == 0.0);
}
