#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "yamabe/quadrature.hpp"

using namespace yamabe;

TEST_CASE("radial closed forms") {
    CHECK(radial_closed(5, Rational(5)) == ExactScalar{rat(1, 24)});
    // Beta oracle B(4,2)/2
    CHECK(radial_closed(7, Rational(6)) == ExactScalar{rat(1, 40)});
    CHECK(radial_closed(0, Rational(1)) == ExactScalar::of_pi(rat(1, 2)));  // arctan
    // half-integer exponents reach the rational branch
    CHECK(radial_closed(6, Rational(9, 2)) == ExactScalar{rat(1, 7)});
    // even p, integer q: pi multiples
    CHECK(radial_closed(6, Rational(5)) == ExactScalar::of_pi(rat(5, 256)));
    CHECK(radial_closed(8, Rational(7)) == ExactScalar::of_pi(rat(7, 2048)));
}

TEST_CASE("radial rejections name the divergence") {
    CHECK_THROWS_WITH(radial_closed(5, Rational(3)),
                      Catch::Matchers::ContainsSubstring("infinity"));
    CHECK_THROWS_WITH(radial_closed(-1, Rational(3)),
                      Catch::Matchers::ContainsSubstring("divergent at 0"));
    CHECK(radial_log_coefficient(6, Rational(7, 2)) == ExactScalar{rat(1)});
    CHECK_THROWS(radial_log_coefficient(5, Rational(5)));
}

TEST_CASE("axial closed forms") {
    CHECK(axial_closed_value(2, 4) == ExactScalar{rat(1, 3)});
    CHECK(axial_closed_value(1, 7) == ExactScalar{rat(1, 30)});  // substitution oracle
    CHECK(axial_closed_value(1, 4) == ExactScalar{rat(1, 6)});
    CHECK(axial_log_coefficient(1, 2) == ExactScalar{rat(1)});
    CHECK(axial_log_coefficient(2, 3) == ExactScalar{rat(1)});
    CHECK_THROWS(axial_closed(3, 3));
}

TEST_CASE("beta recursion identity on a parameter grid") {
    // 1/(t^2+1)^{q-1} - t^2/(t^2+1)^q = 1/(t^2+1)^q, so
    // radial(p, q) = radial(p, q-1) - radial(p+2, q) whenever all converge.
    for (int p = 0; p <= 7; ++p)
        for (int dq = 0; dq <= 10; ++dq) {
            Rational q = Rational(p + 3) / 2 + Rational(dq, 2);
            if (2 * (q - 1) - p <= 1) continue;
            CHECK(radial_closed(p, q) ==
                  radial_closed(p, q - 1) - radial_closed(p + 2, q));
        }
}

TEST_CASE("adaptive quadrature agrees with every convergent closed form") {
    // radial family: p <= 9, 2q <= 24
    for (int p = 0; p <= 9; ++p)
        for (int twoq = 2; twoq <= 24; ++twoq) {
            Rational q(twoq, 2);
            if (!(2 * q - p > 1)) continue;
            double exact = radial_closed(p, q).to_double();
            RadialIntegral ri{p, q};
            QuadResult qr = adaptive_semi_infinite([&](double t) { return ri.integrand(t); },
                                                   1e-13);
            REQUIRE(qr.converged);
            CHECK(std::fabs(qr.value - exact) <= 1e-10 * std::fabs(exact));
        }
    // axial family: b - a in {2,...,8}
    for (int a = 0; a <= 6; ++a)
        for (int d = 2; d <= 8; ++d) {
            int b = a + d;
            double exact = axial_closed_value(a, b).to_double();
            AxialIntegral ai{a, b};
            QuadResult qr = adaptive_semi_infinite([&](double t) { return ai.integrand(t); },
                                                   1e-13);
            REQUIRE(qr.converged);
            CHECK(std::fabs(qr.value - exact) <= 1e-10 * std::fabs(exact));
        }
}

TEST_CASE("adaptive basics") {
    QuadResult one = adaptive([](double) { return 1.0; }, 0.0, 1.0, 1e-12);
    CHECK(one.value == Catch::Approx(1.0).epsilon(1e-14));

    QuadResult two = adaptive_2d([](double x, double y) { return x * y; }, 0, 1, 0, 2, 1e-12);
    CHECK(two.value == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("log cutoff fit recovers exact log coefficients") {
    // int_0^R t/(t+1)^2 dt = log(R+1) + 1/(R+1) - 1; c_log = 1
    auto f = [](double t) { return t / ((t + 1.0) * (t + 1.0)); };
    LogFit fit = log_cutoff_fit(f, default_cutoffs());
    CHECK(std::fabs(fit.c_log - 1.0) < 5e-3);
    CHECK(fit.ok);

    // tight recovery needs cutoffs that outrun the 1/R model mismatch
    LogFit tight = log_cutoff_fit(f, {1e6, 1e7, 1e8, 1e9});
    CHECK(std::fabs(tight.c_log - 1.0) < 1e-6);

    // convergent integrand: c_log ~ 0 (the 1/R basis removes the tail bias)
    auto g = [](double t) { return 1.0 / ((t + 1.0) * (t + 1.0)); };
    LogFit zero = log_cutoff_fit(g, default_cutoffs(), true);
    CHECK(std::fabs(zero.c_log) < 1e-4);
}

TEST_CASE("log fit of the N=4 bubble-kernel integrand") {
    // int W Z^0 over the half-space at N = 4, reduced to 1-D in the vertical
    // coordinate after exact radial integration; the log coefficient is
    // -(pi/4) |S^2| = -pi^2.
    double r23 = radial_closed(2, Rational(3)).to_double();  // pi/16
    double r43 = radial_closed(4, Rational(3)).to_double();  // 3 pi/16
    double S2 = 4.0 * kPi;
    auto g = [=](double t) {
        double tp = t + 1.0;
        return S2 * ((1.0 - t * t) * r23 / std::pow(tp, 3) - r43 / tp);
    };
    LogFit fit = log_cutoff_fit(g, {1e4, 1e5, 1e6, 1e7});
    double expected = -0.25 * kPi * S2;
    CHECK(std::fabs(fit.c_log - expected) < 1e-4 * std::fabs(expected));
}
