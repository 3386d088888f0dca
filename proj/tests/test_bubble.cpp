#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "yamabe/bubble.hpp"

using namespace yamabe;

namespace {

std::vector<double> random_halfspace_point(int N, std::mt19937& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    std::vector<double> x(N);
    for (double& v : x) v = U(rng);
    x[N - 1] = std::fabs(x[N - 1]) + 0.05;
    return x;
}

double fd_second(const BubbleParams& p, std::vector<double> x, int a, int b, double h) {
    auto W = [&](const std::vector<double>& y) { return eval_W(p, y); };
    if (a == b) {
        std::vector<double> xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        return (W(xp) - 2 * W(x) + W(xm)) / (h * h);
    }
    std::vector<double> pp = x, pm = x, mp = x, mm = x;
    pp[a] += h; pp[b] += h;
    pm[a] += h; pm[b] -= h;
    mp[a] -= h; mp[b] += h;
    mm[a] -= h; mm[b] -= h;
    return (W(pp) - W(pm) - W(mp) + W(mm)) / (4 * h * h);
}

}  // namespace

TEST_CASE("bubble point values") {
    for (int N : {3, 4, 5, 6}) {
        BubbleParams p(N);
        std::vector<double> origin(N, 0.0);
        CHECK(eval_W(p, origin) == Catch::Approx(1.0));  // (0 + 1)^{-(N-2)/2}
    }
    BubbleParams p5(5);
    CHECK(eval_W(p5, {0, 0, 0, 0, 1}) == Catch::Approx(0.125));  // (0+4)^{-3/2}
}

TEST_CASE("closed-form second derivatives match finite differences") {
    std::mt19937 rng(11);
    BubbleParams p(5, 1.3, {0.2, -0.4, 0.0, 0.1});
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x = random_halfspace_point(5, rng);
        for (int a = 0; a < 5; ++a)
            for (int b = a; b < 5; ++b) {
                std::vector<int> d(5, 0);
                d[a] += 1;
                d[b] += 1;
                double closed = eval_W(p, x, d);
                // h-refinement: the FD error must shrink like h^2
                double e1 = std::fabs(fd_second(p, x, a, b, 2e-3) - closed);
                double e2 = std::fabs(fd_second(p, x, a, b, 1e-3) - closed);
                CHECK(e2 <= 0.36 * e1 + 1e-11);
            }
    }
}

TEST_CASE("kernel fields") {
    SECTION("Z^0 at the origin, N = 5") {
        BubbleParams p(5);
        std::vector<double> origin(5, 0.0);
        CHECK(eval_Z(p, 0, origin) == Catch::Approx(1.5));  // (N-2)/2
    }
    SECTION("Z^i vanishes on the axis xbar = xi") {
        BubbleParams p(5, 0.8, {0.3, 0.1, -0.2, 0.0});
        for (int i = 1; i <= 4; ++i)
            CHECK(eval_Z(p, i, {0.3, 0.1, -0.2, 0.0, 1.7}) == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("Z^0 matches a lambda finite difference to O(h^2)") {
        std::mt19937 rng(4);
        std::vector<double> x = random_halfspace_point(5, rng);
        BubbleParams p(5, 1.1, {0.0, 0.0, 0.0, 0.0});
        auto at = [&](double lam) {
            BubbleParams q(5, lam, p.xi);
            return eval_W(q, x);
        };
        double closed = eval_Z(p, 0, x);
        double e1 = std::fabs(-(at(1.1 + 2e-3) - at(1.1 - 2e-3)) / 4e-3 - closed);
        double e2 = std::fabs(-(at(1.1 + 1e-3) - at(1.1 - 1e-3)) / 2e-3 - closed);
        CHECK(e2 <= 0.3 * e1 + 1e-12);
    }
}

TEST_CASE("bubble solves its boundary value problem") {
    std::mt19937 rng(23);
    for (int N : {4, 5, 6}) {
        BubbleParams p(N, 1.4, std::vector<double>(N - 1, 0.25));
        SECTION("boundary residual vanishes in closed form, N = " + std::to_string(N)) {
            std::vector<double> x = random_halfspace_point(N, rng);
            x[N - 1] = 0.4;
            BubbleResidual r = residual_bubble(p, x);
            // boundary part evaluated at the trace of this point
            CHECK(std::fabs(r.boundary) < 1e-14);
        }
    }
    SECTION("interior FD residual decays at second order") {
        BubbleParams p(5);
        std::vector<double> x = {0.4, -0.2, 0.5, 0.1, 0.8};
        double r1 = std::fabs(interior_residual_fd(p, x, 4e-3));
        double r2 = std::fabs(interior_residual_fd(p, x, 2e-3));
        CHECK(r2 <= 0.3 * r1 + 1e-12);  // Richardson-style halving
    }
}

TEST_CASE("harmonicity and boundary nonlinearity at random points") {
    std::mt19937 rng(99);
    BubbleParams p(5);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> x = random_halfspace_point(5, rng, 3.0);
        CHECK(std::fabs(harmonicity_defect(p, x)) < 1e-12);
        std::vector<double> xb(x.begin(), x.end() - 1);
        std::vector<double> x0 = x;
        x0[4] = 0.0;
        std::vector<int> dN(5, 0);
        dN[4] = 1;
        double lhs = -eval_W(p, x0, dN);
        double rhs = 3.0 * std::pow(eval_w(p, xb), 5.0 / 3.0);
        CHECK(std::fabs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("kernel boundary identity -d_N Z = N w^{2/(N-2)} Z") {
    std::mt19937 rng(5);
    for (int N : {4, 5, 6}) {
        BubbleParams p(N, 0.9, std::vector<double>(N - 1, -0.15));
        for (int k = 0; k < 100; ++k) {
            std::vector<double> x = random_halfspace_point(N, rng, 2.5);
            x[N - 1] = 0.0;
            std::vector<double> xb(x.begin(), x.end() - 1);
            double wfac = N * w_pow_2_over_Nm2(p, xb);
            for (int idx = 0; idx <= N - 1; ++idx) {
                double lhs = -eval_Z_dN(p, idx, x);
                double rhs = wfac * eval_Z(p, idx, x);
                CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
            }
        }
    }
}

TEST_CASE("scaling and translation invariance of the residuals") {
    // residuals vanish for any (lambda, xi), not only the normalized bubble
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> L(0.3, 3.0);
    for (int k = 0; k < 10; ++k) {
        double lam = L(rng);
        std::vector<double> xi = {L(rng) - 1.5, L(rng) - 1.5, L(rng) - 1.5};
        BubbleParams p(4, lam, xi);
        std::vector<double> x = random_halfspace_point(4, rng);
        BubbleResidual r = residual_bubble(p, x);
        CHECK(std::fabs(r.boundary) < 1e-13);
        CHECK(std::fabs(harmonicity_defect(p, x)) < 1e-11);
    }
}
