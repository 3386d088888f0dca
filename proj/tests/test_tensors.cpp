#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "yamabe/tensors.hpp"

using namespace yamabe;

static TraceFreePi random_trace_free(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-8, 8);
    std::vector<Rational> e(n * n, Rational(0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Rational v = rat(num(rng), 8);
            e[i * n + j] = v;
            e[j * n + i] = v;
        }
    // push the trace into the last diagonal entry
    Rational tr = 0;
    for (int i = 0; i < n; ++i) tr += e[i * n + i];
    e[(n - 1) * n + (n - 1)] -= tr;
    return TraceFreePi(n, std::move(e));
}

TEST_CASE("sphere moments: basic values") {
    CHECK(moment_pi({0, 0, 0}, false, 3) == PiValue(rat(4), 1));        // |S^2| = 4 pi
    CHECK(moment_pi({2, 0, 0, 0}, false, 4) == PiValue(rat(1, 2), 2));  // |S^3|/4
    CHECK(moment_pi({1, 0, 0, 0}, false, 4).is_zero());                 // odd power
    CHECK(moment_pi({1, 2, 0}, true, 3).is_zero());                     // odd tangential
    // hemisphere with an odd vertical power
    CHECK(moment_pi({0, 0, 1}, true, 3) == PiValue(rat(1), 1));            // pi
    CHECK(moment_pi({2, 0, 0, 0, 1}, true, 5) == PiValue(rat(1, 12), 2));  // |S^3|/24
    CHECK(moment_pi({2, 2, 0, 0, 1}, true, 5) == PiValue(rat(1, 96), 2));
    // hemisphere with even vertical power = half the full moment
    CHECK(moment_pi({0, 0, 0, 0}, true, 4) == PiValue(rat(1), 2));
}

TEST_CASE("moment() wrapper flags representability") {
    SphereMoment m = moment({0, 0, 0}, false, 3);
    CHECK(m.representable);
    CHECK(m.exact == ExactScalar::of_pi(rat(4)));
    SphereMoment s3 = moment({2, 0, 0, 0}, false, 4);
    CHECK_FALSE(s3.representable);  // pi^2
    CHECK(s3.approx == Catch::Approx(0.5 * kPi * kPi));
}

TEST_CASE("moment recursion: sum over coordinates inserts the unit-sphere constraint") {
    // sum_i int x_i^2 x^alpha dS = int x^alpha dS, exactly, for |alpha| <= 6
    for (int N : {3, 4, 5}) {
        std::vector<std::vector<int>> multis;
        std::function<void(std::vector<int>, int, int)> gen = [&](std::vector<int> cur, int pos,
                                                                  int left) {
            if (pos == N) {
                multis.push_back(cur);
                return;
            }
            for (int k = 0; k <= left; k += 2) {
                cur.push_back(k);
                std::vector<int> nxt = cur;
                cur.pop_back();
                gen(nxt, pos + 1, left - k);
            }
        };
        gen({}, 0, 6);
        for (const auto& alpha : multis) {
            PiValue total = moment_pi(alpha, false, N);
            PiValue acc;
            for (int i = 0; i < N; ++i) {
                std::vector<int> beta = alpha;
                beta[i] += 2;
                acc = acc + moment_pi(beta, false, N);
            }
            CHECK(acc == total);
        }
    }
}

TEST_CASE("trace-free tensor validation") {
    CHECK_THROWS(TraceFreePi::diag({rat(1), rat(1)}));  // nonzero trace
    CHECK_THROWS(TraceFreePi(2, {rat(0), rat(1), rat(2), rat(0)}));  // asymmetric
    TraceFreePi p = TraceFreePi::diag({rat(1), rat(1), rat(-1), rat(-1)});
    CHECK(p.norm_sq() == rat(4));
}

TEST_CASE("quartic contraction closed form") {
    TraceFreePi p4 = TraceFreePi::diag({rat(1), rat(1), rat(-1), rat(-1)});
    CHECK(quartic_contraction(p4) == rat(1, 3));
    CHECK(quartic_contraction(TraceFreePi::zero(4)) == rat(0));
    TraceFreePi p5 = TraceFreePi::diag({rat(2), rat(-1), rat(-1), rat(0), rat(0)});
    CHECK(quartic_contraction(p5) == rat(12, 35));
}

TEST_CASE("quartic contraction equals the brute-force moment sum") {
    // pi_ij pi_kl (1/|S^{n-1}|) int x_i x_j x_k x_l dS, summed over all index
    // quadruples with exact moments, must reproduce [2/(n(n+2))] |pi|^2.
    std::mt19937 rng(7);
    for (int n : {3, 4, 5}) {
        PiValue area = sphere_area_pi(n - 1);
        for (int trial = 0; trial < 20; ++trial) {
            TraceFreePi p = random_trace_free(n, rng);
            PiValue acc;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l, true) {
                            std::vector<int> alpha(n, 0);
                            alpha[i]++;
                            alpha[j]++;
                            alpha[k]++;
                            alpha[l]++;
                            PiValue m = moment_pi(alpha, false, n);
                            acc = acc + m.scaled(p.at(i, j) * p.at(k, l));
                        }
            PiValue ratio = acc.divided_by(area);
            Rational expect = quartic_contraction(p);
            if (expect == 0) {
                CHECK(ratio.is_zero());
            } else {
                REQUIRE(ratio.pi_pow == 0);
                CHECK(ratio.q == expect);
            }
        }
    }
}

TEST_CASE("metric jet evaluation") {
    MetricJet jet(4);  // N = 5
    SECTION("zero jet is zero everywhere") {
        auto A = metric_jet_A(jet, {0.3, -0.2, 0.1, 0.4, 0.7});
        for (auto& row : A)
            for (double v : row) CHECK(v == 0.0);
    }
    SECTION("x = 0 gives the zero matrix for any jet") {
        jet.II(0, 1) = jet.II(1, 0) = rat(3, 2);
        jet.dRNN(2, 2) = rat(-1);
        auto A = metric_jet_A(jet, {0, 0, 0, 0, 0});
        for (auto& row : A)
            for (double v : row) CHECK(v == 0.0);
    }
    SECTION("II-only jet on the vertical axis") {
        jet.II(0, 0) = rat(1);
        jet.II(1, 1) = rat(-1);
        double t = 0.7;
        auto A = metric_jet_A(jet, {0, 0, 0, 0, t});
        // A_ij = -2 II_ij t + (II II)_ij t^2 on the axis
        CHECK(A[0][0] == Catch::Approx(-2 * t + t * t));
        CHECK(A[1][1] == Catch::Approx(2 * t + t * t));
        CHECK(A[0][1] == 0.0);
        CHECK(A[2][2] == 0.0);
    }
    SECTION("output is symmetric with zero vertical row/column") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> U(-1, 1);
        jet.II(0, 1) = jet.II(1, 0) = rat(1, 2);
        jet.dII(2, 3, 1) = jet.dII(3, 2, 1) = rat(2);
        jet.Rh(0, 1, 0, 1) = rat(1);
        jet.dRN(1, 1, 0) = rat(-3, 4);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> x(5);
            for (double& v : x) v = U(rng);
            x[4] = std::fabs(x[4]);
            auto A = metric_jet_A(jet, x);
            for (int a = 0; a < 5; ++a) {
                CHECK(A[a][4] == 0.0);
                CHECK(A[4][a] == 0.0);
                for (int b = 0; b < 5; ++b) CHECK(A[a][b] == A[b][a]);
            }
        }
    }
}

TEST_CASE("strict symmetry validation is opt-in") {
    MetricJet jet(3);
    jet.II(0, 1) = rat(1);  // deliberately asymmetric
    CHECK_THROWS(jet.validate_symmetries());
}
