#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ogo/distribution.hpp"
#include "oracles.hpp"

using namespace ogo;

TEST_CASE("cdf closed forms") {
    CHECK(cdf(FrontierDistribution::beta_dist(1, 1), 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(cdf(FrontierDistribution::beta_dist(2, 2), 0.5) == doctest::Approx(0.5).epsilon(1e-12));

    // Gamma(2, 0.15) at 1: closed form for integer shape, 1 - e^-z (1 + z).
    const double z = 1.0 / 0.15;
    const double expected = 1.0 - std::exp(-z) * (1.0 + z);
    CHECK(cdf(FrontierDistribution::gamma_dist(2, 0.15), 1.0) ==
          doctest::Approx(expected).epsilon(1e-12));

    // Clamped semantics.
    const FrontierDistribution b = FrontierDistribution::beta_dist(2, 3);
    CHECK(cdf(b, -0.5) == 0.0);
    CHECK(cdf(b, 1.5) == 1.0);
    CHECK(cdf(FrontierDistribution::gamma_dist(2, 0.15), -1.0) == 0.0);
    CHECK(cdf(FrontierDistribution::uniform01(), 0.25) == 0.25);
}

TEST_CASE("cdf matches quadrature oracle to 1e-10") {
    const double alphas[] = {0.243, 0.513, 1.0, 1.558, 3.7, 12.0};
    const double betas[] = {0.642, 1.186, 1.0, 2.827, 0.31, 8.0};
    for (double a : alphas)
        for (double bb : betas)
            for (double x : {0.05, 0.3, 0.5, 0.77, 0.95}) {
                const double got = cdf(FrontierDistribution::beta_dist(a, bb), x);
                const double want = oracle::quad_reg_inc_beta(a, bb, x);
                CHECK(std::fabs(got - want) < 1e-10);
            }
    for (double shape : {0.4, 1.0, 2.0, 5.5})
        for (double x : {0.05, 0.5, 1.0, 3.0, 10.0}) {
            const double got = cdf(FrontierDistribution::gamma_dist(shape, 1.0), x);
            const double want = oracle::quad_reg_lower_inc_gamma(shape, x);
            CHECK(std::fabs(got - want) < 1e-10);
        }
}

TEST_CASE("cdf is monotone non-decreasing") {
    for (const char* name : {"gamma", "beta-a", "beta-b", "beta-c"}) {
        const FrontierDistribution d = preset(name);
        double prev = -1.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = i / 200.0;
            const double v = cdf(d, x);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("pdf shapes and endpoint behaviour") {
    // Beta(1,1) is the uniform density.
    CHECK(pdf(FrontierDistribution::beta_dist(1, 1), 0.42) == doctest::Approx(1.0));

    // alpha > 1 and beta > 1: zero at both ends, unique interior mode.
    const FrontierDistribution a = preset("beta-a");
    CHECK(pdf(a, 0.0) == 0.0);
    CHECK(pdf(a, 1.0) == 0.0);
    const double mode = (a.a - 1.0) / (a.a + a.b - 2.0);
    CHECK(mode == doctest::Approx(0.234).epsilon(0.005));
    CHECK(pdf(a, mode) > pdf(a, mode - 0.02));
    CHECK(pdf(a, mode) > pdf(a, mode + 0.02));
    // Grid argmax agrees with the closed-form mode location.
    double best_x = 0.0, best_v = -1.0;
    for (int i = 1; i < 2000; ++i) {
        const double x = i / 2000.0;
        const double v = pdf(a, x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    CHECK(std::fabs(best_x - mode) < 1e-3);

    // alpha < 1: divergence at 0 (and at 1 for beta < 1).
    const FrontierDistribution half = FrontierDistribution::beta_dist(0.5, 0.5);
    CHECK(pdf(half, 1e-12) > 1e4);
    CHECK(pdf(half, 1.0 - 1e-12) > 1e4);
    CHECK(std::isinf(pdf(half, 0.0)));
}

TEST_CASE("pdf integrates to 1 for every preset") {
    for (const char* name : {"gamma", "beta-a", "beta-b", "beta-c"}) {
        const double total = oracle::integrate_pdf(preset(name));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("beta_from_quantiles reproduces the three configurations") {
    const FrontierDistribution a = beta_from_quantiles({0.5, 0.75}, {0.65, 0.9});
    CHECK(std::fabs(a.a - 1.558) < 0.01);
    CHECK(std::fabs(a.b - 2.827) < 0.01);
    const FrontierDistribution b = beta_from_quantiles({0.5, 0.75}, {0.75, 0.9});
    CHECK(std::fabs(b.a - 0.513) < 0.01);
    CHECK(std::fabs(b.b - 1.186) < 0.01);
    const FrontierDistribution c = beta_from_quantiles({0.5, 0.75}, {0.85, 0.9});
    CHECK(std::fabs(c.a - 0.243) < 0.01);
    CHECK(std::fabs(c.b - 0.642) < 0.01);

    for (const FrontierDistribution& d : {a, b, c})
        CHECK(std::fabs(cdf(d, 0.5) - 0.75) < 1e-6);
}

TEST_CASE("beta_from_quantiles satisfies random constraint pairs") {
    Rng rng(321);
    for (int trial = 0; trial < 100; ++trial) {
        const double q2 = 0.55 + 0.40 * rng.u01();
        const double p2 = 0.76 + 0.22 * rng.u01();
        const FrontierDistribution d = beta_from_quantiles({0.5, 0.75}, {q2, p2}, 1e-6);
        CHECK(std::fabs(cdf(d, 0.5) - 0.75) <= 1e-6);
        CHECK(std::fabs(cdf(d, q2) - p2) <= 1e-6);
    }
}

TEST_CASE("beta_from_quantiles rejects bad input") {
    CHECK_THROWS(beta_from_quantiles({0.5, 0.75}, {0.4, 0.9}));  // q2 < q1
    CHECK_THROWS(beta_from_quantiles({0.5, 0.75}, {0.6, 0.6}));  // p2 < p1
    CHECK_THROWS(beta_from_quantiles({0.5, 0.75}, {0.6, 0.9}, -1.0));
}

TEST_CASE("sampling distributional checks") {
    constexpr int n = 100000;

    SUBCASE("uniform mean") {
        Rng rng(1);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += sample(FrontierDistribution::uniform01(), rng);
        mean /= n;
        CHECK(std::fabs(mean - 0.5) < 0.01);
    }

    SUBCASE("beta-a quantile constraint holds empirically") {
        const FrontierDistribution d = preset("beta-a");
        Rng rng(2);
        int below = 0;
        for (int i = 0; i < n; ++i)
            if (sample(d, rng) < 0.5) ++below;
        CHECK(std::fabs(below / static_cast<double>(n) - 0.75) < 0.01);
    }

    SUBCASE("KS distance against analytic CDF") {
        for (const char* name : {"gamma", "beta-a", "beta-b", "beta-c"}) {
            const FrontierDistribution d = preset(name);
            Rng rng(3);
            std::vector<double> draws(n);
            for (double& v : draws) v = sample(d, rng);
            const double ks = oracle::ks_distance(draws, [&](double x) { return cdf(d, x); });
            CHECK(ks < 0.02);
        }
    }

    SUBCASE("same seed gives identical draws") {
        const FrontierDistribution d = preset("beta-c");
        Rng r1(99), r2(99);
        for (int i = 0; i < 100; ++i) CHECK(sample(d, r1) == sample(d, r2));
    }

    SUBCASE("gamma draws exceed 1 with positive probability") {
        const FrontierDistribution d = preset("gamma");
        CHECK(cdf(d, 1.0) < 1.0); // P(delta > 1) > 0, the OGO-SP defect
        Rng rng(4);
        int above = 0;
        for (int i = 0; i < n; ++i)
            if (sample(d, rng) > 1.0) ++above;
        CHECK(above > 0);
    }
}

TEST_CASE("presets") {
    const FrontierDistribution g = preset("gamma");
    CHECK(g.kind == FrontierDistribution::Kind::gamma);
    CHECK(g.a == 2.0);
    CHECK(g.b == 0.15);
    const FrontierDistribution a = preset("beta-a");
    CHECK(std::fabs(a.a - 1.558) < 0.01);
    CHECK(std::fabs(a.b - 2.827) < 0.01);
    CHECK_THROWS(preset("beta-x"));
}

TEST_CASE("invalid parameters rejected") {
    CHECK_THROWS(FrontierDistribution::beta_dist(0.0, 1.0));
    CHECK_THROWS(FrontierDistribution::beta_dist(1.0, -2.0));
    CHECK_THROWS(FrontierDistribution::gamma_dist(-1.0, 0.15));
    CHECK_THROWS(FrontierDistribution::gamma_dist(2.0, 0.0));
}
