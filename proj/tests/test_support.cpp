#include "unseen/support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace unseen;

namespace {

Fingerprint fp(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> entries) {
    Fingerprint f;
    for (auto [j, c] : entries) {
        f.phi[j] = c;
        f.n += j * c;
    }
    return f;
}

// Poisson(lambda) expectation of h(N), mass beyond the cutoff ignored.
double poisson_expect(double lambda, unsigned cutoff, const std::function<double(unsigned)>& h) {
    double sum = 0.0;
    for (unsigned j = 0; j <= cutoff; ++j) {
        const double logw = -lambda + j * std::log(lambda) - std::lgamma(j + 1.0);
        sum += std::exp(logw) * h(j);
    }
    return sum;
}

}  // namespace

TEST_CASE("plug-in support") {
    CHECK(plugin_support(fp({{1, 2}, {3, 1}})) == 3);
    CHECK(plugin_support(Fingerprint{}) == 0);
    Histogram h;
    h.add("a", 2);
    h.add("b", 1);
    CHECK(plugin_support(build_fingerprint(h)) == 2);
}

TEST_CASE("Chebyshev estimator degree pins") {
    CHECK(chebyshev_support_coeffs({.k = 1000000}, 200000).meta.L == 6);
    CHECK(chebyshev_support_coeffs({.k = 32000}, 10000).meta.L == 4);
    CHECK(chebyshev_support_coeffs({.k = 1000000000}, 1000000).meta.L == 9);
}

TEST_CASE("Chebyshev estimator weight structure") {
    const LinearEstimator e = chebyshev_support_coeffs({.k = 1000000}, 200000);
    CHECK(e.g[0] == 0.0);
    CHECK(e.default_weight == 1.0);
    REQUIRE(e.g.size() == 7);

    SECTION("corrections alternate in sign starting positive") {
        double prev = e.correction(1);
        CHECK(prev > 0.0);
        for (unsigned j = 2; j <= 6; ++j) {
            const double u = e.correction(j);
            CHECK(u * prev < 0.0);
            prev = u;
        }
    }

    SECTION("interval matches the configuration") {
        CHECK(e.meta.l == Catch::Approx(1e-6));
        CHECK(e.meta.r == Catch::Approx(0.5 * std::log(1e6) / 200000.0));
    }
}

TEST_CASE("degenerate regimes fall back to plug-in") {
    SECTION("interval collapses when n >= c1 k log k") {
        const std::uint64_t k = 50;
        const std::uint64_t n = 10000;  // far beyond c1 k log k ~ 98
        const LinearEstimator e = chebyshev_support_coeffs({.k = k}, n);
        CHECK_FALSE(e.meta.warnings.empty());
        const Fingerprint f = fp({{200, 50}});
        CHECK(apply_linear(f, e, k).value == 50);
    }
    SECTION("L = 0 degrades to plug-in weights") {
        const LinearEstimator e = chebyshev_support_coeffs({.k = 5}, 3);
        CHECK(e.meta.L == 0);
        CHECK(e.meta.warnings.empty());
        const Fingerprint f = fp({{1, 2}, {2, 1}});
        CHECK(apply_linear(f, e, 5).value == plugin_support(f));
    }
    CHECK_THROWS_AS(chebyshev_support_coeffs({.k = 1}, 10), std::domain_error);
    CHECK_THROWS_AS(chebyshev_support_coeffs({.k = 100}, 0), std::domain_error);
    CHECK_THROWS_AS(chebyshev_support_coeffs({.k = 100, .c0 = 0.6, .c1 = 0.5}, 10),
                    std::domain_error);
}

TEST_CASE("adaptive parameter choice") {
    const LinearEstimator e = chebyshev_support_coeffs_adaptive(1000000, 0.05);
    CHECK(e.meta.L == 6);
    CHECK(e.meta.adaptive);
    CHECK(e.meta.r == Catch::Approx(0.5 * std::log(1e6) / 1e6));

    SECTION("looser eps widens the interval") {
        const double l_loose = chebyshev_support_coeffs_adaptive(1000000, 0.999).meta.l;
        const double l_tight = chebyshev_support_coeffs_adaptive(1000000, 0.05).meta.l;
        CHECK(l_loose < l_tight);
        CHECK(l_loose < 1e-10);
    }
    CHECK_THROWS_AS(chebyshev_support_coeffs_adaptive(2, 0.1), std::domain_error);
    CHECK_THROWS_AS(chebyshev_support_coeffs_adaptive(100, 1.5), std::domain_error);
}

TEST_CASE("applying a linear estimator") {
    SECTION("all corrections zero reproduces the plug-in") {
        LinearEstimator e;
        e.g = {0.0, 1.0, 1.0, 1.0};
        const Fingerprint f = fp({{1, 4}, {2, 3}, {9, 1}});
        CHECK(apply_linear(f, e, 1000).value == plugin_support(f));
    }
    SECTION("weights beyond the table default to one") {
        const LinearEstimator e = chebyshev_support_coeffs({.k = 100}, 20);
        const Fingerprint f = fp({{10, 3}, {25, 2}});  // all multiplicities above L
        CHECK(apply_linear(f, e, 100).value == 5);
        CHECK(apply_linear(f, e, 100).raw == 5.0);
    }
    SECTION("worked example") {
        LinearEstimator e;
        e.g = {0.0, 3.0};
        const Fingerprint f = fp({{1, 2}, {2, 1}});
        const SupportEstimate est = apply_linear(f, e, 100);
        CHECK(est.raw == Catch::Approx(7.0));
        CHECK(est.value == 7);
    }
    SECTION("clamping to [S_plug, k]") {
        LinearEstimator low;
        low.g = {0.0, -5.0};
        const Fingerprint f = fp({{1, 10}});
        CHECK(apply_linear(f, low, 100).value == 10);

        LinearEstimator high;
        high.g = {0.0, 1000.0};
        CHECK(apply_linear(f, high, 100).value == 100);
    }
    SECTION("rounding is half-up") {
        LinearEstimator e;
        e.g = {0.0, 1.25};
        const Fingerprint f = fp({{1, 2}});  // raw = 2.5
        CHECK(apply_linear(f, e, 100).value == 3);
    }
}

TEST_CASE("Good-Turing support") {
    CHECK(good_turing_support(fp({{1, 2}, {2, 1}})) == 6);
    CHECK(good_turing_support(fp({{2, 3}, {5, 1}})) == 4);  // Phi_1 = 0, coverage 1
    CHECK_THROWS_AS(good_turing_support(fp({{1, 4}})), undefined_estimator_error);
}

TEST_CASE("Chao 1 support") {
    CHECK(chao1_support(fp({{2, 3}, {3, 1}})) == 4);
    CHECK(chao1_support(fp({{1, 3}, {2, 1}})) == 6);  // 4 + 3*2/4 = 5.5, rounds up
    CHECK(chao1_support(fp({{1, 2}})) == 3);
}

TEST_CASE("Good-Toulmin support") {
    const Fingerprint f = fp({{1, 2}, {2, 1}});
    CHECK(good_toulmin_support(f, 1e-12) == Catch::Approx(3.0).margin(1e-9));
    CHECK(good_toulmin_support(f, 1.0) == Catch::Approx(4.0));
    CHECK(good_toulmin_support(fp({{5, 1}}), 2.0) == Catch::Approx(1.0 + 32.0));
    CHECK_THROWS_AS(good_toulmin_support(f, 0.0), std::domain_error);
}

TEST_CASE("Efron-Thisted support") {
    const Fingerprint f = fp({{1, 2}, {2, 1}});
    CHECK(efron_thisted_support(f, 1.0, 2) == Catch::Approx(3.0 + 1.25));
    CHECK(efron_thisted_support(f, 1e-12, 3) == Catch::Approx(3.0).margin(1e-9));
    SECTION("multiplicities above J do not contribute") {
        const Fingerprint g = fp({{1, 2}, {7, 5}});
        const Fingerprint g_trunc = fp({{1, 2}});
        CHECK(efron_thisted_support(g, 0.5, 3) ==
              Catch::Approx(efron_thisted_support(g_trunc, 0.5, 3) + 5.0));
    }
    CHECK_THROWS_AS(efron_thisted_support(f, -1.0, 2), std::domain_error);
    CHECK_THROWS_AS(efron_thisted_support(f, 1.0, 0), std::domain_error);
}

TEST_CASE("bias identity under Poisson sampling") {
    // For any few-atom distribution, the expected raw estimate minus the truth
    // equals sum_i exp(-n p_i) P_L(p_i) for the estimator's own polynomial.
    const std::vector<std::vector<double>> dists = {
        {0.5, 0.3, 0.2},
        {0.25, 0.25, 0.25, 0.25},
        {0.9, 0.05, 0.05},
        {0.4, 0.3, 0.15, 0.1, 0.05},
        {0.6, 0.4},
    };
    // Sample sizes keep exp(-n p_i) P_L(p_i) well above the double-precision
    // floor of the E[S_hat] - S subtraction, so a relative check is meaningful.
    for (const auto& p : dists) {
        for (std::uint64_t n : {15, 40}) {
            const SupportConfig cfg{.k = 1000};
            const LinearEstimator e = chebyshev_support_coeffs(cfg, n);
            REQUIRE(e.meta.L >= 1);
            const Polynomial pl = shifted_chebyshev(e.meta.L, e.meta.l, e.meta.r);

            double expected_raw = 0.0, predicted_bias = 0.0;
            for (double pi : p) {
                expected_raw += poisson_expect(
                    n * pi, 300, [&](unsigned j) { return e.weight(j); });
                predicted_bias += std::exp(-static_cast<double>(n) * pi) * pl(pi);
            }
            const double bias = expected_raw - static_cast<double>(p.size());
            CHECK(bias == Catch::Approx(predicted_bias).epsilon(1e-6));
        }
    }
}
