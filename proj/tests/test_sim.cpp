#include "unseen/sim.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace unseen;

TEST_CASE("distribution families") {
    SECTION("uniform") {
        const DiscreteDistribution d = make_distribution(Family::uniform, 4);
        REQUIRE(d.probs.size() == 4);
        for (double p : d.probs) CHECK(p == Catch::Approx(0.25).epsilon(1e-14));
    }
    SECTION("zipf") {
        const DiscreteDistribution d = make_distribution(Family::zipf, 3, 1.0);
        CHECK(d.probs[0] == Catch::Approx(6.0 / 11.0).epsilon(1e-14));
        CHECK(d.probs[1] == Catch::Approx(3.0 / 11.0).epsilon(1e-14));
        CHECK(d.probs[2] == Catch::Approx(2.0 / 11.0).epsilon(1e-14));
    }
    SECTION("geometric-zipf mixture") {
        const DiscreteDistribution d = make_distribution(Family::geo_zipf_mix, 4);
        CHECK(d.probs[0] == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(d.probs[1] == Catch::Approx(1.0 / 6.0).epsilon(1e-14));
        CHECK(d.probs[2] == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(d.probs[3] == Catch::Approx(1.0 / 6.0).epsilon(1e-14));
    }
    SECTION("masses sum to one within 1e-12") {
        for (auto fam : {Family::uniform, Family::zipf, Family::geo_zipf_mix}) {
            const DiscreteDistribution d = make_distribution(fam, 100000, 0.5);
            std::vector<double> probs = d.probs;
            CHECK(std::fabs(unseen::detail::pairwise_sum(probs) - 1.0) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(make_distribution(Family::geo_zipf_mix, 5), std::domain_error);
    CHECK_THROWS_AS(make_distribution(Family::uniform, 1), std::domain_error);
    CHECK_THROWS_AS(make_distribution(Family::zipf, 10, 0.0), std::domain_error);

    SECTION("uniform entropy is log k") {
        CHECK(make_distribution(Family::uniform, 1024).entropy() ==
              Catch::Approx(std::log(1024.0)).epsilon(1e-12));
    }
}

TEST_CASE("iid sampling") {
    const DiscreteDistribution d = make_distribution(Family::zipf, 50, 1.0);
    SECTION("sample size is conserved") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Histogram h = draw_sample(d, 1234, SampleMode::iid, seed);
            CHECK(h.n == 1234);
        }
    }
    SECTION("empty sample") {
        CHECK(draw_sample(d, 0, SampleMode::iid, 1).n == 0);
    }
    SECTION("point mass lands every draw on one symbol") {
        const DiscreteDistribution point{{1.0}, Family::uniform, 0.0};
        const Histogram h = draw_sample(point, 77, SampleMode::iid, 3);
        CHECK(h.counts.at("1") == 77);
    }
    SECTION("determinism") {
        const Histogram a = draw_sample(d, 500, SampleMode::iid, 99);
        const Histogram b = draw_sample(d, 500, SampleMode::iid, 99);
        CHECK(a.counts == b.counts);
    }
    SECTION("chi-square goodness of fit for uniform(100)") {
        const DiscreteDistribution u = make_distribution(Family::uniform, 100);
        const Histogram h = draw_sample(u, 100000, SampleMode::iid, 20260810);
        double chi2 = 0.0;
        for (int i = 1; i <= 100; ++i) {
            auto it = h.counts.find(std::to_string(i));
            const double observed = it == h.counts.end() ? 0.0 : static_cast<double>(it->second);
            chi2 += (observed - 1000.0) * (observed - 1000.0) / 1000.0;
        }
        // 1 - 1e-6 quantile of chi-square with 99 degrees of freedom.
        CHECK(chi2 < 180.792);
    }
}

TEST_CASE("poissonized sampling") {
    const DiscreteDistribution d = make_distribution(Family::uniform, 50);
    SECTION("mean total count concentrates at n") {
        // Flaky-test budget: |mean - n| <= 4 sqrt(n/2000), miss probability < 1e-4.
        const std::uint64_t n = 100;
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 2000; ++seed)
            total += static_cast<double>(draw_sample(d, n, SampleMode::poissonized, seed).n);
        const double mean = total / 2000.0;
        CHECK(std::fabs(mean - static_cast<double>(n)) <= 4.0 * std::sqrt(n / 2000.0));
    }
    SECTION("determinism") {
        const Histogram a = draw_sample(d, 200, SampleMode::poissonized, 5);
        const Histogram b = draw_sample(d, 200, SampleMode::poissonized, 5);
        CHECK(a.counts == b.counts);
    }
}

TEST_CASE("coupon-collector regime: plug-in is exact") {
    const DiscreteDistribution u = make_distribution(Family::uniform, 1000);
    const std::uint64_t n = 69078;  // ceil(10 k log k)
    unsigned exact = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const Histogram h = draw_sample(u, n, SampleMode::iid, unseen::detail::stream_seed(1, trial));
        if (plugin_support(build_fingerprint(h)) == 1000) ++exact;
    }
    CHECK(exact >= 49);
}

TEST_CASE("experiment runner") {
    SECTION("full-coverage plug-in has zero rmse") {
        ExperimentSpec spec;
        spec.family = Family::uniform;
        spec.k = 20;
        spec.sample_sizes = {2000};
        spec.trials = 1;
        spec.seed = 11;
        spec.estimators = {{.kind = "plugin"}};
        const ExperimentResult r = run_trials(spec);
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0].rmse == 0.0);
        CHECK(r.rows[0].mean_estimate == 20.0);
        CHECK(r.rows[0].truth == 20.0);
        CHECK(r.rows[0].failures == 0);
    }

    SECTION("identical specs give identical tables") {
        ExperimentSpec spec;
        spec.family = Family::zipf;
        spec.zipf_alpha = 1.0;
        spec.k = 300;
        spec.sample_sizes = {100, 400};
        spec.trials = 10;
        spec.seed = 42;
        spec.estimators = {{.kind = "plugin"}, {.kind = "chebyshev"}, {.kind = "chao1"},
                           {.kind = "miller-madow"}};
        const std::string a = to_csv(run_trials(spec));
        const std::string b = to_csv(run_trials(spec));
        CHECK(a == b);
    }

    SECTION("threaded execution matches single-threaded") {
        ExperimentSpec spec;
        spec.family = Family::uniform;
        spec.k = 500;
        spec.sample_sizes = {200};
        spec.trials = 16;
        spec.seed = 5;
        spec.estimators = {{.kind = "plugin"}, {.kind = "good-turing"}, {.kind = "entropy-poly"}};
        const std::string a = to_csv(run_trials(spec));
        spec.threads = 4;
        const std::string b = to_csv(run_trials(spec));
        CHECK(a == b);
    }

    SECTION("estimator failures are counted and excluded") {
        // n = 1 from a large alphabet: every sample is all singletons, so
        // Good-Turing is undefined in every trial.
        ExperimentSpec spec;
        spec.family = Family::uniform;
        spec.k = 1000;
        spec.sample_sizes = {1};
        spec.trials = 5;
        spec.seed = 3;
        spec.estimators = {{.kind = "good-turing"}, {.kind = "plugin"}};
        const ExperimentResult r = run_trials(spec);
        REQUIRE(r.rows.size() == 2);
        CHECK(r.rows[0].estimator == "good-turing");
        CHECK(r.rows[0].failures == 5);
        CHECK(r.rows[0].rmse == 0.0);
        CHECK(r.rows[1].failures == 0);
    }

    SECTION("undersampled uniform: Chebyshev beats plug-in") {
        ExperimentSpec spec;
        spec.family = Family::uniform;
        spec.k = 10000;
        spec.sample_sizes = {500};
        spec.trials = 50;
        spec.seed = 1;
        spec.estimators = {{.kind = "plugin"}, {.kind = "chebyshev"}};
        const ExperimentResult r = run_trials(spec);
        REQUIRE(r.rows.size() == 2);
        CHECK(r.rows[1].rmse < r.rows[0].rmse);
        // rmse^2 >= bias^2 for every row.
        for (const auto& row : r.rows)
            CHECK(row.rmse * row.rmse >=
                  std::pow(row.mean_estimate - row.truth, 2.0) - 1e-9);
    }

    SECTION("invalid specs are rejected") {
        ExperimentSpec spec;
        spec.k = 10;
        spec.estimators = {{.kind = "plugin"}};
        CHECK_THROWS_AS(run_trials(spec), std::domain_error);  // no sample sizes
        spec.sample_sizes = {0};
        CHECK_THROWS_AS(run_trials(spec), std::domain_error);  // zero sample size
        spec.sample_sizes = {10};
        spec.trials = 0;
        CHECK_THROWS_AS(run_trials(spec), std::domain_error);
    }

    SECTION("csv layout") {
        ExperimentSpec spec;
        spec.family = Family::uniform;
        spec.k = 10;
        spec.sample_sizes = {50};
        spec.trials = 2;
        spec.estimators = {{.kind = "plugin"}};
        const std::string csv = to_csv(run_trials(spec));
        CHECK(csv.substr(0, csv.find('\n')) ==
              "n,estimator,trials,failures,rmse,std,mean_estimate,truth");
        CHECK(csv.find("50,plugin,2,0,") != std::string::npos);
    }
}
