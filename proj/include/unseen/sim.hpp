#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "unseen/detail/linalg.hpp"
#include "unseen/distinct.hpp"
#include "unseen/entropy.hpp"
#include "unseen/fingerprint.hpp"
#include "unseen/support.hpp"

// Synthetic distributions, seeded samplers and the RMSE experiment runner.
//
// Reproducibility contract: a given (spec, seed) pair produces bit-identical
// estimates on the same build. The generator family is std::mt19937_64 with
// the standard library's discrete samplers, so cross-platform bit-exactness
// is not promised. Stream s (= n_index * trials + trial) derives its seed as
// splitmix64(master + (s + 1) * 0x9E3779B97F4A7C15).

namespace unseen {

enum class Family { uniform, zipf, geo_zipf_mix };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::uniform: return "uniform";
        case Family::zipf: return "zipf";
        case Family::geo_zipf_mix: return "geo-zipf-mix";
    }
    return "?";
}

inline Family parse_family(std::string_view name) {
    if (name == "uniform") return Family::uniform;
    if (name == "zipf") return Family::zipf;
    if (name == "geo-zipf-mix") return Family::geo_zipf_mix;
    throw std::domain_error("unknown distribution family '" + std::string(name) + "'");
}

struct DiscreteDistribution {
    std::vector<double> probs;  // all positive, sum to 1 within 1e-12
    Family family = Family::uniform;
    double param = 0.0;

    std::uint64_t support_size() const { return probs.size(); }

    double entropy() const {
        std::vector<double> terms(probs.size());
        for (std::size_t i = 0; i < probs.size(); ++i) terms[i] = phi_xlog(probs[i]);
        return detail::pairwise_sum(terms);
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

inline DiscreteDistribution normalize(std::vector<double> w, Family fam, double param) {
    const double total = pairwise_sum(w);
    for (double& v : w) v /= total;
    const double check = pairwise_sum(w);
    if (std::fabs(check - 1.0) > 1e-12)
        throw numerical_error("distribution normalization off by " + std::to_string(check - 1.0));
    for (double v : w)
        if (!(v > 0.0)) throw numerical_error("distribution has a non-positive mass");
    return DiscreteDistribution{std::move(w), fam, param};
}

}  // namespace detail

// uniform: p_i = 1/k. zipf: p_i proportional to i^-alpha. geo-zipf-mix: the
// first half carries mass 1/2 with p_i proportional to 1/i, the second half
// carries mass 1/2 with a geometric profile of ratio (1 - 2/k).
inline DiscreteDistribution make_distribution(Family family, std::uint64_t k, double alpha = 1.0) {
    if (k < 2) throw std::domain_error("make_distribution: need k >= 2");
    switch (family) {
        case Family::uniform: {
            std::vector<double> w(k, 1.0);
            return detail::normalize(std::move(w), family, 0.0);
        }
        case Family::zipf: {
            if (!(alpha > 0.0)) throw std::domain_error("make_distribution: zipf needs alpha > 0");
            std::vector<double> w(k);
            for (std::uint64_t i = 0; i < k; ++i)
                w[i] = std::pow(static_cast<double>(i + 1), -alpha);
            return detail::normalize(std::move(w), family, alpha);
        }
        case Family::geo_zipf_mix: {
            if (k % 2 != 0)
                throw std::domain_error("make_distribution: the mixture needs an even k");
            const std::uint64_t half = k / 2;
            std::vector<double> zipf_half(half), geo_half(half);
            for (std::uint64_t i = 0; i < half; ++i) zipf_half[i] = 1.0 / static_cast<double>(i + 1);
            const double ratio = 1.0 - 2.0 / static_cast<double>(k);
            double g = 1.0;
            for (std::uint64_t i = 0; i < half; ++i) {
                geo_half[i] = g;
                g *= ratio;
            }
            const double zsum = detail::pairwise_sum(zipf_half);
            const double gsum = detail::pairwise_sum(geo_half);
            std::vector<double> w(k);
            for (std::uint64_t i = 0; i < half; ++i) {
                w[i] = zipf_half[i] / zsum;          // mass 1/2 after the final /2
                w[half + i] = geo_half[i] / gsum;
            }
            for (double& v : w) v *= 0.5;
            return detail::normalize(std::move(w), family, 0.0);
        }
    }
    throw std::domain_error("make_distribution: unreachable family");
}

enum class SampleMode { iid, poissonized };

inline const char* to_string(SampleMode m) {
    return m == SampleMode::iid ? "iid" : "poissonized";
}

inline SampleMode parse_mode(std::string_view name) {
    if (name == "iid") return SampleMode::iid;
    if (name == "poissonized") return SampleMode::poissonized;
    throw std::domain_error("unknown sampling mode '" + std::string(name) + "'");
}

// iid: a multinomial sample of exactly n draws. poissonized: independent
// Poisson(n p_i) counts per symbol. Symbols are named by 1-based index.
inline Histogram draw_sample(const DiscreteDistribution& p, std::uint64_t n, SampleMode mode,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t k = p.probs.size();
    std::vector<std::uint64_t> counts(k, 0);
    if (mode == SampleMode::iid) {
        std::vector<double> cdf(k);
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            acc += p.probs[i];
            cdf[i] = acc;
        }
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (std::uint64_t draw = 0; draw < n; ++draw) {
            const double u = unif(rng);
            const std::size_t idx =
                std::min<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
                                      k - 1);
            ++counts[idx];
        }
    } else {
        for (std::size_t i = 0; i < k; ++i) {
            std::poisson_distribution<std::uint64_t> poi(static_cast<double>(n) * p.probs[i]);
            counts[i] = poi(rng);
        }
    }
    Histogram h;
    for (std::size_t i = 0; i < k; ++i)
        if (counts[i] > 0) h.add(std::to_string(i + 1), counts[i]);
    return h;
}

enum class PropertyKind { support, entropy };

// A named estimator bound to a nominal sample size; the split-entropy coin
// stream seed is passed per trial.
struct BoundEstimator {
    std::string name;
    PropertyKind property = PropertyKind::support;
    std::function<double(const Fingerprint&, std::uint64_t trial_seed)> apply;
};

struct EstimatorSpec {
    std::string kind;  // plugin | chebyshev | chebyshev-adaptive | good-turing | chao1 |
                       // good-toulmin | efron-thisted | distinct | empirical | miller-madow |
                       // entropy-poly | entropy-poly-adaptive
    std::optional<std::uint64_t> k;  // defaults to the distribution's support size
    double c0 = 0.45, c1 = 0.5;      // support constants
    double ec0 = 1.6, ec1 = 3.5, ec2 = 1.6;  // entropy constants
    double t = 1.0;                  // Good-Toulmin / Efron-Thisted
    unsigned J = 10;
    double eps = 0.1;                // adaptive support accuracy
    double alpha = 0.5, beta = 1.0;  // distinct design constants
    bool split = false;              // entropy-poly sample splitting
};

inline BoundEstimator bind_estimator(const EstimatorSpec& spec, const DiscreteDistribution& dist,
                                     std::uint64_t n) {
    const std::uint64_t k = spec.k.value_or(dist.support_size());
    BoundEstimator b;
    b.name = spec.kind;
    b.property = PropertyKind::support;
    if (spec.kind == "plugin") {
        b.apply = [](const Fingerprint& f, std::uint64_t) {
            return static_cast<double>(plugin_support(f));
        };
    } else if (spec.kind == "chebyshev") {
        const SupportConfig cfg{k, spec.c0, spec.c1};
        b.apply = [cfg, k](const Fingerprint& f, std::uint64_t) {
            const LinearEstimator e = chebyshev_support_coeffs(cfg, f.n);
            return static_cast<double>(apply_linear(f, e, k).value);
        };
    } else if (spec.kind == "chebyshev-adaptive") {
        const double eps = spec.eps, c0 = spec.c0, c1 = spec.c1;
        b.apply = [eps, c0, c1, k](const Fingerprint& f, std::uint64_t) {
            const LinearEstimator e = chebyshev_support_coeffs_adaptive(f.n, eps, c0, c1);
            return static_cast<double>(apply_linear(f, e, k).value);
        };
    } else if (spec.kind == "good-turing") {
        b.apply = [](const Fingerprint& f, std::uint64_t) {
            return static_cast<double>(good_turing_support(f));
        };
    } else if (spec.kind == "chao1") {
        b.apply = [](const Fingerprint& f, std::uint64_t) {
            return static_cast<double>(chao1_support(f));
        };
    } else if (spec.kind == "good-toulmin") {
        const double t = spec.t;
        b.apply = [t](const Fingerprint& f, std::uint64_t) { return good_toulmin_support(f, t); };
    } else if (spec.kind == "efron-thisted") {
        const double t = spec.t;
        const unsigned J = spec.J;
        b.apply = [t, J](const Fingerprint& f, std::uint64_t) {
            return efron_thisted_support(f, t, J);
        };
    } else if (spec.kind == "distinct") {
        const DistinctConfig cfg{k, n, spec.alpha, spec.beta};
        b.apply = [cfg](const Fingerprint& f, std::uint64_t) {
            return static_cast<double>(estimate_distinct(f, cfg).value);
        };
    } else if (spec.kind == "empirical") {
        b.property = PropertyKind::entropy;
        b.apply = [](const Fingerprint& f, std::uint64_t) { return empirical_entropy(f); };
    } else if (spec.kind == "miller-madow") {
        b.property = PropertyKind::entropy;
        b.apply = [](const Fingerprint& f, std::uint64_t) { return miller_madow(f); };
    } else if (spec.kind == "entropy-poly" || spec.kind == "entropy-poly-adaptive") {
        b.property = PropertyKind::entropy;
        EntropyConfig cfg{k, spec.ec0, spec.ec1, spec.ec2, spec.split,
                          spec.kind == "entropy-poly-adaptive"};
        b.apply = [cfg](const Fingerprint& f, std::uint64_t trial_seed) {
            return estimate_entropy(f, cfg, detail::splitmix64(trial_seed));
        };
    } else {
        throw std::domain_error("unknown estimator '" + spec.kind + "'");
    }
    return b;
}

struct ExperimentSpec {
    Family family = Family::uniform;
    std::uint64_t k = 0;
    double zipf_alpha = 1.0;
    std::vector<std::uint64_t> sample_sizes;
    unsigned trials = 50;
    SampleMode mode = SampleMode::iid;
    std::uint64_t seed = 0;
    std::vector<EstimatorSpec> estimators;
    unsigned threads = 1;
};

struct ExperimentRow {
    std::uint64_t n = 0;
    std::string estimator;
    unsigned trials = 0;
    unsigned failures = 0;
    double rmse = 0.0;
    double stddev = 0.0;  // of the error, over successful trials
    double mean_estimate = 0.0;
    double truth = 0.0;
    double wall_ms = 0.0;  // informational; excluded from serialized output
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
};

// Estimators within a trial share the same sample, so comparisons are paired;
// trials may run on several threads, and aggregation is by trial index, so
// the result does not depend on scheduling.
inline ExperimentResult run_trials(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::domain_error("run_trials: need at least one trial");
    if (spec.sample_sizes.empty()) throw std::domain_error("run_trials: no sample sizes");
    for (std::uint64_t n : spec.sample_sizes)
        if (n == 0) throw std::domain_error("run_trials: sample sizes must be positive");
    if (spec.estimators.empty()) throw std::domain_error("run_trials: no estimators");
    const DiscreteDistribution dist = make_distribution(spec.family, spec.k, spec.zipf_alpha);
    const double truth_entropy = dist.entropy();

    ExperimentResult result;
    for (std::size_t ni = 0; ni < spec.sample_sizes.size(); ++ni) {
        const std::uint64_t n = spec.sample_sizes[ni];
        std::vector<BoundEstimator> bound;
        for (const auto& es : spec.estimators) bound.push_back(bind_estimator(es, dist, n));
        const std::size_t ne = bound.size();

        struct Cell {
            double value = 0.0;
            bool ok = false;
        };
        std::vector<std::vector<Cell>> cells(spec.trials, std::vector<Cell>(ne));
        const unsigned nthreads = std::max(1u, std::min(spec.threads, spec.trials));
        std::vector<std::vector<double>> walls(nthreads, std::vector<double>(ne, 0.0));

        auto worker = [&](unsigned tid, unsigned t0, unsigned t1) {
            for (unsigned t = t0; t < t1; ++t) {
                const std::uint64_t trial_seed =
                    detail::stream_seed(spec.seed, ni * spec.trials + t);
                const Histogram h = draw_sample(dist, n, spec.mode, trial_seed);
                const Fingerprint f = build_fingerprint(h);
                for (std::size_t e = 0; e < ne; ++e) {
                    const auto start = std::chrono::steady_clock::now();
                    try {
                        cells[t][e] = {bound[e].apply(f, trial_seed), true};
                    } catch (const std::exception&) {
                        cells[t][e].ok = false;
                    }
                    walls[tid][e] +=
                        std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
                }
            }
        };
        if (nthreads == 1) {
            worker(0, 0, spec.trials);
        } else {
            std::vector<std::thread> pool;
            const unsigned chunk = (spec.trials + nthreads - 1) / nthreads;
            for (unsigned tid = 0; tid < nthreads; ++tid) {
                const unsigned t0 = tid * chunk;
                const unsigned t1 = std::min(spec.trials, t0 + chunk);
                if (t0 < t1) pool.emplace_back(worker, tid, t0, t1);
            }
            for (auto& th : pool) th.join();
        }

        for (std::size_t e = 0; e < ne; ++e) {
            const double truth = bound[e].property == PropertyKind::support
                                     ? static_cast<double>(dist.support_size())
                                     : truth_entropy;
            std::vector<double> sq_errors, errors, values;
            unsigned failures = 0;
            for (unsigned t = 0; t < spec.trials; ++t) {
                if (!cells[t][e].ok) {
                    ++failures;
                    continue;
                }
                const double err = cells[t][e].value - truth;
                errors.push_back(err);
                sq_errors.push_back(err * err);
                values.push_back(cells[t][e].value);
            }
            ExperimentRow row;
            row.n = n;
            row.estimator = bound[e].name;
            row.trials = spec.trials;
            row.failures = failures;
            row.truth = truth;
            for (unsigned tid = 0; tid < nthreads; ++tid) row.wall_ms += walls[tid][e];
            if (!values.empty()) {
                row.rmse = std::sqrt(detail::pairwise_mean(sq_errors));
                row.mean_estimate = detail::pairwise_mean(values);
                const double mean_err = detail::pairwise_mean(errors);
                std::vector<double> centered(errors.size());
                for (std::size_t i = 0; i < errors.size(); ++i) {
                    const double d = errors[i] - mean_err;
                    centered[i] = d * d;
                }
                row.stddev = std::sqrt(detail::pairwise_mean(centered));
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

// Deterministic CSV: header n,estimator,trials,failures,rmse,std,mean_estimate,truth.
inline std::string to_csv(const ExperimentResult& result) {
    std::string out = "n,estimator,trials,failures,rmse,std,mean_estimate,truth\n";
    char buf[256];
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof(buf), "%llu,%s,%u,%u,%.10g,%.10g,%.10g,%.10g\n",
                      static_cast<unsigned long long>(r.n), r.estimator.c_str(), r.trials,
                      r.failures, r.rmse, r.stddev, r.mean_estimate, r.truth);
        out += buf;
    }
    return out;
}

}  // namespace unseen
